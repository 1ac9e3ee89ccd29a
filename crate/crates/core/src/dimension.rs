//! Hausdorff dimension of finitely described closed sets.
//!
//! A [`SetDescription`] compiles to a trimmed deterministic automaton whose
//! infinite runs are exactly the representations of points in the set. Level
//! counts come from the transfer matrix, so `n` in the hundreds is cheap.

use std::collections::{BTreeMap, HashMap, VecDeque};

use nalgebra::DMatrix;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::compiler::Antichain;
use crate::cover::{Address, NiceCoverDescriptor};
use crate::error::{Error, Result};
use crate::exact::{bigint_log2, Exponent, Rat, Surd};
use crate::gale::{default_tolerance, trace_word, validate_supergale, Gale, GaleSum};

/// Label attached to every dimension report.
pub const ESTIMATE_LABEL: &str = "box-dimension estimate, = Hausdorff for SFT sets";

/// A closed set given by local rules on representation words.
///
/// JSON forms:
/// `{"mode":"allowed","base":3,"allowed":["0","2"]}`,
/// `{"mode":"forbidden","base":2,"patterns":["11"],"prefixes":["01"]}`,
/// `{"mode":"automaton","base":2,"start":0,"states":[{"0":0,"1":1},{"0":0}]}`,
/// `{"mode":"union","sets":[...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum SetDescription {
    /// Every symbol of the word lies in `allowed`.
    Allowed {
        #[serde(alias = "alphabet")]
        base: u32,
        allowed: Vec<String>,
    },
    /// No pattern occurs anywhere and the word starts with no listed prefix.
    Forbidden {
        #[serde(alias = "alphabet")]
        base: u32,
        #[serde(default)]
        patterns: Vec<String>,
        #[serde(default)]
        prefixes: Vec<String>,
    },
    /// Explicit automaton; a missing transition is a dead end.
    Automaton {
        #[serde(alias = "alphabet")]
        base: u32,
        #[serde(default)]
        start: usize,
        states: Vec<BTreeMap<String, usize>>,
    },
    Union { sets: Vec<SetDescription> },
}

impl SetDescription {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidSet(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("set descriptions serialize")
    }

    /// The full space over `base` symbols.
    pub fn full(base: u32) -> Self {
        SetDescription::Forbidden { base, patterns: Vec::new(), prefixes: Vec::new() }
    }

    /// Symbol `forbidden` never occurs (middle thirds: `forbid_symbol(3, 1)`).
    pub fn forbid_symbol(base: u32, forbidden: u8) -> Self {
        SetDescription::Forbidden {
            base,
            patterns: vec![Address::from_symbols(vec![forbidden]).to_string()],
            prefixes: Vec::new(),
        }
    }

    /// The single point `symbol^ω`.
    pub fn constant(base: u32, symbol: u8) -> Self {
        SetDescription::Allowed { base, allowed: vec![Address::from_symbols(vec![symbol]).to_string()] }
    }

    pub fn base(&self) -> Result<u32> {
        match self {
            SetDescription::Allowed { base, .. }
            | SetDescription::Forbidden { base, .. }
            | SetDescription::Automaton { base, .. } => Ok(*base),
            SetDescription::Union { sets } => {
                let first = sets.first().ok_or_else(|| Error::InvalidSet("empty union".into()))?.base()?;
                for s in sets {
                    if s.base()? != first {
                        return Err(Error::InvalidSet("union members over different alphabets".into()));
                    }
                }
                Ok(first)
            }
        }
    }

    pub fn compile(&self) -> Result<Automaton> {
        let base = self.base()?;
        if !(2..=36).contains(&base) {
            return Err(Error::InvalidSet(format!("base {base} outside 2..=36")));
        }
        let word = |t: &String| -> Result<Vec<u8>> {
            Address::parse(t, base)
                .map(|a| a.symbols().to_vec())
                .map_err(|e| Error::InvalidSet(e.to_string()))
        };
        let raw = match self {
            SetDescription::Allowed { allowed, .. } => {
                let mut row = vec![None; base as usize];
                for t in allowed {
                    let w = word(t)?;
                    if w.len() != 1 {
                        return Err(Error::InvalidSet(format!("allowed entry {t:?} is not a single symbol")));
                    }
                    row[w[0] as usize] = Some(0);
                }
                Automaton { base, start: Some(0), delta: vec![row] }
            }
            SetDescription::Forbidden { patterns, prefixes, .. } => {
                let patterns = patterns.iter().map(word).collect::<Result<Vec<_>>>()?;
                let prefixes = prefixes.iter().map(word).collect::<Result<Vec<_>>>()?;
                forbidden_automaton(base, &patterns, &prefixes)
            }
            SetDescription::Automaton { start, states, .. } => {
                let mut delta = Vec::with_capacity(states.len());
                for row in states {
                    let mut out = vec![None; base as usize];
                    for (sym, &next) in row {
                        let w = word(sym)?;
                        if w.len() != 1 || next >= states.len() {
                            return Err(Error::InvalidSet(format!("bad transition {sym:?} -> {next}")));
                        }
                        out[w[0] as usize] = Some(next);
                    }
                    delta.push(out);
                }
                if *start >= states.len() {
                    return Err(Error::InvalidSet(format!("start state {start} out of range")));
                }
                Automaton { base, start: Some(*start), delta }
            }
            SetDescription::Union { sets } => {
                let mut parts = sets.iter().map(SetDescription::compile);
                let mut acc = parts.next().expect("base() rejected empty unions")?;
                for p in parts {
                    acc = acc.union(&p?)?;
                }
                acc
            }
        };
        Ok(raw.trimmed())
    }
}

impl std::str::FromStr for SetDescription {
    type Err = Error;
    fn from_str(text: &str) -> Result<Self> {
        SetDescription::parse(text)
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct ForbiddenKey {
    window: Vec<u8>,
    /// Whole word so far while it is shorter than the longest forbidden prefix.
    head: Option<Vec<u8>>,
}

fn forbidden_automaton(base: u32, patterns: &[Vec<u8>], prefixes: &[Vec<u8>]) -> Automaton {
    if patterns.iter().chain(prefixes).any(Vec::is_empty) {
        return Automaton { base, start: None, delta: Vec::new() };
    }
    let keep = patterns.iter().map(Vec::len).max().unwrap_or(1) - 1;
    let head_len = prefixes.iter().map(Vec::len).max().unwrap_or(0);
    let start = ForbiddenKey { window: Vec::new(), head: (head_len > 0).then(Vec::new) };
    let mut index: HashMap<ForbiddenKey, usize> = HashMap::new();
    let mut keys = vec![start.clone()];
    index.insert(start, 0);
    let mut delta: Vec<Vec<Option<usize>>> = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(q) = queue.pop_front() {
        let key = keys[q].clone();
        let mut row = vec![None; base as usize];
        for sym in 0..base as u8 {
            let mut text = key.window.clone();
            text.push(sym);
            if patterns.iter().any(|p| text.ends_with(p)) {
                continue;
            }
            let head = match &key.head {
                Some(h) => {
                    let mut h = h.clone();
                    h.push(sym);
                    if prefixes.contains(&h) {
                        continue;
                    }
                    (h.len() < head_len).then_some(h)
                }
                None => None,
            };
            let cut = text.len().saturating_sub(keep);
            let next = ForbiddenKey { window: text[cut..].to_vec(), head };
            let id = *index.entry(next.clone()).or_insert_with(|| {
                keys.push(next);
                queue.push_back(keys.len() - 1);
                keys.len() - 1
            });
            row[sym as usize] = Some(id);
        }
        if delta.len() <= q {
            delta.resize(q + 1, Vec::new());
        }
        delta[q] = row;
    }
    Automaton { base, start: Some(0), delta }
}

/// Deterministic automaton over `0..base`; `None` transitions are dead ends.
/// After trimming every state has an infinite continuation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Automaton {
    base: u32,
    start: Option<usize>,
    delta: Vec<Vec<Option<usize>>>,
}

impl Automaton {
    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn start(&self) -> Option<usize> {
        self.start
    }

    pub fn state_count(&self) -> usize {
        self.delta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.start.is_none()
    }

    pub fn step(&self, q: usize, symbol: u8) -> Option<usize> {
        self.delta[q].get(symbol as usize).copied().flatten()
    }

    /// State after reading `word` from the start, if the run survives.
    pub fn run(&self, word: &[u8]) -> Option<usize> {
        word.iter().try_fold(self.start?, |q, &s| self.step(q, s))
    }

    pub fn live_symbols(&self, q: usize) -> Vec<u8> {
        (0..self.base as u8).filter(|&s| self.step(q, s).is_some()).collect()
    }

    /// Drop states without an infinite continuation.
    fn trimmed(self) -> Automaton {
        let n = self.delta.len();
        let mut live = vec![true; n];
        loop {
            let mut changed = false;
            for q in 0..n {
                if live[q] && !self.delta[q].iter().flatten().any(|&t| live[t]) {
                    live[q] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let mut remap = vec![None; n];
        let mut next = 0;
        for q in 0..n {
            if live[q] {
                remap[q] = Some(next);
                next += 1;
            }
        }
        let delta = (0..n)
            .filter(|&q| live[q])
            .map(|q| self.delta[q].iter().map(|t| t.and_then(|t| remap[t])).collect())
            .collect();
        Automaton { base: self.base, start: self.start.and_then(|s| remap[s]), delta }
    }

    /// Automaton accepting the union of both languages (product on optional states).
    pub fn union(&self, other: &Automaton) -> Result<Automaton> {
        if self.base != other.base {
            return Err(Error::InvalidSet(format!("cannot unite base {} with base {}", self.base, other.base)));
        }
        type Pair = (Option<usize>, Option<usize>);
        let start: Pair = (self.start, other.start);
        if start == (None, None) {
            return Ok(Automaton { base: self.base, start: None, delta: Vec::new() });
        }
        let mut index: HashMap<Pair, usize> = HashMap::from([(start, 0)]);
        let mut pairs = vec![start];
        let mut delta: Vec<Vec<Option<usize>>> = Vec::new();
        let mut i = 0;
        while i < pairs.len() {
            let (a, b) = pairs[i];
            let mut row = vec![None; self.base as usize];
            for sym in 0..self.base as u8 {
                let next = (a.and_then(|q| self.step(q, sym)), b.and_then(|q| other.step(q, sym)));
                if next == (None, None) {
                    continue;
                }
                let id = *index.entry(next).or_insert_with(|| {
                    pairs.push(next);
                    pairs.len() - 1
                });
                row[sym as usize] = Some(id);
            }
            delta.push(row);
            i += 1;
        }
        Ok(Automaton { base: self.base, start: Some(0), delta }.trimmed())
    }

    /// `table[j][q]` = number of length-`j` words readable from state `q`.
    pub fn suffix_counts(&self, n: usize) -> Vec<Vec<BigUint>> {
        let states = self.delta.len();
        let mut table = vec![vec![BigUint::one(); states]];
        for j in 1..=n {
            let prev = &table[j - 1];
            let row = (0..states)
                .map(|q| self.delta[q].iter().flatten().map(|&t| &prev[t]).sum())
                .collect();
            table.push(row);
        }
        table
    }

    /// Number of surviving words of each length `0..=n`.
    pub fn level_counts(&self, n: usize) -> Vec<BigUint> {
        match self.start {
            None => vec![BigUint::zero(); n + 1],
            Some(s) => self.suffix_counts(n).into_iter().map(|row| row[s].clone()).collect(),
        }
    }

    /// All surviving words of length `n`, by explicit search (for cross-checks).
    pub fn enumerate(&self, n: usize) -> Vec<Vec<u8>> {
        let Some(start) = self.start else { return Vec::new() };
        let mut out = Vec::new();
        let mut stack = vec![(start, Vec::new())];
        while let Some((q, w)) = stack.pop() {
            if w.len() == n {
                out.push(w);
                continue;
            }
            for sym in self.live_symbols(q) {
                let mut next = w.clone();
                next.push(sym);
                stack.push((self.step(q, sym).expect("live"), next));
            }
        }
        out.sort();
        out
    }

    pub fn transfer_matrix(&self) -> DMatrix<f64> {
        let n = self.delta.len();
        let mut m = DMatrix::zeros(n, n);
        for (q, row) in self.delta.iter().enumerate() {
            for &t in row.iter().flatten() {
                m[(q, t)] += 1.0;
            }
        }
        m
    }

    /// Largest eigenvalue modulus of the transfer matrix restricted to the
    /// states reachable from the start.
    pub fn spectral_radius(&self) -> Option<f64> {
        let start = self.start?;
        let mut seen = vec![false; self.delta.len()];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(q) = stack.pop() {
            for &t in self.delta[q].iter().flatten() {
                if !seen[t] {
                    seen[t] = true;
                    stack.push(t);
                }
            }
        }
        let keep: Vec<usize> = (0..seen.len()).filter(|&q| seen[q]).collect();
        let full = self.transfer_matrix();
        let m = DMatrix::from_fn(keep.len(), keep.len(), |i, j| full[(keep[i], keep[j])]);
        let schur = nalgebra::linalg::Schur::try_new(m, f64::EPSILON, 10_000)?;
        schur.complex_eigenvalues().iter().map(|z| z.norm()).reduce(f64::max)
    }
}

fn check_base(cover: &NiceCoverDescriptor, automaton: &Automaton) -> Result<()> {
    if automaton.base() != cover.alphabet_size() {
        return Err(Error::InvalidSet(format!(
            "set over {} symbols does not match {} with {} symbols",
            automaton.base(),
            cover,
            cover.alphabet_size()
        )));
    }
    Ok(())
}

/// Number of level-`n` elements meeting the set.
pub fn count_elements(cover: &NiceCoverDescriptor, set: &SetDescription, n: usize) -> Result<BigUint> {
    let automaton = set.compile()?;
    check_base(cover, &automaton)?;
    Ok(automaton.level_counts(n).pop().expect("n + 1 entries"))
}

/// `N_n · diam_n^s`, the uniform level-`n` cover sum, exact.
pub fn hausdorff_sum(cover: &NiceCoverDescriptor, set: &SetDescription, s: Exponent, n: usize) -> Result<Surd> {
    let count = count_elements(cover, set, n)?;
    Ok(cover.diam_pow(n, s)?.scale(&BigRational::from_integer(BigInt::from(count))))
}

/// The level-`n` elements meeting the set, as an antichain.
pub fn surviving_antichain(cover: &NiceCoverDescriptor, set: &SetDescription, n: usize) -> Result<Antichain> {
    let automaton = set.compile()?;
    check_base(cover, &automaton)?;
    Antichain::new(automaton.enumerate(n).into_iter().map(Address::from_symbols))
}

#[derive(Clone, Debug, Serialize)]
pub struct DimEstimate {
    pub label: String,
    /// Main value: `log λ / log(1/ζ)` with `λ` the transfer-matrix spectral radius.
    pub estimate: f64,
    pub lower: f64,
    pub upper: f64,
    /// `log N_n / (n log(1/ζ))` at `n = n_max`.
    pub log_count: f64,
    /// Slope between `n_max/2` and `n_max`.
    pub richardson: f64,
    /// Where the level-`n_max` uniform cover sum crosses 1, found by bisection.
    pub bisection: f64,
    pub n_max: usize,
    /// `(n, N_n)`; counts as decimal strings since they overflow machine words.
    pub counts: Vec<(usize, String)>,
    /// `(s, N_{n_max}·diam^s)`.
    pub s_grid: Vec<(f64, f64)>,
    pub empty: bool,
}

/// Critical exponent of the uniform-cover sums.
pub fn dim_search(cover: &NiceCoverDescriptor, set: &SetDescription, n_max: usize) -> Result<DimEstimate> {
    if n_max < 4 {
        return Err(Error::NoEstimate(format!("n_max = {n_max} is below 4")));
    }
    let automaton = set.compile()?;
    check_base(cover, &automaton)?;
    let counts = automaton.level_counts(n_max);
    let log_radix = (cover.radix() as f64).log2();
    let empty = automaton.is_empty();
    let top = &counts[n_max];
    let s_grid = grid(cover.ambient_dimension())
        .map(|s| {
            let v = if empty { 0.0 } else { (big_log2(top) - n_max as f64 * s * log_radix).exp2() };
            (s, v)
        })
        .collect();
    let counts_out = counts.iter().enumerate().map(|(n, c)| (n, c.to_string())).collect();
    if empty {
        return Ok(DimEstimate {
            label: ESTIMATE_LABEL.into(),
            estimate: 0.0,
            lower: 0.0,
            upper: 0.0,
            log_count: 0.0,
            richardson: 0.0,
            bisection: 0.0,
            n_max,
            counts: counts_out,
            s_grid,
            empty,
        });
    }
    let half = n_max / 2;
    let log_count = big_log2(top) / (n_max as f64 * log_radix);
    let richardson = (big_log2(top) - big_log2(&counts[half])) / ((n_max - half) as f64 * log_radix);
    let bisection = bisect_crossing(big_log2(top), n_max as f64 * log_radix, cover.ambient_dimension());
    let estimate = automaton.spectral_radius().map_or(log_count, |l| (l.log2() / log_radix).max(0.0));
    let values = [estimate, log_count, richardson];
    Ok(DimEstimate {
        label: ESTIMATE_LABEL.into(),
        estimate,
        lower: values.iter().copied().fold(f64::INFINITY, f64::min),
        upper: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        log_count,
        richardson,
        bisection,
        n_max,
        counts: counts_out,
        s_grid,
        empty,
    })
}

fn grid(top: f64) -> impl Iterator<Item = f64> {
    (0..=20).map(move |i| top * i as f64 / 20.0)
}

fn big_log2(x: &BigUint) -> f64 {
    if x.is_zero() {
        f64::NEG_INFINITY
    } else {
        bigint_log2(&BigInt::from(x.clone()))
    }
}

/// Root of `log2_count − s·scale = 0` on `[0, hi]`.
fn bisect_crossing(log2_count: f64, scale: f64, hi: f64) -> f64 {
    let (mut lo, mut hi) = (0.0, hi);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if log2_count - mid * scale > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// The compiled gale of the level-`n` surviving antichain, evaluated lazily.
///
/// At level `m <= n` the value is `N_{n-m}(q) · radix^{(m-n)s}` with `q` the
/// automaton state after the address; below level `n` capital splits evenly.
#[derive(Clone, Debug)]
pub struct SetCoverGale {
    cover: NiceCoverDescriptor,
    s: Rat,
    automaton: Automaton,
    level: usize,
    counts: Vec<Vec<BigUint>>,
}

impl SetCoverGale {
    pub fn new(cover: &NiceCoverDescriptor, set: &SetDescription, s: Rat, level: usize) -> Result<Self> {
        if s <= Rat::zero() {
            return Err(Error::IncompatibleExponent(format!("s = {s} must be positive")));
        }
        let automaton = set.compile()?;
        check_base(cover, &automaton)?;
        let counts = automaton.suffix_counts(level);
        Ok(SetCoverGale { cover: cover.clone(), s, automaton, level, counts })
    }

    pub fn level(&self) -> usize {
        self.level
    }

    /// `N_n · diam_n^s`, which is also the root capital.
    pub fn kraft(&self) -> Surd {
        self.root_capital()
    }
}

impl Gale for SetCoverGale {
    fn cover(&self) -> &NiceCoverDescriptor {
        &self.cover
    }

    fn s(&self) -> Rat {
        self.s
    }

    fn value(&self, addr: &Address) -> Surd {
        let m = addr.level();
        let n = self.level;
        let Some(q) = self.automaton.run(&addr.symbols()[..m.min(n)]) else {
            return Surd::zero();
        };
        let gap = Rat::from_integer(m as i64 - n as i64);
        let power = Surd::power(self.cover.radix(), gap * self.s);
        if m <= n {
            power.scale(&BigRational::from_integer(BigInt::from(self.counts[n - m][q].clone())))
        } else {
            let split = num_traits::pow(BigInt::from(self.cover.branching()), m - n);
            power.scale(&BigRational::new(BigInt::one(), split))
        }
    }

    fn check_nodes(&self, depth: usize) -> Vec<Address> {
        // dead addresses are worth 0 along with all their children
        let Some(start) = self.automaton.start() else { return vec![Address::root()] };
        let mut out = Vec::new();
        let mut stack = vec![(Address::root(), Some(start))];
        while let Some((a, q)) = stack.pop() {
            if a.level() >= depth {
                continue;
            }
            for sym in 0..self.cover.branching() as u8 {
                let next = match q {
                    Some(q) if a.level() < self.level => self.automaton.step(q, sym).map(Some),
                    _ => Some(None),
                };
                if let Some(next) = next {
                    stack.push((a.child(sym), next));
                }
            }
            out.push(a);
        }
        out
    }

    fn describe(&self) -> String {
        format!("{}-gale of the level-{} set cover on {}", self.s, self.level, self.cover)
    }
}

/// `Σ_r 2^{k_r} d_{(r)}` with `k_r = r + k0`, where `d_{(r)}` is the set-cover
/// gale at the first level whose Kraft sum is at most `2^{-2 k_r}`.
///
/// Stops early when no level up to `max_level` is small enough (which is what
/// happens below the dimension). Returns the gale and the `(k_r, level)` schedule.
pub fn combined_set_gale(
    cover: &NiceCoverDescriptor,
    set: &SetDescription,
    s: Rat,
    k0: u32,
    terms: usize,
    max_level: usize,
) -> Result<(GaleSum, Vec<(u32, usize)>)> {
    let automaton = set.compile()?;
    check_base(cover, &automaton)?;
    let counts = automaton.level_counts(max_level);
    let mut sum = GaleSum::new(cover.clone(), s);
    let mut schedule = Vec::new();
    let mut level = 0;
    for r in 0..terms {
        let k = r as u32 + k0;
        let target = Surd::from_rational(BigRational::new(BigInt::one(), BigInt::one() << (2 * k) as usize));
        let found = (level..=max_level).find(|&n| {
            let kraft = cover.diam_pow_rat(n, s).scale(&BigRational::from_integer(BigInt::from(counts[n].clone())));
            kraft <= target
        });
        let Some(n) = found else { break };
        level = n;
        let weight = BigRational::from_integer(BigInt::one() << k as usize);
        sum.push(weight, Box::new(SetCoverGale::new(cover, set, s, n)?))?;
        schedule.push((k, n));
    }
    Ok((sum, schedule))
}

/// Seeded random walks through the set's automaton: each word is the prefix
/// of some point of the set.
pub fn sample_words(automaton: &Automaton, count: usize, depth: usize, seed: u64) -> Vec<Vec<u8>> {
    let Some(start) = automaton.start() else { return Vec::new() };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut q = start;
            (0..depth)
                .map(|_| {
                    let options = automaton.live_symbols(q);
                    let sym = options[rng.gen_range(0..options.len())];
                    q = automaton.step(q, sym).expect("live");
                    sym
                })
                .collect()
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct CertificationRow {
    pub k: u32,
    /// Fraction of samples whose running maximum exceeds `2^k · root capital`.
    pub relative: f64,
    /// Fraction whose running maximum exceeds `2^k`.
    pub absolute: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct UpperBoundReport {
    pub gale: String,
    pub s: String,
    pub depth: usize,
    pub samples: usize,
    pub seed: u64,
    pub root_capital: f64,
    pub rows: Vec<CertificationRow>,
    /// Empirical evidence that the set lies in the success set; never a proof.
    pub note: String,
}

impl UpperBoundReport {
    /// All samples exceed `2^k ·` capital.
    pub fn certifies(&self, k: u32) -> bool {
        self.samples > 0 && self.rows.iter().any(|r| r.k == k && r.relative == 1.0)
    }
}

/// Run the gale along `sample_count` seeded points of the set.
///
/// The gale is validated to `min(depth, validation_depth)` first.
pub fn gale_upper_bound(
    gale: &dyn Gale,
    set: &SetDescription,
    sample_count: usize,
    depth: usize,
    ks: &[u32],
    seed: u64,
    validation_depth: usize,
) -> Result<UpperBoundReport> {
    let cover = gale.cover();
    let automaton = set.compile()?;
    check_base(cover, &automaton)?;
    let report = validate_supergale(gale, depth.min(validation_depth), &default_tolerance())?;
    if !report.passed() {
        return Err(Error::Unvalidated(format!("{} violation(s)", report.violations.len())));
    }
    let capital = gale.root_capital();
    let mut thresholds = Vec::new();
    for &k in ks {
        let factor = BigRational::from_integer(BigInt::one() << k as usize);
        thresholds.push(capital.scale(&factor));
        thresholds.push(Surd::from_rational(factor));
    }
    let words = sample_words(&automaton, sample_count, depth, seed);
    let traces = words
        .par_iter()
        .map(|w| trace_word(gale, w, &thresholds))
        .collect::<Result<Vec<_>>>()?;
    let frac = |i: usize| -> f64 {
        if traces.is_empty() {
            return 0.0;
        }
        let hits = traces.iter().filter(|t| t.crossings[i].1.is_some()).count();
        hits as f64 / traces.len() as f64
    };
    // a multiple of zero capital is not a success threshold
    let rows = ks
        .iter()
        .enumerate()
        .map(|(i, &k)| CertificationRow {
            k,
            relative: if capital.is_zero() { 0.0 } else { frac(2 * i) },
            absolute: frac(2 * i + 1),
        })
        .collect();
    Ok(UpperBoundReport {
        gale: gale.describe(),
        s: gale.s().to_string(),
        depth,
        samples: traces.len(),
        seed,
        root_capital: capital.to_f64(),
        rows,
        note: "empirical: success along sampled points suggests the set lies in the success set; not a proof".into(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct StabilityReport {
    pub union: f64,
    pub components: Vec<f64>,
    pub max_component: f64,
    /// `union − max_component`; expected to be about 0.
    pub difference: f64,
    pub n_max: usize,
}

/// Compare the union's estimate with the largest component estimate.
pub fn stability_check(cover: &NiceCoverDescriptor, sets: &[SetDescription], n_max: usize) -> Result<StabilityReport> {
    if sets.len() < 2 {
        return Err(Error::InvalidSet("stability check needs at least two sets".into()));
    }
    let components = sets
        .iter()
        .map(|s| dim_search(cover, s, n_max).map(|e| e.estimate))
        .collect::<Result<Vec<_>>>()?;
    let union = dim_search(cover, &SetDescription::Union { sets: sets.to_vec() }, n_max)?.estimate;
    let max_component = components.iter().copied().fold(0.0, f64::max);
    Ok(StabilityReport { union, components, max_component, difference: union - max_component, n_max })
}
