//! Description-length profiles and the two gale constructions behind
//! "dimension = liminf K_r(x)/r".
//!
//! True Kolmogorov complexity is uncomputable; everything here is relative to
//! a [`ComplexityEstimator`]. The compressor adapter gives realistic numbers,
//! the oracles give exact synthetic ones for testing.

use std::collections::{BTreeMap, HashMap};
use std::io::Write;
use std::path::Path;
use std::sync::Mutex;

use flate2::write::DeflateEncoder;
use flate2::Compression;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::cover::{Address, NiceCoverDescriptor, PointRep};
use crate::error::{Error, Result};
use crate::exact::{rat_to_f64, Rat, Surd};
use crate::gale::{default_tolerance, trace_word, validate_supergale, Extension, Gale, SupergaleTable};

/// Estimated description length in bits. Implementations must tolerate
/// concurrent calls; wrap single-threaded ones in [`Serialized`].
pub trait ComplexityEstimator: Send + Sync {
    fn id(&self) -> String;
    fn estimate(&self, data: &[u8]) -> f64;
}

/// An estimator that needs exclusive access (e.g. one holding a stateful codec).
pub trait SerialEstimator: Send {
    fn id(&self) -> String;
    fn estimate(&mut self, data: &[u8]) -> f64;
}

/// Queues calls to a [`SerialEstimator`] behind a lock.
pub struct Serialized<E>(Mutex<E>);

impl<E: SerialEstimator> Serialized<E> {
    pub fn new(inner: E) -> Self {
        Serialized(Mutex::new(inner))
    }
}

impl<E: SerialEstimator> ComplexityEstimator for Serialized<E> {
    fn id(&self) -> String {
        self.0.lock().expect("estimator lock poisoned").id()
    }

    fn estimate(&self, data: &[u8]) -> f64 {
        self.0.lock().expect("estimator lock poisoned").estimate(data)
    }
}

/// Raw deflate at maximum compression; the empty stream's length is subtracted
/// as the header correction.
#[derive(Clone, Debug)]
pub struct DeflateEstimator {
    level: u32,
    header_bits: f64,
}

impl DeflateEstimator {
    pub fn new(level: u32) -> Self {
        let mut e = DeflateEstimator { level: level.min(9), header_bits: 0.0 };
        e.header_bits = e.raw_bits(&[]);
        e
    }

    fn raw_bits(&self, data: &[u8]) -> f64 {
        let mut enc = DeflateEncoder::new(Vec::new(), Compression::new(self.level));
        enc.write_all(data).expect("writing to a Vec cannot fail");
        8.0 * enc.finish().expect("writing to a Vec cannot fail").len() as f64
    }
}

impl Default for DeflateEstimator {
    fn default() -> Self {
        DeflateEstimator::new(9)
    }
}

impl ComplexityEstimator for DeflateEstimator {
    fn id(&self) -> String {
        format!("compressor:deflate-{}", self.level)
    }

    fn estimate(&self, data: &[u8]) -> f64 {
        (self.raw_bits(data) - self.header_bits).max(0.0)
    }
}

/// Exact complexities for listed strings; anything else is `+∞`.
#[derive(Clone, Debug, Default)]
pub struct TableOracle {
    table: HashMap<Vec<u8>, f64>,
    source: String,
}

impl TableOracle {
    pub fn new(entries: impl IntoIterator<Item = (String, f64)>) -> Self {
        TableOracle {
            table: entries.into_iter().map(|(k, v)| (k.into_bytes(), v)).collect(),
            source: "inline".into(),
        }
    }

    /// Lines `address bits`; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut table = HashMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split_whitespace();
            let (addr, bits) = match (parts.next(), parts.next(), parts.next()) {
                // the empty address is written as a lone number
                (Some(b), None, None) => ("", b),
                (Some(a), Some(b), None) => (a, b),
                _ => return Err(Error::Parse(format!("oracle line {}: expected `address bits`", i + 1))),
            };
            let bits: f64 = bits
                .parse()
                .map_err(|_| Error::Parse(format!("oracle line {}: bad bit count {bits:?}", i + 1)))?;
            if bits.is_nan() || bits < 0.0 {
                return Err(Error::Parse(format!("oracle line {}: bits must be nonnegative", i + 1)));
            }
            table.insert(addr.as_bytes().to_vec(), bits);
        }
        Ok(TableOracle { table, source: "inline".into() })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| Error::Io { path: path.display().to_string(), source })?;
        let mut t = TableOracle::parse(&text)?;
        t.source = path.display().to_string();
        Ok(t)
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }
}

impl ComplexityEstimator for TableOracle {
    fn id(&self) -> String {
        format!("oracle:{}", self.source)
    }

    fn estimate(&self, data: &[u8]) -> f64 {
        self.table.get(data).copied().unwrap_or(f64::INFINITY)
    }
}

/// `K(w) = α·|w|` exactly.
#[derive(Clone, Copy, Debug)]
pub struct LengthOracle {
    pub alpha: Rat,
}

impl ComplexityEstimator for LengthOracle {
    fn id(&self) -> String {
        format!("oracle:length*{}", self.alpha)
    }

    fn estimate(&self, data: &[u8]) -> f64 {
        rat_to_f64(self.alpha) * data.len() as f64
    }
}

/// `compressor:deflate`, `oracle:<file>` or `length:<alpha>`.
pub fn parse_estimator(text: &str) -> Result<Box<dyn ComplexityEstimator>> {
    match text.split_once(':') {
        Some(("compressor", "deflate")) => Ok(Box::new(DeflateEstimator::default())),
        Some(("compressor", other)) => Err(Error::Parse(format!("unknown compressor {other:?}; available: deflate"))),
        Some(("oracle", path)) => Ok(Box::new(TableOracle::load(Path::new(path))?)),
        Some(("length", alpha)) => Ok(Box::new(LengthOracle { alpha: crate::exact::parse_rat(alpha)? })),
        _ => Err(Error::Parse(format!(
            "estimator {text:?}: expected compressor:deflate, oracle:<file> or length:<alpha>"
        ))),
    }
}

/// Bytes handed to the estimator for an address: its digit string.
pub fn address_bytes(addr: &Address) -> Vec<u8> {
    addr.to_string().into_bytes()
}

/// Levels per bit of precision, `1 / log2(1/ζ)`.
pub fn precision_factor(cover: &NiceCoverDescriptor) -> f64 {
    1.0 / (cover.radix() as f64).log2()
}

/// The level `m` with `2^{-r} < radix^{-m} <= 2^{-r+1}`, if one exists.
pub fn window_level(cover: &NiceCoverDescriptor, r: usize) -> Option<usize> {
    if r == 0 {
        return None;
    }
    // radix^m lies in [2^{r-1}, 2^r) exactly when it has r bits
    let guess = ((r - 1) as f64 * precision_factor(cover)).floor() as usize;
    (guess.saturating_sub(1)..=guess + 2)
        .find(|&m| num_traits::pow(BigUint::from(cover.radix()), m).bits() == r as u64)
}

#[derive(Clone, Debug, Serialize)]
pub struct ProfileEntry {
    pub r: usize,
    /// `+∞` when the estimator knows no description.
    pub bits: f64,
    pub witness: Option<String>,
    /// No cover level falls in this precision window.
    pub skipped: bool,
}

impl ProfileEntry {
    pub fn ratio(&self) -> f64 {
        self.bits / self.r as f64
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PrecisionProfile {
    pub entries: Vec<ProfileEntry>,
    pub estimator_id: String,
    pub point_id: String,
    pub label: String,
}

impl PrecisionProfile {
    /// Plain `r bits ratio` rows for plotting.
    pub fn table(&self) -> String {
        let mut out = String::from("r\tbits\tratio\n");
        for e in self.entries.iter().filter(|e| !e.skipped) {
            let bits = if e.bits.fract() == 0.0 { format!("{}", e.bits) } else { format!("{:.4}", e.bits) };
            out.push_str(&format!("{}\t{bits}\t{:.6}\n", e.r, e.ratio()));
        }
        out
    }
}

/// `K_r(x)` for `r_min <= r <= r_max`, via the unique representation address
/// in each precision window.
pub fn kr_profile(
    cover: &NiceCoverDescriptor,
    point: &PointRep,
    r_min: usize,
    r_max: usize,
    est: &dyn ComplexityEstimator,
) -> Result<PrecisionProfile> {
    if r_min < 1 || r_max < r_min {
        return Err(Error::Parse(format!("precision range {r_min}..={r_max} is invalid")));
    }
    let levels: Vec<Option<usize>> = (r_min..=r_max).map(|r| window_level(cover, r)).collect();
    let deepest = levels.iter().flatten().copied().max().unwrap_or(0);
    let word = Address::from_symbols(point.symbols(cover, deepest)?);
    let entries = (r_min..=r_max)
        .zip(levels)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(r, level)| match level {
            Some(m) => {
                let w = word.prefix(m);
                ProfileEntry { r, bits: est.estimate(&address_bytes(&w)), witness: Some(w.to_string()), skipped: false }
            }
            None => ProfileEntry { r, bits: f64::INFINITY, witness: None, skipped: true },
        })
        .collect();
    Ok(PrecisionProfile {
        entries,
        estimator_id: est.id(),
        point_id: point.id(),
        label: "estimator-relative".into(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct PointEstimate {
    /// Minimum of `bits/r` over the tail: the finite surrogate for the liminf.
    pub estimate: f64,
    pub tail_start: usize,
    pub ratios: Vec<(usize, f64)>,
    pub note: String,
}

pub fn cdim_point_estimate(profile: &PrecisionProfile, tail_fraction: Rat) -> Result<PointEstimate> {
    if tail_fraction <= Rat::zero() || tail_fraction > Rat::one() {
        return Err(Error::Parse(format!("tail fraction {tail_fraction} must be in (0, 1]")));
    }
    let usable: Vec<&ProfileEntry> = profile.entries.iter().filter(|e| !e.skipped).collect();
    if usable.is_empty() {
        return Err(Error::NoEstimate("every profile entry was skipped".into()));
    }
    let n = usable.len() as i64;
    let tail = (tail_fraction * n).ceil().to_integer().clamp(1, n) as usize;
    let tail_entries = &usable[usable.len() - tail..];
    let estimate = tail_entries.iter().map(|e| e.ratio()).fold(f64::INFINITY, f64::min);
    Ok(PointEstimate {
        estimate,
        tail_start: tail_entries[0].r,
        ratios: usable.iter().map(|e| (e.r, e.ratio())).collect(),
        note: "minimum over the final precision window stands in for the liminf; estimator-relative".into(),
    })
}

/// Finite stage of `{w : K(w) <= s'·(−log2 diam w)}`.
#[derive(Clone, Debug, Default)]
pub struct Enumeration {
    /// `(w, budget in bits)`.
    pub pairs: Vec<(Address, f64)>,
}

impl Enumeration {
    /// Keep the candidates whose estimate fits the budget `s'·level·log2(radix)`.
    pub fn from_estimator<'a>(
        cover: &NiceCoverDescriptor,
        candidates: impl IntoIterator<Item = &'a Address>,
        s_prime: Rat,
        est: &dyn ComplexityEstimator,
    ) -> Self {
        let log_radix = (cover.radix() as f64).log2();
        let pairs = candidates
            .into_iter()
            .filter_map(|w| {
                let budget = rat_to_f64(s_prime) * w.level() as f64 * log_radix;
                (est.estimate(&address_bytes(w)) <= budget).then(|| (w.clone(), budget))
            })
            .collect();
        Enumeration { pairs }
    }

    /// `Σ diam(w)^{s'}`, exact.
    pub fn kraft(&self, cover: &NiceCoverDescriptor, s_prime: Rat) -> Surd {
        let mut per_level: BTreeMap<usize, i64> = BTreeMap::new();
        for (w, _) in &self.pairs {
            *per_level.entry(w.level()).or_default() += 1;
        }
        per_level.into_iter().fold(Surd::zero(), |acc, (m, n)| {
            acc + cover.diam_pow_rat(m, s_prime).scale(&BigRational::from_integer(n.into()))
        })
    }

    /// Whether the Kraft sum stays within `1 + slack`. Reported, not enforced.
    pub fn summable(&self, cover: &NiceCoverDescriptor, s_prime: Rat, slack: Rat) -> bool {
        self.kraft(cover, s_prime) <= Surd::from_rat(Rat::one() + slack)
    }
}

/// `d(U) = Σ_{V ⊆ U enumerated} diam(V)^{s'} / diam(U)^s`, zero off the support.
pub fn enumeration_to_supergale(
    cover: &NiceCoverDescriptor,
    enumeration: &Enumeration,
    s: Rat,
    s_prime: Rat,
) -> Result<SupergaleTable> {
    if s <= s_prime {
        return Err(Error::IncompatibleExponent(format!("need s > s', got s = {s}, s' = {s_prime}")));
    }
    if s_prime < Rat::zero() {
        return Err(Error::IncompatibleExponent(format!("s' = {s_prime} is negative")));
    }
    let mut mass: BTreeMap<Address, Surd> = BTreeMap::new();
    for (w, _) in &enumeration.pairs {
        cover.check_address(w)?;
        for len in 0..w.level() {
            mass.entry(w.prefix(len)).or_insert_with(Surd::zero);
        }
        *mass.entry(w.clone()).or_insert_with(Surd::zero) += &cover.diam_pow_rat(w.level(), s_prime);
    }
    // deepest first, so each node is complete before it is added to its parent
    let mut by_depth: Vec<Address> = mass.keys().cloned().collect();
    by_depth.sort_by_key(|a| std::cmp::Reverse(a.level()));
    for a in &by_depth {
        if let Some(p) = a.parent() {
            let m = mass[a].clone();
            *mass.get_mut(&p).expect("prefixes inserted") += &m;
        }
    }
    let mut table = SupergaleTable::new(cover.clone(), s, Extension::Zero);
    for (a, m) in mass {
        let d = m.mul_power(cover.radix(), s * Rat::from_integer(a.level() as i64));
        table.insert(a, d)?;
    }
    if table.is_empty() {
        table.insert(Address::root(), Surd::zero())?;
    }
    Ok(table)
}

#[derive(Clone, Debug, Serialize)]
pub struct CountingBound {
    pub k: u32,
    pub r: usize,
    /// Window level, if the window is nonempty.
    pub level: Option<usize>,
    pub count: String,
    /// `2^{rs − k}`.
    pub bound: String,
    pub bound_log2: f64,
    pub holds: bool,
}

/// `#{w in the precision-r window : d(w) >= 2^k · capital}` against `2^{rs−k}`.
pub fn supergale_to_counting_bound(gale: &SupergaleTable, k: u32, r: usize) -> Result<CountingBound> {
    Ok(counting_bounds(gale, &[k], &[r])?.remove(0))
}

/// [`supergale_to_counting_bound`] for every `(k, r)` pair, validating once.
pub fn counting_bounds(gale: &SupergaleTable, ks: &[u32], rs: &[usize]) -> Result<Vec<CountingBound>> {
    let cover = gale.cover();
    let deepest = rs.iter().filter_map(|&r| window_level(cover, r)).max().unwrap_or(0);
    let report = validate_supergale(gale, (deepest + 1).min(gale.support_depth() + 1), &default_tolerance())?;
    if !report.passed() {
        return Err(Error::Unvalidated(format!("{} violation(s)", report.violations.len())));
    }
    let capital = gale.root_capital();
    if capital.is_zero() {
        return Err(Error::Unvalidated("zero capital: every address meets the threshold".into()));
    }
    let mut out = Vec::new();
    for &r in rs {
        let level = window_level(cover, r);
        // level-m values with multiplicities, each with a cached log2 for fast comparisons
        let groups: Vec<(Surd, f64, BigUint)> = match level {
            Some(m) => {
                let mut g = Vec::new();
                value_groups(gale, &Address::root(), m, &mut g);
                g.into_iter().filter(|(v, _)| !v.is_zero()).map(|(v, n)| {
                    let lg = v.log2();
                    (v, lg, n)
                }).collect()
            }
            None => Vec::new(),
        };
        for &k in ks {
            let bound = Surd::power(2, gale.s() * Rat::from_integer(r as i64) - Rat::from_integer(k as i64));
            let threshold = capital.scale(&BigRational::from_integer(BigInt::one() << k as usize));
            let t_log = threshold.log2();
            let count: BigUint = groups
                .iter()
                .filter(|(v, lg, _)| {
                    if (lg - t_log).abs() > 1e-6 {
                        *lg > t_log
                    } else {
                        *v >= threshold
                    }
                })
                .map(|(_, _, n)| n)
                .sum();
            let holds = Surd::from_rational(BigRational::from_integer(count.clone().into())) <= bound;
            out.push(CountingBound {
                k,
                r,
                level,
                count: count.to_string(),
                bound_log2: bound.log2(),
                bound: bound.to_string(),
                holds,
            });
        }
    }
    Ok(out)
}

/// Level-`m` values below `node` with their multiplicities; subtrees without
/// stored entries are one group since all their level-`m` values agree.
fn value_groups(gale: &SupergaleTable, node: &Address, m: usize, out: &mut Vec<(Surd, BigUint)>) {
    if node.level() == m || !gale.has_stored_below(node) {
        let gap = m - node.level();
        let mut probe = node.clone();
        for _ in 0..gap {
            probe = probe.child(0);
        }
        out.push((gale.value(&probe), num_traits::pow(BigUint::from(gale.cover().branching()), gap)));
        return;
    }
    for sym in 0..gale.cover().branching() as u8 {
        value_groups(gale, &node.child(sym), m, out);
    }
}

/// Additive slack for comparing description lengths with counting bounds:
/// `2·log2(k·r) + 16` bits.
pub fn coherence_slack(k: u32, r: usize) -> f64 {
    2.0 * ((k.max(1) as f64) * (r.max(1) as f64)).log2() + 16.0
}

#[derive(Clone, Debug)]
pub struct CdimOptions {
    /// `s' = s − step`; defaults to the smallest gap in the grid.
    pub step: Option<Rat>,
    /// Success means exceeding `2^threshold_bits ·` capital.
    pub threshold_bits: u32,
    pub tail_fraction: Rat,
}

impl Default for CdimOptions {
    fn default() -> Self {
        CdimOptions { step: None, threshold_bits: 16, tail_fraction: Rat::new(1, 2) }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GridRow {
    pub s: String,
    pub s_prime: String,
    pub enumerated: usize,
    pub kraft: f64,
    /// First level where the gale exceeds the success threshold.
    pub success_level: Option<usize>,
    /// `log2(max d / capital)` along the point.
    pub best_log2_gain: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CdimReport {
    pub point: String,
    pub estimator: String,
    pub depth: usize,
    pub rows: Vec<GridRow>,
    /// Least grid value whose gale succeeded (upper estimate); the ambient
    /// dimension when no smaller grid value succeeded and the grid reaches it.
    pub upper: Option<String>,
    pub upper_value: Option<f64>,
    /// True when `upper` is the ambient dimension, which bounds every point.
    pub upper_trivial: bool,
    /// Profile-based lower estimate.
    pub lower: f64,
    pub threshold_bits: u32,
    /// `lower <= upper + slack/r` with the slack from [`coherence_slack`].
    pub coherent: Option<bool>,
    pub note: String,
}

/// Two-sided estimate of the constructive dimension of a point.
///
/// The enumeration is the finite stage consisting of the point's own prefixes
/// up to `depth` whose estimated complexity fits the budget.
pub fn cdim_via_gales(
    cover: &NiceCoverDescriptor,
    point: &PointRep,
    s_grid: &[Rat],
    depth: usize,
    est: &dyn ComplexityEstimator,
    options: &CdimOptions,
) -> Result<CdimReport> {
    let mut grid = s_grid.to_vec();
    grid.sort();
    grid.dedup();
    if grid.is_empty() {
        return Err(Error::Parse("empty s grid".into()));
    }
    let step = match options.step {
        Some(step) => step,
        None => grid.windows(2).map(|w| w[1] - w[0]).min().unwrap_or(Rat::new(1, 20)),
    };
    let word = point.symbols(cover, depth)?;
    let full = Address::from_symbols(word.clone());
    let prefixes: Vec<Address> = (1..=depth).map(|m| full.prefix(m)).collect();
    let bits: Vec<f64> = prefixes.par_iter().map(|w| est.estimate(&address_bytes(w))).collect();
    let log_radix = (cover.radix() as f64).log2();
    let factor = BigRational::from_integer(BigInt::one() << options.threshold_bits as usize);

    let rows = grid
        .par_iter()
        .map(|&s| -> Result<GridRow> {
            let s_prime = s - step;
            let pairs: Vec<(Address, f64)> = if s_prime < Rat::zero() {
                Vec::new()
            } else {
                prefixes
                    .iter()
                    .zip(&bits)
                    .filter_map(|(w, &b)| {
                        let budget = rat_to_f64(s_prime) * w.level() as f64 * log_radix;
                        (b <= budget).then(|| (w.clone(), budget))
                    })
                    .collect()
            };
            let enumeration = Enumeration { pairs };
            let mut row = GridRow {
                s: s.to_string(),
                s_prime: s_prime.to_string(),
                enumerated: enumeration.pairs.len(),
                kraft: 0.0,
                success_level: None,
                best_log2_gain: f64::NEG_INFINITY,
            };
            if enumeration.pairs.is_empty() || s <= Rat::zero() {
                return Ok(row);
            }
            row.kraft = enumeration.kraft(cover, s_prime).to_f64();
            let gale = enumeration_to_supergale(cover, &enumeration, s, s_prime)?;
            let capital = gale.root_capital();
            let trace = trace_word(&gale, &word, &[capital.scale(&factor)])?;
            row.success_level = trace.crossings[0].1;
            row.best_log2_gain = trace.max().log2() - capital.log2();
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;

    let ambient = cover.ambient_dimension();
    let mut upper_trivial = false;
    let upper_idx = rows.iter().position(|r| r.success_level.is_some()).or_else(|| {
        // every s above the ambient dimension succeeds on every point, so the
        // least grid value at or above it is always an upper bound
        upper_trivial = true;
        grid.iter().position(|&s| rat_to_f64(s) >= ambient)
    });
    upper_trivial &= upper_idx.is_some();
    let r_max = ((depth as f64) * log_radix).floor().max(1.0) as usize;
    let profile = kr_profile(cover, point, 1, r_max, est)?;
    let lower = cdim_point_estimate(&profile, options.tail_fraction)?.estimate;
    let upper_value = upper_idx.map(|i| rat_to_f64(grid[i]));
    let slack = coherence_slack(options.threshold_bits, r_max) / r_max as f64;
    Ok(CdimReport {
        point: point.id(),
        estimator: est.id(),
        depth,
        upper: upper_idx.map(|i| grid[i].to_string()),
        upper_value,
        upper_trivial,
        rows,
        lower,
        threshold_bits: options.threshold_bits,
        coherent: upper_value.map(|u| lower <= u + slack),
        note: "estimator-relative; enumeration restricted to the point's prefixes up to the depth".into(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct EstimatorReport {
    pub empty_bits: f64,
    /// Largest `K(ab) − K(a) − K(b) − 2·log2(|ab|)` over the sample pairs.
    pub worst_subadditivity_excess: f64,
    pub flagged: bool,
}

/// Loose sanity checks on an estimator; violations are flagged, never fatal.
pub fn check_estimator(est: &dyn ComplexityEstimator, samples: &[Vec<u8>]) -> EstimatorReport {
    let empty_bits = est.estimate(&[]);
    let mut worst = f64::NEG_INFINITY;
    for a in samples {
        for b in samples {
            let ab: Vec<u8> = a.iter().chain(b).copied().collect();
            let slack = 2.0 * (ab.len().max(2) as f64).log2();
            worst = worst.max(est.estimate(&ab) - est.estimate(a) - est.estimate(b) - slack);
        }
    }
    EstimatorReport { empty_bits, worst_subadditivity_excess: worst, flagged: empty_bits > 64.0 || worst > 0.0 }
}
