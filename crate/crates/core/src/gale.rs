//! s-supergales on a nice cover.
//!
//! A supergale assigns a capital `d(U) >= 0` to every cover element so that
//! `d(U)·diam(U)^s >= Σ_children d(V)·diam(V)^s`. [`SupergaleTable`] stores a
//! finite support and extends it either by zero or by splitting the scaled
//! capital `d·diam^s` evenly among children. Lazily defined gales implement
//! the [`Gale`] trait directly.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cover::{representation, Address, NiceCoverDescriptor, PointRep};
use crate::error::{Error, Result};
use crate::exact::{parse_rat, Rat, Surd};
use crate::report::{ValidationReport, ViolationKind};

/// Default relative tolerance, `2^-64`.
pub fn default_tolerance() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << 64usize)
}

/// Exact mode: zero tolerance.
pub fn exact_tolerance() -> BigRational {
    BigRational::zero()
}

/// A function from cover elements to nonnegative capital.
pub trait Gale: Send + Sync {
    fn cover(&self) -> &NiceCoverDescriptor;

    fn s(&self) -> Rat;

    fn value(&self, addr: &Address) -> Surd;

    /// `Σ_{U ∈ B_0} d(U)·diam(U)^s`; `B_0` is the root, of diameter 1.
    fn root_capital(&self) -> Surd {
        self.value(&Address::root())
    }

    /// Nodes of level `< depth` whose inequality needs an explicit check.
    /// Nodes not returned must satisfy it by construction.
    fn check_nodes(&self, depth: usize) -> Vec<Address> {
        (0..depth).flat_map(|m| self.cover().level_addresses(m)).collect()
    }

    /// Structural problems (e.g. negative stored values).
    fn well_formed(&self) -> Result<()> {
        Ok(())
    }

    fn describe(&self) -> String {
        format!("{}-supergale on {}", self.s(), self.cover())
    }
}

/// How a table values addresses outside its support.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Extension {
    Zero,
    UniformSplit,
}

impl fmt::Display for Extension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Extension::Zero => "zero",
            Extension::UniformSplit => "uniform-split",
        })
    }
}

/// Finitely supported s-supergale.
#[derive(Clone, Debug, PartialEq)]
pub struct SupergaleTable {
    cover: NiceCoverDescriptor,
    s: Rat,
    entries: BTreeMap<Address, Surd>,
    extension: Extension,
}

impl SupergaleTable {
    pub fn new(cover: NiceCoverDescriptor, s: Rat, extension: Extension) -> Self {
        SupergaleTable { cover, s, entries: BTreeMap::new(), extension }
    }

    /// The gale that splits `capital` evenly forever. An s-gale for every `s`.
    pub fn uniform(cover: NiceCoverDescriptor, s: Rat, capital: Surd) -> Self {
        let mut t = SupergaleTable::new(cover, s, Extension::UniformSplit);
        t.entries.insert(Address::root(), capital);
        t
    }

    /// The gale betting its whole capital on `symbol` at every step, stored
    /// to `depth`: `d(symbol^m) = radix^{ms}`, every other branch 0.
    pub fn all_in(cover: NiceCoverDescriptor, symbol: u8, s: Rat, depth: usize) -> Result<Self> {
        let mut t = SupergaleTable::new(cover, s, Extension::UniformSplit);
        let mut node = Address::root();
        for m in 0..=depth {
            t.insert(node.clone(), t.cover.diam_pow_rat(m, -s))?;
            if m < depth {
                for sym in 0..t.cover.branching() as u8 {
                    if sym != symbol {
                        t.insert(node.child(sym), Surd::zero())?;
                    }
                }
            }
            node = node.child(symbol);
        }
        Ok(t)
    }

    pub fn insert(&mut self, addr: Address, value: Surd) -> Result<()> {
        self.cover.check_address(&addr)?;
        if let Some(r) = value.radix() {
            let (g, _) = crate::exact::primitive_root(self.cover.radix());
            if r != g {
                return Err(Error::MalformedGale(format!(
                    "value {value} at '{addr}' uses radix {r}; this cover needs powers of {g}"
                )));
            }
        }
        self.entries.insert(addr, value);
        Ok(())
    }

    pub fn remove(&mut self, addr: &Address) -> Option<Surd> {
        self.entries.remove(addr)
    }

    pub fn get(&self, addr: &Address) -> Option<&Surd> {
        self.entries.get(addr)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Address, &Surd)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn extension(&self) -> Extension {
        self.extension
    }

    pub fn support_depth(&self) -> usize {
        self.entries.keys().map(Address::level).max().unwrap_or(0)
    }

    /// Nearest stored ancestor-or-self.
    pub fn stored_ancestor(&self, addr: &Address) -> Option<(Address, &Surd)> {
        (0..=addr.level()).rev().find_map(|len| {
            self.entries
                .get(&addr.symbols()[..len])
                .map(|v| (addr.prefix(len), v))
        })
    }

    /// Whether some stored address properly extends `addr`.
    pub fn has_stored_below(&self, addr: &Address) -> bool {
        // extensions of addr sort directly after it
        self.entries
            .range::<Address, _>((std::ops::Bound::Excluded(addr), std::ops::Bound::Unbounded))
            .next()
            .is_some_and(|(a, _)| addr.is_proper_prefix_of(a))
    }

    /// `λ·d`.
    pub fn scaled(&self, factor: &BigRational) -> Self {
        let mut out = self.clone();
        for v in out.entries.values_mut() {
            *v = v.scale(factor);
        }
        out
    }

    /// Keep only entries of level `<= depth`; the extension policy is unchanged.
    pub fn truncated(&self, depth: usize) -> Self {
        let mut out = self.clone();
        out.entries.retain(|a, _| a.level() <= depth);
        out
    }

    /// Same function as a uniform-split table: a zero-extension table gets
    /// explicit zeros on the missing children of its stored nodes.
    pub fn to_uniform_split(&self) -> Self {
        let mut out = self.clone();
        if self.extension == Extension::UniformSplit {
            return out;
        }
        out.extension = Extension::UniformSplit;
        for addr in self.entries.keys() {
            for sym in 0..self.cover.branching() as u8 {
                out.entries.entry(addr.child(sym)).or_insert_with(Surd::zero);
            }
        }
        if let std::collections::btree_map::Entry::Vacant(e) = out.entries.entry(Address::root()) {
            e.insert(Surd::zero());
            for sym in 0..self.cover.branching() as u8 {
                out.entries.entry(Address::root().child(sym)).or_insert_with(Surd::zero);
            }
        }
        // Any unstored address now sits below an added zero node, which splits zero capital.
        out
    }

    /// Serialize as `{"cover":..,"s":..,"extension":..,"entries":[[addr, value], ..]}`.
    pub fn to_json(&self) -> String {
        let file = GaleFile {
            cover: Some(self.cover.clone()),
            s: self.s.to_string(),
            extension: self.extension,
            entries: self.entries.iter().map(|(a, v)| (a.to_string(), v.to_string())).collect(),
        };
        serde_json::to_string_pretty(&file).expect("gale file serializes")
    }

    /// Parse a gale file for a known cover; a cover recorded in the file must agree.
    pub fn from_json(cover: &NiceCoverDescriptor, text: &str) -> Result<Self> {
        SupergaleTable::load_json(text, Some(cover))
    }

    /// Parse a gale file, taking the cover from the file when none is given.
    pub fn load_json(text: &str, cover: Option<&NiceCoverDescriptor>) -> Result<Self> {
        let file: GaleFile = serde_json::from_str(text)?;
        let cover = match (cover, &file.cover) {
            (Some(given), Some(stored)) if given != stored => {
                return Err(Error::MalformedGale(format!("gale file is for {stored}, not {given}")));
            }
            (Some(given), _) => given,
            (None, Some(stored)) => stored,
            (None, None) => {
                return Err(Error::MalformedGale("gale file names no cover; supply one".into()));
            }
        };
        let s = parse_rat(&file.s)?;
        if s < Rat::zero() {
            return Err(Error::MalformedGale(format!("negative exponent s = {s}")));
        }
        let mut t = SupergaleTable::new(cover.clone(), s, file.extension);
        for (a, v) in file.entries {
            let addr = cover.parse_address(&a)?;
            let value = Surd::parse(&v)?;
            if t.entries.contains_key(&addr) {
                return Err(Error::MalformedGale(format!("duplicate entry for '{a}'")));
            }
            t.insert(addr, value)?;
        }
        Ok(t)
    }
}

#[derive(Serialize, Deserialize)]
struct GaleFile {
    #[serde(default)]
    cover: Option<NiceCoverDescriptor>,
    s: String,
    extension: Extension,
    entries: Vec<(String, String)>,
}

impl Gale for SupergaleTable {
    fn cover(&self) -> &NiceCoverDescriptor {
        &self.cover
    }

    fn s(&self) -> Rat {
        self.s
    }

    fn value(&self, addr: &Address) -> Surd {
        match self.stored_ancestor(addr) {
            None => Surd::zero(),
            Some((p, v)) if p.level() == addr.level() => v.clone(),
            Some((p, v)) => match self.extension {
                Extension::Zero => Surd::zero(),
                Extension::UniformSplit => {
                    let gap = (addr.level() - p.level()) as i64;
                    let split = BigRational::new(
                        BigInt::one(),
                        num_traits::pow(BigInt::from(self.cover.branching()), gap as usize),
                    );
                    v.mul_power(self.cover.radix(), self.s * Rat::from_integer(gap)).scale(&split)
                }
            },
        }
    }

    fn check_nodes(&self, depth: usize) -> Vec<Address> {
        let mut nodes = BTreeSet::new();
        nodes.insert(Address::root());
        for a in self.entries.keys() {
            if let Some(p) = a.parent() {
                nodes.insert(p);
            }
            nodes.insert(a.clone());
        }
        nodes.into_iter().filter(|a| a.level() < depth).collect()
    }

    fn well_formed(&self) -> Result<()> {
        match self.entries.iter().find(|(_, v)| v.is_negative()) {
            Some((a, v)) => Err(Error::MalformedGale(format!("negative value {v} at '{a}'"))),
            None => Ok(()),
        }
    }

    fn describe(&self) -> String {
        format!(
            "{}-supergale table on {} ({} entries, {} extension)",
            self.s,
            self.cover,
            self.entries.len(),
            self.extension
        )
    }
}

/// Weighted sum `Σ w_i·d_i` of gales sharing a cover and exponent, evaluated lazily.
pub struct GaleSum {
    cover: NiceCoverDescriptor,
    s: Rat,
    terms: Vec<(BigRational, Box<dyn Gale>)>,
}

impl GaleSum {
    pub fn new(cover: NiceCoverDescriptor, s: Rat) -> Self {
        GaleSum { cover, s, terms: Vec::new() }
    }

    pub fn push(&mut self, weight: BigRational, gale: Box<dyn Gale>) -> Result<()> {
        check_compatible(&self.cover, self.s, gale.as_ref())?;
        if weight.is_negative() {
            return Err(Error::MalformedGale(format!("negative weight {weight}")));
        }
        self.terms.push((weight, gale));
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

fn check_compatible(cover: &NiceCoverDescriptor, s: Rat, g: &dyn Gale) -> Result<()> {
    if g.s() != s {
        return Err(Error::IncompatibleExponent(format!("expected s = {s}, got {}", g.s())));
    }
    if g.cover() != cover {
        return Err(Error::IncompatibleExponent(format!("gale on {} combined with {}", g.cover(), cover)));
    }
    Ok(())
}

impl Gale for GaleSum {
    fn cover(&self) -> &NiceCoverDescriptor {
        &self.cover
    }

    fn s(&self) -> Rat {
        self.s
    }

    fn value(&self, addr: &Address) -> Surd {
        let mut total = Surd::zero();
        for (w, g) in &self.terms {
            if !w.is_zero() {
                total += &g.value(addr).scale(w);
            }
        }
        total
    }

    fn check_nodes(&self, depth: usize) -> Vec<Address> {
        let set: BTreeSet<Address> = self.terms.iter().flat_map(|(_, g)| g.check_nodes(depth)).collect();
        set.into_iter().collect()
    }

    fn well_formed(&self) -> Result<()> {
        self.terms.iter().try_for_each(|(_, g)| g.well_formed())
    }

    fn describe(&self) -> String {
        format!("weighted sum of {} {}-supergales on {}", self.terms.len(), self.s, self.cover)
    }
}

/// Pointwise weighted sum of tables on the union of their supports.
pub fn combine(gales: &[(BigRational, &SupergaleTable)]) -> Result<SupergaleTable> {
    let Some((_, first)) = gales.first() else {
        return Err(Error::MalformedGale("combine needs at least one gale".into()));
    };
    let (cover, s) = (first.cover.clone(), first.s);
    for (w, g) in gales {
        check_compatible(&cover, s, *g)?;
        if w.is_negative() {
            return Err(Error::MalformedGale(format!("negative weight {w}")));
        }
    }
    let mixed = gales.iter().any(|(_, g)| g.extension != first.extension);
    let parts: Vec<(BigRational, SupergaleTable)> = gales
        .iter()
        .map(|(w, g)| (w.clone(), if mixed { g.to_uniform_split() } else { (*g).clone() }))
        .collect();
    let extension = parts[0].1.extension;
    let support: BTreeSet<Address> = parts.iter().flat_map(|(_, g)| g.entries.keys().cloned()).collect();
    let mut out = SupergaleTable::new(cover, s, extension);
    for addr in support {
        let mut total = Surd::zero();
        for (w, g) in &parts {
            if !w.is_zero() {
                total += &g.value(&addr).scale(w);
            }
        }
        out.entries.insert(addr, total);
    }
    Ok(out)
}

fn check_inequalities(
    gale: &dyn Gale,
    depth: usize,
    tol: &BigRational,
    require_equality: bool,
) -> Result<ValidationReport> {
    gale.well_formed()?;
    if tol.is_negative() {
        return Err(Error::MalformedGale(format!("negative tolerance {tol}")));
    }
    let cover = gale.cover();
    let s = gale.s();
    let title = if require_equality { "gale equality" } else { "supergale inequality" };
    let mut report = ValidationReport::new(format!("{title} for {}", gale.describe()), depth);
    let nodes = gale.check_nodes(depth);
    // With equal child diameters, d(U)·diam(U)^s vs Σ d(V)·diam(V)^s reduces to
    // d(U)·radix^s vs Σ d(V).
    let ratio = Surd::power(cover.radix(), s);
    let outcomes: Vec<(Address, Option<String>, bool)> = nodes
        .par_iter()
        .map(|u| {
            let lhs = &gale.value(u) * &ratio;
            let mut rhs = Surd::zero();
            for sym in 0..cover.branching() as u8 {
                rhs += &gale.value(&u.child(sym));
            }
            let slack = lhs.scale(tol);
            let diff = &lhs - &rhs;
            let exact_hit = if require_equality { diff.is_zero() } else { !diff.is_negative() };
            if exact_hit {
                return (u.clone(), None, true);
            }
            let within = if require_equality {
                !(&slack - &diff).is_negative() && !(&slack + &diff).is_negative()
            } else {
                !(&diff + &slack).is_negative()
            };
            let detail = format!(
                "d(U)·diam(U)^s ≈ {:e} vs children ≈ {:e} (relative to child diameter)",
                lhs.to_f64(),
                rhs.to_f64()
            );
            (u.clone(), (!within).then_some(detail), false)
        })
        .collect();
    let kind = if require_equality { ViolationKind::GaleEquality } else { ViolationKind::SupergaleInequality };
    for (addr, violation, exact_hit) in outcomes {
        report.checked += 1;
        if !exact_hit && !tol.is_zero() {
            report.exact = false;
        }
        if let Some(detail) = violation {
            report.push(addr, kind, detail);
        }
    }
    let capital = gale.root_capital();
    report.root_capital = Some(capital.to_string());
    report.notes.push(format!("root capital ≈ {:e}", capital.to_f64()));
    if require_equality {
        report.notes.push("equality checked at every explicit node".into());
    }
    Ok(report)
}

/// Check `d(U)·diam(U)^s >= Σ_children d(V)·diam(V)^s` at every node of level
/// `< depth`, within relative tolerance `tol` (zero for exact mode).
pub fn validate_supergale(gale: &dyn Gale, depth: usize, tol: &BigRational) -> Result<ValidationReport> {
    check_inequalities(gale, depth, tol, false)
}

/// Like [`validate_supergale`] but requires equality at every node.
pub fn is_gale(gale: &dyn Gale, depth: usize, tol: &BigRational) -> Result<bool> {
    Ok(check_inequalities(gale, depth, tol, true)?.passed())
}

pub fn gale_equality_report(gale: &dyn Gale, depth: usize, tol: &BigRational) -> Result<ValidationReport> {
    check_inequalities(gale, depth, tol, true)
}

/// Capital along one representation.
#[derive(Clone, Debug)]
pub struct SuccessTrace {
    /// `d(w_n)` for `n = 0..=depth`.
    pub values: Vec<Surd>,
    pub running_max: Vec<Surd>,
    pub root_capital: Surd,
    /// Threshold → first level where the running maximum strictly exceeds it.
    pub crossings: Vec<(Surd, Option<usize>)>,
}

impl SuccessTrace {
    fn from_values(values: Vec<Surd>, root_capital: Surd, thresholds: &[Surd]) -> Self {
        let mut running_max: Vec<Surd> = Vec::with_capacity(values.len());
        for v in &values {
            let next = match running_max.last() {
                Some(m) if m >= v => m.clone(),
                _ => v.clone(),
            };
            running_max.push(next);
        }
        let mut trace = SuccessTrace { values, running_max, root_capital, crossings: Vec::new() };
        trace.crossings = thresholds.iter().map(|t| (t.clone(), trace.first_exceeding(t))).collect();
        trace
    }

    pub fn first_exceeding(&self, threshold: &Surd) -> Option<usize> {
        // running_max is nondecreasing: binary search for the first strict crossing
        let idx = self.running_max.partition_point(|m| m <= threshold);
        (idx < self.running_max.len()).then_some(idx)
    }

    /// First level where `d(w_n) > 2^k · root capital`.
    pub fn first_exceeding_capital_multiple(&self, k: u32) -> Option<usize> {
        if self.root_capital.is_zero() {
            return None;
        }
        let t = self.root_capital.scale(&BigRational::from_integer(BigInt::one() << k as usize));
        self.first_exceeding(&t)
    }

    pub fn max(&self) -> &Surd {
        self.running_max.last().expect("trace has level 0")
    }

    pub fn log2_values(&self) -> Vec<f64> {
        self.values.iter().map(Surd::log2).collect()
    }
}

/// `d(w_n)` for `n <= depth` along the point's canonical representation.
pub fn evaluate_success(
    gale: &dyn Gale,
    point: &PointRep,
    depth: usize,
    thresholds: &[Surd],
) -> Result<SuccessTrace> {
    let rep = representation(gale.cover(), point, depth)?;
    let values = rep.iter().map(|a| gale.value(a)).collect();
    Ok(SuccessTrace::from_values(values, gale.root_capital(), thresholds))
}

/// Same as [`evaluate_success`] along an explicit finite word.
pub fn trace_word(gale: &dyn Gale, word: &[u8], thresholds: &[Surd]) -> Result<SuccessTrace> {
    let full = Address::from_symbols(word.to_vec());
    gale.cover().check_address(&full)?;
    let values = (0..=word.len()).map(|m| gale.value(&full.prefix(m))).collect();
    Ok(SuccessTrace::from_values(values, gale.root_capital(), thresholds))
}
