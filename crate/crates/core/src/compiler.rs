//! Covers ↔ supergales.
//!
//! [`cover_to_supergale`] turns a finite antichain `D` into the gale `d_k`
//! that is worth exactly 1 on every element of `D`; [`supergale_to_cover`]
//! goes back, collecting the maximal elements where a gale has multiplied
//! its initial capital by more than `2^k`.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::cover::{Address, CoverKind, ExactScale, NiceCoverDescriptor, PointRep};
use crate::error::{Error, Result};
use crate::exact::{Exponent, Rat, Surd};
use crate::gale::{default_tolerance, validate_supergale, Extension, Gale, SupergaleTable};

/// Pairwise incomparable addresses.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Antichain {
    elements: BTreeSet<Address>,
}

impl Antichain {
    /// Fails with [`Error::NotAntichain`] if two elements are comparable.
    pub fn new(elements: impl IntoIterator<Item = Address>) -> Result<Self> {
        let elements: BTreeSet<Address> = elements.into_iter().collect();
        let mut prev: Option<&Address> = None;
        for a in &elements {
            // in lexicographic order a prefix precedes its extensions, and
            // everything in between also extends it
            if let Some(p) = prev.filter(|p| p.is_prefix_of(a)) {
                return Err(Error::NotAntichain(format!("'{p}' contains '{a}'")));
            }
            prev = Some(a);
        }
        Ok(Antichain { elements })
    }

    pub fn elements(&self) -> impl Iterator<Item = &Address> {
        self.elements.iter()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, a: &Address) -> bool {
        self.elements.contains(a)
    }

    /// Element of the antichain containing `a` (ancestor-or-self), if any.
    pub fn covering(&self, a: &Address) -> Option<&Address> {
        (0..=a.level()).find_map(|len| self.elements.get(&a.symbols()[..len]))
    }

    pub fn max_level(&self) -> usize {
        self.elements.iter().map(Address::level).max().unwrap_or(0)
    }

    /// Serialized as a JSON string array.
    pub fn to_json(&self) -> String {
        let v: Vec<String> = self.elements.iter().map(|a| a.to_string()).collect();
        serde_json::to_string(&v).expect("strings serialize")
    }

    /// Accepts a JSON string array or one address per line (blank lines ignored).
    pub fn parse(cover: &NiceCoverDescriptor, text: &str) -> Result<Self> {
        let t = text.trim();
        let raw: Vec<String> = if t.starts_with('[') {
            serde_json::from_str(t)?
        } else {
            t.lines().map(str::trim).filter(|l| !l.is_empty()).map(String::from).collect()
        };
        let addrs = raw.iter().map(|s| cover.parse_address(s)).collect::<Result<Vec<_>>>()?;
        Antichain::new(addrs)
    }
}

/// Cover elements drawn from levels `>= target_level`; may be comparable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedCover {
    pub elements: Vec<Address>,
    pub target_level: usize,
}

/// Elements of `addresses` with no proper prefix in the input.
pub fn maximal_antichain<'a>(addresses: impl IntoIterator<Item = &'a Address>) -> Antichain {
    let sorted: BTreeSet<&Address> = addresses.into_iter().collect();
    let mut kept: Vec<Address> = Vec::new();
    for a in sorted {
        if kept.last().is_none_or(|k| !k.is_prefix_of(a)) {
            kept.push(a.clone());
        }
    }
    Antichain { elements: kept.into_iter().collect() }
}

/// `Σ_{U ∈ antichain} diam(U)^s`, exact.
pub fn kraft_sum(cover: &NiceCoverDescriptor, antichain: &Antichain, s: Exponent) -> Result<Surd> {
    let mut per_level: BTreeMap<usize, i64> = BTreeMap::new();
    for a in antichain.elements() {
        cover.check_address(a)?;
        *per_level.entry(a.level()).or_default() += 1;
    }
    let mut total = Surd::zero();
    for (level, count) in per_level {
        total += &cover.diam_pow(level, s)?.scale(&BigRational::from_integer(count.into()));
    }
    Ok(total)
}

/// Replace each ball `B(center, radius)` by at most `c` cover elements of
/// level `> r` covering it, each of diameter `< c · 2·radius`.
pub fn refine_to_nice(
    cover: &NiceCoverDescriptor,
    raw: &[(PointRep, Rat)],
    r: usize,
) -> Result<WeightedCover> {
    let radix = cover.radix() as i64;
    let eps = Rat::new(1, radix).pow((r + 1) as i32);
    let mut elements = Vec::new();
    for (center, radius) in raw {
        if *radius <= Rat::zero() {
            return Err(Error::RefinementImpossible(format!("radius {radius} must be positive")));
        }
        let width = *radius * 2;
        if width >= eps {
            let mut ok_r = None;
            let mut z = Rat::new(1, radix);
            for rr in 0..=r {
                if width < z {
                    ok_r = Some(rr);
                }
                z /= radix;
            }
            return Err(Error::RefinementImpossible(match ok_r {
                Some(rr) => format!("2·radius = {width} >= zeta^{} at level {r}; largest workable level is {rr}", r + 1),
                None => format!("2·radius = {width} is not below zeta; no level works"),
            }));
        }
        // deepest level whose element diameter still reaches 2·radius
        let mut level = 0usize;
        let mut side = Rat::one();
        while side / radix >= width {
            side /= radix;
            level += 1;
        }
        let found = match cover.kind() {
            CoverKind::Symbolic { .. } => {
                let word = center.symbols(cover, level)?;
                vec![Address::from_symbols(word)]
            }
            CoverKind::Cube { n, base } => {
                let PointRep::Coordinates(xs) = center else {
                    return Err(Error::OutOfDomain("cube balls need coordinate centers".into()));
                };
                if xs.len() != n as usize {
                    return Err(Error::OutOfDomain(format!("expected {n} coordinates")));
                }
                let cells = (base as i64).pow(level as u32);
                let axis_ranges: Vec<(i64, i64)> = xs
                    .iter()
                    .map(|x| {
                        let lo = (*x - *radius) / side;
                        let hi = (*x + *radius) / side;
                        let k_min = lo.floor().to_integer().max(0);
                        let k_max = (hi.ceil().to_integer() - 1).min(cells - 1);
                        (k_min, k_max)
                    })
                    .collect();
                cube_cells(base, level, &axis_ranges)
            }
        };
        let c = cover.c() as usize;
        debug_assert!(found.len() <= c);
        debug_assert!(side < width * Rat::from_integer(c as i64));
        elements.extend(found);
    }
    Ok(WeightedCover { elements, target_level: r + 1 })
}

fn cube_cells(base: u32, level: usize, ranges: &[(i64, i64)]) -> Vec<Address> {
    let b = base as i64;
    let mut combos: Vec<Vec<i64>> = vec![Vec::new()];
    for &(lo, hi) in ranges {
        combos = combos
            .into_iter()
            .flat_map(|c| {
                (lo..=hi).map(move |k| {
                    let mut c = c.clone();
                    c.push(k);
                    c
                })
            })
            .collect();
    }
    combos
        .into_iter()
        .map(|idx| {
            let symbols = (1..=level)
                .map(|j| {
                    let div = b.pow((level - j) as u32);
                    idx.iter()
                        .enumerate()
                        .map(|(axis, k)| ((k / div) % b) * b.pow(axis as u32))
                        .sum::<i64>() as u8
                })
                .collect();
            Address::from_symbols(symbols)
        })
        .collect()
}

/// Value of `d_k` where the defining sum applies: `Σ_{W ⊆ U} diam(W)^s / diam(U)^s`.
/// Zero-diameter elements are worth 1; the built-in covers have none.
pub fn second_case_value(mass_below: &Surd, diam: ExactScale, s: Rat) -> Result<Surd> {
    match diam {
        ExactScale::Zero => Ok(Surd::one()),
        d => Ok(mass_below * &d.pow(Exponent::Rational(-s))?),
    }
}

/// Compile a finite antichain into the supergale `d_k`.
///
/// Strictly below a target the scaled capital splits in proportion to
/// `diam^s` (evenly, on the built-in covers); elsewhere `d_k(U)` is the
/// `diam^s`-mass of targets inside `U` divided by `diam(U)^s`.
pub fn cover_to_supergale(
    cover: &NiceCoverDescriptor,
    target: &Antichain,
    s: Rat,
    k: i64,
) -> Result<SupergaleTable> {
    if s <= Rat::zero() {
        return Err(Error::IncompatibleExponent(format!(
            "s = {s}: the zero-diameter substitution is undefined at s = 0, so s must be positive"
        )));
    }
    // re-check incomparability in case the caller built the set by hand
    let target = Antichain::new(target.elements().cloned())?;
    let kraft = kraft_sum(cover, &target, Exponent::Rational(s))?;
    check_label(cover, &kraft, s, k)?;

    let mut mass: BTreeMap<Address, Surd> = BTreeMap::new();
    for w in target.elements() {
        let t = cover.diam_pow_rat(w.level(), s);
        for len in 0..=w.level() {
            *mass.entry(w.prefix(len)).or_insert_with(Surd::zero) += &t;
        }
    }
    let mut table = SupergaleTable::new(cover.clone(), s, Extension::UniformSplit);
    for (u, m) in &mass {
        let value = second_case_value(m, ExactScale::Power { radix: cover.radix(), level: u.level() as u64 }, s)?;
        table.insert(u.clone(), value)?;
    }
    // siblings off every target path carry nothing
    let ancestors: Vec<Address> = mass.keys().filter(|u| !target.contains(u)).cloned().collect();
    for u in ancestors {
        for sym in 0..cover.branching() as u8 {
            let kid = u.child(sym);
            if !mass.contains_key(&kid) {
                table.insert(kid, Surd::zero())?;
            }
        }
    }
    if target.is_empty() {
        table.insert(Address::root(), Surd::zero())?;
    }
    Ok(table)
}

/// `kraft < c^{1+s} · 2^{-k}`, decided exactly when the radices agree.
fn check_label(cover: &NiceCoverDescriptor, kraft: &Surd, s: Rat, k: i64) -> Result<()> {
    let c = cover.c() as u64;
    let two_k = if k >= 0 {
        BigRational::new(BigInt::one(), BigInt::one() << k as usize)
    } else {
        BigRational::from_integer(BigInt::one() << (-k) as usize)
    };
    let bound = Surd::power(c, Rat::one() + s).scale(&two_k);
    let ok = match (kraft.radix(), bound.radix()) {
        (Some(a), Some(b)) if a != b => {
            kraft.log2() < (1.0 + crate::exact::rat_to_f64(s)) * (c as f64).log2() - k as f64 + 1e-12
        }
        _ => kraft < &bound,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::IncompatibleExponent(format!(
            "label k = {k} inconsistent with Kraft sum ≈ {:e} (need < c^(1+s)·2^-k)",
            kraft.to_f64()
        )))
    }
}

/// Result of extracting a cover from a supergale.
#[derive(Clone, Debug)]
pub struct Extraction {
    pub antichain: Antichain,
    /// Candidates examined (support plus one extension level, up to the depth).
    pub candidates: usize,
    /// False when nodes beyond the examined region could also exceed the threshold.
    pub complete: bool,
}

/// Maximal elements of `C_k = {U : d(U) > 2^k · root capital}` within `depth`.
pub fn supergale_to_cover(gale: &SupergaleTable, k: i64, depth: usize) -> Result<Extraction> {
    let report = validate_supergale(gale, depth.max(gale.support_depth()) + 1, &default_tolerance())?;
    if !report.passed() {
        return Err(Error::Unvalidated(format!("{} violation(s)", report.violations.len())));
    }
    let cover = gale.cover();
    let capital = gale.root_capital();
    let factor = if k >= 0 {
        BigRational::from_integer(BigInt::one() << k as usize)
    } else {
        BigRational::new(BigInt::one(), BigInt::one() << (-k) as usize)
    };
    let threshold = capital.scale(&factor);
    let mut candidates: BTreeSet<Address> = BTreeSet::new();
    for (a, _) in gale.entries() {
        if a.level() <= depth {
            candidates.insert(a.clone());
        }
        if a.level() < depth {
            for sym in 0..cover.branching() as u8 {
                candidates.insert(a.child(sym));
            }
        }
    }
    let hits: Vec<Address> = candidates
        .iter()
        .filter(|a| gale.value(a) > threshold)
        .cloned()
        .collect();
    let decays = match gale.extension() {
        Extension::Zero => true,
        // extension multiplies d by radix^s / branching per level
        Extension::UniformSplit => {
            Surd::power(cover.radix(), gale.s()) <= Surd::from_integer(cover.branching() as i64)
        }
    };
    Ok(Extraction {
        antichain: maximal_antichain(hits.iter()),
        candidates: candidates.len(),
        complete: decays || gale.support_depth() + 1 >= depth,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gale::{exact_tolerance, is_gale};

    fn sym(k: u32) -> NiceCoverDescriptor {
        NiceCoverDescriptor::symbolic(k).unwrap()
    }

    fn a(t: &str) -> Address {
        Address::parse(t, 36).unwrap()
    }

    fn set(words: &[&str]) -> Vec<Address> {
        words.iter().map(|w| a(w)).collect()
    }

    fn q(n: i64, d: i64) -> Rat {
        Rat::new(n, d)
    }

    #[test]
    fn maximal_antichain_examples() {
        let input = set(&["0", "01", "010", "11"]);
        assert_eq!(maximal_antichain(&input), Antichain::new(set(&["0", "11"])).unwrap());
        let input = set(&["00", "01", "10", "11"]);
        assert_eq!(maximal_antichain(&input).len(), 4);
        assert!(maximal_antichain(&[]).is_empty());
        assert!(matches!(Antichain::new(set(&["0", "01"])), Err(Error::NotAntichain(_))));
    }

    #[test]
    fn kraft_examples() {
        let c = sym(2);
        let full = Antichain::new(set(&["00", "01", "10", "11"])).unwrap();
        assert_eq!(kraft_sum(&c, &full, Exponent::rational(1, 1)).unwrap(), Surd::one());
        let two = Antichain::new(set(&["0", "10"])).unwrap();
        assert_eq!(kraft_sum(&c, &two, Exponent::rational(1, 1)).unwrap(), Surd::from_rat(q(3, 4)));
        let cantor = Antichain::new(set(&["0", "2"])).unwrap();
        let v = kraft_sum(&sym(3), &cantor, Exponent::log_ratio(2, 3)).unwrap();
        assert_eq!(v, Surd::one());
        assert!((2.0 * 3f64.powf(-(2f64.ln() / 3f64.ln())) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn refine_examples() {
        let line = NiceCoverDescriptor::cube(1, 2).unwrap();
        let ball = (PointRep::Coordinates(vec![q(7, 16)]), q(1, 16));
        let w = refine_to_nice(&line, &[ball], 1).unwrap();
        assert_eq!(w.elements, set(&["011"]));
        let straddle = (PointRep::Coordinates(vec![q(1, 2)]), q(1, 32));
        let w = refine_to_nice(&line, &[straddle], 2).unwrap();
        assert_eq!(w.elements, set(&["0111", "1000"]));
        assert!(w.elements.len() <= line.c() as usize);

        let cyl = (PointRep::constant(0), q(1, 32));
        let w = refine_to_nice(&sym(2), &[cyl], 2).unwrap();
        assert_eq!(w.elements, set(&["0000"]));
        assert!(w.elements.iter().all(|e| e.level() > 2));

        let too_big = (PointRep::constant(0), q(1, 8));
        assert!(matches!(refine_to_nice(&sym(2), &[too_big], 3), Err(Error::RefinementImpossible(_))));
    }

    #[test]
    fn refine_in_the_plane() {
        let plane = NiceCoverDescriptor::cube(2, 2).unwrap();
        // box around (1/2, 1/2) straddles both axes' midlines: 4 cells
        let ball = (PointRep::Coordinates(vec![q(1, 2), q(1, 2)]), q(1, 64));
        let w = refine_to_nice(&plane, &[ball], 2).unwrap();
        assert_eq!(w.elements.len(), 4);
        let side = q(1, 2).pow(w.elements[0].level() as i32);
        assert!(side < q(1, 64) * 2 * plane.c() as i64);
    }

    #[test]
    fn compile_root_target() {
        let root = Antichain::new([Address::root()]).unwrap();
        let d = cover_to_supergale(&sym(2), &root, q(1, 2), 0).unwrap();
        assert_eq!(d.value(&Address::root()), Surd::one());
    }

    #[test]
    fn compile_single_deep_target() {
        let c = sym(2);
        let d = cover_to_supergale(&c, &Antichain::new(set(&["00"])).unwrap(), q(1, 1), 1).unwrap();
        assert_eq!(d.value(&a("")), Surd::from_rat(q(1, 4)));
        assert_eq!(d.value(&a("0")), Surd::from_rat(q(1, 2)));
        assert_eq!(d.value(&a("00")), Surd::one());
        assert_eq!(d.value(&a("1")), Surd::zero());
        assert_eq!(d.value(&a("0010")), Surd::one());
        assert!(validate_supergale(&d, 6, &exact_tolerance()).unwrap().passed());
    }

    #[test]
    fn compile_full_level() {
        let c = sym(2);
        let d = cover_to_supergale(&c, &Antichain::new(set(&["0", "1"])).unwrap(), q(1, 1), -1).unwrap();
        for w in ["", "0", "1"] {
            assert_eq!(d.value(&a(w)), Surd::one());
        }
        assert!(is_gale(&d, 5, &exact_tolerance()).unwrap());
        // dropping the entry for "1" loses mass at the root
        let mut lossy = d.clone();
        lossy.insert(a("1"), Surd::zero()).unwrap();
        assert!(validate_supergale(&lossy, 5, &exact_tolerance()).unwrap().passed());
        assert!(!is_gale(&lossy, 5, &exact_tolerance()).unwrap());
    }

    #[test]
    fn compile_rejects_bad_input() {
        let c = sym(2);
        let ok = Antichain::new(set(&["0"])).unwrap();
        assert!(matches!(cover_to_supergale(&c, &ok, Rat::zero(), 0), Err(Error::IncompatibleExponent(_))));
        // Kraft 1/2 is not below c^{1+s}·2^-5
        assert!(cover_to_supergale(&c, &ok, q(1, 1), 5).is_err());
    }

    #[test]
    fn zero_diameter_clause() {
        let v = second_case_value(&Surd::from_integer(7), ExactScale::Zero, q(1, 2)).unwrap();
        assert_eq!(v, Surd::one());
    }

    #[test]
    fn extract_examples() {
        let c = sym(2);
        let uniform = SupergaleTable::uniform(c.clone(), q(1, 1), Surd::one());
        assert!(supergale_to_cover(&uniform, 1, 8).unwrap().antichain.is_empty());

        let doubling = SupergaleTable::all_in(c.clone(), 0, q(1, 2), 8).unwrap();
        let ex = supergale_to_cover(&doubling, 1, 8).unwrap();
        assert_eq!(ex.antichain, Antichain::new(set(&["000"])).unwrap());
        assert!(ex.complete);

        let mut bad = SupergaleTable::new(c.clone(), q(1, 1), Extension::Zero);
        bad.insert(a(""), Surd::one()).unwrap();
        bad.insert(a("0"), Surd::from_integer(3)).unwrap();
        assert!(matches!(supergale_to_cover(&bad, 1, 3), Err(Error::Unvalidated(_))));
    }

    #[test]
    fn round_trip_covers_target() {
        let c = sym(2);
        let d = Antichain::new(set(&["000", "01", "1101"])).unwrap();
        let s = q(1, 2);
        let kraft = kraft_sum(&c, &d, Exponent::Rational(s)).unwrap();
        // 2^-k > Kraft ≈ 0.35+0.5+0.25 > 1 → k = -1 works
        let k = -1;
        let g = cover_to_supergale(&c, &d, s, k).unwrap();
        assert!(kraft < Surd::from_integer(2));
        let ex = supergale_to_cover(&g, k, 6).unwrap();
        for w in d.elements() {
            assert!(ex.antichain.covering(w).is_some(), "{w:?} uncovered");
        }
    }

    #[test]
    fn antichain_file_forms() {
        let c = sym(3);
        let x = Antichain::parse(&c, r#"["0", "21"]"#).unwrap();
        let y = Antichain::parse(&c, "0\n\n21\n").unwrap();
        assert_eq!(x, y);
        assert_eq!(Antichain::parse(&c, &x.to_json()).unwrap(), x);
    }
}
