//! Nice covers built from nested cylinders.
//!
//! Two families are provided. `symbolic(k)` is the Cantor-style space `Σ^ω`
//! over a `k`-letter alphabet with metric `k^{-|lcp|}`, whose level-`m`
//! elements are the cylinders of length-`m` words. `cube(n, b)` is `[0,1)^n`
//! under the sup-norm, whose level-`m` elements are the half-open `b`-adic
//! grid cubes of side `b^{-m}`. Level 0 is the whole space in both cases.
//! Elements are named by [`Address`]es, which are their own codes.

use std::borrow::Borrow;
use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::{parse_rat, Exponent, Rat, Surd};
use crate::report::{ValidationReport, ViolationKind};

const DIGITS: &[u8; 36] = b"0123456789abcdefghijklmnopqrstuvwxyz";

/// Largest alphabet expressible with single-character digits.
pub const MAX_ALPHABET: u32 = 36;

/// Name of one cover element: a word over the cover alphabet. Its level is its length.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Address {
    symbols: Vec<u8>,
}

impl Address {
    pub fn root() -> Self {
        Address { symbols: Vec::new() }
    }

    pub fn from_symbols(symbols: Vec<u8>) -> Self {
        Address { symbols }
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn level(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_root(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn parent(&self) -> Option<Address> {
        (!self.is_root()).then(|| self.prefix(self.level() - 1))
    }

    pub fn child(&self, symbol: u8) -> Address {
        let mut symbols = Vec::with_capacity(self.symbols.len() + 1);
        symbols.extend_from_slice(&self.symbols);
        symbols.push(symbol);
        Address { symbols }
    }

    pub fn prefix(&self, len: usize) -> Address {
        Address { symbols: self.symbols[..len].to_vec() }
    }

    /// Ancestor-or-self test: as cover elements, `other ⊆ self`.
    pub fn is_prefix_of(&self, other: &Address) -> bool {
        other.symbols.starts_with(&self.symbols)
    }

    pub fn is_proper_prefix_of(&self, other: &Address) -> bool {
        self.level() < other.level() && self.is_prefix_of(other)
    }

    pub fn comparable(&self, other: &Address) -> bool {
        self.is_prefix_of(other) || other.is_prefix_of(self)
    }

    /// Parse a digit string, checking every symbol against the alphabet size.
    pub fn parse(text: &str, alphabet: u32) -> Result<Address> {
        let symbols = text
            .trim()
            .chars()
            .map(|ch| {
                ch.to_digit(MAX_ALPHABET)
                    .filter(|&d| d < alphabet)
                    .map(|d| d as u8)
                    .ok_or_else(|| {
                        Error::MalformedAddress(format!("{text:?}: symbol {ch:?} not in 0..{alphabet}"))
                    })
            })
            .collect::<Result<Vec<u8>>>()?;
        Ok(Address { symbols })
    }
}

impl Borrow<[u8]> for Address {
    fn borrow(&self) -> &[u8] {
        &self.symbols
    }
}

impl fmt::Display for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &s in &self.symbols {
            write!(f, "{}", DIGITS[s as usize] as char)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Address({:?})", self.to_string())
    }
}

pub(crate) fn serialize_address<S: Serializer>(a: &Address, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&a.to_string())
}

/// Cover family, in its structured-text form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CoverKind {
    Symbolic { k: u32 },
    Cube { n: u32, base: u32 },
}

/// A concrete nice cover and its constants.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "CoverKind", into = "CoverKind")]
pub struct NiceCoverDescriptor {
    kind: CoverKind,
    alphabet_size: u32,
    c: u32,
    zeta: Rat,
    branching: u32,
}

impl From<NiceCoverDescriptor> for CoverKind {
    fn from(d: NiceCoverDescriptor) -> Self {
        d.kind
    }
}

impl TryFrom<CoverKind> for NiceCoverDescriptor {
    type Error = Error;
    fn try_from(kind: CoverKind) -> Result<Self> {
        match kind {
            CoverKind::Symbolic { k } => NiceCoverDescriptor::symbolic(k),
            CoverKind::Cube { n, base } => NiceCoverDescriptor::cube(n, base),
        }
    }
}

impl NiceCoverDescriptor {
    /// `Σ^ω` with `|Σ| = k`.
    pub fn symbolic(k: u32) -> Result<Self> {
        if !(2..=MAX_ALPHABET).contains(&k) {
            return Err(Error::InvalidCover(format!("symbolic alphabet must be in 2..={MAX_ALPHABET}, got {k}")));
        }
        Ok(NiceCoverDescriptor {
            kind: CoverKind::Symbolic { k },
            alphabet_size: k,
            c: k.max(2),
            zeta: Rat::new(1, k as i64),
            branching: k,
        })
    }

    /// `[0,1)^n` with sup-norm and `b`-adic grid cubes.
    pub fn cube(n: u32, base: u32) -> Result<Self> {
        let branching = (base as u64).checked_pow(n).filter(|&v| v <= MAX_ALPHABET as u64);
        let Some(branching) = branching.filter(|_| n >= 1 && base >= 2) else {
            return Err(Error::InvalidCover(format!(
                "cube cover needs n >= 1, base >= 2 and base^n <= {MAX_ALPHABET}; got n={n}, base={base}"
            )));
        };
        Ok(NiceCoverDescriptor {
            kind: CoverKind::Cube { n, base },
            alphabet_size: branching as u32,
            c: (1u32 << n).max(base),
            zeta: Rat::new(1, base as i64),
            branching: branching as u32,
        })
    }

    /// Same cover with a different claimed small-size constant. Used to
    /// exercise the validator; nothing else consults `zeta` for geometry.
    pub fn with_zeta(mut self, zeta: Rat) -> Self {
        self.zeta = zeta;
        self
    }

    pub fn kind(&self) -> CoverKind {
        self.kind
    }

    pub fn alphabet_size(&self) -> u32 {
        self.alphabet_size
    }

    pub fn branching(&self) -> u32 {
        self.branching
    }

    pub fn c(&self) -> u32 {
        self.c
    }

    pub fn zeta(&self) -> Rat {
        self.zeta
    }

    /// Per-level diameter ratio `b` (level-`m` diameter is `radix^{-m}`).
    pub fn radix(&self) -> u64 {
        match self.kind {
            CoverKind::Symbolic { k } => k as u64,
            CoverKind::Cube { base, .. } => base as u64,
        }
    }

    /// Dimension of the whole space.
    pub fn ambient_dimension(&self) -> f64 {
        match self.kind {
            CoverKind::Symbolic { .. } => 1.0,
            CoverKind::Cube { n, .. } => n as f64,
        }
    }

    pub fn check_address(&self, addr: &Address) -> Result<()> {
        match addr.symbols().iter().find(|&&s| s as u32 >= self.alphabet_size) {
            Some(s) => Err(Error::MalformedAddress(format!(
                "{addr}: symbol {s} outside alphabet of size {}",
                self.alphabet_size
            ))),
            None => Ok(()),
        }
    }

    pub fn parse_address(&self, text: &str) -> Result<Address> {
        Address::parse(text, self.alphabet_size)
    }

    /// `diam(U)^s` for a level-`level` element.
    pub fn diam_pow(&self, level: usize, s: Exponent) -> Result<Surd> {
        s.radix_power(self.radix(), level as u64)
    }

    /// `diam(U)^s` for a rational `s`.
    pub fn diam_pow_rat(&self, level: usize, s: Rat) -> Surd {
        Surd::power(self.radix(), -s * Rat::from_integer(level as i64))
    }

    /// All addresses of a given level, in lexicographic order.
    pub fn level_addresses(&self, level: usize) -> Vec<Address> {
        let mut out = vec![Address::root()];
        for _ in 0..level {
            out = out
                .iter()
                .flat_map(|a| (0..self.alphabet_size as u8).map(move |s| a.child(s)))
                .collect();
        }
        out
    }

    /// Half-open box `[lo, hi)` per axis for a cube element.
    pub fn element_box(&self, addr: &Address) -> Result<Vec<(Rat, Rat)>> {
        self.check_address(addr)?;
        let CoverKind::Cube { n, base } = self.kind else {
            return Err(Error::InvalidCover("element boxes exist only for cube covers".into()));
        };
        let b = base as i64;
        let mut lo = vec![Rat::zero(); n as usize];
        let mut side = Rat::one();
        for &sym in addr.symbols() {
            side /= b;
            let mut rest = sym as i64;
            for axis in lo.iter_mut() {
                *axis += side * (rest % b);
                rest /= b;
            }
        }
        Ok(lo.into_iter().map(|l| (l, l + side)).collect())
    }

    /// Whether the point lies in the element named by `addr`.
    pub fn contains(&self, addr: &Address, point: &PointRep) -> Result<bool> {
        self.check_address(addr)?;
        match (point, self.kind) {
            (PointRep::Coordinates(xs), CoverKind::Cube { .. }) => {
                let bx = self.element_box(addr)?;
                check_coordinates(self, xs)?;
                Ok(bx.iter().zip(xs).all(|((lo, hi), x)| lo <= x && x < hi))
            }
            _ => {
                let word = point.symbols(self, addr.level())?;
                Ok(word == addr.symbols())
            }
        }
    }
}

impl fmt::Display for NiceCoverDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            CoverKind::Symbolic { k } => write!(f, "symbolic:{k}"),
            CoverKind::Cube { n, base } => write!(f, "cube:{n}:{base}"),
        }
    }
}

impl FromStr for NiceCoverDescriptor {
    type Err = Error;
    /// `symbolic:K`, `cube:N:B`, or the JSON record form.
    fn from_str(text: &str) -> Result<Self> {
        let t = text.trim();
        if t.starts_with('{') {
            return Ok(serde_json::from_str(t)?);
        }
        let parts: Vec<&str> = t.split(':').collect();
        let num = |s: &str| {
            s.parse::<u32>()
                .map_err(|_| Error::InvalidCover(format!("bad number {s:?} in cover {t:?}")))
        };
        match parts.as_slice() {
            ["symbolic", k] => NiceCoverDescriptor::symbolic(num(k)?),
            ["cube", n, b] => NiceCoverDescriptor::cube(num(n)?, num(b)?),
            _ => Err(Error::InvalidCover(format!("expected symbolic:K or cube:N:B, got {t:?}"))),
        }
    }
}

/// Diameter of a cover element, kept exact as `radix^{-level}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExactScale {
    Zero,
    Power { radix: u64, level: u64 },
}

impl fmt::Display for ExactScale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ExactScale::Zero => write!(f, "0"),
            ExactScale::Power { level: 0, .. } => write!(f, "1"),
            ExactScale::Power { radix, level } => write!(f, "{radix}^-{level}"),
        }
    }
}

impl ExactScale {
    /// `log2` of the diameter; `-inf` for zero.
    pub fn log2_value(&self) -> f64 {
        match *self {
            ExactScale::Zero => f64::NEG_INFINITY,
            ExactScale::Power { radix, level } => -(level as f64) * (radix as f64).log2(),
        }
    }

    pub fn to_rational(&self) -> BigRational {
        match *self {
            ExactScale::Zero => BigRational::zero(),
            ExactScale::Power { radix, level } => BigRational::new(
                1.into(),
                num_traits::pow(BigUint::from(radix), level as usize).into(),
            ),
        }
    }

    /// `diam^s`, exact.
    pub fn pow(&self, s: Exponent) -> Result<Surd> {
        match *self {
            ExactScale::Zero => Ok(Surd::zero()),
            ExactScale::Power { radix, level } => s.radix_power(radix, level),
        }
    }
}

impl PartialOrd for ExactScale {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExactScale {
    fn cmp(&self, other: &Self) -> Ordering {
        use ExactScale::*;
        match (*self, other) {
            (Zero, Zero) => Ordering::Equal,
            (Zero, _) => Ordering::Less,
            (_, Zero) => Ordering::Greater,
            (Power { radix: r1, level: l1 }, &Power { radix: r2, level: l2 }) => {
                let d1 = num_traits::pow(BigUint::from(r1), l1 as usize);
                let d2 = num_traits::pow(BigUint::from(r2), l2 as usize);
                d2.cmp(&d1)
            }
        }
    }
}

/// A computable point of the space.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PointRep {
    /// The word `prefix · period^ω`.
    Periodic { prefix: Vec<u8>, period: Vec<u8> },
    /// Coordinates in `[0,1)^n` (cube covers only).
    Coordinates(Vec<Rat>),
    /// Uniform symbols from a ChaCha8 stream with this seed.
    Stream { seed: u64 },
}

fn check_coordinates(cover: &NiceCoverDescriptor, xs: &[Rat]) -> Result<()> {
    let CoverKind::Cube { n, .. } = cover.kind else {
        return Err(Error::OutOfDomain("coordinates need a cube cover".into()));
    };
    if xs.len() != n as usize {
        return Err(Error::OutOfDomain(format!("expected {n} coordinates, got {}", xs.len())));
    }
    if let Some(x) = xs.iter().find(|x| **x < Rat::zero() || **x >= Rat::one()) {
        return Err(Error::OutOfDomain(format!("coordinate {x} outside [0,1)")));
    }
    Ok(())
}

impl PointRep {
    pub fn constant(symbol: u8) -> Self {
        PointRep::Periodic { prefix: Vec::new(), period: vec![symbol] }
    }

    /// First `depth` symbols of the point's representation word.
    pub fn symbols(&self, cover: &NiceCoverDescriptor, depth: usize) -> Result<Vec<u8>> {
        let alphabet = cover.alphabet_size();
        match self {
            PointRep::Periodic { prefix, period } => {
                if period.is_empty() {
                    return Err(Error::OutOfDomain("periodic word needs a nonempty period".into()));
                }
                if let Some(s) = prefix.iter().chain(period).find(|&&s| s as u32 >= alphabet) {
                    return Err(Error::OutOfDomain(format!("symbol {s} outside alphabet of size {alphabet}")));
                }
                Ok(prefix.iter().chain(period.iter().cycle()).take(depth).copied().collect())
            }
            PointRep::Coordinates(xs) => {
                check_coordinates(cover, xs)?;
                let CoverKind::Cube { base, .. } = cover.kind else { unreachable!() };
                let b = base as i64;
                let mut xs = xs.clone();
                let mut out = Vec::with_capacity(depth);
                for _ in 0..depth {
                    let mut sym = 0i64;
                    let mut weight = 1i64;
                    for x in xs.iter_mut() {
                        let scaled = *x * b;
                        let digit = scaled.floor();
                        *x = scaled - digit;
                        sym += digit.to_integer() * weight;
                        weight *= b;
                    }
                    out.push(sym as u8);
                }
                Ok(out)
            }
            PointRep::Stream { seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                Ok((0..depth).map(|_| rng.gen_range(0..alphabet) as u8).collect())
            }
        }
    }

    /// Short stable identifier for reports.
    pub fn id(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for PointRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let word = |w: &[u8]| w.iter().map(|&s| DIGITS[s as usize] as char).collect::<String>();
        match self {
            PointRep::Periodic { prefix, period } => write!(f, "word:{}/{}", word(prefix), word(period)),
            PointRep::Coordinates(xs) => {
                let parts: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
                write!(f, "coords:{}", parts.join(","))
            }
            PointRep::Stream { seed } => write!(f, "stream:{seed}"),
        }
    }
}

impl FromStr for PointRep {
    type Err = Error;
    /// `word:PREFIX/PERIOD`, `coords:X1,X2,..`, or `stream:SEED`.
    fn from_str(text: &str) -> Result<Self> {
        let t = text.trim();
        let bad = || Error::Parse(format!("expected word:U/V, coords:x,.. or stream:SEED, got {t:?}"));
        let (tag, body) = t.split_once(':').ok_or_else(bad)?;
        let digits = |s: &str| -> Result<Vec<u8>> {
            s.chars()
                .map(|c| c.to_digit(MAX_ALPHABET).map(|d| d as u8).ok_or_else(bad))
                .collect()
        };
        match tag {
            "word" => {
                let (u, v) = body.split_once('/').ok_or_else(bad)?;
                Ok(PointRep::Periodic { prefix: digits(u)?, period: digits(v)? })
            }
            "coords" => Ok(PointRep::Coordinates(
                body.split(',').map(parse_rat).collect::<Result<Vec<_>>>()?,
            )),
            "stream" => Ok(PointRep::Stream { seed: body.parse().map_err(|_| bad())? }),
            _ => Err(bad()),
        }
    }
}

/// The `branching`-many one-symbol extensions of `addr`.
pub fn children(cover: &NiceCoverDescriptor, addr: &Address) -> Result<Vec<Address>> {
    cover.check_address(addr)?;
    Ok((0..cover.branching() as u8).map(|s| addr.child(s)).collect())
}

/// The unique level-`(n-1)` ancestor, or `None` at the root.
pub fn parent(cover: &NiceCoverDescriptor, addr: &Address) -> Result<Option<Address>> {
    cover.check_address(addr)?;
    Ok(addr.parent())
}

pub fn diam(cover: &NiceCoverDescriptor, addr: &Address) -> Result<ExactScale> {
    cover.check_address(addr)?;
    Ok(ExactScale::Power { radix: cover.radix(), level: addr.level() as u64 })
}

/// `w_0, .., w_depth`: the canonical nested addresses containing the point.
pub fn representation(cover: &NiceCoverDescriptor, point: &PointRep, depth: usize) -> Result<Vec<Address>> {
    let word = point.symbols(cover, depth)?;
    Ok((0..=depth).map(|m| Address::from_symbols(word[..m].to_vec())).collect())
}

/// Exhaustive check of finite branching, unique ancestry and small size.
pub fn validate_nice_axioms(cover: &NiceCoverDescriptor, depth: usize) -> ValidationReport {
    let mut report = ValidationReport::new(format!("nice-cover axioms for {cover}"), depth);
    let zeta = cover.zeta();
    let (zn, zd) = (BigUint::from(*zeta.numer() as u64), BigUint::from(*zeta.denom() as u64));
    let radix = BigUint::from(cover.radix());
    if zeta <= Rat::zero() || zeta >= Rat::one() {
        report.push(Address::root(), ViolationKind::SmallSize, format!("zeta = {zeta} not in (0,1)"));
    }
    let mut level = vec![Address::root()];
    for m in 0..=depth {
        // diam = radix^-m <= zeta^m  <=>  zd^m <= zn^m * radix^m
        let lhs = num_traits::pow(zd.clone(), m);
        let rhs = num_traits::pow(&zn * &radix, m);
        let small_ok = lhs <= rhs;
        let mut next = Vec::new();
        for addr in &level {
            report.checked += 1;
            if !small_ok {
                report.push(
                    addr.clone(),
                    ViolationKind::SmallSize,
                    format!("diam = {}^-{m} exceeds zeta^{m} = ({zeta})^{m}", cover.radix()),
                );
            }
            if m == depth {
                continue;
            }
            let kids = children(cover, addr).expect("enumerated addresses are valid");
            if kids.len() != cover.branching() as usize {
                report.push(addr.clone(), ViolationKind::Branching, format!("{} children", kids.len()));
            }
            for kid in &kids {
                if !ancestry_ok(cover, kid) {
                    report.push(kid.clone(), ViolationKind::Ancestry, "ancestor chain is not nested");
                }
            }
            next.extend(kids);
        }
        level = next;
    }
    report.notes.push(format!(
        "c-cover property (c = {}): certified analytically for the built-in family, not checked exhaustively",
        cover.c()
    ));
    report
}

/// Each ancestor obtained by `parent` is the prefix of that level and contains the element.
fn ancestry_ok(cover: &NiceCoverDescriptor, addr: &Address) -> bool {
    let mut current = addr.clone();
    while let Some(up) = current.parent() {
        if up != addr.prefix(up.level()) {
            return false;
        }
        if let CoverKind::Cube { .. } = cover.kind() {
            let (inner, outer) = match (cover.element_box(&current), cover.element_box(&up)) {
                (Ok(i), Ok(o)) => (i, o),
                _ => return false,
            };
            let nested = inner.iter().zip(&outer).all(|((il, ih), (ol, oh))| ol <= il && ih <= oh);
            if !nested {
                return false;
            }
        }
        current = up;
    }
    true
}

/// One canonical point per level-`depth` element: the lower corner for
/// cubes, `w · 0^ω` for words.
pub fn dense_sample(cover: &NiceCoverDescriptor, depth: usize) -> Vec<PointRep> {
    cover
        .level_addresses(depth)
        .into_iter()
        .map(|a| match cover.kind() {
            CoverKind::Symbolic { .. } => PointRep::Periodic { prefix: a.symbols().to_vec(), period: vec![0] },
            CoverKind::Cube { .. } => PointRep::Coordinates(
                cover.element_box(&a).expect("valid").into_iter().map(|(lo, _)| lo).collect(),
            ),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(k: u32) -> NiceCoverDescriptor {
        NiceCoverDescriptor::symbolic(k).unwrap()
    }

    fn cube(n: u32, b: u32) -> NiceCoverDescriptor {
        NiceCoverDescriptor::cube(n, b).unwrap()
    }

    fn addrs(v: &[Address]) -> Vec<String> {
        v.iter().map(|a| a.to_string()).collect()
    }

    #[test]
    fn children_examples() {
        let a = Address::parse("01", 2).unwrap();
        assert_eq!(addrs(&children(&sym(2), &a).unwrap()), ["010", "011"]);
        assert_eq!(addrs(&children(&cube(1, 3), &Address::root()).unwrap()), ["0", "1", "2"]);
        let a = Address::parse("2", 3).unwrap();
        assert_eq!(addrs(&children(&sym(3), &a).unwrap()), ["20", "21", "22"]);
        let bad = Address::from_symbols(vec![5]);
        assert!(matches!(children(&sym(2), &bad), Err(Error::MalformedAddress(_))));
    }

    #[test]
    fn parent_examples() {
        let c = sym(2);
        assert_eq!(parent(&c, &c.parse_address("010").unwrap()).unwrap().unwrap().to_string(), "01");
        assert_eq!(parent(&c, &Address::root()).unwrap(), None);
        let c = cube(2, 2);
        assert_eq!(parent(&c, &c.parse_address("3").unwrap()).unwrap(), Some(Address::root()));
    }

    #[test]
    fn diam_examples() {
        let c = sym(2);
        let d = diam(&c, &c.parse_address("010").unwrap()).unwrap();
        assert_eq!(d.to_rational(), BigRational::new(1.into(), 8.into()));
        let c = cube(2, 2);
        let d = diam(&c, &c.parse_address("0123").unwrap()).unwrap();
        assert_eq!(d.to_rational(), BigRational::new(1.into(), 16.into()));
        let c = sym(3);
        let d = diam(&c, &c.parse_address("21").unwrap()).unwrap();
        assert_eq!(d.to_rational(), BigRational::new(1.into(), 9.into()));
        assert!((d.log2_value() + 2.0 * 3f64.log2()).abs() < 1e-12);
        assert!(ExactScale::Zero < d);
        assert!(ExactScale::Power { radix: 2, level: 3 } > ExactScale::Power { radix: 3, level: 2 });
    }

    #[test]
    fn representation_examples() {
        let c = cube(1, 2);
        let third = PointRep::Coordinates(vec![Rat::new(1, 3)]);
        let r = representation(&c, &third, 3).unwrap();
        assert_eq!(addrs(&r), ["", "0", "01", "010"]);
        let boxes: Vec<_> = r[1..].iter().map(|a| c.element_box(a).unwrap()[0]).collect();
        assert_eq!(boxes[0], (Rat::new(0, 1), Rat::new(1, 2)));
        assert_eq!(boxes[1], (Rat::new(1, 4), Rat::new(1, 2)));
        assert_eq!(boxes[2], (Rat::new(1, 4), Rat::new(3, 8)));

        let s = sym(2);
        let p = PointRep::Periodic { prefix: vec![], period: vec![0, 1] };
        assert_eq!(addrs(&representation(&s, &p, 2).unwrap()), ["", "0", "01"]);

        let zero = PointRep::Coordinates(vec![Rat::new(0, 1)]);
        assert_eq!(addrs(&representation(&c, &zero, 2).unwrap()), ["", "0", "00"]);

        let out = PointRep::Coordinates(vec![Rat::new(1, 1)]);
        assert!(matches!(representation(&c, &out, 2), Err(Error::OutOfDomain(_))));
        assert!(matches!(representation(&s, &zero, 2), Err(Error::OutOfDomain(_))));
    }

    #[test]
    fn axioms_hold_for_built_in_covers() {
        let r = validate_nice_axioms(&sym(2), 6);
        assert!(r.passed(), "{r}");
        assert_eq!(r.checked, (1 << 7) - 1);
        let r = validate_nice_axioms(&cube(2, 3), 3);
        assert!(r.passed(), "{r}");
        assert_eq!(r.checked, 1 + 9 + 81 + 729);
    }

    #[test]
    fn corrupted_zeta_is_reported() {
        let bad = sym(2).with_zeta(Rat::new(1, 4));
        let r = validate_nice_axioms(&bad, 3);
        assert!(!r.passed());
        let first = r.violations_of(ViolationKind::SmallSize).next().unwrap();
        assert_eq!(first.address.level(), 1);
        // root: diam 1 <= zeta^0 = 1 still holds
        assert!(r.violations_of(ViolationKind::SmallSize).all(|v| v.address.level() >= 1));
    }

    #[test]
    fn dense_sample_examples() {
        let pts = dense_sample(&sym(2), 1);
        assert_eq!(pts, vec![PointRep::Periodic { prefix: vec![0], period: vec![0] }, PointRep::Periodic { prefix: vec![1], period: vec![0] }]);
        let pts = dense_sample(&cube(1, 2), 2);
        let xs: Vec<Rat> = pts
            .iter()
            .map(|p| match p {
                PointRep::Coordinates(v) => v[0],
                _ => unreachable!(),
            })
            .collect();
        assert_eq!(xs, [Rat::new(0, 1), Rat::new(1, 4), Rat::new(1, 2), Rat::new(3, 4)]);
        assert_eq!(dense_sample(&sym(3), 0).len(), 1);
    }

    #[test]
    fn prefix_closure_to_depth_8() {
        for c in [sym(2), sym(3), cube(2, 2)] {
            let depth = if c.branching() > 2 { 5 } else { 8 };
            for m in 0..depth {
                for a in c.level_addresses(m) {
                    for kid in children(&c, &a).unwrap() {
                        assert_eq!(parent(&c, &kid).unwrap().as_ref(), Some(&a));
                    }
                }
            }
        }
    }

    #[test]
    fn membership_consistency() {
        let c = cube(2, 3);
        let pts = [
            PointRep::Coordinates(vec![Rat::new(1, 7), Rat::new(5, 6)]),
            PointRep::Coordinates(vec![Rat::new(2, 3), Rat::new(0, 1)]),
            PointRep::Stream { seed: 9 },
        ];
        for p in &pts {
            for a in representation(&c, p, 10).unwrap() {
                assert!(c.contains(&a, p).unwrap(), "{p} not in {a}");
            }
        }
    }

    #[test]
    fn text_forms() {
        assert_eq!("symbolic:3".parse::<NiceCoverDescriptor>().unwrap(), sym(3));
        assert_eq!(r#"{"kind":"cube","n":2,"base":3}"#.parse::<NiceCoverDescriptor>().unwrap(), cube(2, 3));
        assert_eq!(serde_json::to_string(&sym(2)).unwrap(), r#"{"kind":"symbolic","k":2}"#);
        assert!("cube:3:4".parse::<NiceCoverDescriptor>().is_err());
        let p: PointRep = "word:1/01".parse().unwrap();
        assert_eq!(p.to_string(), "word:1/01");
        let p: PointRep = "coords:1/3,0.5".parse().unwrap();
        assert_eq!(p, PointRep::Coordinates(vec![Rat::new(1, 3), Rat::new(1, 2)]));
    }

    #[test]
    fn constants() {
        assert_eq!(sym(2).c(), 2);
        assert_eq!(cube(2, 2).c(), 4);
        assert_eq!(cube(2, 3).c(), 4);
        assert_eq!(cube(1, 3).c(), 3);
        assert_eq!(cube(2, 3).branching(), 9);
        assert_eq!(cube(2, 3).zeta(), Rat::new(1, 3));
    }
}
