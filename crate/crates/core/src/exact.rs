//! Exact arithmetic for capitals and diameters raised to rational powers.
//!
//! Every quantity a gale manipulates on a built-in cover has the form
//! `Σ a_i · γ^{f_i}` with rational coefficients `a_i`, a fixed radix `γ`
//! and rational exponents `f_i`. [`Surd`] keeps such sums in a canonical
//! form: `γ` is reduced to its primitive root (not a perfect power) and every
//! exponent is folded into `[0, 1)`, the integer part moving into the
//! coefficient. Because `x^q − γ` is irreducible over ℚ for primitive `γ`,
//! the powers `γ^{j/q}` are linearly independent, so two canonical sums are
//! equal iff their term maps are equal. Signs are decided by rigorous
//! interval evaluation (verified fixed-point roots at increasing precision), which
//! always terminates for a nonzero value.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Small exact rational used for exponents and the dimension parameter `s`.
pub type Rat = Ratio<i64>;

/// Default mantissa precision in bits for interval evaluation.
pub const DEFAULT_PRECISION: u32 = 128;

/// Hard cap for sign refinement.
const MAX_REFINE_BITS: u32 = 1 << 16;

/// Mantissa precision `P`, overridable once per process through `GALEDIM_PRECISION`.
pub fn precision_bits() -> u32 {
    static P: OnceLock<u32> = OnceLock::new();
    *P.get_or_init(|| {
        std::env::var("GALEDIM_PRECISION")
            .ok()
            .and_then(|v| v.trim().parse::<u32>().ok())
            .filter(|&p| (16..=MAX_REFINE_BITS).contains(&p))
            .unwrap_or(DEFAULT_PRECISION)
    })
}

/// Parse `"p/q"`, an integer, or a finite decimal such as `"-1.25"` into an exact rational.
pub fn parse_big_rational(text: &str) -> Result<BigRational> {
    let t = text.trim();
    if t.is_empty() {
        return Err(Error::Parse("empty number".into()));
    }
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| Error::Parse(format!("bad numerator in {t:?}")))?;
        let d: BigInt = d.trim().parse().map_err(|_| Error::Parse(format!("bad denominator in {t:?}")))?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {t:?}")));
        }
        return Ok(BigRational::new(n, d));
    }
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    let digits = format!("{int_part}{frac_part}");
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!("not a number: {t:?}")));
    }
    let n: BigInt = digits.parse().expect("validated digits");
    let d = BigInt::from(10u32).pow(frac_part.len() as u32);
    let v = BigRational::new(n, d);
    Ok(if neg { -v } else { v })
}

/// Parse a small rational such as `"1/2"`, `"3"` or `"0.65"`.
pub fn parse_rat(text: &str) -> Result<Rat> {
    let big = parse_big_rational(text)?;
    let n = big.numer().to_i64();
    let d = big.denom().to_i64();
    match (n, d) {
        (Some(n), Some(d)) => Ok(Rat::new(n, d)),
        _ => Err(Error::Parse(format!("rational out of range: {text:?}"))),
    }
}

pub fn rat_to_big(r: Rat) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

pub fn rat_to_f64(r: Rat) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Best rational approximation of `x` with denominator at most `max_den`,
/// rounded so that the result is `>= x` (`above == true`) or `<= x`.
pub fn rat_near(x: f64, max_den: i64, above: bool) -> Rat {
    (1..=max_den.max(1))
        .map(|d| {
            let n = if above { (x * d as f64).ceil() } else { (x * d as f64).floor() };
            Rat::new(n as i64, d)
        })
        .min_by(|a, b| {
            let (ea, eb) = ((rat_to_f64(*a) - x).abs(), (rat_to_f64(*b) - x).abs());
            ea.total_cmp(&eb).then(a.denom().cmp(b.denom()))
        })
        .expect("at least one denominator")
}

fn format_big_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Decompose `b >= 2` as `γ^p` with `γ` not a perfect power.
pub fn primitive_root(b: u64) -> (u64, u32) {
    assert!(b >= 2, "radix must be at least 2");
    let mut best = (b, 1);
    for p in 2..64u32 {
        let root = (b as f64).powf(1.0 / p as f64).round() as u64;
        if root < 2 {
            break;
        }
        for cand in root.saturating_sub(1)..=root + 1 {
            if cand >= 2 && cand.checked_pow(p) == Some(b) {
                best = (cand, p);
            }
        }
    }
    best
}

fn big_pow(base: u64, exp: u64) -> BigUint {
    num_traits::pow(BigUint::from(base), exp as usize)
}

/// `γ^n` as an exact rational for any integer `n`.
fn radix_pow(gamma: u64, n: i64) -> BigRational {
    let p = BigInt::from(big_pow(gamma, n.unsigned_abs()));
    if n >= 0 {
        BigRational::from_integer(p)
    } else {
        BigRational::new(BigInt::one(), p)
    }
}

fn mul_down(a: &BigUint, b: &BigUint, prec: u32) -> BigUint {
    (a * b) >> prec as usize
}

fn mul_up(a: &BigUint, b: &BigUint, prec: u32) -> BigUint {
    let p = a * b;
    let q = &p >> prec as usize;
    if (&q << prec as usize) == p {
        q
    } else {
        q + 1u32
    }
}

/// `x^e` for a fixed-point `x` (scale `2^prec`), rounded down or up at every step.
fn pow_directed(x: &BigUint, e: u64, prec: u32, up: bool) -> BigUint {
    let mul = |a: &BigUint, b: &BigUint| if up { mul_up(a, b, prec) } else { mul_down(a, b, prec) };
    let mut acc = BigUint::one() << prec as usize;
    let mut base = x.clone();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(&acc, &base);
        }
        e >>= 1;
        if e > 0 {
            base = mul(&base, &base);
        }
    }
    acc
}

/// Fixed-point bracket `[lo, hi]` of `γ^{1/q} · 2^prec`, verified exactly.
fn unit_root_bracket(gamma: u64, q: u64, prec: u32) -> (BigUint, BigUint) {
    let guard = 32u32;
    let w = prec + guard;
    let one = BigUint::one() << w as usize;
    let target = BigUint::from(gamma) << w as usize;
    // Newton on x^q = γ in fixed point, seeded from f64
    let seed = (gamma as f64).powf(1.0 / q as f64);
    let mut x = BigUint::from((seed * (1u64 << 52) as f64) as u64) << (w as usize - 52);
    for _ in 0..200 {
        let xq1 = pow_directed(&x, q - 1, w, false).max(one.clone());
        let quotient = (&target << w as usize) / &xq1;
        let next = (&x * (q - 1) + quotient) / q;
        let delta = if next > x { &next - &x } else { &x - &next };
        x = next;
        if delta.bits() <= 2 {
            break;
        }
    }
    let center = x >> guard as usize;
    let floor_one = BigUint::one() << prec as usize;
    let target = BigUint::from(gamma) << prec as usize;
    let mut margin = BigUint::from(2u32);
    loop {
        let lo = if center > margin { (&center - &margin).max(floor_one.clone()) } else { floor_one.clone() };
        let hi = &center + &margin;
        if pow_directed(&lo, q, prec, true) <= target && pow_directed(&hi, q, prec, false) >= target {
            return (lo, hi);
        }
        margin <<= 2usize;
    }
}

/// Bracket of `γ^{j/q} · 2^prec` for `0 <= j < q`, cached.
fn root_bracket(gamma: u64, frac: Rat, prec: u32) -> (BigUint, BigUint) {
    type Key = (u64, i64, i64, u32);
    static CACHE: OnceLock<Mutex<HashMap<Key, (BigUint, BigUint)>>> = OnceLock::new();
    let key = (gamma, *frac.numer(), *frac.denom(), prec);
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().expect("root cache poisoned").get(&key) {
        return v.clone();
    }
    let j = *frac.numer() as u64;
    let q = *frac.denom() as u64;
    // guard bits absorb the directed-rounding drift of the j-th power
    let guard = 2 * (64 - j.leading_zeros()) + 8;
    let (lo1, hi1) = unit_root_bracket(gamma, q, prec + guard);
    let lo = pow_directed(&lo1, j, prec + guard, false) >> guard as usize;
    let hi_wide = pow_directed(&hi1, j, prec + guard, true);
    let mut hi = &hi_wide >> guard as usize;
    if (&hi << guard as usize) != hi_wide {
        hi += 1u32;
    }
    cache.lock().expect("root cache poisoned").insert(key, (lo.clone(), hi.clone()));
    (lo, hi)
}

/// Bracket of `base^exponent` scaled by `2^prec`, for an arbitrary radix.
pub fn power_interval(base: u64, exponent: Rat, prec: u32) -> (BigInt, BigInt) {
    Surd::power(base, exponent).interval(prec)
}

fn div_floor(n: &BigInt, d: &BigInt) -> BigInt {
    n.div_floor(d)
}

fn div_ceil(n: &BigInt, d: &BigInt) -> BigInt {
    -((-n).div_floor(d))
}

/// `log2 |x|` for a nonzero big integer, accurate to f64 rounding.
pub fn bigint_log2(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.abs().to_f64().map(f64::log2).unwrap_or(f64::NAN);
    }
    let shift = bits - 64;
    let top = (x.abs() >> shift as usize).to_f64().unwrap_or(f64::NAN);
    top.log2() + shift as f64
}

/// Finite ℚ-linear combination of rational powers of one primitive radix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Surd {
    /// Primitive radix; 0 while the value is rational.
    radix: u64,
    /// Fractional exponent in `[0, 1)` → nonzero coefficient.
    terms: BTreeMap<Rat, BigRational>,
}

impl Surd {
    pub fn zero() -> Self {
        Surd { radix: 0, terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn from_rational(r: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !r.is_zero() {
            terms.insert(Rat::zero(), r);
        }
        Surd { radix: 0, terms }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_rat(r: Rat) -> Self {
        Self::from_rational(rat_to_big(r))
    }

    /// `base^exponent`, exact.
    pub fn power(base: u64, exponent: Rat) -> Self {
        let (gamma, p) = primitive_root(base);
        let e = exponent * Rat::from_integer(p as i64);
        let whole = e.floor();
        let frac = e - whole;
        let coeff = radix_pow(gamma, whole.to_integer());
        let mut terms = BTreeMap::new();
        terms.insert(frac, coeff);
        let mut s = Surd { radix: gamma, terms };
        s.normalize();
        s
    }

    /// Primitive radix of the irrational part, if any.
    pub fn radix(&self) -> Option<u64> {
        (self.radix != 0).then_some(self.radix)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value as an exact rational, when it is one.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&Rat::zero()).cloned(),
            _ => None,
        }
    }

    /// Fractional exponents and coefficients, in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (Rat, &BigRational)> {
        self.terms.iter().map(|(f, c)| (*f, c))
    }

    fn normalize(&mut self) {
        self.terms.retain(|_, c| !c.is_zero());
        if self.terms.keys().all(|f| f.is_zero()) {
            self.radix = 0;
        }
    }

    fn join_radix(a: u64, b: u64) -> u64 {
        match (a, b) {
            (0, r) | (r, 0) => r,
            (x, y) if x == y => x,
            (x, y) => panic!("cannot combine surds over different radices {x} and {y}"),
        }
    }

    fn insert_term(&mut self, frac: Rat, coeff: BigRational) {
        let slot = self.terms.entry(frac).or_insert_with(BigRational::zero);
        *slot += coeff;
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        if factor.is_zero() {
            return Surd::zero();
        }
        Surd {
            radix: self.radix,
            terms: self.terms.iter().map(|(f, c)| (*f, c * factor)).collect(),
        }
    }

    /// Multiply by `base^exponent`.
    pub fn mul_power(&self, base: u64, exponent: Rat) -> Self {
        self * &Surd::power(base, exponent)
    }

    /// Rigorous bracket `[lo, hi]` with `lo / 2^prec <= self <= hi / 2^prec`.
    pub fn interval(&self, prec: u32) -> (BigInt, BigInt) {
        let mut lo = BigInt::zero();
        let mut hi = BigInt::zero();
        for (frac, coeff) in &self.terms {
            let n = coeff.numer();
            let d = coeff.denom();
            if frac.is_zero() {
                let scaled = n << prec as usize;
                lo += div_floor(&scaled, d);
                hi += div_ceil(&scaled, d);
                continue;
            }
            let (r, r1) = root_bracket(self.radix, *frac, prec);
            let (r, r1) = (BigInt::from(r), BigInt::from(r1));
            let (a, b) = if n.sign() == Sign::Minus { (&r1, &r) } else { (&r, &r1) };
            lo += div_floor(&(n * a), d);
            hi += div_ceil(&(n * b), d);
        }
        (lo, hi)
    }

    /// Rough `log2` of the largest term, used to pick relative precision.
    fn magnitude_hint(&self) -> f64 {
        let lg = (self.radix.max(2) as f64).log2();
        self.terms
            .iter()
            .map(|(f, c)| {
                bigint_log2(c.numer()) - bigint_log2(c.denom()) + rat_to_f64(*f) * lg
            })
            .fold(f64::NEG_INFINITY, f64::max)
    }

    fn start_precision(&self, bits: u32) -> u32 {
        let hint = self.magnitude_hint();
        let extra = if hint.is_finite() && hint < 0.0 { (-hint).ceil() as u32 } else { 0 };
        bits.saturating_add(extra).saturating_add(8).min(MAX_REFINE_BITS * 4)
    }

    /// Exact sign.
    pub fn signum(&self) -> Ordering {
        if self.terms.is_empty() {
            return Ordering::Equal;
        }
        if self.terms.values().all(|c| c.is_positive()) {
            return Ordering::Greater;
        }
        if self.terms.values().all(|c| c.is_negative()) {
            return Ordering::Less;
        }
        let mut prec = self.start_precision(precision_bits());
        loop {
            let (lo, hi) = self.interval(prec);
            if lo.is_positive() {
                return Ordering::Greater;
            }
            if hi.is_negative() {
                return Ordering::Less;
            }
            if prec >= MAX_REFINE_BITS * 4 {
                // Unreachable for canonical nonzero values short of absurd cancellation.
                return (lo + hi).sign_ordering();
            }
            prec = prec.saturating_mul(2);
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.signum() == Ordering::Less
    }

    /// Exact comparison.
    pub fn cmp_exact(&self, other: &Surd) -> Ordering {
        (self - other).signum()
    }

    /// Midpoint approximation at the configured precision.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        if let Some(x) = self.as_rational().and_then(|r| r.to_f64()).filter(|x| x.is_normal()) {
            return x;
        }
        let lg = self.log2();
        let sign = if self.is_negative() { -1.0 } else { 1.0 };
        sign * lg.exp2()
    }

    /// `log2 |self|`; `-inf` for zero. Valid far outside the f64 exponent range.
    pub fn log2(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let prec = self.start_precision(64);
        let (lo, hi) = self.interval(prec);
        let mid: BigInt = (lo + hi) >> 1usize;
        if mid.is_zero() {
            return -(prec as f64);
        }
        bigint_log2(&mid) - prec as f64
    }

    /// Parse the canonical text form, e.g. `"3/2 + 1/4*2^(1/2)"`.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if t.is_empty() {
            return Err(Error::Parse("empty value".into()));
        }
        let mut out = Surd::zero();
        for term in split_terms(t) {
            out += &parse_term(term.trim())?;
        }
        Ok(out)
    }
}

trait SignOrdering {
    fn sign_ordering(&self) -> Ordering;
}

impl SignOrdering for BigInt {
    fn sign_ordering(&self) -> Ordering {
        match self.sign() {
            Sign::Minus => Ordering::Less,
            Sign::NoSign => Ordering::Equal,
            Sign::Plus => Ordering::Greater,
        }
    }
}

fn split_terms(t: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in t.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '+' if depth == 0 && i > start => {
                parts.push(&t[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&t[start..]);
    parts
}

fn parse_term(term: &str) -> Result<Surd> {
    let bad = || Error::Parse(format!("malformed value term {term:?}"));
    let (coeff_text, power_text) = match term.split_once('*') {
        Some((c, p)) => (Some(c.trim()), Some(p.trim())),
        None if term.contains('^') => (None, Some(term)),
        None => (Some(term), None),
    };
    let coeff = match coeff_text {
        Some(c) => parse_big_rational(c)?,
        None => BigRational::one(),
    };
    let Some(p) = power_text else {
        return Ok(Surd::from_rational(coeff));
    };
    let (base, exp) = p.split_once('^').ok_or_else(bad)?;
    let base: u64 = base.trim().parse().map_err(|_| bad())?;
    if base < 2 {
        return Err(bad());
    }
    let exp = exp.trim().strip_prefix('(').and_then(|e| e.strip_suffix(')')).ok_or_else(bad)?;
    let exp = parse_rat(exp)?;
    Ok(Surd::power(base, exp).scale(&coeff))
}

impl FromStr for Surd {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Surd::parse(s)
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (frac, coeff) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if frac.is_zero() {
                write!(f, "{}", format_big_rational(coeff))?;
            } else if coeff.is_one() {
                write!(f, "{}^({})", self.radix, frac)?;
            } else {
                write!(f, "{}*{}^({})", format_big_rational(coeff), self.radix, frac)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Surd({self} ≈ {:e})", self.to_f64())
    }
}

impl Default for Surd {
    fn default() -> Self {
        Surd::zero()
    }
}

impl AddAssign<&Surd> for Surd {
    fn add_assign(&mut self, rhs: &Surd) {
        self.radix = Surd::join_radix(self.radix, rhs.radix);
        for (f, c) in &rhs.terms {
            self.insert_term(*f, c.clone());
        }
        self.normalize();
    }
}

impl Add<&Surd> for &Surd {
    type Output = Surd;
    fn add(self, rhs: &Surd) -> Surd {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for Surd {
    type Output = Surd;
    fn add(mut self, rhs: Surd) -> Surd {
        self += &rhs;
        self
    }
}

impl Neg for &Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        Surd {
            radix: self.radix,
            terms: self.terms.iter().map(|(f, c)| (*f, -c)).collect(),
        }
    }
}

impl Neg for Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        -&self
    }
}

impl Sub<&Surd> for &Surd {
    type Output = Surd;
    fn sub(self, rhs: &Surd) -> Surd {
        let mut out = self.clone();
        out += &(-rhs);
        out
    }
}

impl Sub for Surd {
    type Output = Surd;
    fn sub(self, rhs: Surd) -> Surd {
        &self - &rhs
    }
}

impl Mul<&Surd> for &Surd {
    type Output = Surd;
    fn mul(self, rhs: &Surd) -> Surd {
        if self.is_zero() || rhs.is_zero() {
            return Surd::zero();
        }
        let radix = Surd::join_radix(self.radix, rhs.radix);
        let mut out = Surd { radix, terms: BTreeMap::new() };
        for (fa, ca) in &self.terms {
            for (fb, cb) in &rhs.terms {
                let mut f = *fa + *fb;
                let mut c = ca * cb;
                if f >= Rat::one() {
                    f -= Rat::one();
                    c *= BigRational::from_integer(BigInt::from(radix));
                }
                out.insert_term(f, c);
            }
        }
        out.normalize();
        out
    }
}

impl Mul for Surd {
    type Output = Surd;
    fn mul(self, rhs: Surd) -> Surd {
        &self * &rhs
    }
}

impl PartialOrd for Surd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Surd {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_exact(other)
    }
}

/// The dimension parameter `s`: a rational, or `ln(numerator)/ln(base)`.
///
/// The logarithmic form keeps `diam^s` exact when the cover radix equals
/// `base`, e.g. `s = log 2 / log 3` on the ternary cover.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Exponent {
    Rational(Rat),
    LogRatio { numerator: u64, base: u64 },
}

impl Exponent {
    pub fn rational(n: i64, d: i64) -> Self {
        Exponent::Rational(Rat::new(n, d))
    }

    pub fn log_ratio(numerator: u64, base: u64) -> Self {
        Exponent::LogRatio { numerator, base }
    }

    pub fn to_f64(self) -> f64 {
        match self {
            Exponent::Rational(r) => rat_to_f64(r),
            Exponent::LogRatio { numerator, base } => (numerator as f64).ln() / (base as f64).ln(),
        }
    }

    pub fn as_rational(self) -> Option<Rat> {
        match self {
            Exponent::Rational(r) => Some(r),
            Exponent::LogRatio { numerator: 1, .. } => Some(Rat::zero()),
            Exponent::LogRatio { numerator, base } if numerator == base => Some(Rat::one()),
            _ => None,
        }
    }

    /// `radix^{-level · s}` exactly.
    pub fn radix_power(self, radix: u64, level: u64) -> Result<Surd> {
        match self {
            Exponent::Rational(s) => Ok(Surd::power(radix, -s * Rat::from_integer(level as i64))),
            Exponent::LogRatio { numerator, base } if base == radix => {
                let p = BigInt::from(big_pow(numerator, level));
                Ok(Surd::from_rational(BigRational::new(BigInt::one(), p)))
            }
            Exponent::LogRatio { .. } => match self.as_rational() {
                Some(r) => Exponent::Rational(r).radix_power(radix, level),
                None => Err(Error::IncompatibleExponent(format!(
                    "log-ratio exponent {self} needs radix {radix}; pass a rational instead"
                ))),
            },
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Rational(r) => write!(f, "{r}"),
            Exponent::LogRatio { numerator, base } => write!(f, "log{numerator}/log{base}"),
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;
    fn from_str(text: &str) -> Result<Self> {
        let t = text.trim();
        if let Some(rest) = t.strip_prefix("log") {
            let bad = || Error::Parse(format!("expected logA/logB, got {t:?}"));
            let (a, b) = rest.split_once('/').ok_or_else(bad)?;
            let b = b.trim().strip_prefix("log").ok_or_else(bad)?;
            let clean = |x: &str| x.trim().trim_start_matches('(').trim_end_matches(')').to_string();
            let numerator: u64 = clean(a).parse().map_err(|_| bad())?;
            let base: u64 = clean(b).parse().map_err(|_| bad())?;
            if numerator == 0 || base < 2 {
                return Err(bad());
            }
            return Ok(Exponent::LogRatio { numerator, base });
        }
        Ok(Exponent::Rational(parse_rat(t)?))
    }
}

impl From<Rat> for Exponent {
    fn from(r: Rat) -> Self {
        Exponent::Rational(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rat {
        Rat::new(n, d)
    }

    #[test]
    fn primitive_roots() {
        assert_eq!(primitive_root(2), (2, 1));
        assert_eq!(primitive_root(4), (2, 2));
        assert_eq!(primitive_root(8), (2, 3));
        assert_eq!(primitive_root(9), (3, 2));
        assert_eq!(primitive_root(6), (6, 1));
        assert_eq!(primitive_root(36), (6, 2));
    }

    #[test]
    fn powers_fold_into_canonical_form() {
        // 4^(1/2) = 2, rational
        assert_eq!(Surd::power(4, q(1, 2)), Surd::from_integer(2));
        // 2^(3/2) = 2 * 2^(1/2)
        let a = Surd::power(2, q(3, 2));
        let b = Surd::power(2, q(1, 2)).scale(&BigRational::from_integer(2.into()));
        assert_eq!(a, b);
        // 2^(1/2) * 2^(1/2) = 2
        assert_eq!(&Surd::power(2, q(1, 2)) * &Surd::power(2, q(1, 2)), Surd::from_integer(2));
        assert_eq!(Surd::power(3, q(-2, 1)), Surd::from_rat(q(1, 9)));
    }

    #[test]
    fn signs_of_cancelling_sums() {
        // sqrt(2) - 7/5 > 0, sqrt(2) - 17/12 < 0
        let r2 = Surd::power(2, q(1, 2));
        assert!((&r2 - &Surd::from_rat(q(7, 5))).is_positive());
        assert!((&r2 - &Surd::from_rat(q(17, 12))).is_negative());
        // 2^(1/3) + 2^(2/3) - 2.8473 ~ 1.2599 + 1.5874 - 2.8473 = 0.00003 > 0
        let s = &(&Surd::power(2, q(1, 3)) + &Surd::power(2, q(2, 3))) - &Surd::parse("2.8473").unwrap();
        assert!(s.is_positive());
        assert_eq!((&r2 - &r2).signum(), Ordering::Equal);
    }

    #[test]
    fn interval_brackets_value() {
        let v = Surd::power(3, q(1, 2));
        let (lo, hi) = v.interval(64);
        let lo = lo.to_f64().unwrap() / 2f64.powi(64);
        let hi = hi.to_f64().unwrap() / 2f64.powi(64);
        let exact = 3f64.sqrt();
        assert!(lo <= exact + 1e-15 && exact <= hi + 1e-15);
        assert!((v.to_f64() - exact).abs() < 1e-12);
    }

    #[test]
    fn log2_far_outside_f64_range() {
        let tiny = Surd::power(2, q(-5000, 1));
        assert!((tiny.log2() + 5000.0).abs() < 1e-9);
        let huge = Surd::power(3, q(4000, 3));
        assert!((huge.log2() - 4000.0 / 3.0 * 3f64.log2()).abs() < 1e-6);
    }

    #[test]
    fn text_round_trip() {
        let v = &Surd::power(2, q(1, 2)).scale(&BigRational::new(3.into(), 4.into())) + &Surd::from_rat(q(-5, 3));
        let text = v.to_string();
        assert_eq!(text, "-5/3 + 3/4*2^(1/2)");
        assert_eq!(Surd::parse(&text).unwrap(), v);
        assert_eq!(Surd::parse("1.5").unwrap(), Surd::from_rat(q(3, 2)));
        assert_eq!(Surd::parse("2^(-1/2)").unwrap(), Surd::power(2, q(-1, 2)));
        assert!(Surd::parse("1/0").is_err());
        assert!(Surd::parse("abc").is_err());
    }

    #[test]
    fn exponent_forms() {
        let s: Exponent = "log2/log3".parse().unwrap();
        assert_eq!(s, Exponent::log_ratio(2, 3));
        assert!((s.to_f64() - 2f64.ln() / 3f64.ln()).abs() < 1e-15);
        // 3^(-5 s) = 2^-5 exactly
        assert_eq!(s.radix_power(3, 5).unwrap(), Surd::from_rat(q(1, 32)));
        assert!(s.radix_power(2, 1).is_err());
        assert_eq!("1/2".parse::<Exponent>().unwrap(), Exponent::rational(1, 2));
    }

    #[test]
    fn root_brackets_contain_exact_floor() {
        for (gamma, j, q, prec) in [(2u64, 1i64, 2i64, 64u32), (3, 651, 1000, 128), (3, 1, 7, 300), (6, 5, 9, 40), (2, 999, 1000, 128)] {
            let (lo, hi) = root_bracket(gamma, Rat::new(j, q), prec);
            let exact = (big_pow(gamma, j as u64) << (prec as usize * q as usize)).nth_root(q as u32);
            assert!(lo <= exact && exact <= hi, "{gamma}^({j}/{q})");
            assert!(&hi - &lo <= BigUint::from(16u32));
        }
    }

    #[test]
    fn decimal_parsing() {
        assert_eq!(parse_rat("0.65").unwrap(), q(13, 20));
        assert_eq!(parse_rat("-3").unwrap(), q(-3, 1));
        assert!(parse_rat("1.2.3").is_err());
    }
}
