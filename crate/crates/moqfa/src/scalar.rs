//! Scalar backends for the matrix layer.
//!
//! Two backends implement [`Scalar`]:
//!
//! - [`Exact`]: complex numbers whose real and imaginary parts live in the
//!   ring of finite sums `Σ qᵢ·√mᵢ` with rational `qᵢ` (i128 numerators and
//!   denominators) and distinct squarefree radicands `mᵢ`. The ring is closed
//!   under `+`, `-`, `×` and conjugation, which covers every construction in
//!   this crate: projector entries are rational, and the only irrational
//!   values that ever appear are the `√α` amplitudes of convex-combination
//!   initial states.
//! - [`C64`]: double-precision complex numbers.
//!
//! A computation is exact end-to-end exactly when all its inputs are `Exact`.

use alloc::string::String;

use core::cmp::Ordering;
use core::fmt;

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{CheckedAdd, CheckedMul, Float, One, Signed, ToPrimitive, Zero};
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Rational numbers over `i128`.
///
/// Large enough for every desk-scale computation in this crate (density
/// matrix entries stay dyadic with small exponents); arithmetic that would
/// overflow panics with a clear message instead of wrapping.
pub type Rational = num_rational::Ratio<i128>;

/// Builds the rational `p/q`, panicking on `q == 0`.
pub fn ratio(p: i128, q: i128) -> Rational {
    Rational::new(p, q)
}

fn checked_add(a: &Rational, b: &Rational) -> Rational {
    a.checked_add(b).expect("exact rational overflow (i128) in addition")
}

fn checked_mul(a: &Rational, b: &Rational) -> Rational {
    a.checked_mul(b).expect("exact rational overflow (i128) in multiplication")
}

/// Splits `n ≥ 0` as `s²·m` with `m` squarefree; returns `(s, m)`.
///
/// Trial division up to 10⁶; a residue above 10¹² (whose squarefreeness
/// could not be certified) is rejected.
fn extract_square_part(mut n: i128) -> Result<(i128, u64)> {
    debug_assert!(n >= 0);
    if n == 0 {
        return Ok((0, 1));
    }
    let mut square = 1i128;
    let mut d = 2i128;
    while d <= 1_000_000 && d * d <= n {
        while n % (d * d) == 0 {
            n /= d * d;
            square *= d;
        }
        d += 1;
    }
    if n > 1_000_000_000_000 {
        return Err(Error::ExactUnsupported("radicand too large to normalize"));
    }
    Ok((square, n as u64))
}

/// A real number of the form `Σ qᵢ·√mᵢ` with rational `qᵢ ≠ 0` and distinct
/// squarefree radicands `mᵢ ≥ 1`, kept sorted by radicand.
///
/// The empty sum is zero; a pure rational is the single term with radicand 1.
#[derive(Clone, PartialEq, Eq)]
pub struct ExactReal {
    terms: SmallVec<[(u64, Rational); 1]>,
}

impl ExactReal {
    pub fn zero() -> Self {
        ExactReal { terms: SmallVec::new() }
    }

    pub fn one() -> Self {
        Self::from_ratio(Rational::from_integer(1))
    }

    pub fn from_ratio(r: Rational) -> Self {
        if r.is_zero() {
            Self::zero()
        } else {
            ExactReal { terms: smallvec::smallvec![(1, r)] }
        }
    }

    pub fn from_int(n: i128) -> Self {
        Self::from_ratio(Rational::from_integer(n))
    }

    /// The square root of a nonnegative rational, as the monomial `q·√m`.
    pub fn sqrt_ratio(r: Rational) -> Result<Self> {
        if r.is_negative() {
            return Err(Error::ExactUnsupported("square root of a negative rational"));
        }
        if r.is_zero() {
            return Ok(Self::zero());
        }
        // √(p/q) = √(pq)/q
        let p = *r.numer();
        let q = *r.denom();
        let n = p.checked_mul(q).ok_or(Error::ExactUnsupported("radicand overflow"))?;
        let (s, m) = extract_square_part(n)?;
        let coeff = Rational::new(s, q);
        Ok(ExactReal { terms: smallvec::smallvec![(m, coeff)] })
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Some(q)` when the value is the rational `q`, `None` when irrational.
    pub fn as_ratio(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::zero()),
            [(1, c)] => Some(*c),
            _ => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                let c = c.numer().to_f64().unwrap_or(f64::NAN) / c.denom().to_f64().unwrap_or(f64::NAN);
                c * Float::sqrt(*m as f64)
            })
            .sum()
    }

    fn push_term(&mut self, m: u64, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.binary_search_by_key(&m, |t| t.0) {
            Ok(i) => {
                let s = checked_add(&self.terms[i].1, &c);
                if s.is_zero() {
                    self.terms.remove(i);
                } else {
                    self.terms[i].1 = s;
                }
            }
            Err(i) => self.terms.insert(i, (m, c)),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.push_term(*m, *c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        ExactReal { terms: self.terms.iter().map(|(m, c)| (*m, -*c)).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                // √m₁·√m₂ = g·√((m₁/g)(m₂/g)) with g = gcd(m₁, m₂); both
                // factors squarefree keeps the product squarefree.
                let g = m1.gcd(m2);
                let rad = (m1 / g)
                    .checked_mul(m2 / g)
                    .expect("exact radicand overflow in multiplication");
                let coeff = checked_mul(&checked_mul(c1, c2), &Rational::from_integer(g as i128));
                out.push_term(rad, coeff);
            }
        }
        out
    }

    pub fn scale(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        ExactReal { terms: self.terms.iter().map(|(m, c)| (*m, checked_mul(c, r))).collect() }
    }

    /// Sign relative to zero, when exactly decidable: all-rational and
    /// single-sign sums decide; mixed-sign multi-radical sums return `None`.
    pub fn sign(&self) -> Option<Ordering> {
        if self.terms.is_empty() {
            return Some(Ordering::Equal);
        }
        let all_pos = self.terms.iter().all(|(_, c)| c.is_positive());
        let all_neg = self.terms.iter().all(|(_, c)| c.is_negative());
        if all_pos {
            Some(Ordering::Greater)
        } else if all_neg {
            Some(Ordering::Less)
        } else if let [(m1, c1), (m2, c2)] = self.terms.as_slice() {
            // q₁√m₁ + q₂√m₂ with opposite signs: compare q₁²m₁ with q₂²m₂.
            let lhs = checked_mul(&checked_mul(c1, c1), &Rational::from_integer(*m1 as i128));
            let rhs = checked_mul(&checked_mul(c2, c2), &Rational::from_integer(*m2 as i128));
            let positive_first = c1.is_positive();
            let cmp = lhs.cmp(&rhs);
            Some(if positive_first { cmp } else { cmp.reverse() })
        } else {
            None
        }
    }

    /// Square root, when representable: the value must be a nonnegative
    /// rational (norms of rational vectors are).
    pub fn sqrt(&self) -> Result<Self> {
        match self.as_ratio() {
            Some(r) => Self::sqrt_ratio(r),
            None => Err(Error::ExactUnsupported("square root of an irrational value")),
        }
    }

    /// Multiplicative inverse for rationals and single-radical monomials.
    pub fn recip(&self) -> Result<Self> {
        match self.terms.as_slice() {
            [] => Err(Error::ExactUnsupported("division by zero")),
            [(m, c)] => {
                // 1/(c√m) = (1/(c·m))·√m
                let denom = checked_mul(c, &Rational::from_integer(*m as i128));
                Ok(ExactReal { terms: smallvec::smallvec![(*m, denom.recip())] })
            }
            [(m1, c1), (m2, c2)] => {
                // conjugate trick: 1/(a+b) = (a−b)/(a²−b²)
                let a = ExactReal { terms: smallvec::smallvec![(*m1, *c1)] };
                let b = ExactReal { terms: smallvec::smallvec![(*m2, *c2)] };
                let denom = a.mul(&a).sub(&b.mul(&b));
                let conj = a.sub(&b);
                Ok(conj.mul(&denom.recip()?))
            }
            _ => Err(Error::ExactUnsupported("division by a sum of three or more radicals")),
        }
    }
}

impl fmt::Debug for ExactReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for ExactReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if *m == 1 {
                write!(f, "{}", c)?;
            } else if c.is_one() {
                write!(f, "sqrt({})", m)?;
            } else {
                write!(f, "{}*sqrt({})", c, m)?;
            }
        }
        Ok(())
    }
}

impl PartialOrd for ExactReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.sub(other).sign()
    }
}

/// Complex number with [`ExactReal`] parts.
#[derive(Clone, PartialEq, Eq)]
pub struct Exact {
    pub re: ExactReal,
    pub im: ExactReal,
}

impl Exact {
    pub fn new(re: ExactReal, im: ExactReal) -> Self {
        Exact { re, im }
    }

    pub fn from_ratios(re: Rational, im: Rational) -> Self {
        Exact { re: ExactReal::from_ratio(re), im: ExactReal::from_ratio(im) }
    }

    pub fn from_int(n: i128) -> Self {
        Exact { re: ExactReal::from_int(n), im: ExactReal::zero() }
    }

    /// `Some((re, im))` when both parts are rational.
    pub fn as_rational_pair(&self) -> Option<(Rational, Rational)> {
        Some((self.re.as_ratio()?, self.im.as_ratio()?))
    }
}

impl fmt::Debug for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "({})i", self.im)
        } else {
            write!(f, "{} + ({})i", self.re, self.im)
        }
    }
}

/// Real counterpart of a [`Scalar`]: norms, probabilities and tolerances.
pub trait RealScalar: Clone + PartialEq + PartialOrd + fmt::Debug + fmt::Display {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_ratio(r: Rational) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn is_zero(&self) -> bool;
    /// `Some(q)` when the value is exactly the rational `q`.
    fn as_ratio(&self) -> Option<Rational>;
    fn to_f64(&self) -> f64;
    /// Embeds a double; errors in exact backends, which have no faithful
    /// image for arbitrary floats.
    fn from_f64(v: f64) -> Result<Self>;
    fn sqrt(&self) -> Result<Self>;
    fn abs(&self) -> Self;
}

impl RealScalar for ExactReal {
    fn zero() -> Self {
        ExactReal::zero()
    }
    fn one() -> Self {
        ExactReal::one()
    }
    fn from_ratio(r: Rational) -> Self {
        ExactReal::from_ratio(r)
    }
    fn add(&self, other: &Self) -> Self {
        ExactReal::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        ExactReal::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        ExactReal::mul(self, other)
    }
    fn is_zero(&self) -> bool {
        ExactReal::is_zero(self)
    }
    fn as_ratio(&self) -> Option<Rational> {
        ExactReal::as_ratio(self)
    }
    fn to_f64(&self) -> f64 {
        ExactReal::to_f64(self)
    }
    fn from_f64(_v: f64) -> Result<Self> {
        Err(Error::ExactUnsupported("embedding a float into exact arithmetic"))
    }
    fn sqrt(&self) -> Result<Self> {
        ExactReal::sqrt(self)
    }
    fn abs(&self) -> Self {
        match self.sign() {
            Some(Ordering::Less) => self.neg(),
            _ => self.clone(),
        }
    }
}

fn ratio_to_f64(r: &Rational) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}

impl RealScalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_ratio(r: Rational) -> Self {
        ratio_to_f64(&r)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn as_ratio(&self) -> Option<Rational> {
        None
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn from_f64(v: f64) -> Result<Self> {
        Ok(v)
    }
    fn sqrt(&self) -> Result<Self> {
        Ok(Float::sqrt(*self))
    }
    fn abs(&self) -> Self {
        Float::abs(*self)
    }
}

/// Complex scalar used by [`crate::Matrix`]; exact or floating.
pub trait Scalar: Clone + PartialEq + fmt::Debug + fmt::Display + Sized + 'static {
    type Real: RealScalar;
    /// True when arithmetic in this backend is exact.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_ratio(r: Rational) -> Self;
    fn from_real(r: Self::Real) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn conj(&self) -> Self;
    fn is_zero(&self) -> bool;
    /// `z·z̄`, the squared modulus, as a real scalar.
    fn abs_sq(&self) -> Self::Real;
    fn re(&self) -> Self::Real;
    fn im(&self) -> Self::Real;
    /// The square root of a nonnegative rational embedded in this backend.
    fn sqrt_ratio(r: Rational) -> Result<Self>;
    /// Default comparison tolerance: zero when exact, `1e-9` for floats.
    fn default_tol() -> Self::Real;
}

impl Scalar for Exact {
    type Real = ExactReal;
    const EXACT: bool = true;

    fn zero() -> Self {
        Exact::from_int(0)
    }
    fn one() -> Self {
        Exact::from_int(1)
    }
    fn from_ratio(r: Rational) -> Self {
        Exact::from_ratios(r, Rational::zero())
    }
    fn from_real(r: ExactReal) -> Self {
        Exact { re: r, im: ExactReal::zero() }
    }
    fn add(&self, other: &Self) -> Self {
        Exact { re: self.re.add(&other.re), im: self.im.add(&other.im) }
    }
    fn sub(&self, other: &Self) -> Self {
        Exact { re: self.re.sub(&other.re), im: self.im.sub(&other.im) }
    }
    fn mul(&self, other: &Self) -> Self {
        Exact {
            re: self.re.mul(&other.re).sub(&self.im.mul(&other.im)),
            im: self.re.mul(&other.im).add(&self.im.mul(&other.re)),
        }
    }
    fn neg(&self) -> Self {
        Exact { re: self.re.neg(), im: self.im.neg() }
    }
    fn conj(&self) -> Self {
        Exact { re: self.re.clone(), im: self.im.neg() }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn abs_sq(&self) -> ExactReal {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }
    fn re(&self) -> ExactReal {
        self.re.clone()
    }
    fn im(&self) -> ExactReal {
        self.im.clone()
    }
    fn sqrt_ratio(r: Rational) -> Result<Self> {
        Ok(Exact { re: ExactReal::sqrt_ratio(r)?, im: ExactReal::zero() })
    }
    fn default_tol() -> ExactReal {
        ExactReal::zero()
    }
}

/// Double-precision complex scalar.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct C64(pub Complex64);

impl C64 {
    pub fn new(re: f64, im: f64) -> Self {
        C64(Complex64::new(re, im))
    }
}

impl fmt::Display for C64 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Scalar for C64 {
    type Real = f64;
    const EXACT: bool = false;

    fn zero() -> Self {
        C64::new(0.0, 0.0)
    }
    fn one() -> Self {
        C64::new(1.0, 0.0)
    }
    fn from_ratio(r: Rational) -> Self {
        C64::new(ratio_to_f64(&r), 0.0)
    }
    fn from_real(r: f64) -> Self {
        C64::new(r, 0.0)
    }
    fn add(&self, other: &Self) -> Self {
        C64(self.0 + other.0)
    }
    fn sub(&self, other: &Self) -> Self {
        C64(self.0 - other.0)
    }
    fn mul(&self, other: &Self) -> Self {
        C64(self.0 * other.0)
    }
    fn neg(&self) -> Self {
        C64(-self.0)
    }
    fn conj(&self) -> Self {
        C64(self.0.conj())
    }
    fn is_zero(&self) -> bool {
        self.0.re == 0.0 && self.0.im == 0.0
    }
    fn abs_sq(&self) -> f64 {
        self.0.norm_sqr()
    }
    fn re(&self) -> f64 {
        self.0.re
    }
    fn im(&self) -> f64 {
        self.0.im
    }
    fn sqrt_ratio(r: Rational) -> Result<Self> {
        if r < Rational::zero() {
            return Err(Error::ExactUnsupported("square root of a negative rational"));
        }
        Ok(C64::new(Float::sqrt(ratio_to_f64(&r)), 0.0))
    }
    fn default_tol() -> f64 {
        1e-9
    }
}

/// Parses "p/q" or "p" into a rational.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let parse_int = |s: &str| -> Result<i128> {
        s.trim().parse::<i128>().map_err(|_| Error::Parse {
            what: "rational",
            message: {
                let mut m = String::from("invalid integer `");
                m.push_str(s);
                m.push('`');
                m
            },
        })
    };
    match text.split_once('/') {
        Some((p, q)) => {
            let p = parse_int(p)?;
            let q = parse_int(q)?;
            if q == 0 {
                return Err(Error::Parse { what: "rational", message: String::from("zero denominator") });
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(parse_int(text)?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i128, q: i128) -> Rational {
        Rational::new(p, q)
    }

    #[test]
    fn rational_round_trip_and_arithmetic() {
        let half = ExactReal::from_ratio(r(1, 2));
        let third = ExactReal::from_ratio(r(1, 3));
        assert_eq!(half.add(&third).as_ratio(), Some(r(5, 6)));
        assert_eq!(half.mul(&third).as_ratio(), Some(r(1, 6)));
        assert_eq!(half.sub(&half), ExactReal::zero());
    }

    #[test]
    fn sqrt_normalizes_square_parts() {
        // √(4/7) = (2/7)·√7
        let v = ExactReal::sqrt_ratio(r(4, 7)).unwrap();
        assert_eq!(v.mul(&v).as_ratio(), Some(r(4, 7)));
        assert!(v.as_ratio().is_none());
        // √(9/4) = 3/2 exactly
        let w = ExactReal::sqrt_ratio(r(9, 4)).unwrap();
        assert_eq!(w.as_ratio(), Some(r(3, 2)));
        // √18 = 3√2 and √2·√2 = 2
        let s = ExactReal::sqrt_ratio(r(18, 1)).unwrap();
        let two = ExactReal::sqrt_ratio(r(2, 1)).unwrap();
        assert_eq!(two.mul(&two).as_ratio(), Some(r(2, 1)));
        assert_eq!(s, two.scale(&r(3, 1)));
    }

    #[test]
    fn mixed_radicands_stay_canonical() {
        let a = ExactReal::sqrt_ratio(r(2, 1)).unwrap();
        let b = ExactReal::sqrt_ratio(r(3, 1)).unwrap();
        let sum = a.add(&b);
        // √2·√3 = √6
        assert_eq!(a.mul(&b), ExactReal::sqrt_ratio(r(6, 1)).unwrap());
        // (√2+√3)(√2−√3) = −1
        assert_eq!(sum.mul(&a.sub(&b)).as_ratio(), Some(r(-1, 1)));
        assert!(sum.sign() == Some(Ordering::Greater));
    }

    #[test]
    fn sign_decides_opposite_radical_pairs() {
        let a = ExactReal::sqrt_ratio(r(2, 1)).unwrap();
        let b = ExactReal::sqrt_ratio(r(3, 1)).unwrap();
        assert_eq!(a.sub(&b).sign(), Some(Ordering::Less));
        assert_eq!(b.sub(&a).sign(), Some(Ordering::Greater));
        assert_eq!(a.sub(&a).sign(), Some(Ordering::Equal));
    }

    #[test]
    fn conjugation_is_involutive_and_abs_sq_nonnegative() {
        let z = Exact::from_ratios(r(3, 5), r(-4, 5));
        assert_eq!(z.conj().conj(), z);
        assert_eq!(z.abs_sq().as_ratio(), Some(r(1, 1)));
    }

    #[test]
    fn recip_inverts_monomials_and_two_term_sums() {
        let v = ExactReal::sqrt_ratio(r(4, 7)).unwrap();
        assert_eq!(v.mul(&v.recip().unwrap()).as_ratio(), Some(r(1, 1)));
        let s = ExactReal::from_ratio(r(1, 2)).add(&ExactReal::sqrt_ratio(r(3, 1)).unwrap());
        assert_eq!(s.mul(&s.recip().unwrap()).as_ratio(), Some(r(1, 1)));
    }

    #[test]
    fn parse_rational_strings() {
        assert_eq!(parse_rational("1/2").unwrap(), r(1, 2));
        assert_eq!(parse_rational("-3").unwrap(), r(-3, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
