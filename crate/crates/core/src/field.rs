//! Coefficient fields.
//!
//! Two backends share one interface: [`GaussRat`] (exact Gaussian rationals,
//! pairs of arbitrary precision rationals) and [`Complex64`] (floating point).
//! Everything above this module is generic over [`Field`].

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A commutative field containing `i`, as used by every ring in this crate.
pub trait Field: Clone + PartialEq + fmt::Debug + Send + Sync + 'static {
    /// Whether equality and zero tests are exact.
    const EXACT: bool;
    const NAME: &'static str;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(n: i64) -> Self;
    fn from_gauss(q: &GaussRat) -> Self;
    fn imag_unit() -> Self;

    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Option<Self>;
    fn conj(&self) -> Self;

    fn to_c64(&self) -> Complex64;
    /// Exact backends ignore `tol`.
    fn approx_eq(&self, other: &Self, tol: f64) -> bool;
    fn real_part(&self) -> Self;
    fn imag_part(&self) -> Self;
    /// Compares real parts.
    fn cmp_real(&self, other: &Self) -> Ordering;
    /// Square root of a nonnegative real, if it exists in the field.
    fn sqrt_real(&self) -> Option<Self>;
    fn render(&self) -> String;

    fn is_one(&self) -> bool {
        self == &Self::one()
    }

    fn div(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|r| self.mul(&r))
    }

    fn norm_sqr(&self) -> Self {
        self.mul(&self.conj()).real_part()
    }

    fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Zero up to `tol` on the float backend, exactly zero otherwise.
    fn is_negligible(&self, tol: f64) -> bool {
        self.approx_eq(&Self::zero(), tol)
    }
}

/// An element `re + im·i` of ℚ(i).
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct GaussRat {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRat {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRat { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        GaussRat { re, im: BigRational::zero() }
    }

    pub fn int(n: i64) -> Self {
        Self::real(BigRational::from_integer(n.into()))
    }

    /// `num/den`; panics on a zero denominator.
    pub fn ratio(num: i64, den: i64) -> Self {
        Self::real(BigRational::new(num.into(), den.into()))
    }

    pub fn i() -> Self {
        GaussRat { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }
}

impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&Field::render(self))
    }
}

impl FromStr for GaussRat {
    type Err = String;

    /// Accepts `p`, `p/q` and decimal literals such as `-0.125`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_rational(s).map(GaussRat::real)
    }
}

pub(crate) fn parse_rational(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n = parse_rational(n)?;
        let d = parse_rational(d)?;
        if d.is_zero() {
            return Err("zero denominator".into());
        }
        return Ok(n / d);
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let value = if let Some((int, frac)) = body.split_once('.') {
        if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) || (int.is_empty() && frac.is_empty()) {
            return Err(format!("invalid number `{s}`"));
        }
        let digits = format!("{int}{frac}");
        let num: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().map_err(|_| format!("invalid number `{s}`"))? };
        let den = BigInt::from(10u32).pow(frac.len() as u32);
        BigRational::new(num, den)
    } else {
        if body.is_empty() || !body.chars().all(|c| c.is_ascii_digit()) {
            return Err(format!("invalid number `{s}`"));
        }
        BigRational::from_integer(body.parse().map_err(|_| format!("invalid number `{s}`"))?)
    };
    Ok(if neg { -value } else { value })
}

fn render_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    (&n * &n == *q.numer() && &d * &d == *q.denom()).then(|| BigRational::new(n, d))
}

impl Field for GaussRat {
    const EXACT: bool = true;
    const NAME: &'static str = "exact";

    fn zero() -> Self {
        GaussRat::default()
    }
    fn one() -> Self {
        GaussRat::int(1)
    }
    fn from_int(n: i64) -> Self {
        GaussRat::int(n)
    }
    fn from_gauss(q: &GaussRat) -> Self {
        q.clone()
    }
    fn imag_unit() -> Self {
        GaussRat::i()
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn add(&self, rhs: &Self) -> Self {
        GaussRat { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
    fn sub(&self, rhs: &Self) -> Self {
        GaussRat { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
    fn mul(&self, rhs: &Self) -> Self {
        // most coefficients in practice are real
        match (self.im.is_zero(), rhs.im.is_zero()) {
            (true, true) => GaussRat::real(&self.re * &rhs.re),
            (true, false) => GaussRat { re: &self.re * &rhs.re, im: &self.re * &rhs.im },
            (false, true) => GaussRat { re: &self.re * &rhs.re, im: &self.im * &rhs.re },
            (false, false) => GaussRat {
                re: &self.re * &rhs.re - &self.im * &rhs.im,
                im: &self.re * &rhs.im + &self.im * &rhs.re,
            },
        }
    }
    fn neg(&self) -> Self {
        GaussRat { re: -&self.re, im: -&self.im }
    }
    fn inv(&self) -> Option<Self> {
        if Field::is_zero(self) {
            return None;
        }
        if self.im.is_zero() {
            return Some(GaussRat::real(self.re.recip()));
        }
        let d = &self.re * &self.re + &self.im * &self.im;
        Some(GaussRat { re: &self.re / &d, im: -&self.im / &d })
    }
    fn conj(&self) -> Self {
        GaussRat { re: self.re.clone(), im: -&self.im }
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64().unwrap_or(f64::NAN), self.im.to_f64().unwrap_or(f64::NAN))
    }
    fn approx_eq(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }
    fn real_part(&self) -> Self {
        GaussRat::real(self.re.clone())
    }
    fn imag_part(&self) -> Self {
        GaussRat::real(self.im.clone())
    }
    fn cmp_real(&self, other: &Self) -> Ordering {
        self.re.cmp(&other.re)
    }
    fn sqrt_real(&self) -> Option<Self> {
        if !self.im.is_zero() {
            return None;
        }
        rational_sqrt(&self.re).map(GaussRat::real)
    }
    fn render(&self) -> String {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => render_rational(&self.re),
            (true, false) => {
                if self.im.is_one() {
                    "i".into()
                } else if (-&self.im).is_one() {
                    "-i".into()
                } else {
                    format!("{}*i", render_rational(&self.im))
                }
            }
            (false, false) => {
                let im = if self.im.is_one() {
                    "+i".to_string()
                } else if (-&self.im).is_one() {
                    "-i".to_string()
                } else if self.im.is_positive() {
                    format!("+{}*i", render_rational(&self.im))
                } else {
                    format!("{}*i", render_rational(&self.im))
                };
                format!("({}{})", render_rational(&self.re), im)
            }
        }
    }
}

impl Field for Complex64 {
    const EXACT: bool = false;
    const NAME: &'static str = "float";

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_int(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
    fn from_gauss(q: &GaussRat) -> Self {
        q.to_c64()
    }
    fn imag_unit() -> Self {
        Complex64::new(0.0, 1.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        (!Field::is_zero(self)).then(|| self.inv())
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn to_c64(&self) -> Complex64 {
        *self
    }
    fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        (self - other).norm() <= tol
    }
    fn real_part(&self) -> Self {
        Complex64::new(self.re, 0.0)
    }
    fn imag_part(&self) -> Self {
        Complex64::new(self.im, 0.0)
    }
    fn cmp_real(&self, other: &Self) -> Ordering {
        self.re.total_cmp(&other.re)
    }
    fn sqrt_real(&self) -> Option<Self> {
        (self.re >= 0.0).then(|| Complex64::new(self.re.sqrt(), 0.0))
    }
    fn render(&self) -> String {
        if self.im == 0.0 {
            format!("{}", self.re)
        } else if self.re == 0.0 {
            format!("{}*i", self.im)
        } else if self.im > 0.0 {
            format!("({}+{}*i)", self.re, self.im)
        } else {
            format!("({}{}*i)", self.re, self.im)
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl $tr<&GaussRat> for &GaussRat {
            type Output = GaussRat;
            fn $method(self, rhs: &GaussRat) -> GaussRat {
                $body(self, rhs)
            }
        }
        impl $tr<GaussRat> for GaussRat {
            type Output = GaussRat;
            fn $method(self, rhs: GaussRat) -> GaussRat {
                $body(&self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a: &GaussRat, b: &GaussRat| Field::add(a, b));
forward_binop!(Sub, sub, |a: &GaussRat, b: &GaussRat| Field::sub(a, b));
forward_binop!(Mul, mul, |a: &GaussRat, b: &GaussRat| Field::mul(a, b));
forward_binop!(Div, div, |a: &GaussRat, b: &GaussRat| Field::div(a, b).expect("division by zero"));

impl Neg for GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        Field::neg(&self)
    }
}

impl Neg for &GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        Field::neg(self)
    }
}
