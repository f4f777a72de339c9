//! Complex scalars in two modes: exact Gaussian rationals and `f64` complex numbers.
//!
//! Every object in this crate is generic over a [`Scalar`]; the mode of a
//! computation is fixed by the type parameter, so exact and float values can
//! never be mixed inside one computation.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::linalg::{self, RankReport};

/// Real scalars backing a [`Scalar`]: `BigRational` (exact) or `f64`.
pub trait RealScalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn to_f64(&self) -> f64;
    fn vanishes(&self) -> bool;
}

impl RealScalar for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn to_f64(&self) -> f64 {
        ratio_to_f64(self)
    }
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
}

impl RealScalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn vanishes(&self) -> bool {
        *self == 0.0
    }
}

/// A complex scalar. `EXACT` selects the arithmetic mode.
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    type Real: RealScalar;

    /// True for exact rational arithmetic.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn from_parts(re: Self::Real, im: Self::Real) -> Self;
    fn re(&self) -> Self::Real;
    fn im(&self) -> Self::Real;
    fn conj(&self) -> Self;
    /// Exact zero test (no tolerance, also in float mode).
    fn is_zero(&self) -> bool;
    fn to_c64(&self) -> Complex64;

    fn from_real(re: Self::Real) -> Self {
        Self::from_parts(re, Self::Real::zero())
    }

    fn norm_sqr(&self) -> Self::Real {
        let (re, im) = (self.re(), self.im());
        re.clone() * re + im.clone() * im
    }

    /// Modulus as `f64`.
    fn abs(&self) -> f64 {
        self.to_c64().norm()
    }

    fn scale_i64(&self, k: i64) -> Self {
        self.clone() * Self::from_i64(k)
    }

    /// Rank of the matrix whose columns are `cols` (each of length `nrows`).
    fn rank_of(cols: &[Vec<Self>], nrows: usize) -> RankReport;

    /// Basis of the null space of the column matrix, plus its rank report.
    fn kernel_of(cols: &[Vec<Self>], nrows: usize) -> (Vec<Vec<Self>>, RankReport);

    /// Greedy left-to-right selection of linearly independent columns.
    fn independent_columns(cols: &[Vec<Self>], nrows: usize) -> (Vec<usize>, RankReport);
}

/// Exact complex rational `re + i·im`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self {
            re: BigRational::new(BigInt::from(num), BigInt::from(den)),
            im: Zero::zero(),
        }
    }

    pub fn from_ratios(re: (i64, i64), im: (i64, i64)) -> Self {
        Self {
            re: BigRational::new(BigInt::from(re.0), BigInt::from(re.1)),
            im: BigRational::new(BigInt::from(im.0), BigInt::from(im.1)),
        }
    }

    /// Exact rational value of the shortest decimal representation of `v`.
    pub fn from_f64_decimal(re: f64, im: f64) -> Option<Self> {
        Some(Self {
            re: decimal_to_ratio(re)?,
            im: decimal_to_ratio(im)?,
        })
    }

    pub fn i() -> Self {
        Self {
            re: Zero::zero(),
            im: One::one(),
        }
    }
}

fn decimal_to_ratio(v: f64) -> Option<BigRational> {
    if !v.is_finite() {
        return None;
    }
    parse_rational(&format!("{v}"))
}

/// Parses `"p/q"`, integers and plain decimals (`"-0.25"`, `"1.5e-3"`) into an exact rational.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let s = text.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).ok()?;
        let q = BigInt::from_str(q.trim()).ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(BigRational::new(p, q));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut numer = BigInt::from_str(if all_digits.is_empty() { "0" } else { &all_digits }).ok()?;
    if negative {
        numer = -numer;
    }
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        BigRational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    Some(value)
}

/// Correctly scaled conversion; `to_f64` on huge numerators/denominators alone would overflow.
pub fn ratio_to_f64(r: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    let shift = nb - db - 60;
    let scaled = if shift > 0 {
        r / BigRational::from_integer(BigInt::one() << shift as usize)
    } else {
        r * BigRational::from_integer(BigInt::one() << (-shift) as usize)
    };
    let base = scaled.numer().to_f64().unwrap_or(0.0) / scaled.denom().to_f64().unwrap_or(1.0);
    base * 2f64.powi(shift as i32)
}

pub fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", format_rational(&self.re))
        } else if self.re.is_zero() {
            write!(f, "{}i", format_rational(&self.im))
        } else {
            let sign = if self.im.is_negative() { '-' } else { '+' };
            write!(
                f,
                "({}{}{}i)",
                format_rational(&self.re),
                sign,
                format_rational(&self.im.abs())
            )
        }
    }
}

impl Add for GaussianRational {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self {
            re: self.re + rhs.re,
            im: self.im + rhs.im,
        }
    }
}

impl Sub for GaussianRational {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self {
            re: self.re - rhs.re,
            im: self.im - rhs.im,
        }
    }
}

impl Mul for GaussianRational {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        if self.im.is_zero() && rhs.im.is_zero() {
            return Self {
                re: self.re * rhs.re,
                im: Zero::zero(),
            };
        }
        Self {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Div for GaussianRational {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        assert!(!Scalar::is_zero(&rhs), "division by exact zero");
        if rhs.im.is_zero() {
            return Self {
                re: self.re / &rhs.re,
                im: self.im / &rhs.re,
            };
        }
        let den = &rhs.re * &rhs.re + &rhs.im * &rhs.im;
        let conj = rhs.conj();
        let num = self * conj;
        Self {
            re: num.re / &den,
            im: num.im / &den,
        }
    }
}

impl Neg for GaussianRational {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Scalar for GaussianRational {
    type Real = BigRational;
    const EXACT: bool = true;

    fn zero() -> Self {
        Self::default()
    }
    fn one() -> Self {
        Self {
            re: One::one(),
            im: Zero::zero(),
        }
    }
    fn from_i64(v: i64) -> Self {
        Self {
            re: BigRational::from_integer(BigInt::from(v)),
            im: Zero::zero(),
        }
    }
    fn from_parts(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }
    fn re(&self) -> BigRational {
        self.re.clone()
    }
    fn im(&self) -> BigRational {
        self.im.clone()
    }
    fn conj(&self) -> Self {
        Self {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(ratio_to_f64(&self.re), ratio_to_f64(&self.im))
    }
    fn scale_i64(&self, k: i64) -> Self {
        let k = BigRational::from_integer(BigInt::from(k));
        Self {
            re: &self.re * &k,
            im: &self.im * &k,
        }
    }
    fn rank_of(cols: &[Vec<Self>], nrows: usize) -> RankReport {
        linalg::exact::rank(cols, nrows)
    }
    fn kernel_of(cols: &[Vec<Self>], nrows: usize) -> (Vec<Vec<Self>>, RankReport) {
        linalg::exact::kernel(cols, nrows)
    }
    fn independent_columns(cols: &[Vec<Self>], nrows: usize) -> (Vec<usize>, RankReport) {
        linalg::exact::independent_columns(cols, nrows)
    }
}

impl Scalar for Complex64 {
    type Real = f64;
    const EXACT: bool = false;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }
    fn from_parts(re: f64, im: f64) -> Self {
        Complex64::new(re, im)
    }
    fn re(&self) -> f64 {
        self.re
    }
    fn im(&self) -> f64 {
        self.im
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn to_c64(&self) -> Complex64 {
        *self
    }
    fn rank_of(cols: &[Vec<Self>], nrows: usize) -> RankReport {
        linalg::float::rank(cols, nrows)
    }
    fn kernel_of(cols: &[Vec<Self>], nrows: usize) -> (Vec<Vec<Self>>, RankReport) {
        linalg::float::kernel(cols, nrows)
    }
    fn independent_columns(cols: &[Vec<Self>], nrows: usize) -> (Vec<usize>, RankReport) {
        linalg::float::independent_columns(cols, nrows)
    }
}

/// Exact conversion into the float mode.
pub fn to_float<S: Scalar>(v: &S) -> Complex64 {
    v.to_c64()
}
