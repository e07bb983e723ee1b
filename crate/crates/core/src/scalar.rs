//! Complex coefficient backends.
//!
//! Two backends are provided: [`ExactComplex`] (real and imaginary parts are
//! arbitrary-precision rationals) and [`FloatComplex`] (binary floating point
//! at a configurable precision). Series are generic over [`Scalar`], so a
//! series can never hold coefficients of both kinds.

use std::fmt;
use std::str::FromStr;

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use dashu_int::{IBig, UBig};
use dashu_ratio::RBig;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Binary float used by the float backend.
pub type BigFloat = FBig<HalfEven, 2>;

/// Default working precision of the float backend, in bits.
pub const DEFAULT_PRECISION: usize = 128;

/// Smallest accepted float precision (IEEE double).
pub const MIN_PRECISION: usize = 53;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Rational,
    Float { precision: usize },
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Backend::Rational => write!(f, "rational"),
            Backend::Float { precision } => write!(f, "float:{precision}"),
        }
    }
}

/// Field operations shared by both coefficient backends.
pub trait Scalar: Clone + PartialEq + fmt::Debug + Send + Sync + 'static {
    /// Per-series configuration (unit for the exact backend, the precision
    /// in bits for the float backend).
    type Context: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn backend(ctx: &Self::Context) -> Backend;
    fn zero(ctx: &Self::Context) -> Self;
    fn from_exact(value: &ExactComplex, ctx: &Self::Context) -> Self;

    fn one(ctx: &Self::Context) -> Self {
        Self::from_exact(&ExactComplex::one(), ctx)
    }

    fn from_int(value: impl Into<IBig>, ctx: &Self::Context) -> Self {
        Self::from_exact(&ExactComplex::from_int(value), ctx)
    }

    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;

    fn add_assign(&mut self, rhs: &Self) {
        *self = self.add(rhs);
    }

    /// Multiplicative inverse; zero is an error, never a panic.
    fn inv(&self) -> Result<Self>;

    fn to_float(&self, precision: usize) -> FloatComplex;

    /// Exact rational value (dyadic for the float backend).
    fn to_exact(&self) -> ExactComplex;

    /// `ln |self|` rounded to f64 (`-inf` for zero).
    fn ln_abs(&self) -> f64 {
        self.to_float(DEFAULT_PRECISION).ln_abs()
    }

    /// Whether `|self| <= base^exp`.
    fn abs_le_pow(&self, base: u64, exp: u32) -> bool;
}

/// Exact complex rational `re + i*im`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ExactComplex {
    pub re: RBig,
    pub im: RBig,
}

impl ExactComplex {
    pub fn new(re: RBig, im: RBig) -> Self {
        ExactComplex { re, im }
    }

    pub fn real(re: RBig) -> Self {
        ExactComplex { re, im: RBig::ZERO }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::real(RBig::ONE)
    }

    pub fn from_int(value: impl Into<IBig>) -> Self {
        Self::real(RBig::from(value.into()))
    }

    /// `num / den` as a real value.
    pub fn ratio(num: i64, den: u64) -> Self {
        Self::real(RBig::from_parts(IBig::from(num), UBig::from(den)))
    }

    /// Exact value of a pair of doubles (every finite double is a dyadic
    /// rational).
    pub fn from_f64(re: f64, im: f64) -> Result<Self> {
        let conv =
            |v: f64| RBig::try_from(v).map_err(|_| Error::parse(format!("non-finite value {v}")));
        Ok(ExactComplex {
            re: conv(re)?,
            im: conv(im)?,
        })
    }

    pub fn is_real(&self) -> bool {
        self.im == RBig::ZERO
    }

    pub fn norm_sqr(&self) -> RBig {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64().value(), self.im.to_f64().value())
    }

    /// Integer power by squaring.
    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = ExactComplex::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = Scalar::mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = Scalar::mul(&base, &base);
            }
        }
        acc
    }
}

impl fmt::Debug for ExactComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for ExactComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_real() {
            write!(f, "{}", self.re)
        } else if self.re == RBig::ZERO {
            write!(f, "({})i", self.im)
        } else {
            write!(f, "{}+({})i", self.re, self.im)
        }
    }
}

impl From<i64> for ExactComplex {
    fn from(v: i64) -> Self {
        ExactComplex::from_int(v)
    }
}

impl From<RBig> for ExactComplex {
    fn from(v: RBig) -> Self {
        ExactComplex::real(v)
    }
}

/// Parses an exact rational from `"p/q"`, an integer, or a decimal literal
/// such as `"-1.25e-3"`.
pub fn parse_rational(text: &str) -> Result<RBig> {
    let s = text.trim();
    if s.is_empty() {
        return Err(Error::parse("empty number"));
    }
    if let Some((num, den)) = s.split_once('/') {
        let num = parse_rational(num)?;
        let den = parse_rational(den)?;
        if den == RBig::ZERO {
            return Err(Error::parse(format!("zero denominator in {s:?}")));
        }
        return Ok(num / den);
    }
    let bad = || Error::parse(format!("malformed number {s:?}"));
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let exp: i64 = s[pos + 1..].parse().map_err(|_| bad())?;
            (&s[..pos], exp)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.as_bytes().first() {
        Some(b'-') => (true, &mantissa[1..]),
        Some(b'+') => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part
        .bytes()
        .chain(frac_part.bytes())
        .all(|b| b.is_ascii_digit())
    {
        return Err(bad());
    }
    let all: String = [int_part, frac_part].concat();
    let mut value =
        RBig::from(IBig::from_str(if all.is_empty() { "0" } else { &all }).map_err(|_| bad())?);
    let shift = exponent - frac_part.len() as i64;
    let ten_pow = RBig::from(IBig::from(10).pow(shift.unsigned_abs() as usize));
    value = if shift >= 0 {
        value * ten_pow
    } else {
        value / ten_pow
    };
    Ok(if negative { -value } else { value })
}

/// Parses an exact complex literal: `"3"`, `"-1/2"`, `"2i"`, `"1-3/4i"`,
/// `"0.5+2i"`.
pub fn parse_exact_complex(text: &str) -> Result<ExactComplex> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::parse("empty complex literal"));
    }
    let Some(body) = s.strip_suffix(['i', 'j']) else {
        return Ok(ExactComplex::real(parse_rational(&s)?));
    };
    // split at the last sign that is not part of an exponent or leading
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let imag = |t: &str| match t {
        "" | "+" => Ok(RBig::ONE),
        "-" => Ok(-RBig::ONE),
        _ => parse_rational(t),
    };
    match split {
        Some(k) => Ok(ExactComplex::new(
            parse_rational(&body[..k])?,
            imag(&body[k..])?,
        )),
        None => Ok(ExactComplex::new(RBig::ZERO, imag(body)?)),
    }
}

impl Scalar for ExactComplex {
    type Context = ();

    fn backend(_: &()) -> Backend {
        Backend::Rational
    }

    fn zero(_: &()) -> Self {
        ExactComplex::zero()
    }

    fn from_exact(value: &ExactComplex, _: &()) -> Self {
        value.clone()
    }

    fn is_zero(&self) -> bool {
        self.re == RBig::ZERO && self.im == RBig::ZERO
    }

    fn add(&self, rhs: &Self) -> Self {
        ExactComplex {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }

    fn sub(&self, rhs: &Self) -> Self {
        ExactComplex {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }

    fn mul(&self, rhs: &Self) -> Self {
        // real operands are the common case; skip the cross terms
        match (self.is_real(), rhs.is_real()) {
            (true, true) => ExactComplex::real(&self.re * &rhs.re),
            (true, false) => ExactComplex {
                re: &self.re * &rhs.re,
                im: &self.re * &rhs.im,
            },
            (false, true) => ExactComplex {
                re: &self.re * &rhs.re,
                im: &self.im * &rhs.re,
            },
            (false, false) => ExactComplex {
                re: &self.re * &rhs.re - &self.im * &rhs.im,
                im: &self.re * &rhs.im + &self.im * &rhs.re,
            },
        }
    }

    fn neg(&self) -> Self {
        ExactComplex {
            re: -&self.re,
            im: -&self.im,
        }
    }

    fn add_assign(&mut self, rhs: &Self) {
        self.re += &rhs.re;
        if rhs.im != RBig::ZERO {
            self.im += &rhs.im;
        }
    }

    fn inv(&self) -> Result<Self> {
        if Scalar::is_zero(self) {
            return Err(Error::DivisionByZero);
        }
        if self.is_real() {
            return Ok(ExactComplex::real(RBig::ONE / &self.re));
        }
        let n = self.norm_sqr();
        Ok(ExactComplex {
            re: &self.re / &n,
            im: -&self.im / &n,
        })
    }

    fn to_float(&self, precision: usize) -> FloatComplex {
        FloatComplex {
            re: rational_to_float(&self.re, precision),
            im: rational_to_float(&self.im, precision),
        }
    }

    fn to_exact(&self) -> ExactComplex {
        self.clone()
    }

    fn abs_le_pow(&self, base: u64, exp: u32) -> bool {
        let bound = IBig::from(base).pow(2 * exp as usize);
        self.norm_sqr() <= RBig::from(bound)
    }
}

fn rational_to_float(value: &RBig, precision: usize) -> BigFloat {
    if *value == RBig::ZERO {
        return float_zero(precision);
    }
    let num = BigFloat::from(value.numerator().clone())
        .with_precision(precision)
        .value();
    let den = BigFloat::from(IBig::from(value.denominator().clone()))
        .with_precision(precision)
        .value();
    num / den
}

fn float_zero(precision: usize) -> BigFloat {
    BigFloat::ZERO.with_precision(precision).value()
}

/// Complex number with binary floating real and imaginary parts at a fixed
/// precision.
#[derive(Clone, PartialEq)]
pub struct FloatComplex {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl FloatComplex {
    pub fn precision(&self) -> usize {
        self.re.precision().max(self.im.precision())
    }

    pub fn from_f64(re: f64, im: f64, precision: usize) -> Self {
        let conv = |v: f64| {
            BigFloat::try_from(v)
                .map(|f| f.with_precision(precision).value())
                .unwrap_or_else(|_| float_zero(precision))
        };
        FloatComplex {
            re: conv(re),
            im: conv(im),
        }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64().value(), self.im.to_f64().value())
    }

    /// Exact dyadic rational value of each part.
    pub fn to_exact(&self) -> ExactComplex {
        let conv = |f: &BigFloat| {
            let repr = f.repr();
            let significand = RBig::from(repr.significand().clone());
            let exp = repr.exponent();
            let pow = RBig::from(IBig::from(2).pow(exp.unsigned_abs()));
            if exp >= 0 {
                significand * pow
            } else {
                significand / pow
            }
        };
        ExactComplex {
            re: conv(&self.re),
            im: conv(&self.im),
        }
    }

    pub fn norm_sqr(&self) -> BigFloat {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn ln_abs(&self) -> f64 {
        let n = self.norm_sqr();
        if n.repr().is_zero() {
            return f64::NEG_INFINITY;
        }
        n.ln().to_f64().value() / 2.0
    }
}

impl fmt::Debug for FloatComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.to_f64();
        write!(f, "{re:e}{im:+e}i")
    }
}

impl Scalar for FloatComplex {
    type Context = usize;

    fn backend(precision: &usize) -> Backend {
        Backend::Float {
            precision: *precision,
        }
    }

    fn zero(precision: &usize) -> Self {
        FloatComplex {
            re: float_zero(*precision),
            im: float_zero(*precision),
        }
    }

    fn from_exact(value: &ExactComplex, precision: &usize) -> Self {
        value.to_float(*precision)
    }

    fn is_zero(&self) -> bool {
        self.re.repr().is_zero() && self.im.repr().is_zero()
    }

    fn add(&self, rhs: &Self) -> Self {
        FloatComplex {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }

    fn sub(&self, rhs: &Self) -> Self {
        FloatComplex {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }

    fn mul(&self, rhs: &Self) -> Self {
        FloatComplex {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }

    fn neg(&self) -> Self {
        FloatComplex {
            re: -&self.re,
            im: -&self.im,
        }
    }

    fn inv(&self) -> Result<Self> {
        if Scalar::is_zero(self) {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm_sqr();
        Ok(FloatComplex {
            re: &self.re / &n,
            im: -(&self.im / &n),
        })
    }

    fn to_float(&self, precision: usize) -> FloatComplex {
        FloatComplex {
            re: self.re.clone().with_precision(precision).value(),
            im: self.im.clone().with_precision(precision).value(),
        }
    }

    fn to_exact(&self) -> ExactComplex {
        FloatComplex::to_exact(self)
    }

    fn ln_abs(&self) -> f64 {
        FloatComplex::ln_abs(self)
    }

    fn abs_le_pow(&self, base: u64, exp: u32) -> bool {
        let bound = BigFloat::from(IBig::from(base).pow(2 * exp as usize));
        self.norm_sqr() <= bound
    }
}
