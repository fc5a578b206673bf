//! Multiple-precision real scalar with a process-wide working precision.
//!
//! Every [`Scalar`] produced by an arithmetic operation is rounded to the
//! precision configured through [`set_precision_digits`] at the time of the
//! operation. The default is 50 significant decimal digits.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;
use std::sync::atomic::{AtomicU32, Ordering as AtomicOrdering};

use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Default number of significant decimal digits.
pub const DEFAULT_PRECISION_DIGITS: u32 = 50;

/// Extra binary digits carried beyond the requested decimal precision.
const GUARD_BITS: u32 = 16;

static PRECISION_DIGITS: AtomicU32 = AtomicU32::new(DEFAULT_PRECISION_DIGITS);

/// Current working precision in significant decimal digits.
pub fn precision_digits() -> u32 {
    PRECISION_DIGITS.load(AtomicOrdering::Relaxed)
}

/// Sets the process-wide working precision. Values below 16 digits are raised to 16.
pub fn set_precision_digits(digits: u32) {
    PRECISION_DIGITS.store(digits.max(16), AtomicOrdering::Relaxed);
}

/// Binary precision used for new values.
pub fn working_bits() -> u32 {
    bits_for_digits(precision_digits())
}

pub(crate) fn bits_for_digits(digits: u32) -> u32 {
    (f64::from(digits) * std::f64::consts::LOG2_10).ceil() as u32 + GUARD_BITS
}

/// Comparison tolerance `10^(-P+5)`.
pub fn eps_mach() -> Scalar {
    Scalar::pow10(-(precision_digits() as i32) + 5)
}

/// Tolerance `10^(-P + offset)`, the form used by most invariants.
pub fn tol_digits(offset: i32) -> Scalar {
    Scalar::pow10(-(precision_digits() as i32) + offset)
}

/// A real number carried at the process-wide working precision.
#[derive(Clone, PartialEq)]
pub struct Scalar(Float);

impl Scalar {
    pub fn zero() -> Self {
        Scalar(Float::new(working_bits()))
    }

    pub fn one() -> Self {
        Self::from_i64(1)
    }

    pub fn from_f64(v: f64) -> Self {
        Scalar(Float::with_val(working_bits(), v))
    }

    pub fn from_i64(v: i64) -> Self {
        Scalar(Float::with_val(working_bits(), v))
    }

    /// `num / den` rounded once at working precision.
    pub fn from_ratio(num: i64, den: i64) -> Self {
        let r = rug::Rational::from((num, den));
        Scalar(Float::with_val(working_bits(), &r))
    }

    pub fn from_float(f: Float) -> Self {
        let mut f = f;
        f.set_prec(working_bits());
        Scalar(f)
    }

    pub fn infinity() -> Self {
        Scalar(Float::with_val(working_bits(), rug::float::Special::Infinity))
    }

    pub fn pi() -> Self {
        Scalar(Float::with_val(working_bits(), Constant::Pi))
    }

    pub fn pow10(exp: i32) -> Self {
        let ten = Float::with_val(working_bits(), 10);
        Scalar(Float::with_val(working_bits(), ten.pow(exp)))
    }

    pub fn as_float(&self) -> &Float {
        &self.0
    }

    pub fn into_float(self) -> Float {
        self.0
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.0.is_finite()
    }

    pub fn is_sign_negative(&self) -> bool {
        self.0.is_sign_negative() && !self.0.is_zero()
    }

    fn unary(&self, f: impl FnOnce(Float) -> Float) -> Self {
        let mut x = self.0.clone();
        x.set_prec(working_bits());
        Scalar(f(x))
    }

    pub fn abs(&self) -> Self {
        self.unary(Float::abs)
    }

    pub fn sqrt(&self) -> Self {
        self.unary(Float::sqrt)
    }

    pub fn sin(&self) -> Self {
        self.unary(Float::sin)
    }

    pub fn cos(&self) -> Self {
        self.unary(Float::cos)
    }

    /// `(sin x, cos x)` from one evaluation.
    pub fn sin_cos(&self) -> (Self, Self) {
        let mut s = self.0.clone();
        s.set_prec(working_bits());
        let mut c = Float::new(working_bits());
        s.sin_cos_mut(&mut c);
        (Scalar(s), Scalar(c))
    }

    pub fn exp(&self) -> Self {
        self.unary(Float::exp)
    }

    pub fn ln(&self) -> Self {
        self.unary(Float::ln)
    }

    pub fn recip(&self) -> Self {
        self.unary(Float::recip)
    }

    pub fn square(&self) -> Self {
        self.unary(Float::square)
    }

    pub fn powi(&self, n: i32) -> Self {
        Scalar(Float::with_val(working_bits(), (&self.0).pow(n)))
    }

    pub fn round(&self) -> Self {
        self.unary(Float::round)
    }

    pub fn floor(&self) -> Self {
        self.unary(Float::floor)
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    /// `|self - other| <= tol`.
    pub fn approx_eq(&self, other: &Scalar, tol: &Scalar) -> bool {
        (self - other).abs() <= *tol
    }

    /// Decimal string with `digits` significant digits in scientific notation.
    pub fn to_sig_string(&self, digits: usize) -> String {
        if self.0.is_zero() {
            return "0".to_string();
        }
        self.0.to_string_radix(10, Some(digits.max(1)))
    }

    /// Plain positional decimal (e.g. `23.4373632`) with `digits` significant digits.
    pub fn to_fixed_string(&self, digits: usize) -> String {
        if self.0.is_zero() {
            return "0".to_string();
        }
        let (neg, s, exp) = self.0.to_sign_string_exp(10, Some(digits.max(1)));
        let exp = exp.unwrap_or(0) as i64;
        let mut out = String::new();
        if neg {
            out.push('-');
        }
        // value = 0.s * 10^exp
        if exp <= 0 {
            out.push_str("0.");
            for _ in 0..(-exp) {
                out.push('0');
            }
            out.push_str(&s);
        } else if exp as usize >= s.len() {
            out.push_str(&s);
            for _ in 0..(exp as usize - s.len()) {
                out.push('0');
            }
        } else {
            out.push_str(&s[..exp as usize]);
            out.push('.');
            out.push_str(&s[exp as usize..]);
        }
        out
    }

    /// Parses a decimal literal (`0.7`, `-2.5e-3`) or an exact ratio `m/n`.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if let Some((num, den)) = t.split_once('/') {
            let r: rug::Rational = format!("{}/{}", num.trim(), den.trim())
                .parse()
                .map_err(|_| Error::Parse(format!("invalid ratio `{t}`")))?;
            return Ok(Scalar(Float::with_val(working_bits(), &r)));
        }
        let parsed = Float::parse(t).map_err(|_| Error::Parse(format!("invalid number `{t}`")))?;
        Ok(Scalar(Float::with_val(working_bits(), parsed)))
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.partial_cmp(&other.0)
    }
}

impl PartialEq<f64> for Scalar {
    fn eq(&self, other: &f64) -> bool {
        self.0 == *other
    }
}

impl PartialOrd<f64> for Scalar {
    fn partial_cmp(&self, other: &f64) -> Option<Ordering> {
        self.0.partial_cmp(other)
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_sig_string(precision_digits() as usize))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match f.precision() {
            Some(p) => write!(f, "{}", self.to_sig_string(p)),
            None => write!(f, "{}", self.to_sig_string(precision_digits() as usize)),
        }
    }
}

impl FromStr for Scalar {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Scalar::parse(s)
    }
}

impl From<f64> for Scalar {
    fn from(v: f64) -> Self {
        Scalar::from_f64(v)
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::from_i64(v)
    }
}

impl From<i32> for Scalar {
    fn from(v: i32) -> Self {
        Scalar::from_i64(v.into())
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        // enough digits to read back the identical binary value
        let digits = (f64::from(self.0.prec()) * std::f64::consts::LOG10_2).ceil() as usize + 1;
        s.serialize_str(&self.to_sig_string(digits))
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Text(String),
            Int(i64),
            Float(f64),
        }
        match Repr::deserialize(d)? {
            Repr::Text(t) => Scalar::parse(&t).map_err(serde::de::Error::custom),
            Repr::Int(i) => Ok(Scalar::from_i64(i)),
            // Shortest round-trip decimal, so `0.1` means one tenth rather than its binary neighbour.
            Repr::Float(f) => Scalar::parse(&format!("{f:e}")).map_err(serde::de::Error::custom),
        }
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $atr:ident, $amethod:ident) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                Scalar(Float::with_val(working_bits(), (&self.0).$method(&rhs.0)))
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
        impl $tr<f64> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: f64) -> Scalar {
                Scalar(Float::with_val(working_bits(), (&self.0).$method(rhs)))
            }
        }
        impl $tr<f64> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: f64) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl $tr<i32> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: i32) -> Scalar {
                Scalar(Float::with_val(working_bits(), (&self.0).$method(rhs)))
            }
        }
        impl $tr<i32> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: i32) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl $atr<&Scalar> for Scalar {
            fn $amethod(&mut self, rhs: &Scalar) {
                *self = (&*self).$method(rhs);
            }
        }
        impl $atr<Scalar> for Scalar {
            fn $amethod(&mut self, rhs: Scalar) {
                *self = (&*self).$method(&rhs);
            }
        }
    };
}

binop!(Add, add, AddAssign, add_assign);
binop!(Sub, sub, SubAssign, sub_assign);
binop!(Mul, mul, MulAssign, mul_assign);
binop!(Div, div, DivAssign, div_assign);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-self.0)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(Float::with_val(working_bits(), -&self.0))
    }
}

impl Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        let mut acc = Float::new(working_bits());
        for x in iter {
            acc += &x.0;
        }
        Scalar(acc)
    }
}

impl<'a> Sum<&'a Scalar> for Scalar {
    fn sum<I: Iterator<Item = &'a Scalar>>(iter: I) -> Scalar {
        let mut acc = Float::new(working_bits());
        for x in iter {
            acc += &x.0;
        }
        Scalar(acc)
    }
}

/// `Σ a_i b_i` accumulated with fused multiply-adds at working precision.
pub fn dot<'a>(a: impl IntoIterator<Item = &'a Scalar>, b: impl IntoIterator<Item = &'a Scalar>) -> Scalar {
    let mut acc = Float::new(working_bits());
    for (x, y) in a.into_iter().zip(b) {
        acc += &x.0 * &y.0;
    }
    Scalar(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_ratios_and_decimals() {
        let half = Scalar::parse("1/2").unwrap();
        assert_eq!(half, Scalar::from_ratio(1, 2));
        let tenth = Scalar::parse("0.1").unwrap();
        let diff = (&tenth * 10 - Scalar::one()).abs();
        assert!(diff < tol_digits(2));
        assert!(Scalar::parse("abc").is_err());
        assert!(Scalar::parse("1/x").is_err());
    }

    #[test]
    fn arithmetic_carries_working_precision() {
        let third = Scalar::from_ratio(1, 3);
        let back = &third * 3;
        assert!(back.approx_eq(&Scalar::one(), &eps_mach()));
        assert!(third.as_float().prec() >= 160);
        let pi = Scalar::pi();
        assert!(pi.sin().abs() < eps_mach());
    }

    #[test]
    fn fixed_formatting() {
        let x = Scalar::parse("23.437363200234028176652").unwrap();
        assert_eq!(x.to_fixed_string(23), "23.437363200234028176652");
        let y = Scalar::parse("0.00125").unwrap();
        assert_eq!(y.to_fixed_string(3), "0.00125");
        let z = Scalar::parse("-995.7612").unwrap();
        assert_eq!(z.to_fixed_string(7), "-995.7612");
    }

    #[test]
    fn serde_round_trip_keeps_digits() {
        let x = Scalar::pi() / 7;
        let json = serde_json::to_string(&x).unwrap();
        let back: Scalar = serde_json::from_str(&json).unwrap();
        assert!(back.approx_eq(&x, &tol_digits(1)));
        let from_float: Scalar = serde_json::from_str("0.7").unwrap();
        assert!(from_float.approx_eq(&Scalar::parse("0.7").unwrap(), &eps_mach()));
    }
}
