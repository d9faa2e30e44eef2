//! Extended-exponent floating point.
//!
//! Eigenfunctions of strongly separated problems decay across the central
//! barrier by factors far below `f64::MIN_POSITIVE`, and the spectral gap
//! inherits that scale. `ExtFloat` keeps an `f64` mantissa in `[0.5, 1)` and
//! a separate `i64` binary exponent, so products and quotients of such
//! quantities keep full relative precision.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

const TWO_POW_64: f64 = 18_446_744_073_709_551_616.0;

// ln 2 split so that `k * LN2_HI` is exact for |k| < 2^20.
const LN2_HI: f64 = 6.931_471_803_691_238e-1;
const LN2_LO: f64 = 1.908_214_929_270_587_7e-10;

/// Splits `x` into `(m, e)` with `x = m * 2^e` and `0.5 <= |m| < 1`.
pub(crate) fn frexp(x: f64) -> (f64, i64) {
    if x == 0.0 || !x.is_finite() {
        return (x, 0);
    }
    let bits = x.to_bits();
    let raw = ((bits >> 52) & 0x7ff) as i64;
    if raw == 0 {
        let (m, e) = frexp(x * TWO_POW_64);
        return (m, e - 64);
    }
    let m = f64::from_bits((bits & !(0x7ff_u64 << 52)) | (1022_u64 << 52));
    (m, raw - 1022)
}

/// `x * 2^e`, saturating to zero or infinity.
pub(crate) fn ldexp(mut x: f64, mut e: i64) -> f64 {
    let big = 2f64.powi(1000);
    let small = 2f64.powi(-1000);
    while e > 1000 {
        x *= big;
        e -= 1000;
        if x.is_infinite() {
            return x;
        }
    }
    while e < -1000 {
        x *= small;
        e += 1000;
        if x == 0.0 {
            return x;
        }
    }
    x * 2f64.powi(e as i32)
}

/// Real number `mant * 2^exp` with an unbounded exponent.
#[derive(Clone, Copy, Debug, Default)]
pub struct ExtFloat {
    mant: f64,
    exp: i64,
}

impl ExtFloat {
    pub const ZERO: ExtFloat = ExtFloat { mant: 0.0, exp: 0 };
    pub const ONE: ExtFloat = ExtFloat { mant: 0.5, exp: 1 };

    fn normalized(mant: f64, exp: i64) -> Self {
        if mant == 0.0 || !mant.is_finite() {
            return ExtFloat { mant, exp: 0 };
        }
        let (m, e) = frexp(mant);
        ExtFloat { mant: m, exp: exp + e }
    }

    pub fn from_f64(x: f64) -> Self {
        Self::normalized(x, 0)
    }

    /// `sign * exp(ln_abs)`.
    pub fn from_ln(ln_abs: f64, negative: bool) -> Self {
        if ln_abs == f64::NEG_INFINITY {
            return Self::ZERO;
        }
        if !ln_abs.is_finite() {
            return ExtFloat { mant: ln_abs, exp: 0 };
        }
        let k = (ln_abs / std::f64::consts::LN_2).floor();
        let r = (ln_abs - k * LN2_HI) - k * LN2_LO;
        let m = r.exp();
        let out = Self::normalized(m, k as i64);
        if negative {
            -out
        } else {
            out
        }
    }

    /// `2^e`.
    pub fn pow2(e: i64) -> Self {
        ExtFloat { mant: 0.5, exp: e + 1 }
    }

    /// Mantissa and binary exponent, `self = mantissa * 2^exponent`.
    pub fn parts(self) -> (f64, i64) {
        (self.mant, self.exp)
    }

    pub fn is_zero(self) -> bool {
        self.mant == 0.0
    }

    pub fn is_finite(self) -> bool {
        self.mant.is_finite()
    }

    pub fn is_sign_negative(self) -> bool {
        self.mant < 0.0
    }

    pub fn abs(self) -> Self {
        ExtFloat { mant: self.mant.abs(), exp: self.exp }
    }

    /// Natural log of `|self|`.
    pub fn ln(self) -> f64 {
        if self.mant == 0.0 {
            return f64::NEG_INFINITY;
        }
        self.mant.abs().ln() + (self.exp as f64) * LN2_HI + (self.exp as f64) * LN2_LO
    }

    pub fn log10(self) -> f64 {
        self.ln() / std::f64::consts::LN_10
    }

    pub fn sqrt(self) -> Self {
        if self.mant <= 0.0 {
            return ExtFloat { mant: self.mant.sqrt(), exp: 0 };
        }
        let (m, e) = if self.exp % 2 == 0 { (self.mant, self.exp) } else { (self.mant * 2.0, self.exp - 1) };
        Self::normalized(m.sqrt(), e / 2)
    }

    pub fn square(self) -> Self {
        self * self
    }

    pub fn mul_f64(self, x: f64) -> Self {
        self * ExtFloat::from_f64(x)
    }

    /// Nearest `f64`; underflows to zero and overflows to infinity.
    pub fn to_f64(self) -> f64 {
        ldexp(self.mant, self.exp)
    }

    /// True when `to_f64` is exact up to rounding of a normal number.
    pub fn fits_f64(self) -> bool {
        self.mant == 0.0 || (-1020..=1023).contains(&self.exp)
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }

    pub fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }

    /// Scientific notation with 17 significant digits.
    ///
    /// Values inside the `f64` normal range round-trip exactly; outside it
    /// the decimal exponent is exact and roughly 13 leading digits are
    /// meaningful.
    pub fn to_sci_string(self) -> String {
        if self.mant == 0.0 {
            return "0".to_string();
        }
        if !self.mant.is_finite() {
            return format!("{}", self.mant);
        }
        if self.fits_f64() {
            return format!("{:.16e}", self.to_f64());
        }
        let sign = if self.mant < 0.0 { "-" } else { "" };
        let log10_2 = std::f64::consts::LOG10_2;
        let hi = f64::from_bits(log10_2.to_bits() & !((1u64 << 24) - 1));
        let lo = log10_2 - hi;
        let e = self.exp as f64;
        let whole = e * hi;
        let mut dec = whole.floor();
        let mut frac = (whole - dec) + e * lo + self.mant.abs().log10();
        let shift = frac.floor();
        dec += shift;
        frac -= shift;
        let mut digits = 10f64.powf(frac);
        let mut text = format!("{digits:.16}");
        if text.starts_with("10") {
            dec += 1.0;
            digits /= 10.0;
            text = format!("{digits:.16}");
        }
        format!("{sign}{text}e{}", dec as i64)
    }
}

impl From<f64> for ExtFloat {
    fn from(x: f64) -> Self {
        ExtFloat::from_f64(x)
    }
}

impl Mul for ExtFloat {
    type Output = ExtFloat;
    fn mul(self, rhs: ExtFloat) -> ExtFloat {
        ExtFloat::normalized(self.mant * rhs.mant, self.exp + rhs.exp)
    }
}

impl MulAssign for ExtFloat {
    fn mul_assign(&mut self, rhs: ExtFloat) {
        *self = *self * rhs;
    }
}

impl Div for ExtFloat {
    type Output = ExtFloat;
    fn div(self, rhs: ExtFloat) -> ExtFloat {
        ExtFloat::normalized(self.mant / rhs.mant, self.exp - rhs.exp)
    }
}

impl Neg for ExtFloat {
    type Output = ExtFloat;
    fn neg(self) -> ExtFloat {
        ExtFloat { mant: -self.mant, exp: self.exp }
    }
}

impl Add for ExtFloat {
    type Output = ExtFloat;
    fn add(self, rhs: ExtFloat) -> ExtFloat {
        if rhs.mant == 0.0 {
            return self;
        }
        if self.mant == 0.0 {
            return rhs;
        }
        if !self.mant.is_finite() || !rhs.mant.is_finite() {
            return ExtFloat { mant: self.mant + rhs.mant, exp: 0 };
        }
        let (big, small) = if self.exp >= rhs.exp { (self, rhs) } else { (rhs, self) };
        let gap = big.exp - small.exp;
        if gap > 110 {
            return big;
        }
        ExtFloat::normalized(big.mant + ldexp(small.mant, -gap), big.exp)
    }
}

impl AddAssign for ExtFloat {
    fn add_assign(&mut self, rhs: ExtFloat) {
        *self = *self + rhs;
    }
}

impl Sub for ExtFloat {
    type Output = ExtFloat;
    fn sub(self, rhs: ExtFloat) -> ExtFloat {
        self + (-rhs)
    }
}

impl PartialEq for ExtFloat {
    fn eq(&self, other: &Self) -> bool {
        self.partial_cmp(other) == Some(Ordering::Equal)
    }
}

impl PartialOrd for ExtFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        (*self - *other).mant.partial_cmp(&0.0)
    }
}

impl std::iter::Sum for ExtFloat {
    fn sum<I: Iterator<Item = ExtFloat>>(iter: I) -> ExtFloat {
        iter.fold(ExtFloat::ZERO, |acc, x| acc + x)
    }
}

impl fmt::Display for ExtFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_sci_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse extended float from {0:?}")]
pub struct ParseExtFloatError(String);

impl FromStr for ExtFloat {
    type Err = ParseExtFloatError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseExtFloatError(s.to_string());
        let t = s.trim();
        if let Ok(x) = t.parse::<f64>() {
            if x.is_nan() {
                return Err(err());
            }
            if x.is_finite() && x != 0.0 {
                return Ok(ExtFloat::from_f64(x));
            }
        }
        let Some((mantissa, exponent)) = t.split_once(['e', 'E']) else {
            return match t.parse::<f64>() {
                Ok(0.0) => Ok(ExtFloat::ZERO),
                _ => Err(err()),
            };
        };
        let m: f64 = mantissa.parse().map_err(|_| err())?;
        let d: i64 = exponent.parse().map_err(|_| err())?;
        if m == 0.0 {
            return Ok(ExtFloat::ZERO);
        }
        let ln = m.abs().ln() + d as f64 * std::f64::consts::LN_10;
        Ok(ExtFloat::from_ln(ln, m < 0.0))
    }
}

impl Serialize for ExtFloat {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_sci_string())
    }
}

impl<'de> Deserialize<'de> for ExtFloat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
