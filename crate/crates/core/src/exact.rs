//! Exact dyadic rationals `mantissa · 2^exp` for error-free accumulation of
//! floating-point data.

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::extfloat::{frexp, ExtFloat};

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn zero() -> Self {
        Self { mant: BigInt::zero(), exp: 0 }
    }

    pub fn from_f64(x: f64) -> Self {
        assert!(x.is_finite(), "non-finite value {x}");
        if x == 0.0 {
            return Self::zero();
        }
        let (m, e) = frexp(x);
        let int = (m * (1u64 << 53) as f64) as i64;
        Self { mant: BigInt::from(int), exp: e - 53 }.normalized()
    }

    pub fn from_ext(x: ExtFloat) -> Self {
        let (m, e) = x.parts();
        let mut d = Self::from_f64(m);
        if !d.mant.is_zero() {
            d.exp += e;
        }
        d
    }

    pub fn from_i64(x: i64) -> Self {
        Self { mant: BigInt::from(x), exp: 0 }.normalized()
    }

    fn normalized(mut self) -> Self {
        if self.mant.is_zero() {
            self.exp = 0;
            return self;
        }
        let tz = self.mant.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.mant >>= tz;
            self.exp += tz as i64;
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    /// Nearest-ish `ExtFloat` of `self / other` (relative error ~1e-16).
    pub fn ratio(&self, other: &Dyadic) -> ExtFloat {
        assert!(!other.is_zero(), "division by zero");
        if self.is_zero() {
            return ExtFloat::ZERO;
        }
        // shift so the integer quotient carries at least 64 significant bits
        let shift = other.mant.bits() as i64 - self.mant.bits() as i64 + 64;
        let num = if shift > 0 { &self.mant << (shift as u64) } else { self.mant.clone() };
        let q = num / &other.mant;
        let qbits = q.bits() as i64;
        let drop = (qbits - 60).max(0);
        let top = (&q >> (drop as u64)).to_f64().expect("quotient fits f64");
        ExtFloat::from_f64(top) * ExtFloat::pow2(drop + self.exp - other.exp - shift.max(0))
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(rhs.exp);
        let a = &self.mant << ((self.exp - e) as u64);
        let b = &rhs.mant << ((rhs.exp - e) as u64);
        Dyadic { mant: a + b, exp: e }.normalized()
    }
}

impl Add for Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: Dyadic) -> Dyadic {
        &self + &rhs
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { mant: -self.mant, exp: self.exp }
    }
}

impl Sub for &Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        self + &(-rhs.clone())
    }
}

impl Mul for &Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &Dyadic) -> Dyadic {
        Dyadic { mant: &self.mant * &rhs.mant, exp: self.exp + rhs.exp }.normalized()
    }
}

impl Mul for Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: Dyadic) -> Dyadic {
        &self * &rhs
    }
}

impl std::iter::Sum for Dyadic {
    fn sum<I: Iterator<Item = Dyadic>>(iter: I) -> Dyadic {
        iter.fold(Dyadic::zero(), |acc, x| &acc + &x)
    }
}
