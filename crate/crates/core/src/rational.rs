//! Exact rational helpers on top of `num-rational`.
//!
//! `BigRational` keeps numerator and denominator coprime with a positive
//! denominator after every operation, which is the invariant the rest of the
//! crate relies on.

use std::f64::consts::LN_2;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = num_rational::BigRational;

/// Sign and natural log of the magnitude of a real number, for values that
/// over- or underflow `f64`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignedLog {
    /// -1, 0 or 1.
    pub sign: i8,
    /// `ln |x|`; `-inf` when `sign == 0`.
    pub ln_abs: f64,
}

impl SignedLog {
    pub const ZERO: SignedLog = SignedLog {
        sign: 0,
        ln_abs: f64::NEG_INFINITY,
    };

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            SignedLog {
                sign: if x > 0.0 { 1 } else { -1 },
                ln_abs: x.abs().ln(),
            }
        }
    }

    pub fn from_rational(q: &Rational) -> Self {
        if q.is_zero() {
            return Self::ZERO;
        }
        SignedLog {
            sign: if q.is_negative() { -1 } else { 1 },
            ln_abs: ln_biguint(q.numer().magnitude()) - ln_biguint(q.denom().magnitude()),
        }
    }

    /// `self / other` as a plain float; meaningful when the two are close.
    pub fn ratio(&self, other: &SignedLog) -> f64 {
        if self.sign == 0 {
            return 0.0;
        }
        f64::from(self.sign * other.sign) * (self.ln_abs - other.ln_abs).exp()
    }
}

/// `ln x` for a positive big integer, accurate to f64 precision at any size.
pub fn ln_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().expect("64-bit value fits f64");
    top.ln() + shift as f64 * LN_2
}

pub fn to_f64(q: &Rational) -> f64 {
    if let Some(v) = q.to_f64() {
        if v.is_finite() && (v != 0.0 || q.is_zero()) {
            return v;
        }
    }
    let s = SignedLog::from_rational(q);
    f64::from(s.sign) * s.ln_abs.exp()
}

/// Exact conversion of a finite float (every finite f64 is a dyadic rational).
pub fn from_f64(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Exact `q^e` for a (possibly negative) integer exponent.
pub fn pow(q: &Rational, e: i64) -> Rational {
    if e >= 0 {
        num_traits::pow(q.clone(), e as usize)
    } else {
        num_traits::pow(q.recip(), e.unsigned_abs() as usize)
    }
}

/// The rational `l`-th root of a positive rational, when it exists.
pub fn exact_root(q: &Rational, l: u32) -> Option<Rational> {
    if !q.is_positive() || l == 0 {
        return None;
    }
    let root_of = |x: &BigInt| -> Option<BigInt> {
        let r = x.magnitude().nth_root(l);
        (num_traits::pow(r.clone(), l as usize) == *x.magnitude())
            .then(|| BigInt::from_biguint(Sign::Plus, r))
    };
    Some(Rational::new(root_of(q.numer())?, root_of(q.denom())?))
}

pub fn is_one(q: &Rational) -> bool {
    q.is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_of_huge_rational() {
        let big = num_traits::pow(BigInt::from(3), 2000);
        let q = Rational::new(big, BigInt::from(7));
        let s = SignedLog::from_rational(&q);
        let expected = 2000.0 * 3f64.ln() - 7f64.ln();
        assert_eq!(s.sign, 1);
        assert!((s.ln_abs - expected).abs() < 1e-12 * expected);
    }

    #[test]
    fn roots() {
        assert_eq!(exact_root(&ratio(8, 27), 3), Some(ratio(2, 3)));
        assert_eq!(exact_root(&int(3), 3), None);
        assert_eq!(exact_root(&int(1), 5), Some(int(1)));
    }

    #[test]
    fn negative_powers() {
        assert_eq!(pow(&ratio(2, 3), -2), ratio(9, 4));
        assert_eq!(pow(&ratio(2, 3), 0), int(1));
    }
}
