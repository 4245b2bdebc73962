//! Dense truncated power series over exact rationals or `f64`.
//!
//! A [`TruncatedSeries`] of order `M` holds exactly `M + 1` coefficients and
//! represents `c_0 + c_1 z + ... + c_M z^M + O(z^{M+1})`. Binary operations
//! return the smaller of the two orders; nothing is read or written past it.
//!
//! The coefficient flavor is a type parameter, so mixing flavors is rejected
//! at compile time rather than at run time.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flavor {
    Exact,
    Float,
}

/// Coefficient field of a series.
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Send
    + Sync
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> Div<&'a Self, Output = Self>
{
    const FLAVOR: Flavor;

    fn from_rational(q: &Rational) -> Self;

    fn to_f64(&self) -> f64;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rational(&rational::ratio(num, den))
    }

    fn from_int(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }
}

impl Scalar for Rational {
    const FLAVOR: Flavor = Flavor::Exact;

    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }

    fn to_f64(&self) -> f64 {
        rational::to_f64(self)
    }
}

impl Scalar for f64 {
    const FLAVOR: Flavor = Flavor::Float;

    fn from_rational(q: &Rational) -> Self {
        rational::to_f64(q)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries<S> {
    coeffs: Vec<S>,
    var: &'static str,
}

pub type ExactSeries = TruncatedSeries<Rational>;
pub type FloatSeries = TruncatedSeries<f64>;

impl<S: Scalar> TruncatedSeries<S> {
    /// Series from its coefficients; the order is `coeffs.len() - 1`.
    pub fn from_coeffs(coeffs: Vec<S>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::invalid("a series needs at least one coefficient"));
        }
        Ok(Self { coeffs, var: "z" })
    }

    /// Sparse constructor: `(degree, coefficient)` pairs, degrees above
    /// `order` are dropped.
    pub fn from_terms(order: usize, terms: impl IntoIterator<Item = (usize, S)>) -> Self {
        let mut s = Self::zero(order);
        for (d, c) in terms {
            if d <= order {
                s.coeffs[d] = s.coeffs[d].clone() + c;
            }
        }
        s
    }

    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![S::zero(); order + 1],
            var: "z",
        }
    }

    pub fn constant(c: S, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    pub fn one(order: usize) -> Self {
        Self::constant(S::one(), order)
    }

    /// The series `z` (zero when `order == 0`).
    pub fn variable(order: usize) -> Self {
        Self::from_terms(order, [(1, S::one())])
    }

    pub fn with_var(mut self, var: &'static str) -> Self {
        self.var = var;
        self
    }

    pub fn var(&self) -> &'static str {
        self.var
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<S> {
        self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &S {
        &self.coeffs[i]
    }

    pub fn constant_term(&self) -> &S {
        &self.coeffs[0]
    }

    /// Restrict to a lower order.
    pub fn truncate(&self, order: usize) -> Result<Self> {
        if order > self.order() {
            return Err(Error::invalid(format!(
                "cannot extend a series of order {} to order {order}",
                self.order()
            )));
        }
        Ok(Self {
            coeffs: self.coeffs[..=order].to_vec(),
            var: self.var,
        })
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> TruncatedSeries<T> {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(f).collect(),
            var: self.var,
        }
    }

    pub fn to_float(&self) -> FloatSeries {
        self.map(|c| c.to_f64())
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let coeffs = (0..=order)
            .map(|i| self.coeffs[i].clone() + &other.coeffs[i])
            .collect();
        Self {
            coeffs,
            var: self.var,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let coeffs = (0..=order)
            .map(|i| self.coeffs[i].clone() - &other.coeffs[i])
            .collect();
        Self {
            coeffs,
            var: self.var,
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        self.map(|a| a.clone() * c).with_var(self.var)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let mut out = vec![S::zero(); order + 1];
        for (i, a) in self.coeffs[..=order].iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=order - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = out[i + j].clone() + a.clone() * b;
                }
            }
        }
        Self {
            coeffs: out,
            var: self.var,
        }
    }

    /// `self^e` by binary exponentiation at the same order.
    pub fn powi(&self, mut e: u64) -> Self {
        let mut result = Self::one(self.order()).with_var(self.var);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Multiplicative inverse; the constant term must be nonzero.
    pub fn inverse(&self) -> Result<Self> {
        let a0 = &self.coeffs[0];
        if a0.is_zero() {
            return Err(Error::invalid(
                "series inverse requires a nonzero constant term",
            ));
        }
        let inv0 = S::one() / a0;
        let mut out: Vec<S> = Vec::with_capacity(self.coeffs.len());
        out.push(inv0.clone());
        for k in 1..=self.order() {
            let mut acc = S::zero();
            for j in 1..=k {
                let a = &self.coeffs[j];
                if !a.is_zero() {
                    acc = acc + a.clone() * &out[k - j];
                }
            }
            out.push(-(acc * &inv0));
        }
        Ok(Self {
            coeffs: out,
            var: self.var,
        })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inverse()?))
    }

    pub fn derivative(&self) -> Self {
        if self.order() == 0 {
            return Self::zero(0).with_var(self.var);
        }
        let coeffs = (1..=self.order())
            .map(|k| self.coeffs[k].clone() * S::from_int(k as i64))
            .collect();
        Self {
            coeffs,
            var: self.var,
        }
    }

    /// Divide by `z^s`; the first `s` coefficients must vanish.
    pub fn shift_down(&self, s: usize) -> Result<Self> {
        if s > self.order() {
            return Err(Error::invalid("shift exceeds the series order"));
        }
        if self.coeffs[..s].iter().any(|c| !c.is_zero()) {
            return Err(Error::invalid(format!(
                "series has nonzero coefficients below degree {s}"
            )));
        }
        Ok(Self {
            coeffs: self.coeffs[s..].to_vec(),
            var: self.var,
        })
    }

    /// Multiply by `z^s`; the order grows by `s`.
    pub fn shift_up(&self, s: usize) -> Self {
        let mut coeffs = vec![S::zero(); s];
        coeffs.extend(self.coeffs.iter().cloned());
        Self {
            coeffs,
            var: self.var,
        }
    }

    /// `exp(self)`; the constant term must be zero.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::invalid(
                "series exponential requires a zero constant term",
            ));
        }
        let mut out: Vec<S> = Vec::with_capacity(self.coeffs.len());
        out.push(S::one());
        for k in 1..=self.order() {
            let mut acc = S::zero();
            for j in 1..=k {
                let a = &self.coeffs[j];
                if !a.is_zero() {
                    acc = acc + a.clone() * S::from_int(j as i64) * &out[k - j];
                }
            }
            out.push(acc / S::from_int(k as i64));
        }
        Ok(Self {
            coeffs: out,
            var: self.var,
        })
    }

    /// `log(self)`; the constant term must be exactly one.
    pub fn log(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::invalid("series logarithm requires constant term 1"));
        }
        let mut out: Vec<S> = Vec::with_capacity(self.coeffs.len());
        out.push(S::zero());
        for k in 1..=self.order() {
            let mut acc = S::zero();
            for j in 1..k {
                let a = &self.coeffs[k - j];
                if !a.is_zero() && !out[j].is_zero() {
                    acc = acc + out[j].clone() * S::from_int(j as i64) * a;
                }
            }
            out.push(self.coeffs[k].clone() - acc / S::from_int(k as i64));
        }
        Ok(Self {
            coeffs: out,
            var: self.var,
        })
    }

    /// `self^alpha` for a series with constant term one, any scalar exponent.
    ///
    /// Uses the recurrence `k P_k = sum_j ((alpha + 1) j - k) a_j P_{k-j}`
    /// obtained from `a P' = alpha a' P`.
    pub fn pow_scalar(&self, alpha: &S) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::invalid(
                "real powers of a series require constant term 1",
            ));
        }
        let alpha1 = alpha.clone() + S::one();
        let mut out: Vec<S> = Vec::with_capacity(self.coeffs.len());
        out.push(S::one());
        for k in 1..=self.order() {
            let mut acc = S::zero();
            for j in 1..=k {
                let a = &self.coeffs[j];
                if a.is_zero() {
                    continue;
                }
                let w = alpha1.clone() * S::from_int(j as i64) - S::from_int(k as i64);
                acc = acc + w * a * &out[k - j];
            }
            out.push(acc / S::from_int(k as i64));
        }
        Ok(Self {
            coeffs: out,
            var: self.var,
        })
    }

    /// `self(inner(z))` for an inner series with zero constant term.
    ///
    /// The result has order `min(self.order(), inner.order())`.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::invalid(
                "composition requires an inner series with zero constant term",
            ));
        }
        let order = self.order().min(inner.order());
        let inner = inner.truncate(order)?;
        let mut acc = Self::constant(self.coeffs[order].clone(), order).with_var(inner.var);
        for i in (0..order).rev() {
            acc = acc.mul(&inner);
            acc.coeffs[0] = acc.coeffs[0].clone() + &self.coeffs[i];
        }
        Ok(acc)
    }

    /// Horner evaluation of the truncated polynomial.
    pub fn eval(&self, x: &S) -> S {
        self.coeffs
            .iter()
            .rev()
            .fold(S::zero(), |acc, c| acc * x + c)
    }
}

/// The series of `exp(rate * z)` to the given order.
pub fn exp_linear<S: Scalar>(rate: &S, order: usize) -> TruncatedSeries<S> {
    let mut coeffs = Vec::with_capacity(order + 1);
    let mut term = S::one();
    coeffs.push(term.clone());
    for p in 1..=order {
        term = term * rate / S::from_int(p as i64);
        coeffs.push(term.clone());
    }
    TruncatedSeries { coeffs, var: "z" }
}

/// Solve `mu(t * rho(t)) = t^l` for `rho` with `rho(0) = 1`.
///
/// `mu` must vanish below degree `l` and have coefficient exactly one at
/// degree `l`, and must be known to order at least `l + order`. The solution
/// is refined by Newton steps on `F(rho) = rho^l M(t rho) - 1`, where
/// `M = mu / r^l`; each step doubles the number of correct coefficients.
pub fn revert_saddle<S: Scalar>(
    mu: &TruncatedSeries<S>,
    l: usize,
    order: usize,
) -> Result<TruncatedSeries<S>> {
    if l == 0 {
        return Err(Error::invalid("the leading degree l must be positive"));
    }
    if mu.order() < l + order {
        return Err(Error::invalid(format!(
            "mu is known to order {} but reversion to order {order} needs order {}",
            mu.order(),
            l + order
        )));
    }
    if mu.coeffs[..l].iter().any(|c| !c.is_zero()) || !mu.coeffs[l].is_one() {
        return Err(Error::invalid(format!(
            "mu is not normalized: it must start with exactly 1 * r^{l}"
        )));
    }
    let tail = mu.shift_down(l)?.truncate(order)?;
    let tail_prime = tail.derivative();
    let l_s = S::from_int(l as i64);

    let mut rho = TruncatedSeries::<S>::one(order);
    let steps = usize::BITS - order.leading_zeros() + 1;
    for _ in 0..steps {
        let r = rho.shift_up(1).truncate(order)?;
        let m_at = tail.compose(&r)?;
        let rho_l1 = rho.powi(l as u64 - 1);
        let rho_l = rho_l1.mul(&rho);
        let f = rho_l.mul(&m_at).sub(&TruncatedSeries::one(order));
        if f.coeffs.iter().all(Zero::is_zero) {
            break;
        }
        // t * M'(t rho): M' is known one order lower, the factor t restores it
        let t_mprime_at = if order == 0 {
            TruncatedSeries::zero(0)
        } else {
            tail_prime.compose(&r)?.shift_up(1)
        };
        let df = rho_l1.mul(&m_at).scale(&l_s).add(&rho_l.mul(&t_mprime_at));
        rho = rho.sub(&f.div(&df)?);
    }
    Ok(rho.with_var("t"))
}

impl<S: Scalar> fmt::Display for TruncatedSeries<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*{}", self.var)?,
                _ => write!(f, "({c})*{}^{i}", self.var)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O({}^{})", self.var, self.order() + 1)
    }
}
