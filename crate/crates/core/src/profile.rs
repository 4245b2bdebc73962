//! Exponent profile of `f`: which secondary maxima of `|f(r e^{i theta})|`
//! exist near `theta_j = 2 pi j / l` and how fast they decay.
//!
//! Everything here is computed on the gcd-reduced exponent set. With
//! `L = {k > 0 : f^(k) != 0}` and `d = gcd L`, we write `f(z) = g(z^d)` and
//! work with `g`; `f^(dk) = g^(k)`.
//!
//! For `l = min L` (after reduction) and `m = floor(l / 2)`:
//!
//! - `l_j  = min { k in L : j k  != 0 mod l }`, `1 <= j <= m`,
//! - `l'_j = min { k in L : 2 j k != 0 mod l }`, `1 <= j < l / 2`,
//! - `eps0 = max_j (1 - l / l_j)`.
//!
//! `f` is strongly positive at all small `r` iff `f^(l_j) > 0` for
//! `0 <= j <= m` (with `l_0 = l`).

use std::f64::consts::TAU;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::series_spec::SeriesSpec;

/// The angle `2 pi num / den`, kept exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Angle {
    pub num: u64,
    pub den: u64,
}

impl Angle {
    pub fn new(num: u64, den: u64) -> Self {
        Angle {
            num: num % den,
            den,
        }
    }

    /// `k` times this angle, reduced modulo a full turn.
    pub fn times(&self, k: u64) -> Self {
        let num = ((self.num as u128 * k as u128) % self.den as u128) as u64;
        Angle { num, den: self.den }
    }

    /// Radians in `[0, 2 pi)`.
    pub fn radians(&self) -> f64 {
        TAU * self.num as f64 / self.den as f64
    }

    pub fn cos(&self) -> f64 {
        self.radians().cos()
    }

    pub fn sin(&self) -> f64 {
        self.radians().sin()
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = self.num.gcd(&self.den).max(1);
        write!(f, "2pi*{}/{}", self.num / g, self.den / g)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExponentProfile {
    /// gcd of the support of the original series.
    pub gcd: u64,
    /// The series with exponents divided by `gcd`.
    pub reduced: SeriesSpec,
    pub l: u64,
    pub m: u64,
    /// `l_1 .. l_m`; `None` when the minimum could lie past the truncation degree.
    pub lj: Vec<Option<u64>>,
    /// `l'_j` for `1 <= j < l/2`.
    pub lj_prime: Vec<Option<u64>>,
    /// `theta_1 .. theta_m`.
    pub thetas: Vec<Angle>,
    /// `None` when `m = 0` or some `l_j` is undetermined.
    pub eps0: Option<Rational>,
    pub strongly_positive: bool,
}

impl ExponentProfile {
    /// `l = 1`: no secondary maxima, the correction factor is identically 1.
    pub fn is_degenerate(&self) -> bool {
        self.l == 1
    }

    /// All `l_j`, failing if any is undetermined.
    pub fn lj_determined(&self) -> Result<Vec<u64>> {
        self.lj
            .iter()
            .enumerate()
            .map(|(i, v)| {
                v.ok_or_else(|| {
                    Error::refused(format!(
                        "l_{} is not determined within the truncation degree",
                        i + 1
                    ))
                })
            })
            .collect()
    }

    /// `f^(l_j)` of the reduced series, `j = 0..=m` (`l_0 = l`).
    pub fn leading_coefficients(&self) -> Vec<Option<Rational>> {
        std::iter::once(Some(self.l))
            .chain(self.lj.iter().copied())
            .map(|e| e.map(|e| self.reduced.coeff(e)))
            .collect()
    }
}

/// Exponent profile of `f`. Fails only for the constant series.
pub fn analyze(f: &SeriesSpec) -> Result<ExponentProfile> {
    let support = f.support();
    if support.is_empty() {
        return Err(Error::invalid(
            "f has no terms beyond the constant, so L(f) is empty",
        ));
    }
    let d = support.iter().fold(0u64, |acc, &e| acc.gcd(&e));
    let reduced = f.reduce_by(d)?;
    let exps = reduced.support();
    let l = exps[0];
    let m = l / 2;

    let first_with = |pred: &dyn Fn(u64) -> bool| -> Option<u64> {
        // a minimum found among listed exponents is final: everything up
        // to the truncation degree is known
        exps.iter().copied().find(|&k| pred(k))
    };

    let lj: Vec<Option<u64>> = (1..=m).map(|j| first_with(&|k| (j * k) % l != 0)).collect();
    let n_prime = if l > 2 { l.div_ceil(2) - 1 } else { 0 };
    let lj_prime: Vec<Option<u64>> = (1..=n_prime)
        .map(|j| first_with(&|k| (2 * j * k) % l != 0))
        .collect();
    let thetas = (1..=m).map(|j| Angle::new(j, l)).collect();

    let eps0 = if m == 0 || lj.iter().any(Option::is_none) {
        None
    } else {
        lj.iter()
            .map(|v| rational::int(1) - rational::ratio(l as i64, v.unwrap() as i64))
            .max()
    };

    let strongly_positive = std::iter::once(Some(l))
        .chain(lj.iter().copied())
        .all(|e| e.is_some_and(|e| reduced.coeff(e).is_positive()));

    Ok(ExponentProfile {
        gcd: d,
        reduced,
        l,
        m,
        lj,
        lj_prime,
        thetas,
        eps0,
        strongly_positive,
    })
}

/// Result of rescaling `z -> a z` so that `l g^(l) = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Normalization {
    /// `a = (l f^(l))^{-1/l}`.
    pub scale: f64,
    /// `a` as a rational, when `l f^(l)` is an exact `l`-th power.
    pub exact_scale: Option<Rational>,
    /// `g(z) = f(a z)`. When `a` is irrational the coefficients other than
    /// `g^(l) = 1/l` are the exact rational values of their `f64` approximations.
    pub spec: SeriesSpec,
}

/// Rescale `f` itself (not its gcd-reduced form) so that its lowest term
/// becomes `z^l / l`.
pub fn normalize(f: &SeriesSpec) -> Result<Normalization> {
    let g = f;
    let Some(l) = f.terms().first().map(|t| t.exponent) else {
        return Err(Error::invalid(
            "f has no terms beyond the constant, so L(f) is empty",
        ));
    };
    let lead = g.coeff(l);
    if !lead.is_positive() {
        return Err(Error::invalid(format!(
            "f^({l}) = {lead} is not positive, so f is not strongly positive at small r"
        )));
    }
    let q = &lead * rational::int(l as i64);
    let exact_scale = rational::exact_root(&q, l as u32).map(|root| root.recip());
    let scale = rational::to_f64(&q).powf(-1.0 / l as f64);
    let spec = match &exact_scale {
        Some(a) => g.rescale(a)?,
        None => {
            let terms = g
                .terms()
                .iter()
                .map(|t| {
                    let c = if t.exponent == l {
                        rational::ratio(1, l as i64)
                    } else {
                        let v = rational::to_f64(&t.coeff) * scale.powi(t.exponent as i32);
                        rational::from_f64(v).ok_or_else(|| {
                            Error::invariant("non-finite coefficient after rescaling")
                        })?
                    };
                    Ok((t.exponent, c))
                })
                .collect::<Result<Vec<_>>>()?;
            match g.truncation_degree() {
                Some(d) => SeriesSpec::truncated(terms, d)?,
                None => SeriesSpec::new(terms)?,
            }
        }
    };
    debug_assert!((spec.coeff(l) * rational::int(l as i64)).is_one());
    Ok(Normalization {
        scale,
        exact_scale,
        spec,
    })
}

/// The limit `gamma_j` coefficient `g^(l_j)` of the normalized series,
/// computed without forming the normalized series.
pub fn normalized_coeff(profile: &ExponentProfile, exponent: u64) -> f64 {
    let g = &profile.reduced;
    let lead = g.coeff_f64(profile.l) * profile.l as f64;
    g.coeff_f64(exponent) * lead.powf(-(exponent as f64) / profile.l as f64)
}

impl fmt::Display for ExponentProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: &Option<u64>| v.map_or("undetermined".to_string(), |x| x.to_string());
        writeln!(f, "gcd = {}", self.gcd)?;
        writeln!(f, "l = {}", self.l)?;
        writeln!(f, "m = {}", self.m)?;
        for (j, v) in self.lj.iter().enumerate() {
            writeln!(f, "l_{} = {}  (theta = {})", j + 1, show(v), self.thetas[j])?;
        }
        for (j, v) in self.lj_prime.iter().enumerate() {
            writeln!(f, "l'_{} = {}", j + 1, show(v))?;
        }
        match &self.eps0 {
            Some(e) => writeln!(f, "eps0 = {e}")?,
            None => writeln!(f, "eps0 = undefined")?,
        }
        write!(
            f,
            "strongly positive at small r = {}",
            self.strongly_positive
        )
    }
}
