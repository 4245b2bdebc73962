//! Ground truth for the asymptotic estimates: exact coefficients of `f^n`,
//! trapezoidal quadrature of Cauchy's integral, and the secondary maxima of
//! `theta -> |f(r e^{i theta})|`.

use std::f64::consts::{PI, TAU};
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::profile::analyze;
use crate::rational::{self, Rational, SignedLog};
use crate::saddle::check_domain;
use crate::series_spec::SeriesSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExactMethod {
    /// Binary exponentiation of `f` truncated at degree `k`.
    PowerTruncate,
    /// `P = f^n` satisfies `z f P' = n z f' P`; one sparse pass per coefficient.
    /// Cheap when `n` is huge and `k` moderate.
    Recurrence,
    /// Sum over multinomial index vectors. Only for tiny instances.
    Multinomial,
}

impl fmt::Display for ExactMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExactMethod::PowerTruncate => "power-truncate",
            ExactMethod::Recurrence => "recurrence",
            ExactMethod::Multinomial => "multinomial",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub exact: Rational,
    pub log: SignedLog,
    pub method: ExactMethod,
}

/// `[z^k] f(z)^n` exactly, by truncated binary exponentiation.
pub fn exact_coefficient(f: &SeriesSpec, n: u64, k: u64) -> Result<OracleResult> {
    exact_coefficient_with(f, n, k, ExactMethod::PowerTruncate)
}

pub fn exact_coefficient_with(
    f: &SeriesSpec,
    n: u64,
    k: u64,
    method: ExactMethod,
) -> Result<OracleResult> {
    if let Some(d) = f.truncation_degree() {
        if k > d {
            return Err(Error::invalid(format!(
                "k = {k} exceeds the truncation degree {d}; terms past it would change the coefficient"
            )));
        }
    }
    let exact = match method {
        ExactMethod::PowerTruncate => power_truncate(f, n, k),
        ExactMethod::Recurrence => recurrence(f, n, k),
        ExactMethod::Multinomial => multinomial(f, n, k),
    };
    Ok(OracleResult {
        log: SignedLog::from_rational(&exact),
        exact,
        method,
    })
}

fn power_truncate(f: &SeriesSpec, n: u64, k: u64) -> Rational {
    f.to_series::<Rational>(k as usize)
        .powi(n)
        .coeff(k as usize)
        .clone()
}

fn recurrence(f: &SeriesSpec, n: u64, k: u64) -> Rational {
    // j P_j = sum_e ((n + 1) e - j) f^(e) P_{j-e}
    let k = k as usize;
    let n1 = BigInt::from(n) + 1;
    let terms: Vec<(usize, &Rational)> = f
        .terms()
        .iter()
        .take_while(|t| t.exponent as usize <= k)
        .map(|t| (t.exponent as usize, &t.coeff))
        .collect();
    let mut p: Vec<Rational> = Vec::with_capacity(k + 1);
    p.push(rational::int(1));
    for j in 1..=k {
        let mut acc = Rational::zero();
        for &(e, c) in terms.iter().take_while(|(e, _)| *e <= j) {
            if p[j - e].is_zero() {
                continue;
            }
            let w = &n1 * BigInt::from(e) - BigInt::from(j);
            acc += c * &p[j - e] * Rational::from_integer(w);
        }
        p.push(acc / rational::int(j as i64));
    }
    p.swap_remove(k)
}

fn multinomial(f: &SeriesSpec, n: u64, k: u64) -> Rational {
    let terms: Vec<(u64, &Rational)> = f
        .terms()
        .iter()
        .filter(|t| t.exponent <= k)
        .map(|t| (t.exponent, &t.coeff))
        .collect();
    let mut total = Rational::zero();
    let mut counts = vec![0u64; terms.len()];
    enumerate(&terms, 0, k, n, &mut counts, &mut |counts| {
        let used: u64 = counts.iter().sum();
        // n! / ((n - used)! prod c_i!)
        let mut num = BigInt::one();
        for i in 0..used {
            num *= BigInt::from(n - i);
        }
        let mut den = BigInt::one();
        let mut weight = rational::int(1);
        for (&c, (_, a)) in counts.iter().zip(&terms) {
            for i in 2..=c {
                den *= BigInt::from(i);
            }
            weight *= rational::pow(a, c as i64);
        }
        total += Rational::new(num, den) * weight;
    });
    total
}

fn enumerate(
    terms: &[(u64, &Rational)],
    idx: usize,
    remaining: u64,
    budget: u64,
    counts: &mut Vec<u64>,
    visit: &mut dyn FnMut(&[u64]),
) {
    if remaining == 0 {
        visit(counts);
        return;
    }
    if idx == terms.len() {
        return;
    }
    let e = terms[idx].0;
    let max = (remaining / e).min(budget);
    for c in 0..=max {
        counts[idx] = c;
        enumerate(terms, idx + 1, remaining - c * e, budget - c, counts, visit);
    }
    counts[idx] = 0;
}

/// The trapezoidal mean of `(f(r e^{i theta}) / f(r))^n e^{-i k theta}` over
/// `q` nodes on `(-pi, pi]`. Equals `r^k f^n(k) / f(r)^n` up to quadrature error.
///
/// The complex log of the ratio is unwrapped by continuity outward from
/// `theta = 0` so that `n arg` is never reduced modulo `2 pi`.
pub fn scaled_contour_mean(f: &SeriesSpec, n: u64, k: f64, r: f64, q: usize) -> Result<f64> {
    check_domain(f, r)?;
    if q == 0 {
        return Err(Error::invalid("quadrature needs at least one node"));
    }
    let nf = n as f64;
    let node = |j: i64| -> (f64, Complex64) {
        let theta = TAU * j as f64 / q as f64;
        (theta, f.ratio_minus_one(r, theta))
    };
    let term = |theta: f64, log_ratio: Complex64| -> f64 {
        let phase = nf * log_ratio.im - k * theta;
        (nf * log_ratio.re).exp() * phase.cos()
    };
    let mut sum = 1.0;
    let half = (q / 2) as i64;
    for dir in [1i64, -1] {
        let mut prev_arg = 0.0;
        let last = if dir == 1 {
            half
        } else {
            (q as i64 - 1) - half
        };
        for step in 1..=last {
            let (theta, u) = node(dir * step);
            let w = Complex64::new(1.0, 0.0) + u;
            let ln_abs = 0.5 * (u.re * (2.0 + u.re) + u.im * u.im).ln_1p();
            let mut arg = w.im.atan2(w.re);
            arg += TAU * ((prev_arg - arg) / TAU).round();
            prev_arg = arg;
            let t = term(theta, Complex64::new(ln_abs, arg));
            if !t.is_finite() {
                return Err(Error::invariant(format!(
                    "quadrature term overflowed at theta = {theta}"
                )));
            }
            sum += t;
        }
    }
    Ok(sum / q as f64)
}

/// `[z^k] f(z)^n` from Cauchy's integral on the circle of radius `r`, in log space.
pub fn contour_coefficient(f: &SeriesSpec, n: u64, k: f64, r: f64, q: usize) -> Result<SignedLog> {
    if (q as f64) < 4.0 * k {
        return Err(Error::invalid(format!(
            "Q = {q} nodes cannot resolve e^(-ik theta) for k = {k}; need Q >= 4k"
        )));
    }
    let mean = scaled_contour_mean(f, n, k, r, q)?;
    let s = SignedLog::from_f64(mean);
    Ok(SignedLog {
        sign: s.sign,
        ln_abs: s.ln_abs + n as f64 * f.eval_minus_one(r).ln_1p() - k * r.ln(),
    })
}

/// Node count that rules out aliasing for a polynomial: `Q > max(k, n deg - k)`,
/// and at least `4k`.
pub fn alias_free_nodes(f: &SeriesSpec, n: u64, k: u64) -> usize {
    let top = if f.is_polynomial() { n * f.degree() } else { 0 };
    (4 * k).max(top + 1).max(16) as usize
}

pub const MAXIMA_SAMPLES: usize = 4096;

/// Local maxima of `theta -> |f(r e^{i theta})|` on `(0, pi]`.
#[derive(Debug, Clone, PartialEq)]
pub struct MaximaProfile {
    pub r: f64,
    pub thetas: Vec<f64>,
    /// `|f(r e^{i theta})| / f(r)` at each maximum.
    pub values: Vec<f64>,
    pub expected: u64,
    /// `thetas.len() == expected`; false means `r` is too large for the
    /// small-`r` picture to hold.
    pub count_ok: bool,
}

/// `d/dtheta log |f(r e^{i theta})| = -Im(z f'(z) / f(z))`.
fn log_modulus_slope(f: &SeriesSpec, r: f64, theta: f64) -> f64 {
    let w = Complex64::new(1.0, 0.0) + f.ratio_minus_one(r, theta);
    -(f.log_derivative_numerator(r, theta) / w).im
}

/// Finds maxima by sampling the slope on a uniform grid and bisecting each
/// `+ -> -` sign change. `theta = pi` is a stationary point by symmetry and
/// counts as a maximum when the slope approaching it is positive.
pub fn locate_maxima(f: &SeriesSpec, r: f64) -> Result<MaximaProfile> {
    let profile = analyze(f)?;
    if profile.gcd != 1 {
        return Err(Error::invalid(format!(
            "f is a series in z^{}; locate maxima of the reduced series",
            profile.gcd
        )));
    }
    check_domain(f, r)?;
    let h = PI / MAXIMA_SAMPLES as f64;
    let slope = |t: f64| log_modulus_slope(f, r, t);
    let mut thetas = Vec::new();
    let mut prev = slope(h);
    for i in 1..MAXIMA_SAMPLES - 1 {
        let (a, b) = (i as f64 * h, (i + 1) as f64 * h);
        let next = slope(b);
        if prev > 0.0 && next <= 0.0 {
            thetas.push(bisect_slope(&slope, a, b));
        }
        prev = next;
    }
    let near_pi = PI - h;
    if prev > 0.0 {
        if slope(PI - 0.5 * h) > 0.0 {
            thetas.push(PI);
        } else {
            thetas.push(bisect_slope(&slope, near_pi, PI - 0.5 * h));
        }
    }
    let values = thetas
        .iter()
        .map(|&t| (Complex64::new(1.0, 0.0) + f.ratio_minus_one(r, t)).norm())
        .collect();
    Ok(MaximaProfile {
        r,
        count_ok: thetas.len() as u64 == profile.m,
        thetas,
        values,
        expected: profile.m,
    })
}

fn bisect_slope(slope: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    while b - a > 1e-14 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        if slope(mid) > 0.0 {
            a = mid;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}

/// `max ln(|f(r e^{i theta})| / f(r))` over `samples` points of `[dtheta, 2 pi - dtheta]`.
/// Negative means `f` is strongly positive at `r` on that grid.
pub fn positivity_sweep(f: &SeriesSpec, r: f64, dtheta: f64, samples: usize) -> Result<f64> {
    check_domain(f, r)?;
    if !(dtheta > 0.0 && dtheta < PI) || samples < 2 {
        return Err(Error::invalid(
            "need 0 < dtheta < pi and at least two samples",
        ));
    }
    // |f(r e^{-i theta})| = |f(r e^{i theta})|, so (0, pi] suffices
    let step = (PI - dtheta) / (samples - 1) as f64;
    Ok((0..samples)
        .map(|i| {
            let t = dtheta + i as f64 * step;
            let u = f.ratio_minus_one(r, t);
            0.5 * (u.re * (2.0 + u.re) + u.im * u.im).ln_1p()
        })
        .fold(f64::NEG_INFINITY, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(terms: &[(u64, i64, i64)]) -> SeriesSpec {
        SeriesSpec::new(
            terms
                .iter()
                .map(|&(e, p, q)| (e, rational::ratio(p, q)))
                .collect(),
        )
        .unwrap()
    }

    fn ex1() -> SeriesSpec {
        spec(&[(3, 1, 3), (4, 1, 1)])
    }

    #[test]
    fn square_cross_term() {
        let c = exact_coefficient(&ex1(), 2, 7).unwrap();
        assert_eq!(c.exact, rational::ratio(2, 3));
    }

    #[test]
    fn all_methods_agree_on_cube() {
        let f = ex1();
        for k in 0..=12 {
            let a = exact_coefficient(&f, 3, k).unwrap().exact;
            for m in [ExactMethod::Recurrence, ExactMethod::Multinomial] {
                assert_eq!(
                    a,
                    exact_coefficient_with(&f, 3, k, m).unwrap().exact,
                    "k={k} {m}"
                );
            }
        }
        // 3v + 4w = 12 with v + w <= 3: only w = 3
        assert_eq!(
            exact_coefficient(&f, 3, 12).unwrap().exact,
            rational::int(1)
        );
    }

    #[test]
    fn binomials() {
        let f = spec(&[(1, 1, 1)]);
        for n in [1u64, 7, 30] {
            let mut b = BigInt::one();
            for k in 0..=n {
                let c = exact_coefficient(&f, n, k).unwrap().exact;
                assert_eq!(c, Rational::from_integer(b.clone()));
                b = b * BigInt::from(n - k) / BigInt::from(k + 1);
            }
        }
    }

    #[test]
    fn truncated_series_guard() {
        let f = SeriesSpec::truncated(vec![(2, rational::int(1))], 10).unwrap();
        assert!(exact_coefficient(&f, 5, 10).is_ok());
        assert!(exact_coefficient(&f, 5, 11).is_err());
    }

    #[test]
    fn contour_binomial() {
        let f = spec(&[(1, 1, 1)]);
        let c = contour_coefficient(&f, 10, 3.0, 0.5, 256).unwrap();
        assert!((c.ln_abs.exp() / 120.0 - 1.0).abs() < 1e-8);
        assert!(contour_coefficient(&f, 10, 3.0, 0.5, 11).is_err());
    }

    #[test]
    fn contour_large_n_stays_finite() {
        let f = ex1();
        let n = 50_625;
        let c = contour_coefficient(&f, n, 15.0, 1.0 / 15.0, alias_free_nodes(&f, n, 15));
        // Q would be ~200k; r chosen near the saddle keeps the integrand tame
        let exact = exact_coefficient_with(&f, n, 15, ExactMethod::Recurrence).unwrap();
        let c = c.unwrap();
        assert!((c.ln_abs - exact.log.ln_abs).abs() < 1e-8);
    }

    #[test]
    fn one_maximum_near_two_thirds_pi() {
        let p = locate_maxima(&ex1(), 0.05).unwrap();
        assert!(p.count_ok);
        assert!((p.thetas[0] - TAU / 3.0).abs() < 0.1);
        assert!(p.values[0] < 1.0);
    }

    #[test]
    fn even_l_has_maximum_at_pi() {
        let f = spec(&[(4, 1, 4), (5, 1, 1)]);
        let p = locate_maxima(&f, 0.05).unwrap();
        assert_eq!(p.thetas.len(), 2);
        assert_eq!(*p.thetas.last().unwrap(), PI);
    }

    #[test]
    fn sweep_below_one() {
        assert!(positivity_sweep(&ex1(), 0.1, 0.05, 2000).unwrap() < 0.0);
        // f^(l_1) < 0: |f| beats f(r) near 2 pi / 3
        let bad = spec(&[(3, 1, 3), (4, -1, 1)]);
        assert!(positivity_sweep(&bad, 0.1, 0.05, 2000).unwrap() > 0.0);
    }
}
