//! `mu_f(r) = r f'(r) / f(r)`, `sigma_f(r) = r mu_f'(r)` and the saddle
//! equation `k = n mu_f(r)`.

use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::series::{Scalar, TruncatedSeries};
use crate::series_spec::SeriesSpec;

/// Relative size of the last known term of a truncated series beyond which
/// float evaluation is refused.
pub const TAIL_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaddlePoint {
    pub r: f64,
    pub mu: f64,
    pub sigma: f64,
    /// `n sigma / 2`.
    pub lambda_sq: f64,
    pub lambda: f64,
    pub n: u64,
    pub k: f64,
}

impl SaddlePoint {
    /// `|n mu - k|`.
    pub fn residual(&self) -> f64 {
        (self.n as f64 * self.mu - self.k).abs()
    }
}

pub(crate) fn check_domain(f: &SeriesSpec, r: f64) -> Result<f64> {
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::invalid(format!(
            "radius {r} must be positive and finite"
        )));
    }
    let fr = f.eval(r);
    if fr <= 0.0 {
        return Err(Error::invalid(format!(
            "f({r}) = {fr} is not positive; r is outside the positivity domain"
        )));
    }
    if let Some(last) = f.terms().last().filter(|_| !f.is_polynomial()) {
        let tail = rational::to_f64(&last.coeff).abs() * r.powi(last.exponent as i32);
        if tail > TAIL_TOLERANCE * fr {
            return Err(Error::refused(format!(
                "r = {r} is too large for a series known only through degree {}",
                f.truncation_degree().unwrap_or_default()
            )));
        }
    }
    Ok(fr)
}

/// `(mu_f(r), sigma_f(r))` in floating point.
///
/// `sigma f(r)^2` is accumulated as `sum_{i<j} (e_i - e_j)^2 c_i c_j r^{e_i + e_j}`
/// over all terms including the constant, which avoids the cancellation in
/// `f''`-based formulas when all coefficients are positive.
pub fn mu_sigma(f: &SeriesSpec, r: f64) -> Result<(f64, f64)> {
    let fr = check_domain(f, r)?;
    let terms: Vec<(f64, f64)> = std::iter::once((0.0, 1.0))
        .chain(
            f.float_terms()
                .map(|(e, c)| (e as f64, c * r.powi(e as i32))),
        )
        .collect();
    let s1: f64 = terms.iter().map(|(e, w)| e * w).sum();
    let mut var = 0.0;
    for (i, (ei, wi)) in terms.iter().enumerate() {
        for (ej, wj) in &terms[i + 1..] {
            var += (ei - ej) * (ei - ej) * wi * wj;
        }
    }
    Ok((s1 / fr, var / (fr * fr)))
}

/// Exact `(mu_f(r), sigma_f(r))` for a polynomial and rational `r`.
pub fn mu_sigma_exact(f: &SeriesSpec, r: &Rational) -> Result<(Rational, Rational)> {
    if !f.is_polynomial() {
        return Err(Error::invalid(
            "exact evaluation needs a polynomial; use the float path for truncated series",
        ));
    }
    let fr = f.eval_exact(r);
    if fr <= rational::int(0) {
        return Err(Error::invalid(format!("f({r}) = {fr} is not positive")));
    }
    let mut s1 = rational::int(0);
    let mut s2 = rational::int(0);
    for t in f.terms() {
        let w = &t.coeff * rational::pow(r, t.exponent as i64);
        let e = rational::int(t.exponent as i64);
        s1 += &e * &w;
        s2 += &e * &e * &w;
    }
    let mu = &s1 / &fr;
    let sigma = &s2 / &fr - &mu * &mu;
    Ok((mu, sigma))
}

/// The power series of `mu_f(r)` in `r`, to the given order.
pub fn mu_series<S: Scalar>(f: &SeriesSpec, order: usize) -> Result<TruncatedSeries<S>> {
    let fs = f.to_series::<S>(order);
    let num = TruncatedSeries::from_terms(
        order,
        f.terms().iter().map(|t| {
            (
                t.exponent as usize,
                S::from_rational(&t.coeff) * S::from_int(t.exponent as i64),
            )
        }),
    );
    Ok(num.div(&fs)?.with_var("r"))
}

/// Solve `n mu_f(r) = k` for `r > 0`.
///
/// Brackets the root using the small-`r` law `mu ~ l f^(l) r^l`, then runs
/// Newton steps in `log r` (where `d mu / d log r = sigma`), falling back to
/// bisection whenever a step leaves the bracket. Stops once
/// `|n mu - k| <= max(1e-12 k, 1e-15)`.
pub fn solve_saddle(f: &SeriesSpec, n: u64, k: f64) -> Result<SaddlePoint> {
    if n == 0 {
        return Err(Error::invalid("n must be positive"));
    }
    let Some(first) = f.terms().first() else {
        return Err(Error::invalid("f is constant; mu_f vanishes identically"));
    };
    let nf = n as f64;
    let target = k / nf;
    let sup = if f.is_polynomial() {
        f.degree() as f64
    } else {
        f64::INFINITY
    };
    if !(k.is_finite() && target > 0.0 && target < sup) {
        return Err(Error::OutOfRange {
            what: "k/n",
            value: target,
            lo: 0.0,
            hi: sup,
        });
    }
    let tol = (1e-12 * k).max(1e-15);
    let mu_at = |r: f64| mu_sigma(f, r).map(|(m, _)| m);

    let lead = first.exponent as f64 * f.coeff_f64(first.exponent);
    let guess = if lead > 0.0 {
        (target / lead).powf(1.0 / first.exponent as f64)
    } else {
        1.0
    };
    let mut lo = guess * 0.5;
    let mut iters = 0;
    loop {
        match mu_at(lo) {
            Ok(m) if m < target => break,
            Ok(_) | Err(Error::Refused(_)) => lo *= 0.5,
            Err(e) => return Err(e),
        }
        iters += 1;
        if iters > 2000 || lo == 0.0 {
            return Err(Error::invariant(
                "could not bracket the saddle point from below",
            ));
        }
    }
    let mut hi = lo * 2.0;
    loop {
        match mu_at(hi) {
            Ok(m) if m >= target => break,
            Ok(_) => {
                lo = hi;
                hi *= 2.0;
            }
            Err(Error::Refused(_) | Error::InvalidInput(_)) => {
                // the trusted domain ends inside (lo, hi); find its edge
                let (mut ok, mut bad) = (lo, hi);
                for _ in 0..80 {
                    let mid = 0.5 * (ok + bad);
                    if mu_at(mid).is_ok() {
                        ok = mid;
                    } else {
                        bad = mid;
                    }
                }
                let reach = mu_at(ok)?;
                if reach < target {
                    return Err(Error::OutOfRange {
                        what: "k/n",
                        value: target,
                        lo: 0.0,
                        hi: reach,
                    });
                }
                hi = ok;
                break;
            }
            Err(e) => return Err(e),
        }
        iters += 1;
        if iters > 4000 || !hi.is_finite() {
            return Err(Error::invariant(
                "could not bracket the saddle point from above",
            ));
        }
    }

    let (mut ulo, mut uhi) = (lo.ln(), hi.ln());
    let mut u = 0.5 * (ulo + uhi);
    let mut converged_once = false;
    for _ in 0..300 {
        let (mu, sigma) = mu_sigma(f, u.exp())?;
        let resid = nf * mu - k;
        if resid.abs() <= tol {
            if converged_once {
                break;
            }
            converged_once = true;
        }
        if resid > 0.0 {
            uhi = u;
        } else {
            ulo = u;
        }
        let step = (mu - target) / sigma;
        let next = u - step;
        u = if sigma > 0.0 && next.is_finite() && next > ulo && next < uhi {
            next
        } else {
            0.5 * (ulo + uhi)
        };
        if uhi - ulo <= 1e-16 * u.abs().max(1.0) && converged_once {
            break;
        }
    }
    let r = u.exp();
    let (mu, sigma) = mu_sigma(f, r)?;
    let point = SaddlePoint {
        r,
        mu,
        sigma,
        lambda_sq: nf * sigma / 2.0,
        lambda: (nf * sigma / 2.0).sqrt(),
        n,
        k,
    };
    if point.residual() > tol {
        return Err(Error::invariant(format!(
            "saddle solver stalled with |n mu - k| = {:e}",
            point.residual()
        )));
    }
    if sigma <= 0.0 {
        return Err(Error::invariant(format!(
            "sigma_f({r}) = {sigma} is not positive"
        )));
    }
    Ok(point)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn cubic() -> SeriesSpec {
        SeriesSpec::new(vec![(3, ratio(1, 3))]).unwrap()
    }

    #[test]
    fn mu_of_single_cubic_term() {
        let f = cubic();
        let r = ratio(2, 5);
        let (mu, _) = mu_sigma_exact(&f, &r).unwrap();
        let r3 = rational::pow(&r, 3);
        assert_eq!(mu, int(3) * &r3 / (int(3) + &r3));
        let (muf, _) = mu_sigma(&f, 0.4).unwrap();
        assert!((muf - 3.0 * 0.064 / 3.064).abs() < 1e-15);
    }

    #[test]
    fn sigma_is_log_derivative_of_mu() {
        let f = SeriesSpec::new(vec![(3, ratio(1, 3)), (4, int(1))]).unwrap();
        let r = 0.37;
        let h: f64 = 1e-5;
        let (_, sigma) = mu_sigma(&f, r).unwrap();
        let (mp, _) = mu_sigma(&f, r * h.exp()).unwrap();
        let (mm, _) = mu_sigma(&f, r * (-h).exp()).unwrap();
        assert!(((mp - mm) / (2.0 * h) - sigma).abs() < 1e-9);
    }

    #[test]
    fn exact_and_float_paths_agree() {
        let f = SeriesSpec::new(vec![(9, ratio(1, 9)), (15, int(1)), (25, int(1))]).unwrap();
        let (mu_q, sigma_q) = mu_sigma_exact(&f, &ratio(1, 2)).unwrap();
        let (mu, sigma) = mu_sigma(&f, 0.5).unwrap();
        assert!((rational::to_f64(&mu_q) - mu).abs() < 1e-12 * mu);
        assert!((rational::to_f64(&sigma_q) - sigma).abs() < 1e-12 * sigma);
    }

    #[test]
    fn rejects_outside_positivity() {
        let f = SeriesSpec::new(vec![(1, int(-1))]).unwrap();
        assert!(mu_sigma(&f, 2.0).is_err());
        assert!(mu_sigma(&f, 0.0).is_err());
        assert!(mu_sigma_exact(&f, &int(2)).is_err());
    }

    #[test]
    fn round_trip_radius() {
        let f = cubic();
        let mu = 3.0 * 0.125 / 3.125;
        let p = solve_saddle(&f, 8, 8.0 * mu).unwrap();
        assert!((p.r - 0.5).abs() < 1e-13);
        assert!((p.lambda * p.lambda - p.lambda_sq).abs() <= 1e-15 * p.lambda_sq);
    }

    #[test]
    fn out_of_range_reports_interval() {
        let f = cubic();
        match solve_saddle(&f, 10, 30.0) {
            Err(Error::OutOfRange { lo, hi, .. }) => assert_eq!((lo, hi), (0.0, 3.0)),
            other => panic!("unexpected {other:?}"),
        }
        assert!(solve_saddle(&f, 10, 0.0).is_err());
        assert!(solve_saddle(&f, 0, 1.0).is_err());
    }

    #[test]
    fn truncated_series_refuses_large_radius() {
        // exp(z) through degree 30
        let mut terms = Vec::new();
        let mut fact = int(1);
        for e in 1..=30u64 {
            fact *= int(e as i64);
            terms.push((e, fact.recip()));
        }
        let f = SeriesSpec::truncated(terms, 30).unwrap();
        let (mu, _) = mu_sigma(&f, 1.0).unwrap();
        assert!((mu - 1.0).abs() < 1e-12);
        assert!(matches!(mu_sigma(&f, 20.0), Err(Error::Refused(_))));
        assert!(matches!(
            solve_saddle(&f, 1, 50.0),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn mu_series_matches_direct_quotient() {
        let f = SeriesSpec::new(vec![(3, ratio(1, 3)), (4, int(2))]).unwrap();
        let mu = mu_series::<Rational>(&f, 10).unwrap();
        assert_eq!(*mu.coeff(3), int(1));
        assert_eq!(*mu.coeff(4), int(8));
        let r = ratio(1, 100);
        let (mu_q, _) = mu_sigma_exact(&f, &r).unwrap();
        let approx = mu.eval(&r);
        assert!(rational::to_f64(&((mu_q - approx) / rational::pow(&r, 11))).abs() < 1e3);
    }
}
