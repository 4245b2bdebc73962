//! The saddle-point estimate of `[z^k] f(z)^n`.
//!
//! With `r` solving `k = n mu_f(r)` the dominant term is
//! `f(r)^n / (r^k sqrt(2 pi n sigma))`. The secondary maxima of `|f|` near
//! `theta_j = 2 pi j / l` contribute the factor `1 + sum_j psi_j(s)`, with
//! `s = k mod l`:
//!
//! ```text
//! psi_j(s) = 2 exp(-gamma_j (1 - cos(l_j theta_j))) cos(s theta_j - gamma_j sin(l_j theta_j))
//! psi_m(s) = (-1)^s exp(-2 gamma_m)            (l even, j = m)
//! ```
//!
//! When `log k / log n` exceeds `eps0` the dominant term admits the
//! expansion `1 + c_1 / k + c_2 / k^2 + ...`.

use std::fmt;

use crate::error::{Error, Result};
use crate::profile::{analyze, normalized_coeff, ExponentProfile};
use crate::rational::{self, Rational};
use crate::saddle::{check_domain, solve_saddle, SaddlePoint};
use crate::series::{exp_linear, Scalar, TruncatedSeries};
use crate::series_spec::SeriesSpec;

/// Relative size below which `1 + sum psi_j` counts as zero.
pub const VANISH_RELATIVE: f64 = 1e-9;

/// Largest expansion order accepted by [`t0_coefficients`].
pub const MAX_EXPANSION: usize = 6;

/// `l_j` within this relative distance of `l / (1 - delta)` counts as on the
/// boundary when classifying limit decay rates.
pub const BOUNDARY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct CorrectionFactor {
    /// `gamma_1 .. gamma_m`; `f64::INFINITY` means the maximum is negligible.
    pub gammas: Vec<f64>,
    pub psis: Vec<f64>,
    pub s: u64,
    /// `1 + sum psi_j(s)`.
    pub total: f64,
    pub vanishes: bool,
}

impl CorrectionFactor {
    pub fn threshold(&self) -> f64 {
        VANISH_RELATIVE * (1.0 + self.psis.iter().map(|p| p.abs()).sum::<f64>())
    }
}

/// `gamma_j = f^(l_j) n r^{l_j}` for the reduced series at the saddle point.
///
/// The quantity is unchanged by the rescaling `z -> a z`, so `saddle` may be
/// solved for the reduced series directly.
pub fn gamma_finite(profile: &ExponentProfile, saddle: &SaddlePoint) -> Result<Vec<f64>> {
    let lj = profile.lj_determined()?;
    let ln_n = (saddle.n as f64).ln();
    let ln_r = saddle.r.ln();
    Ok(lj
        .iter()
        .map(|&e| {
            let c = profile.reduced.coeff_f64(e);
            c.signum() * (c.abs().ln() + ln_n + e as f64 * ln_r).exp()
        })
        .collect())
}

/// Limit decay rates for `k ~ n^delta`: `g^(l_j)` of the normalized series
/// when `l_j = l / (1 - delta)`, `0` when `l_j` is larger, infinite when smaller.
pub fn limit_gammas(profile: &ExponentProfile, delta: f64) -> Result<Vec<f64>> {
    let lj = profile.lj_determined()?;
    let boundary = if delta < 1.0 {
        profile.l as f64 / (1.0 - delta)
    } else {
        f64::INFINITY
    };
    Ok(lj
        .iter()
        .map(|&e| {
            let ef = e as f64;
            if (ef - boundary).abs() <= BOUNDARY_TOLERANCE * ef {
                normalized_coeff(profile, e)
            } else if ef > boundary {
                0.0
            } else {
                f64::INFINITY
            }
        })
        .collect())
}

/// The correction factor for residue `s`, given one `gamma` per secondary maximum.
pub fn psi(profile: &ExponentProfile, gammas: &[f64], s: u64) -> Result<CorrectionFactor> {
    if gammas.len() as u64 != profile.m {
        return Err(Error::invalid(format!(
            "expected {} gamma values, got {}",
            profile.m,
            gammas.len()
        )));
    }
    let lj = profile.lj_determined()?;
    let l = profile.l;
    let psis: Vec<f64> = gammas
        .iter()
        .enumerate()
        .map(|(i, &gamma)| {
            let j = i as u64 + 1;
            if gamma == f64::INFINITY {
                return 0.0;
            }
            if l.is_multiple_of(2) && j == profile.m {
                let sign = if s.is_multiple_of(2) { 1.0 } else { -1.0 };
                return sign * (-2.0 * gamma).exp();
            }
            let theta = profile.thetas[i];
            let lj_theta = theta.times(lj[i]);
            let decay = (-gamma * (1.0 - lj_theta.cos())).exp();
            let phase = theta.times(s).radians() - gamma * lj_theta.sin();
            2.0 * decay * phase.cos()
        })
        .collect();
    Ok(factor(gammas.to_vec(), psis, s))
}

fn factor(gammas: Vec<f64>, psis: Vec<f64>, s: u64) -> CorrectionFactor {
    let total = 1.0 + psis.iter().sum::<f64>();
    let mut cf = CorrectionFactor {
        gammas,
        psis,
        s,
        total,
        vanishes: false,
    };
    cf.vanishes = cf.total < cf.threshold();
    cf
}

/// The one-parameter family `g(s, t) = 1 + sum psi_j(s)` in which every
/// `l_j = u` has `gamma_j = t`, larger `l_j` have `gamma_j = 0` and smaller
/// ones `gamma_j = infinity`. Non-negative for all `t >= 0`.
#[derive(Debug, Clone)]
pub struct Prop9Family {
    profile: ExponentProfile,
    u: u64,
}

impl Prop9Family {
    pub fn new(exponents: &[u64], u: u64) -> Result<Self> {
        let terms = exponents
            .iter()
            .map(|&e| (e, rational::int(1)))
            .collect::<Vec<_>>();
        let mut sorted = terms;
        sorted.sort_by_key(|t| t.0);
        sorted.dedup_by_key(|t| t.0);
        let profile = analyze(&SeriesSpec::new(sorted)?)?;
        if profile.gcd != 1 {
            return Err(Error::invalid(format!(
                "exponent set has gcd {}, expected 1",
                profile.gcd
            )));
        }
        if profile.l < 2 {
            return Err(Error::invalid("min L must exceed 1"));
        }
        if !profile.lj.contains(&Some(u)) {
            return Err(Error::invalid(format!(
                "u = {u} is not among l_1..l_m = {:?}",
                profile.lj_determined()?
            )));
        }
        Ok(Prop9Family { profile, u })
    }

    pub fn profile(&self) -> &ExponentProfile {
        &self.profile
    }

    pub fn gammas(&self, t: f64) -> Vec<f64> {
        self.profile
            .lj
            .iter()
            .map(|e| match e.unwrap().cmp(&self.u) {
                std::cmp::Ordering::Greater => 0.0,
                std::cmp::Ordering::Equal => t,
                std::cmp::Ordering::Less => f64::INFINITY,
            })
            .collect()
    }

    pub fn g(&self, s: u64, t: f64) -> f64 {
        psi(&self.profile, &self.gammas(t), s)
            .expect("family gammas match the profile")
            .total
    }
}

pub fn prop9_g(exponents: &[u64], u: u64, s: u64, t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::invalid(format!("t = {t} must be non-negative")));
    }
    Ok(Prop9Family::new(exponents, u)?.g(s, t))
}

/// `(mu, sigma, phi)` where `log(f(r e^z) / f(r)) = mu z + sigma z^2 phi(r, z) / 2`,
/// with `phi` to the given order in `z`. `phi` has constant term exactly one.
pub fn phi_series<S: Scalar>(
    f: &SeriesSpec,
    r: &S,
    order: usize,
) -> Result<(S, S, TruncatedSeries<S>)> {
    let full = order + 2;
    // f(r e^z) = 1 + sum_e c_e r^e e^{e z}
    let mut num = TruncatedSeries::<S>::one(full);
    let mut fr = S::one();
    let mut rp = S::one();
    let mut last = 0u64;
    for t in f.terms() {
        for _ in last..t.exponent {
            rp = rp * r;
        }
        last = t.exponent;
        let w = S::from_rational(&t.coeff) * &rp;
        fr = fr + &w;
        num = num.add(&exp_linear(&S::from_int(t.exponent as i64), full).scale(&w));
    }
    if fr.to_f64() <= 0.0 {
        return Err(Error::invalid(format!(
            "f(r) = {} is not positive, so log f(r e^z) has no expansion",
            fr
        )));
    }
    let log = num.scale(&(S::one() / fr)).log()?;
    let mu = log.coeff(1).clone();
    let half_sigma = log.coeff(2).clone();
    if half_sigma.to_f64() == 0.0 {
        return Err(Error::invalid("sigma vanishes; phi is undefined"));
    }
    let phi = TruncatedSeries::from_coeffs(
        (0..=order)
            .map(|p| log.coeff(p + 2).clone() / &half_sigma)
            .collect(),
    )?;
    let sigma = half_sigma.clone() + &half_sigma;
    Ok((mu, sigma, phi))
}

/// `phi(0, z) = 2 (e^{l z} - 1 - l z) / (l z)^2 = sum_p 2 l^p z^p / (p + 2)!`.
pub fn phi_limit<S: Scalar>(l: u64, order: usize) -> TruncatedSeries<S> {
    let e = exp_linear(&S::from_int(l as i64), order + 2);
    let l2 = S::from_int((l * l) as i64);
    TruncatedSeries::from_terms(
        order,
        (0..=order).map(|p| (p, S::from_int(2) * e.coeff(p + 2).clone() / &l2)),
    )
}

/// `c_1 .. c_N` from a `phi` series:
/// `c_nu = a_nu (2 mu / sigma)^nu` with
/// `a_nu = (-1)^nu (2 nu)! / (4^nu nu!) [z^{2 nu}] phi^{-nu - 1/2}`.
pub fn expansion_from_phi<S: Scalar>(
    phi: &TruncatedSeries<S>,
    mu: &S,
    sigma: &S,
    terms: usize,
) -> Result<Vec<S>> {
    if phi.order() < 2 * terms {
        return Err(Error::invalid(format!(
            "phi is known to order {} but {terms} terms need order {}",
            phi.order(),
            2 * terms
        )));
    }
    let ratio = S::from_int(2) * mu / sigma;
    let mut out = Vec::with_capacity(terms);
    let mut ratio_pow = S::one();
    for nu in 1..=terms {
        ratio_pow = ratio_pow * &ratio;
        let alpha = S::from_ratio(-(2 * nu as i64 + 1), 2);
        let p = phi.pow_scalar(&alpha)?;
        // (2 nu)! / (4^nu nu!) = prod_{i=nu+1}^{2nu} i / 4^nu
        let mut w = S::one();
        for i in nu + 1..=2 * nu {
            w = w * S::from_int(i as i64) / S::from_int(4);
        }
        if nu % 2 == 1 {
            w = -w;
        }
        out.push(w * p.coeff(2 * nu) * &ratio_pow);
    }
    Ok(out)
}

fn check_terms(terms: usize) -> Result<()> {
    if terms > MAX_EXPANSION {
        return Err(Error::OutOfRange {
            what: "expansion terms",
            value: terms as f64,
            lo: 0.0,
            hi: MAX_EXPANSION as f64,
        });
    }
    Ok(())
}

/// `c_1 .. c_N` at radius `r`, in floating point.
pub fn t0_coefficients(f: &SeriesSpec, r: f64, terms: usize) -> Result<Vec<f64>> {
    check_terms(terms)?;
    check_domain(f, r)?;
    let (mu, sigma, phi) = phi_series(f, &r, 2 * terms)?;
    expansion_from_phi(&phi, &mu, &sigma, terms)
}

/// `c_1 .. c_N` at a rational radius, exactly.
pub fn t0_coefficients_exact(f: &SeriesSpec, r: &Rational, terms: usize) -> Result<Vec<Rational>> {
    check_terms(terms)?;
    if !f.is_polynomial() {
        return Err(Error::invalid(
            "exact expansion coefficients need a polynomial",
        ));
    }
    if *r <= rational::int(0) {
        return Err(Error::invalid(format!("radius {r} must be positive")));
    }
    let (mu, sigma, phi) = phi_series(f, r, 2 * terms)?;
    expansion_from_phi(&phi, &mu, &sigma, terms)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EstimateOptions {
    /// Also compute `c_1 .. c_N`.
    pub expand: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticReport {
    pub n: u64,
    pub k: u64,
    /// gcd of the support; the estimate is for the reduced series at `k / gcd`.
    pub gcd: u64,
    pub reduced_k: u64,
    pub saddle: SaddlePoint,
    /// `n log f(r) - k log r - log(2 pi n sigma) / 2`.
    pub log_dominant: f64,
    /// Built from the finite-`n` decay rates.
    pub correction: CorrectionFactor,
    /// Built from the limit decay rates at `delta`; `None` when `delta` is undefined.
    pub limit_correction: Option<CorrectionFactor>,
    /// `log k / log n`, on the reduced `k`.
    pub delta: f64,
    pub eps0: Option<Rational>,
    pub expansion_c: Option<Vec<f64>>,
    /// `delta > eps0`, the range where the expansion is valid.
    pub expansion_valid: bool,
    /// `log_dominant + log(correction.total)` when the total is positive.
    pub estimate: Option<f64>,
    pub upper_bound_only: bool,
}

impl AsymptoticReport {
    /// `log_dominant + log(1 + sum c_nu / k^nu)`, when the expansion was requested.
    pub fn expanded_log_dominant(&self) -> Option<f64> {
        let c = self.expansion_c.as_ref()?;
        let k = self.reduced_k as f64;
        let sum: f64 = c
            .iter()
            .enumerate()
            .map(|(i, c)| c / k.powi(i as i32 + 1))
            .sum();
        Some(self.log_dominant + sum.ln_1p())
    }
}

pub fn t1_estimate(f: &SeriesSpec, n: u64, k: u64) -> Result<AsymptoticReport> {
    t1_estimate_with(f, n, k, EstimateOptions::default())
}

pub fn t1_estimate_with(
    f: &SeriesSpec,
    n: u64,
    k: u64,
    opts: EstimateOptions,
) -> Result<AsymptoticReport> {
    if let Some(terms) = opts.expand {
        check_terms(terms)?;
    }
    let profile = analyze(f)?;
    let d = profile.gcd;
    if k == 0 || !k.is_multiple_of(d) {
        return Err(Error::invalid(format!(
            "k = {k} must be a positive multiple of gcd L(f) = {d}; otherwise the coefficient is trivial"
        )));
    }
    if !profile.strongly_positive {
        return Err(Error::refused(
            "f is not strongly positive at small r (some f^(l_j) <= 0)",
        ));
    }
    let g = &profile.reduced;
    let kr = k / d;
    let saddle = solve_saddle(g, n, kr as f64)?;
    let nf = n as f64;
    let log_dominant = nf * g.eval_minus_one(saddle.r).ln_1p()
        - kr as f64 * saddle.r.ln()
        - 0.5 * (std::f64::consts::TAU * nf * saddle.sigma).ln();

    let s = kr % profile.l;
    let correction = psi(&profile, &gamma_finite(&profile, &saddle)?, s)?;
    let delta = if n > 1 {
        (kr as f64).ln() / nf.ln()
    } else {
        f64::NAN
    };
    let limit_correction = if delta.is_finite() {
        Some(psi(&profile, &limit_gammas(&profile, delta)?, s)?)
    } else {
        None
    };
    let eps0_f = profile.eps0.as_ref().map_or(0.0, rational::to_f64);
    let expansion_valid = delta > eps0_f;
    let expansion_c = match opts.expand {
        Some(terms) => Some(t0_coefficients(g, saddle.r, terms)?),
        None => None,
    };
    let upper_bound_only =
        correction.vanishes || limit_correction.as_ref().is_some_and(|c| c.vanishes);
    let estimate = (correction.total > 0.0).then(|| log_dominant + correction.total.ln());

    Ok(AsymptoticReport {
        n,
        k,
        gcd: d,
        reduced_k: kr,
        saddle,
        log_dominant,
        correction,
        limit_correction,
        delta,
        eps0: profile.eps0.clone(),
        expansion_c,
        expansion_valid,
        estimate,
        upper_bound_only,
    })
}

impl fmt::Display for CorrectionFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s = {}, total = {:.12e}", self.s, self.total)?;
        for (j, (g, p)) in self.gammas.iter().zip(&self.psis).enumerate() {
            write!(f, "\n  j = {}: gamma = {:.12e}, psi = {:.12e}", j + 1, g, p)?;
        }
        if self.vanishes {
            write!(f, "\n  vanishes")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use num_traits::Zero;
    use std::f64::consts::{PI, TAU};

    fn spec(terms: &[(u64, i64, i64)]) -> SeriesSpec {
        SeriesSpec::new(terms.iter().map(|&(e, p, q)| (e, ratio(p, q))).collect()).unwrap()
    }

    #[test]
    fn ex1_closed_form() {
        let p = analyze(&spec(&[(3, 1, 3), (4, 1, 1)])).unwrap();
        let b: f64 = 0.7;
        for s in 0..6 {
            let cf = psi(&p, &[b], s).unwrap();
            let want =
                1.0 + 2.0 * (-1.5 * b).exp() * (TAU * s as f64 / 3.0 - b * 3f64.sqrt() / 2.0).cos();
            assert!((cf.total - want).abs() < 1e-14, "s={s}");
        }
    }

    #[test]
    fn ex4_factorization_and_zero() {
        let p = analyze(&spec(&[(9, 1, 9), (15, 1, 1), (25, 1, 1)])).unwrap();
        let b = 1.3;
        // delta = 2/5: boundary 15, so gamma = b at 15 and 0 at 25
        let g = limit_gammas(&p, 0.4).unwrap();
        assert_eq!(g, vec![1.0, 1.0, 0.0, 1.0]);
        let g = vec![b, b, 0.0, b];
        for k in 0..18u64 {
            let cf = psi(&p, &g, k % 9).unwrap();
            let kf = k as f64;
            let want = (1.0 + 2.0 * (TAU * kf / 3.0).cos())
                * (1.0 + 2.0 * (-1.5 * b).exp() * (TAU * kf / 9.0 + b * 3f64.sqrt() / 2.0).cos());
            assert!((cf.total - want).abs() < 1e-12, "k={k}");
            assert_eq!(cf.vanishes, k % 3 != 0, "k={k}");
        }
    }

    #[test]
    fn infinite_gammas_give_one() {
        let p = analyze(&spec(&[(4, 1, 4), (5, 1, 1)])).unwrap();
        let cf = psi(&p, &[f64::INFINITY, f64::INFINITY], 3).unwrap();
        assert_eq!(cf.total, 1.0);
        assert!(psi(&p, &[1.0], 0).is_err());
    }

    #[test]
    fn even_l_middle_term() {
        let p = analyze(&spec(&[(4, 1, 4), (5, 1, 1)])).unwrap();
        let cf = psi(&p, &[f64::INFINITY, 0.5], 3).unwrap();
        assert!((cf.psis[1] + (-1.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn prop9_ex2_formula() {
        let fam = Prop9Family::new(&[15, 20, 21], 21).unwrap();
        let s5 = 5f64.sqrt();
        for s in 0..15u64 {
            for i in 0..20 {
                let t = i as f64 * 0.37;
                let sf = s as f64;
                let want = 1.0
                    + 2.0
                        * (-t * (5.0 - s5) / 4.0).exp()
                        * (2.0 * PI * sf / 5.0 - t * ((5.0 + s5) / 8.0).sqrt()).cos()
                    + 2.0
                        * (-t * (5.0 + s5) / 4.0).exp()
                        * (4.0 * PI * sf / 5.0 - t * ((5.0 - s5) / 8.0).sqrt()).cos();
                assert!((fam.g(s, t) - want).abs() < 1e-12);
            }
        }
        assert!(Prop9Family::new(&[15, 20, 21], 17).is_err());
        assert!(prop9_g(&[15, 20, 21], 21, 0, -1.0).is_err());
    }

    #[test]
    fn phi_constant_term_and_limit() {
        let f = spec(&[(3, 1, 3), (4, 1, 1)]);
        let (_, _, phi) = phi_series(&f, &ratio(1, 2), 6).unwrap();
        assert_eq!(*phi.constant_term(), rational::int(1));
        let lim = phi_limit::<Rational>(3, 2);
        assert_eq!(
            lim.coeffs(),
            &[rational::int(1), rational::int(1), ratio(3, 4)]
        );
    }

    #[test]
    fn c1_at_small_r() {
        // phi(0, z) for l = 3 gives a_1 = -3/8 and 2 mu / sigma -> 2/3
        let phi = phi_limit::<Rational>(3, 2);
        let c = expansion_from_phi(&phi, &rational::int(1), &rational::int(3), 1).unwrap();
        assert_eq!(c[0], ratio(-1, 4));
    }

    #[test]
    fn gaussian_phi_has_no_corrections() {
        let phi = TruncatedSeries::<Rational>::one(12);
        let c = expansion_from_phi(&phi, &ratio(3, 7), &ratio(2, 5), 6).unwrap();
        assert!(c.iter().all(Zero::is_zero));
    }

    #[test]
    fn exact_and_float_expansions_agree() {
        let f = spec(&[(3, 1, 3), (4, 1, 1)]);
        let e = t0_coefficients_exact(&f, &ratio(1, 3), 3).unwrap();
        let x = t0_coefficients(&f, 1.0 / 3.0, 3).unwrap();
        for (a, b) in e.iter().zip(&x) {
            assert!((rational::to_f64(a) - b).abs() < 1e-12 * b.abs().max(1.0));
        }
        assert!(t0_coefficients(&f, 0.3, 7).is_err());
    }

    #[test]
    fn degenerate_profile_has_unit_factor() {
        let f = spec(&[(1, 1, 1), (2, 1, 1)]);
        let rep = t1_estimate(&f, 100, 60).unwrap();
        assert_eq!(rep.correction.total, 1.0);
        assert_eq!(rep.estimate, Some(rep.log_dominant));
    }

    #[test]
    fn estimate_rejections() {
        let f = spec(&[(2, 1, 1), (4, 1, 1)]);
        assert!(t1_estimate(&f, 10, 3).is_err());
        assert!(t1_estimate(&f, 10, 4).is_ok());
        let bad = spec(&[(3, 1, 3), (4, -1, 1)]);
        assert!(matches!(t1_estimate(&bad, 100, 9), Err(Error::Refused(_))));
    }
}
