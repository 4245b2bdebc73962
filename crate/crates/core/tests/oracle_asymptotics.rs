use std::f64::consts::PI;

use largepow::oracle::{alias_free_nodes, positivity_sweep};
use largepow::rational::{int, ratio, to_f64};
use largepow::{
    analyze, contour_coefficient, exact_coefficient, exact_coefficient_with, locate_maxima, psi,
    solve_saddle, t1_estimate, t1_estimate_with, EstimateOptions, ExactMethod, Prop9Family,
    Rational, SeriesSpec,
};
use proptest::prelude::*;

fn spec(terms: &[(u64, Rational)]) -> SeriesSpec {
    SeriesSpec::new(terms.to_vec()).unwrap()
}

fn ex1() -> SeriesSpec {
    spec(&[(3, ratio(1, 3)), (4, int(1))])
}

fn small_poly() -> impl Strategy<Value = SeriesSpec> {
    prop::collection::btree_map(1u64..7, (-4i64..5, 1i64..4), 1..4)
        .prop_filter("nonzero", |m| m.values().all(|(p, _)| *p != 0))
        .prop_map(|m| {
            SeriesSpec::new(m.into_iter().map(|(e, (p, q))| (e, ratio(p, q))).collect()).unwrap()
        })
}

fn strongly_positive_profile() -> impl Strategy<Value = SeriesSpec> {
    prop::collection::btree_map(2u64..12, 1i64..5, 1..5)
        .prop_filter("gcd 1, strongly positive", |m| {
            let g = m.keys().fold(0u64, |g, &e| num_integer::gcd(g, e));
            g == 1 && {
                let f = SeriesSpec::new(m.iter().map(|(&e, &c)| (e, int(c))).collect()).unwrap();
                analyze(&f).unwrap().strongly_positive
            }
        })
        .prop_map(|m| SeriesSpec::new(m.into_iter().map(|(e, c)| (e, int(c))).collect()).unwrap())
}

fn binomial_ln(n: u64, k: u64) -> f64 {
    (0..k).map(|i| ((n - i) as f64 / (i + 1) as f64).ln()).sum()
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 40,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn exact_methods_agree(f in small_poly(), n in 0u64..7, k in 0u64..20) {
        let a = exact_coefficient_with(&f, n, k, ExactMethod::PowerTruncate).unwrap();
        let b = exact_coefficient_with(&f, n, k, ExactMethod::Recurrence).unwrap();
        let c = exact_coefficient_with(&f, n, k, ExactMethod::Multinomial).unwrap();
        prop_assert_eq!(&a.exact, &b.exact);
        prop_assert_eq!(&a.exact, &c.exact);
    }

    #[test]
    fn power_splits(f in small_poly(), a in 0u64..5, b in 0u64..5, k in 0u64..15) {
        // [z^k] f^{a+b} = sum_i [z^i] f^a [z^{k-i}] f^b
        let mut sum = int(0);
        for i in 0..=k {
            let x = exact_coefficient(&f, a, i).unwrap().exact;
            let y = exact_coefficient(&f, b, k - i).unwrap().exact;
            sum += x * y;
        }
        prop_assert_eq!(exact_coefficient(&f, a + b, k).unwrap().exact, sum);
    }

    #[test]
    fn contour_matches_exact(f in strongly_positive_profile(), n in 2u64..30, k in 1u64..40, stretch in 0.8f64..1.25) {
        prop_assume!(k < n * f.degree());
        let exact = exact_coefficient(&f, n, k).unwrap().exact;
        prop_assume!(exact != int(0));
        // near the saddle the circle integral has no cancellation to speak of
        let r = solve_saddle(&f, n, k as f64).unwrap().r * stretch;
        let q = alias_free_nodes(&f, n, k);
        let approx = contour_coefficient(&f, n, k as f64, r, q).unwrap();
        let want = largepow::SignedLog::from_rational(&exact);
        prop_assert_eq!(approx.sign, want.sign);
        prop_assert!((approx.ratio(&want) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn sweep_is_negative_for_strongly_positive(f in strongly_positive_profile()) {
        let l = f.terms()[0].exponent as f64;
        let r = 1e-2;
        let sweep = positivity_sweep(&f, r, 0.4 / l, 512).unwrap();
        prop_assert!(sweep < 0.0);
    }

    #[test]
    fn maxima_count_is_half_l(f in strongly_positive_profile()) {
        let p = analyze(&f).unwrap();
        let mp = locate_maxima(&f, 0.05).unwrap();
        prop_assert_eq!(mp.expected, p.m);
        prop_assert!(mp.count_ok, "{:?}", mp.thetas);
        if p.l.is_multiple_of(2) && p.m > 0 {
            prop_assert!((mp.thetas.last().unwrap() - PI).abs() < 1e-9);
        }
    }

    #[test]
    fn psi_limits_filter_residues(f in strongly_positive_profile(), s in 0u64..30) {
        // gamma = 0 everywhere sums the l-th roots of unity; gamma = inf drops them
        let p = analyze(&f).unwrap();
        let zero = psi(&p, &vec![0.0; p.m as usize], s).unwrap();
        let want = if s % p.l == 0 { p.l as f64 } else { 0.0 };
        prop_assert!((zero.total - want).abs() < 1e-12, "{zero}");
        prop_assert_eq!(zero.vanishes, want == 0.0);
        let inf = psi(&p, &vec![f64::INFINITY; p.m as usize], s).unwrap();
        prop_assert_eq!(inf.total, 1.0);
    }

    #[test]
    fn psi_is_periodic_in_s(f in strongly_positive_profile(), gs in prop::collection::vec(0.0f64..8.0, 8), s in 0u64..30) {
        let p = analyze(&f).unwrap();
        let gammas = &gs[..p.m as usize];
        let a = psi(&p, gammas, s).unwrap();
        let b = psi(&p, gammas, s + p.l).unwrap();
        for (x, y) in a.psis.iter().zip(&b.psis) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn even_middle_term_is_bounded(gamma in 0.0f64..6.0, s in 0u64..12) {
        let f = spec(&[(4, ratio(1, 4)), (5, int(1)), (6, int(1))]);
        let p = analyze(&f).unwrap();
        let cf = psi(&p, &[1.0, gamma], s).unwrap();
        prop_assert!(cf.psis[1].abs() <= (-2.0 * gamma).exp() + 1e-15);
    }
}

#[test]
fn binomial_expansion_improves_with_terms() {
    // 1 + z is the one case with an elementary exact answer
    let f = spec(&[(1, int(1))]);
    let (n, k) = (1_000_000u64, 200u64);
    let exact = binomial_ln(n, k);
    let mut errors = Vec::new();
    for terms in 1..=4 {
        let rep = t1_estimate_with(
            &f,
            n,
            k,
            EstimateOptions {
                expand: Some(terms),
            },
        )
        .unwrap();
        errors.push((rep.expanded_log_dominant().unwrap() - exact).abs());
    }
    let plain = (t1_estimate(&f, n, k).unwrap().log_dominant - exact).abs();
    assert!(errors[0] < plain * 0.05, "{plain} {errors:?}");
    for w in errors.windows(2) {
        assert!(w[1] < w[0] * 0.05 || w[1] < 1e-12, "{errors:?}");
    }
}

#[test]
fn ex1_gamma_tends_to_b() {
    // n = k^4 puts l_1 = 4 on the boundary, so gamma_1 -> 1
    let f = ex1();
    let rep = t1_estimate(&f, 40u64.pow(4), 40).unwrap();
    assert!(
        (rep.correction.gammas[0] - 1.0).abs() < 0.15,
        "{}",
        rep.correction
    );
    let lim = rep.limit_correction.unwrap();
    assert_eq!(lim.gammas, vec![1.0]);
}

#[test]
fn ex3_gamma_trends() {
    // n = m^25, k = m^16: delta = 16/25 puts l_j = 25 on the boundary
    let f = spec(&[(9, ratio(1, 9)), (15, int(1)), (25, int(1))]);
    let p = analyze(&f).unwrap();
    let lj: Vec<u64> = p.lj.iter().map(|v| v.unwrap()).collect();
    let mut prev: Option<Vec<f64>> = None;
    for m in 2u64..=4 {
        let rep = t1_estimate(&f, m.pow(25), m.pow(16)).unwrap();
        let lim = rep.limit_correction.as_ref().unwrap();
        for (i, &e) in lj.iter().enumerate() {
            let g = rep.correction.gammas[i];
            match e {
                25 => assert_eq!(lim.gammas[i], 1.0),
                15 => assert_eq!(lim.gammas[i], f64::INFINITY),
                _ => {}
            }
            if let Some(prev) = &prev {
                if e == 15 {
                    assert!(g > prev[i], "l_j = 15 grows: {g} vs {}", prev[i]);
                }
            }
        }
        prev = Some(rep.correction.gammas.clone());
    }
}

#[test]
fn estimate_tracks_exact_for_ex1() {
    let f = ex1();
    let mut last = f64::INFINITY;
    for k in [12u64, 18, 24] {
        let n = k.pow(4);
        let rep = t1_estimate(&f, n, k).unwrap();
        let exact = exact_coefficient_with(&f, n, k, ExactMethod::Recurrence).unwrap();
        let err = (rep.estimate.unwrap() - exact.log.ln_abs).abs();
        assert!(err < last * 1.05, "k={k}: {err} after {last}");
        last = err;
    }
    assert!(last < 0.1);
}

#[test]
fn gcd_larger_than_one() {
    // f(z) = 1 + z^6/3 + z^8 is ex1 in z^2
    let f = spec(&[(6, ratio(1, 3)), (8, int(1))]);
    let rep = t1_estimate(&f, 14641, 22).unwrap();
    let base = t1_estimate(&ex1(), 14641, 11).unwrap();
    assert_eq!(rep.gcd, 2);
    assert!((rep.log_dominant - base.log_dominant).abs() < 1e-12);
    assert!(t1_estimate(&f, 14641, 21).is_err());
}

#[test]
fn prop9_family_stays_nonnegative() {
    // finer than the acceptance grid, for every residue class
    let fam = Prop9Family::new(&[15, 20, 21], 21).unwrap();
    let mut min = f64::INFINITY;
    for i in 0..=5000 {
        let t = i as f64 * 0.01;
        for s in 0..15 {
            min = min.min(fam.g(s, t));
        }
    }
    assert!(min > -1e-9, "{min}");
    // and the minimum is approached, at t = 0 with s not a multiple of 15
    assert!(min < 1e-12);
}

#[test]
fn not_strongly_positive_is_refused() {
    let f = spec(&[(3, ratio(1, 3)), (4, int(-1))]);
    assert!(t1_estimate(&f, 1000, 10).is_err());
    assert!(positivity_sweep(&f, 0.8, 0.3, 256).unwrap() > 0.0);
}

#[test]
fn coefficient_sizes() {
    // with n = 3, z^12 only arises as z^4 z^4 z^4
    let f = ex1();
    assert_eq!(exact_coefficient(&f, 3, 12).unwrap().exact, int(1));
    let two = exact_coefficient(&f, 2, 7).unwrap().exact;
    assert_eq!(to_f64(&two), 2.0 / 3.0);
}
