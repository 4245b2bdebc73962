use largepow::rational::{int, ratio};
use largepow::series::exp_linear;
use largepow::{revert_saddle, ExactSeries, FloatSeries, Rational, TruncatedSeries};
use proptest::prelude::*;

fn small_rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=5).prop_map(|(p, q)| ratio(p, q))
}

fn exact_series(order: usize) -> impl Strategy<Value = ExactSeries> {
    prop::collection::vec(small_rational(), order + 1)
        .prop_map(|c| TruncatedSeries::from_coeffs(c).unwrap())
}

/// Series with constant term 1.
fn unit_series(order: usize) -> impl Strategy<Value = ExactSeries> {
    exact_series(order).prop_map(|s| {
        let mut c = s.into_coeffs();
        c[0] = int(1);
        TruncatedSeries::from_coeffs(c).unwrap()
    })
}

fn without_constant(s: &ExactSeries) -> ExactSeries {
    let mut c = s.coeffs().to_vec();
    c[0] = int(0);
    TruncatedSeries::from_coeffs(c).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 48,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn exp_inverts_log(a in unit_series(8)) {
        prop_assert_eq!(a.log().unwrap().exp().unwrap(), a);
    }

    #[test]
    fn log_inverts_exp(a in exact_series(8)) {
        let a = without_constant(&a);
        prop_assert_eq!(a.exp().unwrap().log().unwrap(), a);
    }

    #[test]
    fn truncation_commutes_with_product(a in exact_series(10), b in exact_series(10), m in 0usize..=10) {
        let lhs = a.mul(&b).truncate(m).unwrap();
        let rhs = a.truncate(m).unwrap().mul(&b.truncate(m).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn product_order_is_the_minimum(a in exact_series(7), b in exact_series(4)) {
        prop_assert_eq!(a.mul(&b).order(), 4);
        prop_assert_eq!(a.add(&b).order(), 4);
    }

    #[test]
    fn binary_power_matches_repeated_product(a in exact_series(6), e in 0u64..6) {
        let mut p = TruncatedSeries::one(6);
        for _ in 0..e {
            p = p.mul(&a);
        }
        prop_assert_eq!(a.powi(e), p);
    }

    #[test]
    fn real_power_laws(a in unit_series(7)) {
        let half = a.pow_scalar(&ratio(1, 2)).unwrap();
        prop_assert_eq!(half.mul(&half), a.clone());
        let third = a.pow_scalar(&ratio(-1, 3)).unwrap();
        prop_assert_eq!(third.powi(3).mul(&a), TruncatedSeries::one(7));
    }

    #[test]
    fn inverse_is_two_sided(a in unit_series(9), c in 1i64..5) {
        let a = a.scale(&int(c));
        let inv = a.inverse().unwrap();
        prop_assert_eq!(a.mul(&inv), TruncatedSeries::constant(int(1), 9));
    }

    #[test]
    fn exp_is_a_homomorphism(a in exact_series(7), b in exact_series(7)) {
        let (a, b) = (without_constant(&a), without_constant(&b));
        prop_assert_eq!(a.add(&b).exp().unwrap(), a.exp().unwrap().mul(&b.exp().unwrap()));
    }

    #[test]
    fn composition_is_evaluation_compatible(a in exact_series(5), b in exact_series(5), x in small_rational()) {
        // quadratics a and b: a(b(z)) has degree 4, so order 4 holds it exactly
        let a2 = TruncatedSeries::from_coeffs(a.coeffs()[..3].to_vec()).unwrap();
        let mut bc = b.coeffs()[..3].to_vec();
        bc[0] = int(0);
        let b2 = TruncatedSeries::from_coeffs(bc).unwrap();
        let a4 = TruncatedSeries::from_terms(4, a2.coeffs().iter().cloned().enumerate());
        let b4 = TruncatedSeries::from_terms(4, b2.coeffs().iter().cloned().enumerate());
        let comp = a4.compose(&b4).unwrap();
        prop_assert_eq!(comp.eval(&x), a2.eval(&b2.eval(&x)));
    }

    #[test]
    fn float_flavor_tracks_exact(a in unit_series(8)) {
        let exact = a.log().unwrap().to_float();
        let float: FloatSeries = a.to_float().log().unwrap();
        for (x, y) in exact.coeffs().iter().zip(float.coeffs()) {
            prop_assert!((x - y).abs() <= 1e-9 * x.abs().max(1.0));
        }
    }

    #[test]
    fn reversion_solves_the_saddle_equation(l in 1usize..5, tail in prop::collection::vec(small_rational(), 6)) {
        let order = 6;
        let mut c = vec![int(0); l];
        c.push(int(1));
        c.extend(tail);
        let mu = TruncatedSeries::from_coeffs(c).unwrap();
        let rho = revert_saddle(&mu, l, order).unwrap();
        // mu(t rho(t)) = t^l through degree l + order; coefficients of rho
        // past `order` only reach higher degrees
        let r = TruncatedSeries::from_terms(l + order, rho.shift_up(1).coeffs().iter().cloned().enumerate());
        let lhs = mu.truncate(l + order).unwrap().compose(&r).unwrap();
        let mut want = vec![int(0); l + order + 1];
        want[l] = int(1);
        prop_assert_eq!(lhs.coeffs(), &want[..]);
    }
}

#[test]
fn exponential_of_linear_matches_exp() {
    let z = TruncatedSeries::<Rational>::variable(9).scale(&int(3));
    assert_eq!(z.exp().unwrap(), exp_linear(&int(3), 9));
}

#[test]
fn flavors_are_distinct_types() {
    // ExactSeries and FloatSeries are distinct types; conversion is explicit
    let e: ExactSeries = TruncatedSeries::one(2);
    let f: FloatSeries = e.to_float();
    assert_eq!(f.coeffs(), &[1.0, 0.0, 0.0]);
}
