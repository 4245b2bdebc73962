//! Trapezoidal Cauchy integral on |z| = r against the exact coefficient.
//! Away from the saddle point the integrand cancels and digits are lost.

use largepow::oracle::alias_free_nodes;
use largepow::{contour_coefficient, exact_coefficient, solve_saddle, SeriesSpec, SignedLog};

fn main() -> largepow::Result<()> {
    let f = SeriesSpec::parse("3: 1/3\n4: 1")?;
    let (n, k) = (50u64, 60u64);
    let exact = SignedLog::from_rational(&exact_coefficient(&f, n, k)?.exact);
    let rs = solve_saddle(&f, n, k as f64)?.r;
    let q = alias_free_nodes(&f, n, k);
    for r in [rs * 0.5, rs, rs * 2.0] {
        let c = contour_coefficient(&f, n, k as f64, r, q)?;
        println!(
            "r = {r:.6}, Q = {q}: relative error {:.3e}",
            c.ratio(&exact) - 1.0
        );
    }
    Ok(())
}
