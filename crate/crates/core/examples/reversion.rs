//! Reversion of mu(r) = t^l: the saddle point as a series r = t rho(t),
//! checked against the numerical solver.

use largepow::saddle::mu_series;
use largepow::{revert_saddle, solve_saddle, ExactSeries, SeriesSpec};

fn main() -> largepow::Result<()> {
    let f = SeriesSpec::parse("9: 1/9\n15: 1\n25: 1")?;
    let order = 18;
    let mu: ExactSeries = mu_series(&f, 9 + order)?;
    let rho = revert_saddle(&mu, 9, order)?;
    println!("rho(t) = {rho}");
    let rho_f = rho.to_float();
    for t in [0.1f64, 0.2, 0.3] {
        let n = 1_000_000_000u64;
        let s = solve_saddle(&f, n, n as f64 * t.powi(9))?;
        println!(
            "t = {t}: solver {:.15}, series {:.15}",
            s.r,
            t * rho_f.eval(&t)
        );
    }
    Ok(())
}
