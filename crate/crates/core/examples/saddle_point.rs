//! Saddle point r with n mu(r) = k, for n = k^4 and the series 1 + z^3/3 + z^4.

use largepow::{mu_sigma, solve_saddle, SeriesSpec};

fn main() -> largepow::Result<()> {
    let f = SeriesSpec::parse("3: 1/3\n4: 1")?;
    println!("{:>5} {:>20} {:>14} {:>12}", "k", "r", "r k", "residual");
    for k in [10u64, 20, 50, 100, 200] {
        let s = solve_saddle(&f, k.pow(4), k as f64)?;
        println!(
            "{k:>5} {:>20.14e} {:>14.10} {:>12.3e}",
            s.r,
            s.r * k as f64,
            s.residual()
        );
    }
    let (mu, sigma) = mu_sigma(&f, 0.5)?;
    println!("mu(1/2) = {mu:.15}, sigma(1/2) = {sigma:.15}");
    Ok(())
}
