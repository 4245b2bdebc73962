//! Coefficients c_1.. of the expansion around the saddle point, exactly at a
//! rational radius and in floating point at the saddle for growing n.

use largepow::asymptotics::t0_coefficients_exact;
use largepow::rational::ratio;
use largepow::{solve_saddle, t0_coefficients, SeriesSpec};

fn main() -> largepow::Result<()> {
    let f = SeriesSpec::parse("3: 1/3\n4: 1")?;
    for (i, c) in t0_coefficients_exact(&f, &ratio(1, 10), 3)?
        .iter()
        .enumerate()
    {
        println!("c_{} at r = 1/10: {c}", i + 1);
    }
    // c_1 tends to -1/4 as r -> 0 when l = 3
    for n in [1_000u64, 1_000_000, 1_000_000_000] {
        let s = solve_saddle(&f, n, 10.0)?;
        let c = t0_coefficients(&f, s.r, 2)?;
        println!(
            "n = {n:>10}: r = {:.6e}, c_1 = {:.10}, c_2 = {:.10}",
            s.r, c[0], c[1]
        );
    }
    Ok(())
}
