//! Exact [z^k] f(z)^n by each of the three methods, with timings.

use std::time::Instant;

use largepow::{exact_coefficient_with, ExactMethod, SeriesSpec};

fn main() -> largepow::Result<()> {
    let f = SeriesSpec::parse("3: 1/3\n4: 1")?;
    for (n, k) in [(81u64, 3u64 * 4), (20_736, 12), (50_625, 15)] {
        for method in [
            ExactMethod::PowerTruncate,
            ExactMethod::Recurrence,
            ExactMethod::Multinomial,
        ] {
            let t = Instant::now();
            let res = exact_coefficient_with(&f, n, k, method)?;
            println!(
                "n = {n:>6}, k = {k:>3}, {method:<14} ln|c| = {:.12}  ({:?})",
                res.log.ln_abs,
                t.elapsed()
            );
        }
    }
    let res = exact_coefficient_with(&f, 81, 12, ExactMethod::Recurrence)?;
    println!("[z^12] f^81 = {}", res.exact);
    Ok(())
}
