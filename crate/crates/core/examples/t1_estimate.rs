//! Saddle-point estimate with its correction factor, against the exact value.

use largepow::{exact_coefficient_with, t1_estimate, ExactMethod, SeriesSpec};

fn main() -> largepow::Result<()> {
    let f = SeriesSpec::parse("3: 1/3\n4: 1")?;
    for k in [9u64, 12, 15, 18, 21, 24] {
        let n = k.pow(4);
        let rep = t1_estimate(&f, n, k)?;
        let exact = exact_coefficient_with(&f, n, k, ExactMethod::Recurrence)?;
        let est = rep.estimate.unwrap_or(f64::NEG_INFINITY);
        println!(
            "k = {k:>2}: ln exact = {:.10}, ln estimate = {est:.10}, ratio = {:.6}",
            exact.log.ln_abs,
            (exact.log.ln_abs - est).exp()
        );
        println!("  {}", rep.correction.to_string().replace('\n', "\n  "));
    }
    Ok(())
}
