//! A residue class where the correction factor vanishes: the estimate then
//! only bounds the coefficient from above.

use largepow::{exact_coefficient_with, t1_estimate, ExactMethod, SeriesSpec};

fn main() -> largepow::Result<()> {
    let f = SeriesSpec::parse("9: 1/9\n15: 1\n25: 1")?;
    for m in [2u64, 3] {
        let (n, k) = (m.pow(15), m.pow(6));
        let rep = t1_estimate(&f, n, k)?;
        println!(
            "n = {n}, k = {k}: upper bound only = {}",
            rep.upper_bound_only
        );
        if let Some(lim) = &rep.limit_correction {
            println!("  limit {}", lim.to_string().replace('\n', "\n  "));
        }
        if k <= 729 {
            let exact = exact_coefficient_with(&f, n, k, ExactMethod::Recurrence)?;
            println!(
                "  ln exact = {:.6}, ln dominant = {:.6}",
                exact.log.ln_abs, rep.log_dominant
            );
        }
    }
    Ok(())
}
