//! The one-parameter family g(s, t) for exponents {15, 20, 21} with u = 21.
//! It dips close to zero for small t but never below.

use largepow::Prop9Family;

fn main() -> largepow::Result<()> {
    let fam = Prop9Family::new(&[15, 20, 21], 21)?;
    // at t = 0 every s that is not a multiple of 15 gives exactly zero
    let mut best = (f64::INFINITY, 0, 0.0);
    for i in 1..=5000 {
        let t = i as f64 * 0.01;
        for s in 0..15 {
            let g = fam.g(s, t);
            if g < best.0 {
                best = (g, s, t);
            }
        }
    }
    println!(
        "min g = {:.3e} at s = {}, t = {:.2}",
        best.0, best.1, best.2
    );
    for t in [0.0, 1.0, 2.0, 5.0, 20.0] {
        let row: Vec<String> = (0..5).map(|s| format!("{:>10.6}", fam.g(s, t))).collect();
        println!("t = {t:>4}: {}", row.join(" "));
    }
    Ok(())
}
