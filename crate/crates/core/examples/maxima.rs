//! Local maxima of |f(r e^{i theta})| on the circle, against the expected count.

use largepow::{locate_maxima, SeriesSpec};

fn main() -> largepow::Result<()> {
    for text in ["3: 1/3\n4: 1", "4: 1/4\n5: 1\n6: 1", "9: 1/9\n15: 1\n25: 1"] {
        let f = SeriesSpec::parse(text)?;
        for r in [0.05, 0.3, 0.8] {
            let mp = locate_maxima(&f, r)?;
            let thetas: Vec<String> = mp.thetas.iter().map(|t| format!("{t:.6}")).collect();
            println!(
                "{f} at r = {r}: {} maxima (expect {}) [{}]",
                mp.thetas.len(),
                mp.expected,
                thetas.join(", ")
            );
        }
    }
    Ok(())
}
