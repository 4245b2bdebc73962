//! Exponent profile of a few series: gcd, l, the secondary exponents and
//! whether the profile is strongly positive.

use largepow::{analyze, normalize, SeriesSpec};

fn main() -> largepow::Result<()> {
    for text in [
        "3: 1/3\n4: 1",
        "9: 1/9\n15: 1\n25: 1",
        "6: 1\n8: 2",
        "3: 1/3\n4: -1",
    ] {
        let f = SeriesSpec::parse(text)?;
        let p = analyze(&f)?;
        println!("{p}");
        let norm = normalize(&f)?;
        println!("normalized: {}  (z -> {:.6} z)\n", norm.spec, norm.scale);
    }
    Ok(())
}
