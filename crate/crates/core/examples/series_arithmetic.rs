//! Exact truncated power series: products, log/exp, real powers and
//! composition, then the same in floating point.

use largepow::rational::{int, ratio};
use largepow::{ExactSeries, FloatSeries, TruncatedSeries};

fn main() -> largepow::Result<()> {
    let f: ExactSeries =
        TruncatedSeries::from_terms(8, [(0, int(1)), (3, ratio(1, 3)), (4, int(1))]);
    println!("f        = {f}");
    println!("f^3      = {}", f.powi(3));
    println!("log f    = {}", f.log()?);
    println!("f^(-1/2) = {}", f.pow_scalar(&ratio(-1, 2))?);

    let z: ExactSeries = TruncatedSeries::variable(8);
    let inner = z.add(&z.mul(&z));
    println!("f(z + z^2) = {}", f.compose(&inner)?);

    let g: FloatSeries = f.to_float();
    println!("exp(log f) - f, float: {}", g.log()?.exp()?.sub(&g));
    Ok(())
}
