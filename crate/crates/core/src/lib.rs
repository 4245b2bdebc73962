//! Saddle-point asymptotics for the coefficient of `z^k` in `f(z)^n`.
//!
//! The crate targets power series with `f(0) = 1` and `f'(0) = 0`, in the
//! regime where `k` grows like a power `n^delta` with `0 < delta < 1`. It
//! provides
//!
//! - [`series`]: truncated power series arithmetic over exact rationals or
//!   `f64` (product, inverse, exp, log, real powers, composition, reversion),
//! - [`profile`]: the exponent pattern of `f` that decides which secondary
//!   maxima of `|f(r e^{i theta})|` matter, and the strong positivity test,
//! - [`saddle`]: `mu_f`, `sigma_f` and the saddle equation `k = n mu_f(r)`,
//! - [`asymptotics`]: the dominant term, the oscillating correction factor
//!   and the inverse-power expansion coefficients,
//! - [`oracle`]: exact rational coefficients, trapezoidal contour quadrature
//!   and a locator for the secondary maxima, used as ground truth,
//! - [`cli`]: the text front end (series file format, reports, fixtures).

pub mod asymptotics;
pub mod cli;
pub mod error;
pub mod oracle;
pub mod profile;
pub mod rational;
pub mod saddle;
pub mod series;
pub mod series_spec;

pub use asymptotics::{
    gamma_finite, prop9_g, psi, t0_coefficients, t1_estimate, t1_estimate_with, AsymptoticReport,
    CorrectionFactor, EstimateOptions, Prop9Family,
};
pub use error::{Error, Result};
pub use oracle::{
    contour_coefficient, exact_coefficient, exact_coefficient_with, locate_maxima, ExactMethod,
    MaximaProfile, OracleResult,
};
pub use profile::{analyze, normalize, Angle, ExponentProfile, Normalization};
pub use rational::{Rational, SignedLog};
pub use saddle::{mu_sigma, solve_saddle, SaddlePoint};
pub use series::{revert_saddle, ExactSeries, FloatSeries, Scalar, TruncatedSeries};
pub use series_spec::SeriesSpec;
