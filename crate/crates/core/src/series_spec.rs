//! Sparse exact description of `f(z) = 1 + sum_i c_i z^{e_i}`.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::series::{Scalar, TruncatedSeries};

#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub exponent: u64,
    pub coeff: Rational,
}

/// `f(z) = 1 + sum c_i z^{e_i}` with exact rational coefficients.
///
/// Exponents are strictly increasing and every listed coefficient is
/// nonzero. A `truncation_degree` marks a genuinely infinite series whose
/// coefficients are only known up to that degree.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesSpec {
    terms: Vec<Term>,
    truncation_degree: Option<u64>,
    float_coeffs: Vec<f64>,
}

impl SeriesSpec {
    pub fn new(terms: Vec<(u64, Rational)>) -> Result<Self> {
        Self::build(terms, None)
    }

    /// An infinite series known through degree `degree`.
    pub fn truncated(terms: Vec<(u64, Rational)>, degree: u64) -> Result<Self> {
        Self::build(terms, Some(degree))
    }

    fn build(mut terms: Vec<(u64, Rational)>, truncation_degree: Option<u64>) -> Result<Self> {
        terms.sort_by_key(|(e, _)| *e);
        for w in terms.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::invalid(format!("duplicate exponent {}", w[0].0)));
            }
        }
        for (e, c) in &terms {
            if *e == 0 {
                return Err(Error::invalid(
                    "the constant term is fixed at 1 and cannot be listed",
                ));
            }
            if c.is_zero() {
                return Err(Error::invalid(format!("zero coefficient at exponent {e}")));
            }
            if let Some(d) = truncation_degree {
                if *e > d {
                    return Err(Error::invalid(format!(
                        "exponent {e} lies beyond the truncation degree {d}"
                    )));
                }
            }
        }
        let float_coeffs = terms.iter().map(|(_, c)| rational::to_f64(c)).collect();
        Ok(Self {
            terms: terms
                .into_iter()
                .map(|(exponent, coeff)| Term { exponent, coeff })
                .collect(),
            truncation_degree,
            float_coeffs,
        })
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn truncation_degree(&self) -> Option<u64> {
        self.truncation_degree
    }

    pub fn is_polynomial(&self) -> bool {
        self.truncation_degree.is_none()
    }

    /// Highest listed exponent (0 for the constant series).
    pub fn degree(&self) -> u64 {
        self.terms.last().map_or(0, |t| t.exponent)
    }

    /// `f^(k)` hat: the coefficient of `z^k`.
    pub fn coeff(&self, k: u64) -> Rational {
        if k == 0 {
            return rational::int(1);
        }
        self.terms
            .binary_search_by_key(&k, |t| t.exponent)
            .map(|i| self.terms[i].coeff.clone())
            .unwrap_or_else(|_| Rational::zero())
    }

    pub fn coeff_f64(&self, k: u64) -> f64 {
        self.terms
            .binary_search_by_key(&k, |t| t.exponent)
            .map(|i| self.float_coeffs[i])
            .unwrap_or(if k == 0 { 1.0 } else { 0.0 })
    }

    /// `(exponent, coefficient)` pairs in float form.
    pub fn float_terms(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.terms
            .iter()
            .zip(&self.float_coeffs)
            .map(|(t, c)| (t.exponent, *c))
    }

    pub fn has_negative_coefficients(&self) -> bool {
        self.terms.iter().any(|t| t.coeff.is_negative())
    }

    /// `f(r) - 1`, summed without forming `1 + ...` first.
    pub fn eval_minus_one(&self, r: f64) -> f64 {
        self.float_terms().map(|(e, c)| c * r.powi(e as i32)).sum()
    }

    pub fn eval(&self, r: f64) -> f64 {
        1.0 + self.eval_minus_one(r)
    }

    pub fn eval_exact(&self, r: &Rational) -> Rational {
        self.terms.iter().fold(rational::int(1), |acc, t| {
            acc + &t.coeff * rational::pow(r, t.exponent as i64)
        })
    }

    /// `f(r e^{i theta}) / f(r) - 1`, accurate when the ratio is near one.
    pub fn ratio_minus_one(&self, r: f64, theta: f64) -> Complex64 {
        let fr = self.eval(r);
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in self.float_terms() {
            let x = e as f64 * theta;
            let half = (0.5 * x).sin();
            // e^{ix} - 1 = -2 sin^2(x/2) + i sin x
            acc += c * r.powi(e as i32) * Complex64::new(-2.0 * half * half, x.sin());
        }
        acc / fr
    }

    /// `z f'(z) / f(r)` at `z = r e^{i theta}`.
    pub fn log_derivative_numerator(&self, r: f64, theta: f64) -> Complex64 {
        let fr = self.eval(r);
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in self.float_terms() {
            acc += Complex64::from_polar(e as f64 * c * r.powi(e as i32), e as f64 * theta);
        }
        acc / fr
    }

    /// The series `f(z)` itself, to the given order.
    pub fn to_series<S: Scalar>(&self, order: usize) -> TruncatedSeries<S> {
        TruncatedSeries::from_terms(
            order,
            std::iter::once((0usize, S::one())).chain(
                self.terms
                    .iter()
                    .map(|t| (t.exponent as usize, S::from_rational(&t.coeff))),
            ),
        )
    }

    /// Positive exponents with nonzero coefficient.
    pub fn support(&self) -> Vec<u64> {
        self.terms.iter().map(|t| t.exponent).collect()
    }

    /// `g` with `f(z) = g(z^d)`; every exponent must be divisible by `d`.
    pub fn reduce_by(&self, d: u64) -> Result<Self> {
        if d == 0 || self.terms.iter().any(|t| t.exponent % d != 0) {
            return Err(Error::invalid(format!(
                "exponents are not all multiples of {d}"
            )));
        }
        Self::build(
            self.terms
                .iter()
                .map(|t| (t.exponent / d, t.coeff.clone()))
                .collect(),
            self.truncation_degree.map(|deg| deg / d),
        )
    }

    /// `f(a z)` for an exact scale factor.
    pub fn rescale(&self, a: &Rational) -> Result<Self> {
        Self::build(
            self.terms
                .iter()
                .map(|t| (t.exponent, &t.coeff * rational::pow(a, t.exponent as i64)))
                .collect(),
            self.truncation_degree,
        )
    }

    /// Parse the line-oriented text form.
    ///
    /// One term per line as `exponent: numerator/denominator` (the
    /// denominator is optional). `#` starts a comment. A line
    /// `truncate: D` declares an infinite series known through degree `D`.
    /// The constant term is implicit and always 1.
    pub fn parse(text: &str) -> Result<Self> {
        let mut terms: Vec<(u64, Rational)> = Vec::new();
        let mut truncation = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let content = raw.split('#').next().unwrap_or("");
            if content.trim().is_empty() {
                continue;
            }
            let err = |column: usize, message: String| Error::Parse {
                line: line_no,
                column,
                message,
            };
            let colon = content
                .find(':')
                .ok_or_else(|| err(1, "expected `exponent: coefficient`".into()))?;
            let key = content[..colon].trim();
            let key_col = leading_ws(content) + 1;
            let value = &content[colon + 1..];
            let value_col = colon + 2 + leading_ws(value);
            let value = value.trim();
            if key == "truncate" {
                let d: u64 = value
                    .parse()
                    .map_err(|_| err(value_col, format!("invalid truncation degree `{value}`")))?;
                truncation = Some(d);
                continue;
            }
            let exponent: u64 = key
                .parse()
                .map_err(|_| err(key_col, format!("invalid exponent `{key}`")))?;
            if exponent == 0 {
                return Err(err(key_col, "the constant term is fixed at 1".into()));
            }
            let coeff = parse_rational(value).map_err(|m| err(value_col, m))?;
            if coeff.is_zero() {
                return Err(err(value_col, "zero coefficient".into()));
            }
            if terms.iter().any(|(e, _)| *e == exponent) {
                return Err(err(key_col, format!("duplicate exponent {exponent}")));
            }
            terms.push((exponent, coeff));
        }
        match truncation {
            Some(d) => Self::truncated(terms, d),
            None => Self::new(terms),
        }
    }
}

fn leading_ws(s: &str) -> usize {
    s.len() - s.trim_start().len()
}

/// `[+-]digits[/digits]`, nothing else.
pub fn parse_rational(s: &str) -> std::result::Result<Rational, String> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s.trim(), None),
    };
    let is_int = |t: &str, signed: bool| {
        let body = if signed {
            t.strip_prefix(['+', '-']).unwrap_or(t)
        } else {
            t
        };
        !body.is_empty() && body.bytes().all(|b| b.is_ascii_digit())
    };
    if !is_int(num, true) {
        return Err(format!("`{s}` is not a rational literal"));
    }
    let n: BigInt = num
        .trim_start_matches('+')
        .parse()
        .map_err(|_| format!("`{s}` is not a rational literal"))?;
    let d: BigInt = match den {
        None => BigInt::from(1),
        Some(d) if is_int(d, false) => {
            d.parse().map_err(|_| format!("bad denominator in `{s}`"))?
        }
        Some(_) => return Err(format!("`{s}` is not a rational literal")),
    };
    if d.is_zero() {
        return Err(format!("zero denominator in `{s}`"));
    }
    Ok(Rational::new(n, d))
}

impl fmt::Display for SeriesSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "1")?;
        for t in &self.terms {
            if t.coeff.is_negative() {
                write!(f, " - ({})*z^{}", -&t.coeff, t.exponent)?;
            } else {
                write!(f, " + ({})*z^{}", t.coeff, t.exponent)?;
            }
        }
        if let Some(d) = self.truncation_degree {
            write!(f, " + O(z^{})", d + 1)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn parses_documented_examples() {
        let f = SeriesSpec::parse("3: 1/3\n4: 1").unwrap();
        assert_eq!(
            f,
            SeriesSpec::new(vec![(3, ratio(1, 3)), (4, int(1))]).unwrap()
        );
        let g = SeriesSpec::parse("9: 1/9\n15: 2\n25: 3").unwrap();
        assert_eq!(g.coeff(15), int(2));
        assert_eq!(g.coeff(25), int(3));
        assert_eq!(g.coeff(0), int(1));
        assert_eq!(g.coeff(10), int(0));
    }

    #[test]
    fn rejects_zero_coefficient_with_position() {
        match SeriesSpec::parse("3: 0") {
            Err(Error::Parse { line, column, .. }) => {
                assert_eq!(line, 1);
                assert_eq!(column, 4);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_duplicates_and_junk() {
        assert!(matches!(
            SeriesSpec::parse("3: 1\n# note\n3: 2"),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(SeriesSpec::parse("3: 0.5").is_err());
        assert!(SeriesSpec::parse("3: 1/0").is_err());
        assert!(SeriesSpec::parse("x: 1").is_err());
        assert!(SeriesSpec::parse("0: 1").is_err());
        assert!(SeriesSpec::parse("3 1").is_err());
    }

    #[test]
    fn comments_signs_and_truncation() {
        let f = SeriesSpec::parse("# header\n2: -1/2  # tail\n5: +3\ntruncate: 12\n").unwrap();
        assert_eq!(f.coeff(2), ratio(-1, 2));
        assert_eq!(f.coeff(5), int(3));
        assert_eq!(f.truncation_degree(), Some(12));
        assert!(SeriesSpec::parse("20: 1\ntruncate: 12").is_err());
    }

    #[test]
    fn ratio_minus_one_matches_direct_evaluation() {
        let f = SeriesSpec::new(vec![(3, ratio(1, 3)), (4, int(1))]).unwrap();
        let (r, th) = (0.7, 1.3);
        let z = Complex64::from_polar(r, th);
        let direct = (Complex64::new(1.0, 0.0) + z.powu(3) / 3.0 + z.powu(4)) / f.eval(r)
            - Complex64::new(1.0, 0.0);
        assert!((direct - f.ratio_minus_one(r, th)).norm() < 1e-15);
    }

    #[test]
    fn reduce_and_rescale() {
        let f = SeriesSpec::new(vec![(6, int(1)), (9, ratio(1, 2))]).unwrap();
        let g = f.reduce_by(3).unwrap();
        assert_eq!(g.support(), vec![2, 3]);
        assert!(f.reduce_by(2).is_err());
        let h = g.rescale(&ratio(1, 2)).unwrap();
        assert_eq!(h.coeff(3), ratio(1, 16));
    }
}
