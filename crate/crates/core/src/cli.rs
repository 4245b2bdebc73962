//! Command-line surface: series input, `n`/`k` formulas over a grid of `m`,
//! the subcommands and their tables.
//!
//! Floats are printed in scientific notation with 12 fractional digits
//! (`1.234567890123e4`); anything printed as `p/q` or a bare integer is exact.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use crate::asymptotics::{
    t0_coefficients, t0_coefficients_exact, t1_estimate_with, EstimateOptions, Prop9Family,
};
use crate::error::{Error, Result};
use crate::oracle::{
    alias_free_nodes, contour_coefficient, exact_coefficient_with, ExactMethod, OracleResult,
};
use crate::profile::analyze;
use crate::rational::{self, Rational};
use crate::saddle::{mu_series, solve_saddle};
use crate::series::revert_saddle;
use crate::series_spec::{parse_rational, SeriesSpec};

/// Largest quadrature node count the `verify` command will run.
pub const MAX_QUADRATURE_NODES: usize = 1 << 24;
/// Largest `k` for power-truncate exact coefficients.
pub const MAX_K_POWER_TRUNCATE: u64 = 4096;
/// Largest `k` for the recurrence path.
pub const MAX_K_RECURRENCE: u64 = 1 << 16;

/// Reads a series from a file path, or parses the argument itself with
/// `;` standing for a line break (`"3: 1/3; 4: 1"`).
pub fn load_spec(arg: &str) -> Result<SeriesSpec> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::invalid(format!("cannot read {arg}: {e}")))?;
        SeriesSpec::parse(&text)
    } else {
        parse_spec(arg)
    }
}

pub fn parse_spec(text: &str) -> Result<SeriesSpec> {
    SeriesSpec::parse(&text.replace(';', "\n"))
}

/// `2..6` (inclusive), `2,3,5` or a single value.
pub fn parse_grid(s: &str) -> Result<Vec<u64>> {
    let bad = || Error::invalid(format!("`{s}` is not a grid like `2..6` or `2,3,5`"));
    let num = |t: &str| t.trim().parse::<u64>().map_err(|_| bad());
    let grid: Vec<u64> = if let Some((a, b)) = s.split_once("..") {
        let (a, b) = (num(a)?, num(b)?);
        if a > b {
            return Err(bad());
        }
        (a..=b).collect()
    } else {
        s.split(',').map(num).collect::<Result<_>>()?
    };
    if grid.is_empty() {
        return Err(bad());
    }
    Ok(grid)
}

/// Integer expression in `m` with `+ - * ^` and parentheses, e.g. `m^15` or `3*m^2+1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Formula {
    text: String,
    expr: Expr,
}

#[derive(Debug, Clone, PartialEq)]
enum Expr {
    Num(u64),
    M,
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

impl Formula {
    pub fn uses_m(&self) -> bool {
        fn walk(e: &Expr) -> bool {
            match e {
                Expr::Num(_) => false,
                Expr::M => true,
                Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => walk(a) || walk(b),
                Expr::Pow(a, _) => walk(a),
            }
        }
        walk(&self.expr)
    }

    pub fn eval(&self, m: u64) -> Result<u64> {
        fn go(e: &Expr, m: u64) -> Option<u64> {
            match e {
                Expr::Num(v) => Some(*v),
                Expr::M => Some(m),
                Expr::Add(a, b) => go(a, m)?.checked_add(go(b, m)?),
                Expr::Sub(a, b) => go(a, m)?.checked_sub(go(b, m)?),
                Expr::Mul(a, b) => go(a, m)?.checked_mul(go(b, m)?),
                Expr::Pow(a, p) => go(a, m)?.checked_pow(*p),
            }
        }
        go(&self.expr, m).ok_or_else(|| {
            Error::invalid(format!(
                "`{}` at m = {m} leaves the range of u64",
                self.text
            ))
        })
    }
}

impl FromStr for Formula {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let tokens: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut p = FormulaParser { tokens, pos: 0 };
        let expr = p.expr()?;
        if p.pos != p.tokens.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(Formula {
            text: s.trim().to_string(),
            expr,
        })
    }
}

impl std::fmt::Display for Formula {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.text)
    }
}

struct FormulaParser {
    tokens: Vec<char>,
    pos: usize,
}

impl FormulaParser {
    fn error(&self, msg: &str) -> Error {
        Error::Parse {
            line: 1,
            column: self.pos + 1,
            message: format!("formula: {msg}"),
        }
    }

    fn peek(&self) -> Option<char> {
        self.tokens.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        while let Some(op @ ('+' | '-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            lhs = if op == '+' {
                Expr::Add(Box::new(lhs), Box::new(rhs))
            } else {
                Expr::Sub(Box::new(lhs), Box::new(rhs))
            };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let p = self.number()?;
            let p = u32::try_from(p).map_err(|_| self.error("exponent too large"))?;
            return Ok(Expr::Pow(Box::new(base), p));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            Some('m') => {
                self.pos += 1;
                Ok(Expr::M)
            }
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => Ok(Expr::Num(self.number()?)),
            _ => Err(self.error("expected a number, `m` or `(`")),
        }
    }

    fn number(&mut self) -> Result<u64> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected digits"));
        }
        let digits: String = self.tokens[start..self.pos].iter().collect();
        digits.parse().map_err(|_| self.error("number too large"))
    }
}

/// `(m, n, k)` triples from the formulas and the grid; `m` is `None` when
/// neither formula mentions it.
pub fn expand_grid(
    n: &Formula,
    k: &Formula,
    grid: Option<&[u64]>,
) -> Result<Vec<(Option<u64>, u64, u64)>> {
    let points: Vec<Option<u64>> = if n.uses_m() || k.uses_m() {
        let grid =
            grid.ok_or_else(|| Error::invalid("a formula uses m, so an m grid (--m) is required"))?;
        grid.iter().copied().map(Some).collect()
    } else {
        vec![None]
    };
    points
        .into_iter()
        .map(|m| {
            let mv = m.unwrap_or(0);
            let (nv, kv) = (n.eval(mv)?, k.eval(mv)?);
            if nv == 0 {
                return Err(Error::invalid("n must be positive"));
            }
            Ok((m, nv, kv))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Csv,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub title: String,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(title: impl Into<String>, headers: &[&str]) -> Self {
        Table {
            title: title.into(),
            headers: headers.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> String {
        let mut out = String::new();
        match format {
            Format::Csv => {
                let _ = writeln!(out, "# {}", self.title);
                let _ = writeln!(out, "{}", self.headers.join(","));
                for row in &self.rows {
                    let cells: Vec<String> = row.iter().map(|c| csv_cell(c)).collect();
                    let _ = writeln!(out, "{}", cells.join(","));
                }
            }
            Format::Text => {
                let mut widths: Vec<usize> = self.headers.iter().map(|h| h.len()).collect();
                for row in &self.rows {
                    for (w, c) in widths.iter_mut().zip(row) {
                        *w = (*w).max(c.len());
                    }
                }
                let line = |cells: &[String]| {
                    let padded: Vec<String> = cells
                        .iter()
                        .zip(&widths)
                        .map(|(c, w)| format!("{c:>w$}"))
                        .collect();
                    padded.join("  ").trim_end().to_string()
                };
                let _ = writeln!(out, "{}", self.title);
                let _ = writeln!(out, "{}", line(&self.headers));
                for row in &self.rows {
                    let _ = writeln!(out, "{}", line(row));
                }
            }
        }
        out
    }
}

fn csv_cell(c: &str) -> String {
    if c.contains([',', '"', '\n']) {
        format!("\"{}\"", c.replace('"', "\"\""))
    } else {
        c.to_string()
    }
}

pub fn render(tables: &[Table], format: Format) -> String {
    tables
        .iter()
        .map(|t| t.render(format))
        .collect::<Vec<_>>()
        .join("\n")
}

pub fn fmt_f(x: f64) -> String {
    format!("{x:.12e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or_else(|| "-".to_string(), fmt_f)
}

fn fmt_m(m: Option<u64>) -> String {
    m.map_or_else(|| "-".to_string(), |m| m.to_string())
}

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Analyze,
    Exact {
        n: Formula,
        k: Formula,
        grid: Option<Vec<u64>>,
        method: ExactMethod,
    },
    Estimate {
        n: Formula,
        k: Formula,
        grid: Option<Vec<u64>>,
        expand: Option<usize>,
    },
    /// Expansion coefficients at the saddle point of `(n, k)`, or at a given
    /// rational radius (then also exactly).
    Expand {
        at: ExpandAt,
        terms: usize,
    },
    Verify {
        n: Formula,
        k: Formula,
        grid: Option<Vec<u64>>,
        quadrature: Option<usize>,
    },
    PsiScan {
        u: u64,
        t_max: f64,
        t_step: f64,
        full: bool,
    },
    Example {
        id: u8,
        b: Rational,
        c: Rational,
        scale: Option<u64>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExpandAt {
    Saddle { n: u64, k: u64 },
    Radius(Rational),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// File path or inline series; unused by `example`.
    pub spec: Option<String>,
    pub command: Command,
    pub format: Format,
}

impl RunConfig {
    /// Checks every numeric parameter; run before any computation.
    pub fn validate(&self) -> Result<()> {
        if !matches!(self.command, Command::Example { .. }) && self.spec.is_none() {
            return Err(Error::invalid("this command needs a series"));
        }
        match &self.command {
            Command::Analyze => {}
            Command::Exact { n, k, grid, .. }
            | Command::Estimate { n, k, grid, .. }
            | Command::Verify { n, k, grid, .. } => {
                expand_grid(n, k, grid.as_deref())?;
            }
            Command::Expand { at, terms } => {
                check_terms(*terms)?;
                match at {
                    ExpandAt::Saddle { n, k } if *n == 0 || *k == 0 => {
                        return Err(Error::invalid("n and k must be positive"));
                    }
                    ExpandAt::Radius(r) if *r <= rational::int(0) => {
                        return Err(Error::invalid("the radius must be positive"));
                    }
                    _ => {}
                }
            }
            Command::PsiScan { t_max, t_step, .. } => check_t_grid(*t_max, *t_step)?,
            Command::Example { id, scale, .. } => {
                if !(1..=4).contains(id) {
                    return Err(Error::invalid(format!("no example {id}; choose 1 to 4")));
                }
                if *scale == Some(0) {
                    return Err(Error::invalid("scale must be positive"));
                }
            }
        }
        if let Command::Estimate {
            expand: Some(terms),
            ..
        } = &self.command
        {
            check_terms(*terms)?;
        }
        Ok(())
    }
}

fn check_terms(terms: usize) -> Result<()> {
    if terms == 0 || terms > crate::asymptotics::MAX_EXPANSION {
        return Err(Error::OutOfRange {
            what: "expansion terms",
            value: terms as f64,
            lo: 0.0,
            hi: crate::asymptotics::MAX_EXPANSION as f64 + 1.0,
        });
    }
    Ok(())
}

fn check_t_grid(t_max: f64, t_step: f64) -> Result<()> {
    if !(t_max.is_finite() && t_max >= 0.0 && t_step.is_finite() && t_step > 0.0) {
        return Err(Error::invalid("need t_max >= 0 and t_step > 0"));
    }
    if t_max / t_step > 1e7 {
        return Err(Error::refused(format!(
            "{} t points is too many; raise --t-step",
            (t_max / t_step) as u64
        )));
    }
    Ok(())
}

/// Validates, runs and renders.
pub fn run(cfg: &RunConfig) -> Result<String> {
    cfg.validate()?;
    let tables = match &cfg.command {
        Command::Example { id, b, c, scale } => run_example(*id, b, c, *scale)?,
        cmd => {
            let spec = load_spec(cfg.spec.as_deref().unwrap_or_default())?;
            match cmd {
                Command::Analyze => vec![analyze_table(&spec)?],
                Command::Exact { n, k, grid, method } => {
                    vec![exact_table(
                        &spec,
                        &expand_grid(n, k, grid.as_deref())?,
                        *method,
                    )?]
                }
                Command::Estimate { n, k, grid, expand } => {
                    estimate_tables(&spec, &expand_grid(n, k, grid.as_deref())?, *expand)?
                }
                Command::Expand { at, terms } => vec![expand_table(&spec, at, *terms)?],
                Command::Verify {
                    n,
                    k,
                    grid,
                    quadrature,
                } => vec![verify_table(
                    &spec,
                    &expand_grid(n, k, grid.as_deref())?,
                    *quadrature,
                )?],
                Command::PsiScan {
                    u,
                    t_max,
                    t_step,
                    full,
                } => psi_scan_tables(&spec, *u, *t_max, *t_step, *full)?,
                Command::Example { .. } => unreachable!(),
            }
        }
    };
    Ok(render(&tables, cfg.format))
}

pub fn analyze_table(f: &SeriesSpec) -> Result<Table> {
    let p = analyze(f)?;
    let mut t = Table::new(format!("profile of f = {f}"), &["quantity", "value"]);
    let show = |v: &Option<u64>| v.map_or("undetermined".to_string(), |x| x.to_string());
    let list = |v: &[Option<u64>]| v.iter().map(show).collect::<Vec<_>>().join(" ");
    let mut row = |k: &str, v: String| t.push(vec![k.to_string(), v]);
    row("gcd", p.gcd.to_string());
    row("l", p.l.to_string());
    row("m", p.m.to_string());
    row("l_j", list(&p.lj));
    row("l'_j", list(&p.lj_prime));
    row(
        "theta_j",
        p.thetas
            .iter()
            .map(|a| a.to_string())
            .collect::<Vec<_>>()
            .join(" "),
    );
    row(
        "eps0",
        p.eps0.as_ref().map_or("-".to_string(), |e| e.to_string()),
    );
    row("strongly_positive", p.strongly_positive.to_string());
    row("degenerate", p.is_degenerate().to_string());
    Ok(t)
}

/// Power-truncate for small instances, the recurrence otherwise.
pub fn auto_method(n: u64, k: u64) -> ExactMethod {
    if n <= 4096 && k <= 256 {
        ExactMethod::PowerTruncate
    } else {
        ExactMethod::Recurrence
    }
}

/// Exact coefficient within the desk budget.
pub fn budgeted_exact(f: &SeriesSpec, n: u64, k: u64, method: ExactMethod) -> Result<OracleResult> {
    let limit = match method {
        ExactMethod::PowerTruncate => MAX_K_POWER_TRUNCATE,
        ExactMethod::Recurrence => MAX_K_RECURRENCE,
        ExactMethod::Multinomial => 64,
    };
    if k > limit {
        return Err(Error::refused(format!(
            "k = {k} is beyond the {method} budget (k <= {limit}); use a smaller scale"
        )));
    }
    if method == ExactMethod::Multinomial && n > 64 {
        return Err(Error::refused(
            "multinomial enumeration is limited to n <= 64",
        ));
    }
    exact_coefficient_with(f, n, k, method)
}

fn exact_table(
    f: &SeriesSpec,
    points: &[(Option<u64>, u64, u64)],
    method: ExactMethod,
) -> Result<Table> {
    let mut t = Table::new(
        format!("[z^k] f(z)^n for f = {f}"),
        &["m", "n", "k", "method", "exact", "log_abs", "sign"],
    );
    for &(m, n, k) in points {
        let r = budgeted_exact(f, n, k, method)?;
        t.push(vec![
            fmt_m(m),
            n.to_string(),
            k.to_string(),
            method.to_string(),
            r.exact.to_string(),
            fmt_f(r.log.ln_abs),
            r.log.sign.to_string(),
        ]);
    }
    Ok(t)
}

fn estimate_tables(
    f: &SeriesSpec,
    points: &[(Option<u64>, u64, u64)],
    expand: Option<usize>,
) -> Result<Vec<Table>> {
    let mut t = Table::new(
        format!("saddle-point estimate for f = {f}"),
        &[
            "m",
            "n",
            "k",
            "r",
            "mu",
            "sigma",
            "lambda",
            "delta",
            "log_dominant",
            "correction",
            "limit_correction",
            "log_estimate",
            "upper_bound_only",
        ],
    );
    let mut headers = vec!["m".to_string(), "n".to_string(), "k".to_string()];
    let terms = expand.unwrap_or(0);
    headers.extend((1..=terms).map(|i| format!("c_{i}")));
    headers.push("expansion_valid".to_string());
    headers.push("log_expanded_dominant".to_string());
    let mut c_table = Table {
        title: "expansion coefficients at the saddle point".to_string(),
        headers,
        rows: Vec::new(),
    };
    for &(m, n, k) in points {
        let rep = t1_estimate_with(f, n, k, EstimateOptions { expand })?;
        let s = &rep.saddle;
        t.push(vec![
            fmt_m(m),
            n.to_string(),
            k.to_string(),
            fmt_f(s.r),
            fmt_f(s.mu),
            fmt_f(s.sigma),
            fmt_f(s.lambda),
            fmt_f(rep.delta),
            fmt_f(rep.log_dominant),
            fmt_f(rep.correction.total),
            fmt_opt(rep.limit_correction.as_ref().map(|c| c.total)),
            fmt_opt(rep.estimate),
            rep.upper_bound_only.to_string(),
        ]);
        if let Some(c) = &rep.expansion_c {
            let mut row = vec![fmt_m(m), n.to_string(), k.to_string()];
            row.extend(c.iter().map(|&v| fmt_f(v)));
            row.push(rep.expansion_valid.to_string());
            row.push(fmt_opt(rep.expanded_log_dominant()));
            c_table.push(row);
        }
    }
    let mut out = vec![t];
    if expand.is_some() {
        out.push(c_table);
    }
    Ok(out)
}

fn expand_table(f: &SeriesSpec, at: &ExpandAt, terms: usize) -> Result<Table> {
    let mut t = Table::new(
        format!("expansion coefficients c_nu for f = {f}"),
        &["nu", "c_nu", "c_nu_exact"],
    );
    let (float, exact) = match at {
        ExpandAt::Saddle { n, k } => {
            let s = solve_saddle(f, *n, *k as f64)?;
            (t0_coefficients(f, s.r, terms)?, None)
        }
        ExpandAt::Radius(r) => (
            t0_coefficients(f, rational::to_f64(r), terms)?,
            t0_coefficients_exact(f, r, terms).ok(),
        ),
    };
    for (i, c) in float.iter().enumerate() {
        let ex = exact.as_ref().map_or("-".to_string(), |e| e[i].to_string());
        t.push(vec![(i + 1).to_string(), fmt_f(*c), ex]);
    }
    Ok(t)
}

/// Default node count: alias-free when affordable, otherwise enough to
/// resolve both `e^{-ik theta}` and the saddle peak of width `1 / lambda`.
pub fn default_nodes(f: &SeriesSpec, n: u64, k: u64, lambda: f64) -> usize {
    let alias_free = alias_free_nodes(f, n, k);
    if alias_free <= MAX_QUADRATURE_NODES {
        alias_free
    } else {
        ((4 * k) as usize).max((64.0 * lambda).ceil() as usize)
    }
}

fn verify_table(
    f: &SeriesSpec,
    points: &[(Option<u64>, u64, u64)],
    quadrature: Option<usize>,
) -> Result<Table> {
    let mut t = Table::new(
        format!("oracle comparison for f = {f}"),
        &[
            "m",
            "n",
            "k",
            "method",
            "log_exact",
            "nodes",
            "log_contour",
            "contour_rel_err",
            "log_estimate",
            "exact_over_estimate",
            "exact_over_dominant",
            "upper_bound_only",
        ],
    );
    for &(m, n, k) in points {
        let method = auto_method(n, k);
        let exact = budgeted_exact(f, n, k, method)?;
        let saddle = solve_saddle(f, n, k as f64)?;
        let q = quadrature.unwrap_or_else(|| default_nodes(f, n, k, saddle.lambda));
        if q > MAX_QUADRATURE_NODES {
            return Err(Error::refused(format!(
                "{q} quadrature nodes exceed the budget of {MAX_QUADRATURE_NODES}"
            )));
        }
        let contour = contour_coefficient(f, n, k as f64, saddle.r, q)?;
        let rel = if exact.log.sign == 0 {
            f64::NAN
        } else {
            (contour.ratio(&exact.log) - 1.0).abs()
        };
        let report = t1_estimate_with(f, n, k, EstimateOptions::default()).ok();
        let vs = |log: Option<f64>| -> String {
            match (log, exact.log.sign) {
                (Some(l), 1) => fmt_f((exact.log.ln_abs - l).exp()),
                _ => "-".to_string(),
            }
        };
        t.push(vec![
            fmt_m(m),
            n.to_string(),
            k.to_string(),
            method.to_string(),
            fmt_f(exact.log.ln_abs),
            q.to_string(),
            fmt_f(contour.ln_abs),
            fmt_f(rel),
            fmt_opt(report.as_ref().and_then(|r| r.estimate)),
            vs(report.as_ref().and_then(|r| r.estimate)),
            vs(report.as_ref().map(|r| r.log_dominant)),
            report.map_or("-".to_string(), |r| r.upper_bound_only.to_string()),
        ]);
    }
    Ok(t)
}

fn t_grid(t_max: f64, t_step: f64) -> Vec<f64> {
    let count = (t_max / t_step + 1e-9).floor() as usize;
    (0..=count).map(|i| i as f64 * t_step).collect()
}

fn psi_scan_tables(
    f: &SeriesSpec,
    u: u64,
    t_max: f64,
    t_step: f64,
    full: bool,
) -> Result<Vec<Table>> {
    let profile = analyze(f)?;
    let fam = Prop9Family::new(&profile.reduced.support(), u)?;
    Ok(psi_scan(&fam, t_max, t_step, full))
}

fn psi_scan(fam: &Prop9Family, t_max: f64, t_step: f64, full: bool) -> Vec<Table> {
    let l = fam.profile().l;
    let ts = t_grid(t_max, t_step);
    let mut summary = Table::new(
        format!("minimum of g(s, t) over t in [0, {t_max}] step {t_step}"),
        &["s", "t_at_min", "g_min"],
    );
    let mut grid = Table::new("g(s, t)", &["s", "t", "g"]);
    let mut overall = f64::INFINITY;
    for s in 0..l {
        let mut best = (f64::INFINITY, 0.0);
        for &t in &ts {
            let g = fam.g(s, t);
            if full {
                grid.push(vec![s.to_string(), fmt_f(t), fmt_f(g)]);
            }
            if g < best.0 {
                best = (g, t);
            }
        }
        overall = overall.min(best.0);
        summary.push(vec![s.to_string(), fmt_f(best.1), fmt_f(best.0)]);
    }
    summary.push(vec!["all".to_string(), "-".to_string(), fmt_f(overall)]);
    let mut out = vec![summary];
    if full {
        out.push(grid);
    }
    out
}

fn example_spec(terms: Vec<(u64, Rational)>) -> Result<SeriesSpec> {
    SeriesSpec::new(terms)
}

/// Reproduces one of the four worked examples at desk scale.
///
/// 1. `1 + z^3/3 + b z^4`, `n = k^4`, `k = 9, 12, ..` up to `scale` (default 15, at most 30).
/// 2. `L = {15, 20, 21}`, `u = 21`: `g(s, t)` for `t` up to `scale` (default 50) in steps of 0.1.
/// 3. `1 + z^9/9 + b z^15 + c z^25`: reversion coefficients, and estimates
///    for `n = m^25`, `k = m^16`, `m = 2..scale` (default 3, at most 5).
/// 4. Same series, `n = m^15`, `k = m^6`, `m = 2..scale` (default 3, at most 3).
pub fn run_example(id: u8, b: &Rational, c: &Rational, scale: Option<u64>) -> Result<Vec<Table>> {
    let budget = |max: u64, default: u64| -> Result<u64> {
        let s = scale.unwrap_or(default);
        if s > max {
            return Err(Error::refused(format!(
                "scale {s} exceeds the desk budget for example {id}; try --scale {max}"
            )));
        }
        Ok(s)
    };
    match id {
        1 => {
            let top = budget(30, 15)?;
            let f = example_spec(vec![(3, rational::ratio(1, 3)), (4, b.clone())])?;
            let ks: Vec<u64> = (9..=top.max(9)).step_by(3).collect();
            let points: Vec<(Option<u64>, u64, u64)> =
                ks.iter().map(|&k| (None, k.pow(4), k)).collect();
            Ok(vec![comparison_table(&f, &points)?])
        }
        2 => {
            let t_max = budget(1000, 50)? as f64;
            let fam = Prop9Family::new(&[15, 20, 21], 21)?;
            let mut tables = psi_scan(&fam, t_max, 0.1, false);
            let mut dev = 0.0f64;
            let s5 = 5f64.sqrt();
            for s in 0..15u64 {
                for t in t_grid(t_max, 0.1) {
                    dev = dev.max((fam.g(s, t) - ex2_closed_form(s, t, s5)).abs());
                }
            }
            let mut t = Table::new(
                "general family against the two-cosine closed form",
                &["max_abs_difference"],
            );
            t.push(vec![fmt_f(dev)]);
            tables.push(t);
            Ok(tables)
        }
        3 => {
            let top = budget(5, 3)?;
            let f = example_spec(vec![
                (9, rational::ratio(1, 9)),
                (15, b.clone()),
                (25, c.clone()),
            ])?;
            let mut tables = vec![reversion_table(b, c)?];
            let points: Vec<(Option<u64>, u64, u64)> = (2..=top.max(2))
                .map(|m| (Some(m), m.pow(25), m.pow(16)))
                .collect();
            tables.extend(estimate_tables(&f, &points, None)?);
            Ok(tables)
        }
        4 => {
            let top = budget(3, 3)?;
            let f = example_spec(vec![
                (9, rational::ratio(1, 9)),
                (15, b.clone()),
                (25, c.clone()),
            ])?;
            let mut points = Vec::new();
            for m in 2..=top.max(2) {
                let (n, k) = (m.pow(15), m.pow(6));
                points.push((Some(m), n, k));
                if k % 3 != 0 {
                    points.push((Some(m), n, nearest_multiple(k, 3)));
                }
            }
            Ok(vec![comparison_table(&f, &points)?])
        }
        _ => Err(Error::invalid(format!("no example {id}; choose 1 to 4"))),
    }
}

/// The multiple of `d` closest to `k`, ties going down.
pub fn nearest_multiple(k: u64, d: u64) -> u64 {
    let below = k - k % d;
    if k - below <= below + d - k {
        below
    } else {
        below + d
    }
}

fn ex2_closed_form(s: u64, t: f64, s5: f64) -> f64 {
    use std::f64::consts::PI;
    let sf = s as f64;
    1.0 + 2.0
        * (-t * (5.0 - s5) / 4.0).exp()
        * (2.0 * PI * sf / 5.0 - t * ((5.0 + s5) / 8.0).sqrt()).cos()
        + 2.0
            * (-t * (5.0 + s5) / 4.0).exp()
            * (4.0 * PI * sf / 5.0 - t * ((5.0 - s5) / 8.0).sqrt()).cos()
}

fn comparison_table(f: &SeriesSpec, points: &[(Option<u64>, u64, u64)]) -> Result<Table> {
    let mut t = Table::new(
        format!("exact against estimate for f = {f}"),
        &[
            "m",
            "n",
            "k",
            "log_exact",
            "log_estimate",
            "ratio",
            "correction",
            "limit_correction",
            "upper_bound_only",
        ],
    );
    for &(m, n, k) in points {
        let exact = budgeted_exact(f, n, k, auto_method(n, k))?;
        let rep = t1_estimate_with(f, n, k, EstimateOptions::default())?;
        let ratio = match (rep.estimate, exact.log.sign) {
            (Some(e), 1) => fmt_f((exact.log.ln_abs - e).exp()),
            _ => "-".to_string(),
        };
        t.push(vec![
            fmt_m(m),
            n.to_string(),
            k.to_string(),
            fmt_f(exact.log.ln_abs),
            fmt_opt(rep.estimate),
            ratio,
            fmt_f(rep.correction.total),
            fmt_opt(rep.limit_correction.as_ref().map(|c| c.total)),
            rep.upper_bound_only.to_string(),
        ]);
    }
    Ok(t)
}

/// Coefficients of `rho(t)` in `r = t rho(t)`, where `mu_f(r) = t^9`, next to
/// the closed forms in `b` and `c`.
pub fn ex3_reversion(b: &Rational, c: &Rational) -> Result<Vec<(usize, Rational, Rational)>> {
    let f = example_spec(vec![
        (9, rational::ratio(1, 9)),
        (15, b.clone()),
        (25, c.clone()),
    ])?;
    let order = 16;
    let mu = mu_series::<Rational>(&f, 9 + order)?;
    let rho = revert_saddle(&mu, 9, order)?;
    let expected = [
        (6, rational::ratio(-5, 3) * b),
        (9, rational::ratio(1, 81)),
        (12, rational::ratio(275, 9) * b * b),
        (15, rational::ratio(-53, 243) * b),
        (16, rational::ratio(-25, 9) * c),
    ];
    Ok(expected
        .into_iter()
        .map(|(i, want)| (i, rho.coeff(i).clone(), want))
        .collect())
}

fn reversion_table(b: &Rational, c: &Rational) -> Result<Table> {
    let mut t = Table::new(
        format!("coefficients of rho(t), r = t rho(t), b = {b}, c = {c}"),
        &["power", "computed", "closed_form", "match"],
    );
    for (i, got, want) in ex3_reversion(b, c)? {
        let ok = got == want;
        t.push(vec![
            i.to_string(),
            got.to_string(),
            want.to_string(),
            ok.to_string(),
        ]);
    }
    Ok(t)
}

/// Rational literal for command-line values such as `--b 1/2`.
pub fn parse_rational_arg(s: &str) -> Result<Rational> {
    parse_rational(s).map_err(Error::invalid)
}
