use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use largepow::cli::{self, Command, ExpandAt, Format, Formula, RunConfig};
use largepow::{Error, ExactMethod, Rational};

#[derive(Parser)]
#[command(
    name = "largepow",
    version,
    about = "Coefficients of large powers of power series"
)]
struct Cli {
    /// Emit CSV instead of aligned text.
    #[arg(long, global = true)]
    csv: bool,

    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<std::path::PathBuf>,

    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args)]
struct Points {
    /// Power n, or a formula in m such as `m^15`.
    #[arg(long)]
    n: Formula,
    /// Coefficient index k, or a formula in m such as `m^6`.
    #[arg(long)]
    k: Formula,
    /// Values of m: `2..6` or `2,3,5`.
    #[arg(long, value_parser = parse_grid)]
    m: Option<Grid>,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    PowerTruncate,
    Recurrence,
    Multinomial,
}

#[derive(Subcommand)]
enum Cmd {
    /// Exponent profile and strong positivity.
    Analyze { spec: String },
    /// Exact coefficient of z^k in f(z)^n.
    Exact {
        spec: String,
        #[command(flatten)]
        points: Points,
        #[arg(long, value_enum, default_value = "power-truncate")]
        method: MethodArg,
    },
    /// Saddle-point estimate with its correction factor.
    Estimate {
        spec: String,
        #[command(flatten)]
        points: Points,
        /// Also compute c_1..c_N.
        #[arg(long)]
        expand: Option<usize>,
    },
    /// Expansion coefficients c_1..c_N at the saddle point or a given radius.
    Expand {
        spec: String,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        k: Option<u64>,
        /// Rational radius; gives exact coefficients for polynomials.
        #[arg(long, value_parser = parse_rational, conflicts_with_all = ["n", "k"])]
        r: Option<Rational>,
        #[arg(long, default_value_t = 2)]
        terms: usize,
    },
    /// Compare exact, quadrature and estimate.
    Verify {
        spec: String,
        #[command(flatten)]
        points: Points,
        /// Quadrature node count.
        #[arg(long)]
        quadrature: Option<usize>,
    },
    /// Scan g(s, t) for the family where l_j = u carries gamma = t.
    PsiScan {
        spec: String,
        #[arg(long)]
        u: u64,
        #[arg(long)]
        t_max: f64,
        #[arg(long, default_value_t = 0.1)]
        t_step: f64,
        /// Print every grid point, not just the minima.
        #[arg(long)]
        full: bool,
    },
    /// Reproduce one of the worked examples.
    Example {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=4))]
        id: u8,
        #[arg(long, value_parser = parse_rational, default_value = "1")]
        b: Rational,
        #[arg(long, value_parser = parse_rational, default_value = "1")]
        c: Rational,
        #[arg(long)]
        scale: Option<u64>,
    },
}

#[derive(Clone)]
struct Grid(Vec<u64>);

fn parse_grid(s: &str) -> Result<Grid, String> {
    cli::parse_grid(s).map(Grid).map_err(|e| e.to_string())
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    cli::parse_rational_arg(s).map_err(|e| e.to_string())
}

fn config(args: Cli) -> Result<(RunConfig, Option<std::path::PathBuf>), Error> {
    let format = if args.csv { Format::Csv } else { Format::Text };
    let (spec, command) = match args.command {
        Cmd::Analyze { spec } => (Some(spec), Command::Analyze),
        Cmd::Exact {
            spec,
            points,
            method,
        } => (
            Some(spec),
            Command::Exact {
                n: points.n,
                k: points.k,
                grid: points.m.map(|g| g.0),
                method: match method {
                    MethodArg::PowerTruncate => ExactMethod::PowerTruncate,
                    MethodArg::Recurrence => ExactMethod::Recurrence,
                    MethodArg::Multinomial => ExactMethod::Multinomial,
                },
            },
        ),
        Cmd::Estimate {
            spec,
            points,
            expand,
        } => (
            Some(spec),
            Command::Estimate {
                n: points.n,
                k: points.k,
                grid: points.m.map(|g| g.0),
                expand,
            },
        ),
        Cmd::Expand {
            spec,
            n,
            k,
            r,
            terms,
        } => {
            let at = match (r, n, k) {
                (Some(r), _, _) => ExpandAt::Radius(r),
                (None, Some(n), Some(k)) => ExpandAt::Saddle { n, k },
                _ => {
                    return Err(Error::InvalidInput(
                        "give either --r or both --n and --k".into(),
                    ))
                }
            };
            (Some(spec), Command::Expand { at, terms })
        }
        Cmd::Verify {
            spec,
            points,
            quadrature,
        } => (
            Some(spec),
            Command::Verify {
                n: points.n,
                k: points.k,
                grid: points.m.map(|g| g.0),
                quadrature,
            },
        ),
        Cmd::PsiScan {
            spec,
            u,
            t_max,
            t_step,
            full,
        } => (
            Some(spec),
            Command::PsiScan {
                u,
                t_max,
                t_step,
                full,
            },
        ),
        Cmd::Example { id, b, c, scale } => (None, Command::Example { id, b, c, scale }),
    };
    Ok((
        RunConfig {
            spec,
            command,
            format,
        },
        args.output,
    ))
}

fn main() -> ExitCode {
    let args = Cli::parse();
    let result = config(args).and_then(|(cfg, out)| {
        let report = cli::run(&cfg)?;
        match out {
            Some(path) => std::fs::write(&path, report)
                .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display()))),
            None => {
                print!("{report}");
                Ok(())
            }
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
