//! `calcverify`: check derivatives, antiderivatives and integrals from the shell.

mod commands;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use calcverify::cordic::DEFAULT_ITERS;
use calcverify::diffcheck::{DEFAULT_STEP, DEFAULT_TOL_ABS, DEFAULT_TOL_REL};
use calcverify::solvers::SolveOptions;
use calcverify::tables::CACHE_ENV_VAR;
use clap::{Parser, Subcommand};

use commands::{AntiderivArgs, DiffcheckArgs, Failure, Method, Outcome, SolveArgs};
use output::Mode;

const DEFAULT_POINTS: usize = 20;
const CACHE_FILE: &str = "gauss_rules.tab";

#[derive(Parser, Debug)]
#[command(
    name = "calcverify",
    version,
    about = "Numerical checks for calculus homework and code"
)]
struct Cli {
    /// Print a single JSON object instead of aligned text.
    #[arg(long, global = true)]
    json: bool,

    /// Rule cache file (default: $CALCVERIFY_CACHE, then the platform cache directory).
    #[arg(long, global = true, value_name = "PATH")]
    cache: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
#[command(allow_negative_numbers = true)]
enum Command {
    /// Integrate an expression over an interval or box: `integrate "x*y" x 0 1 y 0 2`.
    Integrate {
        /// Integrand over the axis variables.
        #[arg(allow_hyphen_values = true)]
        expr: String,
        /// Axes as VAR LO HI triples, e.g. `x 0 1 y -1 1` (at most three).
        #[arg(required = true, num_args = 3.., allow_negative_numbers = true, value_name = "AXIS")]
        axes: Vec<String>,
        /// Gauss points per axis.
        #[arg(long, default_value_t = DEFAULT_POINTS)]
        n: usize,
    },
    /// Compare an analytic derivative with a central difference at a point.
    Diffcheck {
        /// Function of the variable.
        #[arg(allow_hyphen_values = true)]
        f: String,
        /// Claimed derivative of F.
        #[arg(allow_hyphen_values = true)]
        fprime: String,
        /// Point at which to compare.
        point: f64,
        /// Central-difference step.
        #[arg(long, default_value_t = DEFAULT_STEP)]
        h: f64,
        /// Sets both the absolute and relative tolerance.
        #[arg(long, conflicts_with_all = ["tol_abs", "tol_rel"])]
        tol: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_TOL_ABS)]
        tol_abs: f64,
        #[arg(long, default_value_t = DEFAULT_TOL_REL)]
        tol_rel: f64,
        /// Name of the variable in the expressions.
        #[arg(long, default_value = "x")]
        var: String,
    },
    /// Check F(b) - F(a) against a quadrature of f over [a, b].
    Antideriv {
        /// Integrand.
        #[arg(allow_hyphen_values = true)]
        f: String,
        /// Claimed antiderivative of F.
        #[arg(allow_hyphen_values = true)]
        antiderivative: String,
        /// Lower limit.
        a: f64,
        /// Upper limit.
        b: f64,
        /// Gauss points.
        #[arg(long, default_value_t = DEFAULT_POINTS)]
        n: usize,
        /// Largest accepted |F(b) - F(a) - quadrature|.
        #[arg(long, default_value_t = DEFAULT_TOL_ABS)]
        tol: f64,
        /// Name of the variable in the expressions.
        #[arg(long, default_value = "x")]
        var: String,
    },
    /// Solve f(x) = c by Newton's method or the secant method.
    Solve {
        /// Function of the variable.
        #[arg(allow_hyphen_values = true)]
        f: String,
        /// Target value.
        #[arg(long, default_value_t = 0.0)]
        c: f64,
        #[arg(long, value_enum, default_value_t = Method::Newton)]
        method: Method,
        /// Starting point.
        #[arg(long, default_value_t = 1.0)]
        x0: f64,
        /// Second secant start (default x0 + 1).
        #[arg(long)]
        x1: Option<f64>,
        /// Stop once |f(x) - c| is at most this.
        #[arg(long, default_value_t = SolveOptions::default().tol)]
        tol: f64,
        #[arg(long, default_value_t = SolveOptions::default().max_iters)]
        max_iters: usize,
        /// Analytic derivative for Newton (default: central difference).
        #[arg(long, allow_hyphen_values = true)]
        derivative: Option<String>,
        /// Name of the variable in the expressions.
        #[arg(long, default_value = "x")]
        var: String,
    },
    /// Print the n-point Gauss-Legendre rule in table-file format.
    Nodes {
        /// Number of points, 1 to 64.
        n: usize,
    },
    /// Sine and cosine by CORDIC, compared with the host library.
    Cordic {
        /// Angle in radians.
        theta: f64,
        #[arg(long, default_value_t = DEFAULT_ITERS)]
        iters: usize,
    },
}

fn cache_path(flag: Option<PathBuf>) -> Option<PathBuf> {
    flag.or_else(|| {
        std::env::var_os(CACHE_ENV_VAR)
            .filter(|v| !v.is_empty())
            .map(PathBuf::from)
    })
    .or_else(|| dirs::cache_dir().map(|d| d.join("calcverify").join(CACHE_FILE)))
}

fn run(cli: Cli, mode: Mode) -> Result<Outcome, Failure> {
    match cli.command {
        Command::Integrate { expr, axes, n } => {
            let cache = cache_path(cli.cache);
            commands::integrate(&expr, &axes, n, cache.as_deref(), mode)
        }
        Command::Diffcheck {
            f,
            fprime,
            point,
            h,
            tol,
            tol_abs,
            tol_rel,
            var,
        } => commands::diffcheck(
            &DiffcheckArgs {
                f: &f,
                fprime: &fprime,
                var: &var,
                point,
                h,
                tol_abs: tol.unwrap_or(tol_abs),
                tol_rel: tol.unwrap_or(tol_rel),
            },
            mode,
        ),
        Command::Antideriv {
            f,
            antiderivative,
            a,
            b,
            n,
            tol,
            var,
        } => commands::antideriv(
            &AntiderivArgs {
                f: &f,
                antiderivative: &antiderivative,
                var: &var,
                a,
                b,
                n,
                tol,
            },
            mode,
        ),
        Command::Solve {
            f,
            c,
            method,
            x0,
            x1,
            tol,
            max_iters,
            derivative,
            var,
        } => commands::solve(
            &SolveArgs {
                f: &f,
                derivative: derivative.as_deref(),
                var: &var,
                c,
                method,
                x0,
                x1,
                opts: SolveOptions { tol, max_iters },
            },
            mode,
        ),
        Command::Nodes { n } => commands::nodes(n, mode),
        Command::Cordic { theta, iters } => commands::cordic(theta, iters, mode),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    // clap exits with status 2 on usage errors and 0 for --help.
    let cli = Cli::parse();
    let mode = if cli.json { Mode::Json } else { Mode::Plain };
    match run(cli, mode) {
        Ok(outcome) => {
            print!("{}", outcome.output);
            if outcome.code != 0 && mode == Mode::Plain {
                eprintln!("calcverify: check failed");
            }
            ExitCode::from(outcome.code)
        }
        Err(failure) => {
            let text = failure.render(mode);
            if mode == Mode::Json {
                print!("{text}");
            } else {
                let _ = std::io::stderr().write_all(text.as_bytes());
            }
            ExitCode::from(failure.code())
        }
    }
}
