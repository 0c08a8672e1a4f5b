//! `storder`: decide stochastic orders between distributions given as
//! expressions such as `gamma(3, 1.5)` or `gconv(1:1, 2:2)`.
//!
//! Exit status: 0 every requested order holds, 1 some order fails, 2 usage
//! or parse error, 3 the closed-form rule and the oracle disagree.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use storder_core::compare::{self, exit, CompareOptions, CURVE_GRID_POINTS};
use storder_core::dist::DEFAULT_TAIL_TOL;
use storder_core::expr::DistSpec;
use storder_core::oracle::{Relation, DEFAULT_GRID_POINTS, DEFAULT_QUANTILE_LEVELS, DEFAULT_TOL};
use storder_core::Error;

#[derive(Parser)]
#[command(name = "storder", version, about = "Stochastic-order criteria checked against definition-level oracles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide X ≤ Y for each requested order.
    Compare {
        x: String,
        y: String,
        /// Comma-separated subset of st,hr,rh,lr,lc,disp,star.
        #[arg(long, value_delimiter = ',', default_value = "st,hr,rh,lr", value_parser = parse_relation)]
        orders: Vec<Relation>,
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Print the parameter thresholds of a gconv, nbconv or pbin expression.
    Threshold {
        spec: String,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Write densities, distribution functions and hazards of X and Y.
    Curves {
        x: String,
        y: String,
        #[arg(long, short)]
        output: PathBuf,
        /// Explicit comma-separated evaluation points instead of the oracle grid.
        #[arg(long, value_delimiter = ',')]
        grid: Option<Vec<f64>>,
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
}

#[derive(Args)]
struct Common {
    /// Tolerance on the log scale.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Points of the continuous grid [default: 4001 for compare, 20001 for curves].
    #[arg(long)]
    grid_points: Option<usize>,
    /// Mass dropped from unbounded discrete tables.
    #[arg(long, default_value_t = DEFAULT_TAIL_TOL)]
    tail_tol: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl Common {
    fn options(&self, default_points: usize) -> CompareOptions {
        CompareOptions {
            tol: self.tol,
            grid_points: self.grid_points.unwrap_or(default_points),
            quantile_levels: DEFAULT_QUANTILE_LEVELS,
            tail_tol: self.tail_tol,
            seed: self.seed,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

fn parse_relation(s: &str) -> Result<Relation, String> {
    s.trim().parse().map_err(|e: Error| e.to_string())
}

enum Failure {
    Core(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn parse_spec(which: &str, text: &str) -> Result<DistSpec, Failure> {
    DistSpec::parse(text).map_err(|e| match e {
        Error::Parse { offset, message } => Failure::Io(format!("{which}: {message}\n  {text}\n  {:>width$}", "^", width = offset + 1)),
        other => Failure::Core(other),
    })
}

fn run(cli: Cli) -> Result<i32, Failure> {
    match cli.command {
        Command::Compare {
            x,
            y,
            orders,
            common,
            format,
        } => {
            let (x, y) = (parse_spec("X", &x)?, parse_spec("Y", &y)?);
            let report = compare::compare(&x, &y, &orders, &common.options(DEFAULT_GRID_POINTS))?;
            print!(
                "{}",
                match format {
                    Format::Json => report.to_json(),
                    Format::Csv => report.to_csv(),
                }
            );
            Ok(report.exit_code)
        }
        Command::Threshold { spec, format } => {
            let report = compare::thresholds(&parse_spec("spec", &spec)?)?;
            print!(
                "{}",
                match format {
                    Format::Json => report.to_json(),
                    Format::Csv => report.to_csv(),
                }
            );
            Ok(exit::HOLDS)
        }
        Command::Curves {
            x,
            y,
            output,
            grid,
            common,
            format,
        } => {
            let (x, y) = (parse_spec("X", &x)?, parse_spec("Y", &y)?);
            let table = compare::curves(&x, &y, grid.as_deref(), &common.options(CURVE_GRID_POINTS))?;
            let text = match format {
                Format::Json => table.to_json(),
                Format::Csv => table.to_csv(),
            };
            fs::write(&output, text).map_err(|e| Failure::Io(format!("cannot write {}: {e}", output.display())))?;
            Ok(exit::HOLDS)
        }
    }
}

fn main() -> ExitCode {
    // clap exits with status 2 on usage errors
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            compare::error_exit_code(&e)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            exit::USAGE
        }
    };
    ExitCode::from(code as u8)
}
