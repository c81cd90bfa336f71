use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use covchan::additivity::{AdditivityOptions, ScanOptions, ADDITIVITY_TOL};
use covchan::harness::{self, Format, Outcome, EXIT_INVALID, EXIT_NOT_CP};
use covchan::{ChannelSpec, Error, Family, LogBase};

#[derive(Debug, Parser)]
#[command(
    name = "covchan",
    version,
    about = "Covariant channel inspection and minimal output entropy additivity checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// CP/TP/PPT status, invariant decomposition, S_min and Holevo capacity of one channel
    Info {
        #[arg(long, value_enum, default_value = "tdep")]
        family: FamilyArg,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        t: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Compare S_min(Λ_t ⊗ Λ_t) with 2 S_min(Λ_t) at one t or over a grid
    Additivity {
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, default_value_t = 50)]
        starts: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Randomized test of λ' ≻ λ ⇒ X(λ') ≻ X(λ)
    Mm {
        #[arg(long, allow_negative_numbers = true)]
        t: f64,
        #[arg(long, default_value_t = 1000)]
        pairs: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Per-t classification table (CP, PPT, NSD, additivity gap)
    Sweep {
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, default_value_t = 50)]
        starts: usize,
        /// Random simplex points probed for the NSD criterion per row
        #[arg(long, default_value_t = 200)]
        lambdas: usize,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Args)]
struct Common {
    #[arg(long)]
    d: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Tolerance override (predicates for info, gap for additivity/sweep)
    #[arg(long)]
    tol: Option<f64>,
    /// Write to this file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    #[arg(long, value_enum, default_value = "e")]
    log_base: LogBaseArg,
}

#[derive(Debug, Args)]
struct GridArgs {
    #[arg(long, allow_negative_numbers = true, conflicts_with_all = ["t_from", "t_to", "steps"])]
    t: Option<f64>,
    #[arg(long, allow_negative_numbers = true, requires_all = ["t_to", "steps"])]
    t_from: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    t_to: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
}

impl GridArgs {
    fn grid(&self) -> Result<Vec<f64>, Error> {
        match (self.t, self.t_from, self.t_to, self.steps) {
            (Some(t), None, None, None) => Ok(vec![t]),
            (None, Some(from), Some(to), Some(steps)) => harness::t_grid(from, to, steps),
            _ => Err(Error::InvalidArgument(
                "give either --t or --t-from/--t-to/--steps".into(),
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FamilyArg {
    Dep,
    Tdep,
    Trace,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum LogBaseArg {
    E,
    #[value(name = "2")]
    Two,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Dep => Family::Depolarising,
            FamilyArg::Tdep => Family::TransposeDepolarising,
            FamilyArg::Trace => Family::Trace,
        }
    }
}

impl Common {
    fn format_or(&self, default: Format) -> Format {
        match self.format {
            Some(FormatArg::Csv) => Format::Csv,
            Some(FormatArg::Json) => Format::Json,
            None => default,
        }
    }

    fn log_base(&self) -> LogBase {
        match self.log_base {
            LogBaseArg::E => LogBase::Natural,
            LogBaseArg::Two => LogBase::Two,
        }
    }
}

fn run(cli: Cli) -> Result<(Outcome, Option<PathBuf>), Error> {
    Ok(match cli.command {
        Command::Info { family, t, common } => {
            let spec = ChannelSpec::new(family.into(), common.d, t);
            let outcome = match common.tol {
                Some(tol) => harness::cmd_info_with_tol(
                    &spec,
                    tol,
                    common.log_base(),
                    common.format_or(Format::Json),
                )?,
                None => {
                    harness::cmd_info(&spec, common.log_base(), common.format_or(Format::Json))?
                }
            };
            (outcome, common.out)
        }
        Command::Additivity {
            grid,
            starts,
            common,
        } => {
            let opts = AdditivityOptions {
                n_starts: starts,
                seed: common.seed,
                tol: common.tol.unwrap_or(ADDITIVITY_TOL),
            };
            let outcome = harness::cmd_additivity(
                common.d,
                &grid.grid()?,
                &opts,
                common.log_base(),
                common.format_or(Format::Csv),
            )?;
            (outcome, common.out)
        }
        Command::Mm { t, pairs, common } => {
            let outcome = harness::cmd_mm(
                common.d,
                t,
                pairs,
                common.seed,
                common.format_or(Format::Json),
            )?;
            (outcome, common.out)
        }
        Command::Sweep {
            grid,
            starts,
            lambdas,
            common,
        } => {
            let opts = ScanOptions {
                n_starts: starts,
                n_lambda: lambdas,
                seed: common.seed,
                tol: common.tol.unwrap_or(ADDITIVITY_TOL),
            };
            let outcome = harness::cmd_sweep(
                common.d,
                &grid.grid()?,
                &opts,
                common.log_base(),
                common.format_or(Format::Csv),
            )?;
            (outcome, common.out)
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((outcome, out)) => {
            let written = match out {
                Some(path) => fs::write(&path, outcome.body.as_bytes()),
                None => std::io::stdout().write_all(outcome.body.as_bytes()),
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
            ExitCode::from(outcome.exit_code as u8)
        }
        Err(e @ Error::NotCp { .. }) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_NOT_CP as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INVALID as u8)
        }
    }
}
