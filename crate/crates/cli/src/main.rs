mod commands;
mod render;

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

/// Exact lattice probabilities, certified normal approximations and
/// Clopper-Pearson bounds.
#[derive(Parser, Debug)]
#[command(name = "normcert", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Plain)]
    format: Format,

    /// Write output to a file instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Plain,
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Normal approximation of P(X in I) with a guaranteed error bound.
    ///
    /// LAW is `binomial N P`, `hypergeometric POPULATION SUCCESSES DRAWS` or
    /// `poisson LAMBDA`.
    Approx(ApproxArgs),
    /// Exact Clopper-Pearson bounds with their closed-form brackets.
    Cp(CpArgs),
    /// Worst interval and Kolmogorov discrepancies of a law against its normal.
    Extremal(ExtremalArgs),
    /// Run verification suites over a grid preset.
    Verify(VerifyArgs),
    /// Recompute the printed constants.
    Constants,
}

#[derive(Args, Debug)]
pub struct ApproxArgs {
    /// Family name followed by its parameters.
    #[arg(required = true, num_args = 2..=4, value_name = "LAW")]
    pub law: Vec<String>,

    /// Closed interval [A, B]; `-inf` and `inf` are allowed (and opened).
    #[arg(long, num_args = 2, allow_hyphen_values = true, value_names = ["A", "B"], required_unless_present = "bracket")]
    pub interval: Vec<String>,

    /// Interval in bracket syntax, such as `(1.5,4.5]`, `(-inf,3]` or `{0}`.
    #[arg(long, conflicts_with = "interval", allow_hyphen_values = true, value_name = "EXPR")]
    pub bracket: Option<String>,

    /// Continuity-corrected bound for binomial N 0.5 (half-integer endpoints).
    #[arg(long)]
    pub cc: bool,

    /// Also consider the 1/sqrt(2 pi) constant for symmetric laws.
    #[arg(long)]
    pub symmetric_density: bool,
}

#[derive(Args, Debug)]
pub struct CpArgs {
    /// `N X BETA`, or `N BETA` with --all.
    #[arg(required = true, num_args = 2..=3, value_name = "ARGS")]
    pub values: Vec<String>,

    /// Every x from 0 to N.
    #[arg(long)]
    pub all: bool,

    /// Two-sided interval at level BETA, each side at (1 + BETA) / 2.
    #[arg(long)]
    pub two_sided: bool,

    /// Clip the closed-form brackets to [0, 1] for display.
    #[arg(long)]
    pub clamp: bool,
}

#[derive(Args, Debug)]
pub struct ExtremalArgs {
    #[arg(required = true, num_args = 2..=4, value_name = "LAW")]
    pub law: Vec<String>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Suite to run; repeat for several. Defaults to every default suite.
    #[arg(long = "suite", value_name = "NAME")]
    pub suites: Vec<String>,

    /// Named grid preset.
    #[arg(long, default_value = "desk")]
    pub preset: String,

    /// Sweep specification file (json), used instead of a preset.
    #[arg(long, conflicts_with = "preset")]
    pub spec: Option<PathBuf>,

    /// Worker threads.
    #[arg(long)]
    pub threads: Option<usize>,

    /// Stop each suite after this many grid cells (the report is then incomplete).
    #[arg(long)]
    pub max_cases: Option<u64>,

    /// Record wall time in the report.
    #[arg(long)]
    pub timing: bool,

    /// List the suites and presets and exit.
    #[arg(long)]
    pub list: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut sink: Box<dyn std::io::Write> = match &cli.output {
        Some(path) => match std::fs::File::create(path) {
            Ok(f) => Box::new(std::io::BufWriter::new(f)),
            Err(e) => {
                eprintln!("error: cannot create {}: {e}", path.display());
                return ExitCode::from(2);
            }
        },
        None => Box::new(std::io::stdout().lock()),
    };
    let result = match &cli.command {
        Command::Approx(a) => commands::approx(a, cli.format, &mut sink),
        Command::Cp(a) => commands::cp(a, cli.format, &mut sink),
        Command::Extremal(a) => commands::extremal(a, cli.format, &mut sink),
        Command::Verify(a) => commands::verify(a, cli.format, &mut sink),
        Command::Constants => commands::constants(cli.format, &mut sink),
    };
    let flushed = sink.flush();
    match (result, flushed) {
        (Ok(true), Ok(())) => ExitCode::SUCCESS,
        (Ok(false), Ok(())) => ExitCode::from(1),
        (Err(e), _) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        (_, Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
