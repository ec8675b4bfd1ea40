use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use ed2::cli::config::{load_spec, ConfigError, GridRange};
use ed2::cli::runner::{
    render, run, Command, Format, Overrides, RunConfig, DEFAULT_ELLIPSE_SAMPLES,
};

#[derive(Parser)]
#[command(
    name = "ed2",
    version,
    about = "Frame geometry, soliton residuals and curvature invariants of surfaces in 4-space"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Soliton, frame-equation and compatibility residuals with a solution verdict.
    Check(Args),
    /// Every curvature invariant at every grid point.
    Analyze(Args),
    /// Point classification with a class histogram.
    Classify(Args),
    /// Frame vectors and curvatures at each grid point.
    Frame(Args),
    /// Curvature-ellipse samples (CSV unless --format json).
    Ellipse(Args),
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(clap::Args)]
struct Args {
    /// Surface definition file (TOML).
    #[arg(long)]
    surface: PathBuf,
    /// u range as start:stop:count.
    #[arg(long)]
    u: Option<String>,
    /// v range as start:stop:count.
    #[arg(long)]
    v: Option<String>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    jet_du: Option<usize>,
    #[arg(long)]
    jet_dv: Option<usize>,
    #[arg(long)]
    workers: Option<usize>,
    /// Number of curvature-ellipse samples per point.
    #[arg(long)]
    ellipse: Option<usize>,
    /// Reverse the hypersurface normal.
    #[arg(long)]
    flip_normal: bool,
}

fn grid_override(field: &str, text: &Option<String>) -> Result<Option<GridRange>, ConfigError> {
    text.as_deref()
        .map(|t| GridRange::parse(field, t))
        .transpose()
}

fn execute(command: Command, args: Args) -> Result<(), ConfigError> {
    let loaded = load_spec(&args.surface)?;
    let ellipse = match command {
        Command::Ellipse => Some(args.ellipse.unwrap_or(DEFAULT_ELLIPSE_SAMPLES)),
        _ => args.ellipse,
    };
    let overrides = Overrides {
        u: grid_override("--u", &args.u)?,
        v: grid_override("--v", &args.v)?,
        jet_du: args.jet_du,
        jet_dv: args.jet_dv,
        workers: args.workers,
        ellipse,
        flip_normal: args.flip_normal,
    };
    let cfg = RunConfig::new(loaded, overrides)?;
    let format = match (args.format, command) {
        (Some(FormatArg::Json), _) => Format::Json,
        (Some(FormatArg::Csv), _) | (None, Command::Ellipse) => Format::Csv,
        (None, _) => Format::Json,
    };
    let text = render(&cfg, &run(&cfg, command), format);
    match &args.out {
        Some(path) => fs::write(path, text).map_err(|source| ConfigError::Io {
            path: path.clone(),
            source,
        })?,
        None => print!("{text}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, args) = match cli.command {
        Cmd::Check(a) => (Command::Check, a),
        Cmd::Analyze(a) => (Command::Analyze, a),
        Cmd::Classify(a) => (Command::Classify, a),
        Cmd::Frame(a) => (Command::Frame, a),
        Cmd::Ellipse(a) => (Command::Ellipse, a),
    };
    match execute(command, args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
