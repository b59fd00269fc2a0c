mod commands;
mod config;
mod error;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use config::ConfigFile;
use error::{CliError, CliResult};

#[derive(Parser, Debug)]
#[command(
    name = "texradon",
    version,
    about = "ODF synthesis, pole-figure projection and inversion"
)]
struct Cli {
    /// `key = value` file supplying defaults for any flag.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker thread cap.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Synthesize ODF coefficients for a model.
    Gen(GenArgs),
    /// Evaluate pole figures of a coefficient file.
    Project(ProjectArgs),
    /// Reconstruct the even ODF part from pole figures.
    Invert(InvertArgs),
    /// Run a numerical self-check suite.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Model {
    Uniform,
    Unimodal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Slice,
    Backprojection,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GridKind {
    /// Gauss–Legendre in cos θ, L+1 by 2L+2.
    Gauss,
    /// Equal-angle lattice of n_theta by n_phi cell centers.
    Lattice,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Slice,
    Roundtrip,
    Friedel,
    S3,
    Parseval,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub model: Option<Model>,
    /// ZYZ Euler angles of the mode, radians.
    #[arg(long, allow_hyphen_values = true)]
    pub center: Option<String>,
    #[arg(long)]
    pub kappa: Option<f64>,
    #[arg(long = "L")]
    pub bandlimit: Option<usize>,
    /// Seed for the random nonnegativity probes.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ProjectArgs {
    /// Coefficient file to project.
    #[arg(long)]
    pub coef: Option<PathBuf>,
    /// Crystal direction `x,y,z`; repeatable.
    #[arg(long = "h", allow_hyphen_values = true, action = clap::ArgAction::Append)]
    pub h: Vec<String>,
    /// Expected band limit of the coefficient file.
    #[arg(long = "L")]
    pub bandlimit: Option<usize>,
    #[arg(long, value_enum)]
    pub grid: Option<GridKind>,
    #[arg(long)]
    pub n_theta: Option<usize>,
    #[arg(long)]
    pub n_phi: Option<usize>,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// File stem; outputs are `<prefix>_<k>.polefig`.
    #[arg(long)]
    pub prefix: Option<String>,
    /// Also write `<prefix>_<k>.matrix` for gnuplot `matrix` plotting.
    #[arg(long)]
    pub matrix: bool,
    /// Emit the unsymmetrized transform instead of the pole figure.
    #[arg(long)]
    pub raw_radon: bool,
}

#[derive(Args, Debug)]
pub struct InvertArgs {
    /// Pole figure files.
    pub files: Vec<PathBuf>,
    #[arg(long = "L")]
    pub bandlimit: Option<usize>,
    #[arg(long, value_enum)]
    pub method: Option<Method>,
    /// Reference coefficients for error reporting.
    #[arg(long)]
    pub truth: Option<PathBuf>,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    /// Also write the report here.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub suite: Option<Suite>,
    #[arg(long = "L")]
    pub bandlimit: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
}

fn run(cli: Cli) -> CliResult<()> {
    let cfg = match &cli.config {
        Some(p) => ConfigFile::load(p)?,
        None => ConfigFile::default(),
    };
    if let Some(n) = cfg.pick_opt(cli.threads, "threads")? {
        if n == 0 {
            return Err(CliError::Validation("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Validation(format!("thread pool: {e}")))?;
    }
    match cli.command {
        Command::Gen(a) => commands::gen(&a, &cfg),
        Command::Project(a) => commands::project(&a, &cfg),
        Command::Invert(a) => commands::invert(&a, &cfg),
        Command::Verify(a) => verify::run(&a, &cfg),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("texradon: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
