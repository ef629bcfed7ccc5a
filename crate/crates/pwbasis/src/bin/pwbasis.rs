use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use pwbasis::{run_batch, run_command, Command, Format, RunOptions, EXIT_USAGE};

#[derive(Parser)]
#[command(name = "pwbasis", version, about = "Verify exponential, translation, Gabor and tiling scenarios")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Gram bounds and orthonormality of an exponential system
    Bounds(Common),
    /// Riesz-bound transfer from exponentials to translates
    Transfer(Common),
    /// Frame-bound transfer on the support of the weight
    FrameTransfer(Common),
    /// Tile and spectrum checks and searches in a finite abelian group
    Tiling(Common),
    /// Tilings of a cube against spectra of its dual cube
    CubeCheck(Common),
    /// Truncated sinc series of a band-limited signal
    Sample(Common),
    /// Vector-valued Gabor Gram and the orthonormality equivalence
    Gabor(Common),
    /// Periodization of a window against its translate Gram
    Periodization(Common),
    /// Factorization f = g * psi on the Fourier side
    Factorization(Common),
    /// Run every *.json scenario of a directory
    Batch(Common),
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Args)]
struct Common {
    /// Scenario file (a directory for `batch`)
    #[arg(long)]
    scenario: PathBuf,
    /// Output path (a directory for `batch`); stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
    /// Overrides the scenario seed
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the default verdict tolerance
    #[arg(long)]
    tol: Option<f64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, common) = match cli.command {
        Sub::Bounds(c) => (Some(Command::Bounds), c),
        Sub::Transfer(c) => (Some(Command::Transfer), c),
        Sub::FrameTransfer(c) => (Some(Command::FrameTransfer), c),
        Sub::Tiling(c) => (Some(Command::Tiling), c),
        Sub::CubeCheck(c) => (Some(Command::CubeCheck), c),
        Sub::Sample(c) => (Some(Command::Sample), c),
        Sub::Gabor(c) => (Some(Command::Gabor), c),
        Sub::Periodization(c) => (Some(Command::Periodization), c),
        Sub::Factorization(c) => (Some(Command::Factorization), c),
        Sub::Batch(c) => (None, c),
    };
    let options = RunOptions {
        seed: common.seed,
        tol: common.tol,
        format: match common.format {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
        },
    };
    let mut stdout = std::io::stdout().lock();
    let mut stderr = std::io::stderr().lock();
    let code = match command {
        Some(c) => run_command(c, &common.scenario, common.out.as_deref(), &options, &mut stdout, &mut stderr),
        None => run_batch(&common.scenario, common.out.as_deref(), &options, &mut stdout, &mut stderr),
    };
    ExitCode::from(u8::try_from(code).unwrap_or(EXIT_USAGE as u8))
}
