use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use affmon::commands::{run, Command};

/// Affine monoids, saturations and push-outs.
#[derive(Parser)]
#[command(name = "affmon", version)]
struct Cli {
    /// Print only the JSON result, without the summary on stderr.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Predicates and invariants of a monoid document.
    Analyze { path: PathBuf },
    /// The saturation of a monoid, as a monoid document.
    Saturate { path: PathBuf },
    /// Hilbert basis of the cone of a monoid intersected with the ambient lattice.
    HilbertBasis { path: PathBuf },
    /// Quasi-integrality of a push-out document; exits 10 or 11 on a negative
    /// or undecided verdict.
    PushoutCheck {
        path: PathBuf,
        /// Cross-check with the bounded congruence closure at this bound.
        #[arg(long, value_name = "B")]
        oracle: Option<usize>,
    },
    /// An extension of N making both push-outs of f and g non-quasi-integral.
    Counterexample { path: PathBuf },
    /// Saturated fiber product of the two maps of a push-out document, read
    /// as a cospan.
    FiberProduct { path: PathBuf },
    /// Strictness conditions for a morphism of chart monoids.
    Strictness { path: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command = match cli.command {
        Sub::Analyze { path } => Command::Analyze { path },
        Sub::Saturate { path } => Command::Saturate { path },
        Sub::HilbertBasis { path } => Command::HilbertBasis { path },
        Sub::PushoutCheck { path, oracle } => Command::PushoutCheck { path, oracle },
        Sub::Counterexample { path } => Command::Counterexample { path },
        Sub::FiberProduct { path } => Command::FiberProduct { path },
        Sub::Strictness { path } => Command::Strictness { path },
    };
    let outcome = run(&command, cli.json);
    print!("{}", outcome.stdout);
    eprint!("{}", outcome.stderr);
    let _ = std::io::stdout().flush();
    ExitCode::from(u8::try_from(outcome.exit).unwrap_or(1))
}
