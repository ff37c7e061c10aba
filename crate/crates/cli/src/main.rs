mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

/// Orbit semigroups of quiver representations: membership, saturation
/// certificates, reflections and related invariants, in exact arithmetic.
#[derive(Parser, Debug)]
#[command(name = "orbitsat", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Default)]
pub struct Inputs {
    /// Quiver file (`v NAME` and `a NAME TAIL HEAD` lines).
    #[arg(long)]
    pub quiver: Option<PathBuf>,
    /// Representation file; may be repeated where two are needed.
    #[arg(long)]
    pub rep: Vec<PathBuf>,
    /// Bundled quiver by name: kron3, b, c, d, e, f, g.
    #[arg(long)]
    pub fixture: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct Randomness {
    /// Master seed; output is deterministic for a fixed seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 8)]
    pub trials: usize,
    /// Entries of random representations lie in `[-bound, bound]`.
    #[arg(long, default_value_t = 1_000_000)]
    pub bound: i64,
    /// randomized | symbolic
    #[arg(long, default_value = "randomized")]
    pub mode: String,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Dynkin, Euclidean or wild.
    Classify {
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Hom and Ext: exact for two representations, generic for two dimension vectors.
    Homext {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long)]
        beta: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        trials: usize,
    },
    /// Schofield semi-invariant c(V, W), or the functional determinant of a single Kronecker representation.
    Semiinv {
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Orbit semigroup membership, scans and certificates.
    Orbit {
        #[command(subcommand)]
        command: OrbitCommand,
    },
    /// Reflection at a vertex, of a dimension vector or a representation.
    Reflect {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long)]
        vertex: String,
        #[arg(long)]
        alpha: Option<String>,
        /// plus (at a sink) | minus (at a source)
        #[arg(long, default_value = "plus")]
        direction: String,
    },
    /// Replace a vertex by composed arrows.
    Shrink {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long)]
        vertex: String,
        /// Dimension vector; taken from the representation when omitted.
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long)]
        weight: Option<String>,
    },
    /// Validate an exceptional sequence and build its quiver.
    Exceptional {
        #[command(flatten)]
        inputs: Inputs,
        /// Sequence members in order; defaults to the fixture's sequence.
        #[arg(long)]
        alpha: Vec<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        trials: usize,
    },
    /// Canonical decomposition of a dimension vector.
    Candecomp {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long)]
        alpha: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of independent seeds that must agree.
        #[arg(long, default_value_t = 3)]
        trials: usize,
        /// Also check the rule for the multiples 2..=nmax.
        #[arg(long)]
        nmax: Option<u32>,
    },
    /// Thin representations and lattice flows.
    Thin {
        #[command(subcommand)]
        command: ThinCommand,
    },
    /// Run the reference checks and report pass/fail per item.
    VerifyPaper {
        /// Restrict to these items (repeatable).
        #[arg(long)]
        only: Vec<String>,
        /// Replacement for the skew-symmetric fixture.
        #[arg(long)]
        rep: Option<PathBuf>,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
    },
}

#[derive(Subcommand, Debug)]
pub enum OrbitCommand {
    /// Is the weight in S(W)?
    Member {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long, allow_hyphen_values = true)]
        weight: String,
        #[command(flatten)]
        randomness: Randomness,
        /// Re-decide a probable non-member exactly.
        #[arg(long)]
        escalate: bool,
    },
    /// Search a box of weights for saturation certificates.
    Scan {
        #[command(flatten)]
        inputs: Inputs,
        /// Radius `r` for the cube |sigma(x)| <= r, or `lo:hi` per vertex separated by commas.
        #[arg(long = "box", allow_hyphen_values = true)]
        weight_box: String,
        #[arg(long, default_value_t = 4)]
        nmax: u32,
        #[command(flatten)]
        randomness: Randomness,
        /// Also write the certificate blocks to this file.
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// Re-check certificates from a file against W.
    VerifyCertificate {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long)]
        cert: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
pub enum ThinCommand {
    /// Flow-based membership for a thin representation.
    Member {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long, allow_hyphen_values = true)]
        weight: String,
    },
    /// Number of nonnegative integer flows with the given boundary.
    Count {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long, allow_hyphen_values = true)]
        weight: String,
    },
    /// Check saturation over a box of weights.
    Saturation {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long = "box", allow_hyphen_values = true)]
        weight_box: String,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = commands::run(cli.command);
    print!("{}", result.report);
    if let Some(msg) = &result.error {
        eprintln!("error: {msg}");
    }
    ExitCode::from(result.code)
}
