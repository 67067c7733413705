//! `symcirc` command-line front end.
//!
//! Exit codes: 0 success, 1 usage, 2 parse or input, 3 cap exceeded,
//! 4 verification failure.

mod commands;
mod formats;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Parse(String),
    Io(String),
    Cap(String),
    Verify(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Parse(_) | CliError::Io(_) => 2,
            CliError::Cap(_) => 3,
            CliError::Verify(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(s) | CliError::Parse(s) | CliError::Io(s) | CliError::Cap(s) | CliError::Verify(s) => s,
        }
    }
}

impl From<symcirc::Error> for CliError {
    fn from(e: symcirc::Error) -> Self {
        use symcirc::Error as E;
        let msg = e.to_string();
        match e {
            E::CapExceeded { .. } => CliError::Cap(msg),
            E::InvalidArgument(_) => CliError::Usage(msg),
            E::Calibration(_) | E::Symmetry(_) => CliError::Verify(msg),
            E::InvalidPattern(_) | E::InvalidDecomposition(_) | E::DimensionMismatch(_) | E::Parse { .. } | E::InvalidCircuit(_) => CliError::Parse(msg),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "symcirc", version, about = "Symmetric arithmetic circuits for homomorphism, subgraph and immanant polynomials")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a circuit and its size report.
    Synth {
        #[command(subcommand)]
        kind: SynthKind,
    },
    /// Evaluate a circuit on a host matrix; prints p/q.
    Eval { circuit: PathBuf, host: PathBuf },
    /// Cross-check a circuit against a brute-force oracle on random hosts.
    Verify(VerifyArgs),
    /// Build a CFI graph over a named base or a graph file.
    Cfi(CfiArgs),
    /// Decide C^k-equivalence of two graphs by (k-1)-dimensional WL.
    Wl(WlArgs),
    /// Evaluate a polynomial on generated C^k-equivalent host pairs (JSONL).
    Widthlab(WidthArgs),
    /// Exact treewidth of a pattern, with a PACE decomposition.
    Treewidth(TreewidthArgs),
}

#[derive(Debug, Args)]
pub struct Output {
    /// Circuit destination (standard output when absent).
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON report destination (standard error when absent).
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum SynthKind {
    /// Homomorphism polynomial from a tree decomposition.
    Hom {
        #[arg(long)]
        pattern: PathBuf,
        /// PACE .td file; the exact decomposition is computed when absent.
        #[arg(long)]
        td: Option<PathBuf>,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Subgraph polynomial by Moebius inversion over quotients.
    SubMoebius {
        #[arg(long)]
        pattern: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Subgraph polynomial by cover interpolation.
    SubCover {
        #[arg(long)]
        pattern: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = symcirc::synth::COVER_CAP)]
        cap_cover: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Two-level circuit for sub of K_{k,k} or K_{n-k,n-k}.
    Biclique {
        #[arg(long, value_enum)]
        kind: Biclique,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Immanant of a partition given as comma-separated parts.
    Immanant {
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        cap_b: usize,
        #[arg(long, default_value_t = 6)]
        cap_n: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Determinant over the simultaneous action of Sym_n.
    Determinant {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Biclique {
    K,
    NMinusK,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Oracle {
    Hom,
    Sub,
    Emb,
    Immanant,
    Determinant,
    Permanent,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    circuit: PathBuf,
    #[arg(long, value_enum, default_value = "hom")]
    oracle: Oracle,
    /// Required by the hom, sub and emb oracles.
    #[arg(long)]
    pattern: Option<PathBuf>,
    /// Required by the immanant oracle.
    #[arg(long)]
    lambda: Option<String>,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CfiArgs {
    /// c<k>, p<k>, k<n>, k<a>,<b>, grid<r>x<c>, or a graph JSON file.
    #[arg(long)]
    base: String,
    /// One 0/1 character per base vertex; all zeros when absent.
    #[arg(long)]
    twist: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the bi-adjacency host of the CFI graph.
    #[arg(long)]
    host_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct WlArgs {
    /// Counting-logic index; runs (k-1)-dimensional WL.
    #[arg(long)]
    k: usize,
    g: PathBuf,
    h: PathBuf,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Poly {
    Perm,
    Det,
    Hom,
}

#[derive(Debug, Args)]
pub struct WidthArgs {
    #[arg(long, value_enum)]
    poly: Poly,
    #[arg(long)]
    k: usize,
    /// Only `auto` (the built-in base family for k) is available.
    #[arg(long, default_value = "auto")]
    bases: String,
    #[arg(long, default_value_t = 50)]
    pairs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Required for `--poly hom`.
    #[arg(long)]
    pattern: Option<PathBuf>,
    /// JSONL destination (standard output when absent).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TreewidthArgs {
    #[arg(long)]
    pattern: PathBuf,
    /// Validate this decomposition instead of computing one.
    #[arg(long)]
    check: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Synth { kind } => commands::synth(kind),
        Command::Eval { circuit, host } => commands::eval(&circuit, &host),
        Command::Verify(a) => commands::verify(a),
        Command::Cfi(a) => commands::cfi(a),
        Command::Wl(a) => commands::wl(a),
        Command::Widthlab(a) => commands::widthlab(a),
        Command::Treewidth(a) => commands::treewidth(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
