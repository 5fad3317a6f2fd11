use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use planet_core::cubic::SingularCase;

mod commands;

/// Construct, verify and analyze nets of lines in the complex projective plane.
#[derive(Debug, Parser)]
#[command(name = "planet", version, about)]
struct Cli {
    #[command(flatten)]
    session: SessionArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct SessionArgs {
    /// Field backend: auto, complex, cyclotomic or cyclotomic:N.
    #[arg(long, global = true, default_value = "auto", value_parser = parse_backend)]
    backend: BackendArg,
    /// Relative equality tolerance of the complex backend.
    #[arg(long, global = true, default_value_t = 1e-9)]
    eps_eq: f64,
    /// Relative singular value threshold for numeric ranks.
    #[arg(long, global = true, default_value_t = 1e-8)]
    eps_rank: f64,
    /// Truncation tolerance of lattice series.
    #[arg(long, global = true, default_value_t = 1e-14)]
    eps_series: f64,
    /// Random seed.
    #[arg(long, global = true, env = "PLANET_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum BackendArg {
    Auto,
    Complex,
    Cyclotomic(Option<u64>),
}

fn parse_backend(s: &str) -> Result<BackendArg, String> {
    match s {
        "auto" => Ok(BackendArg::Auto),
        "complex" => Ok(BackendArg::Complex),
        "cyclotomic" => Ok(BackendArg::Cyclotomic(None)),
        _ => s
            .strip_prefix("cyclotomic:")
            .and_then(|n| n.parse().ok())
            .map(|n| BackendArg::Cyclotomic(Some(n)))
            .ok_or_else(|| format!("unknown backend {s:?}")),
    }
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let (re, im) = s.split_once(',').ok_or("expected re,im")?;
    let p = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("{x:?}: {e}"));
    Ok(Complex64::new(p(re)?, p(im)?))
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a net and print it as JSON.
    Construct {
        #[command(subcommand)]
        kind: ConstructKind,
        /// Output file, or - for stdout.
        #[arg(short, long, global = true, default_value = "-")]
        output: PathBuf,
    },
    /// Check the net axioms.
    Verify { file: PathBuf },
    /// Euler-characteristic feasibility of (k, m) with r pencil classes.
    Euler {
        #[arg(short)]
        k: i64,
        #[arg(short)]
        m: i64,
        #[arg(short, default_value_t = 0)]
        r: i64,
    },
    /// Latin square of a 3-net.
    Latin {
        file: PathBuf,
        /// Relabel rows, columns and symbols with a random permutation.
        #[arg(long)]
        shuffle: Option<u64>,
    },
    /// Group realized by a 3-net or a Latin square.
    Group {
        file: PathBuf,
        #[arg(long)]
        shuffle: Option<u64>,
    },
    /// Find a cubic through the dual points of a 3-net.
    Algebraize { file: PathBuf },
    /// Resonance data of the arrangement of all lines of a net.
    Resonance {
        file: PathBuf,
        /// JSON vector at which to evaluate the first cohomology dimension.
        #[arg(long)]
        vector: Option<PathBuf>,
    },
    /// Run the randomized identity suites.
    Selftest {
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
}

#[derive(Debug, Subcommand)]
enum ConstructKind {
    /// Three pencils of m lines.
    Pencil {
        #[arg(short)]
        m: usize,
    },
    /// The braid arrangement as a (3, 2)-net.
    Braid,
    /// The Hesse configuration as a (4, 3)-net.
    Hessian,
    /// Cosets of a finite subgroup of an elliptic curve.
    Torus {
        /// Invariant factors, each dividing the next.
        #[arg(long, value_delimiter = ',', required = true)]
        invariants: Vec<usize>,
        #[arg(long, value_parser = parse_complex)]
        tau: Option<Complex64>,
    },
    /// Cosets of the m-th roots of unity on a singular cubic.
    Singular {
        #[arg(long, value_parser = |s: &str| s.parse::<SingularCase>().map_err(|e| e.to_string()))]
        case: SingularCase,
        #[arg(short)]
        m: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            let _ = writeln!(std::io::stderr(), "planet: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
