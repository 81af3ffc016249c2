//! `enumdelay`: profile enumerators, run the delay regularizers, sample
//! explicit sets and benchmark padded instances. Every subcommand prints a
//! JSON report on stdout, writes CSV files under `--out` when given, and
//! exits with 0 only if all of its checks pass.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod source;

#[derive(Parser)]
#[command(
    name = "enumdelay",
    version,
    about = "Delay experiments on stepwise enumerators"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Record a trace and report delays, gaps and an incremental-time fit.
    Profile(ProfileArgs),
    /// Run a regularizer and check the outer trace against its delay bound.
    Regularize(RegularizeArgs),
    /// Run seeded sampling trials on an explicit set.
    Sample(SampleArgs),
    /// Check cardinality and incremental shape of padded instances.
    PadBench(PadBenchArgs),
}

#[derive(Args)]
struct SourceArgs {
    /// DIMACS CNF file; enumerated by flashlight AllSAT, or padded with --t.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Scripted enumerator: burst:N, times:T1,T2,..., delays:D1,D2,... or
    /// blocks:DENSE@GAP,...
    #[arg(long, allow_hyphen_values = true)]
    script: Option<String>,
    /// Padding exponent p/q in (0, 1].
    #[arg(long)]
    t: Option<String>,
}

#[derive(Args)]
struct FitArgs {
    /// Largest input-size exponent allowed in the incremental fit.
    #[arg(long, default_value_t = 0)]
    max_n_exponent: u32,
    /// Largest constant allowed in the incremental fit.
    #[arg(long, default_value_t = 3.0)]
    max_constant: f64,
}

#[derive(Args)]
struct ProfileArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Gap threshold polynomial; defaults to the rounded-up mean delay.
    #[arg(long)]
    p_coeffs: Option<String>,
    /// Declared incremental exponent to check; padded instances default to 1/t.
    #[arg(long)]
    a: Option<f64>,
    #[command(flatten)]
    fit: FitArgs,
    /// Stop after this many charged steps.
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Scheme {
    Queue,
    Shortcut,
    Stock,
}

#[derive(Args)]
struct RegularizeArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long, value_enum)]
    scheme: Scheme,
    /// Delay polynomial, lowest degree first.
    #[arg(long)]
    p_coeffs: String,
    /// Average-delay polynomial (shortcut, stock).
    #[arg(long)]
    h_coeffs: Option<String>,
    /// Gap-count or density polynomial (shortcut, stock).
    #[arg(long)]
    q_coeffs: Option<String>,
    /// Queue exponent: k outputs within p(n) k^(a+1) steps.
    #[arg(long, default_value_t = 0)]
    a: u32,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SampleArgs {
    /// Explicit-set file: hex payloads, optionally followed by weights.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    epsilon: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    trials: u64,
    /// Emit every draw and count distinct solutions with a sketch.
    #[arg(long)]
    sketch: bool,
    /// Solution size bound in bits; defaults to the longest element.
    #[arg(long)]
    p_bits: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PadBenchArgs {
    /// DIMACS CNF file.
    #[arg(long)]
    input: PathBuf,
    /// Comma-separated padding exponents.
    #[arg(long, default_value = "1,1/2,1/3")]
    t: String,
    #[command(flatten)]
    fit: FitArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Profile(a) => commands::profile(a),
        Command::Regularize(a) => commands::regularize(a),
        Command::Sample(a) => commands::sample(a),
        Command::PadBench(a) => commands::pad_bench(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
