//! `spancalc`: command-line front end for the groupoidification engine.
//!
//! Exit status: 0 on success, 1 when a verification fails, 2 on bad input
//! (malformed JSON, invalid flags, size-cap breach).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod algebra;
mod engine;

#[derive(Parser, Debug)]
#[command(name = "spancalc", version, about = "Exact degroupoidification of spans of finite groupoids")]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate a groupoid, span or group action JSON file.
    Check { input: PathBuf },
    /// Groupoid cardinality of a groupoid, or of the weak quotient of an action.
    Card { input: PathBuf },
    /// Matrix of a span at the given alpha (integers and half-integers).
    Degroupoidify {
        span: PathBuf,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        alpha: String,
        /// Also write the matrix as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Compose two spans, T after S.
    Compose {
        t: PathBuf,
        s: PathBuf,
        /// Write the composite span here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        alpha: String,
        /// Check matrix(T∘S) = matrix(T)·matrix(S).
        #[arg(long)]
        check: bool,
    },
    /// Fock space on the truncated groupoid of finite sets.
    Fock {
        #[arg(long, default_value_t = 6)]
        truncate: usize,
        /// Check AA* = A*A + 1 below the truncation.
        #[arg(long)]
        check_ccr: bool,
        /// Print the generating function of k-colored sets.
        #[arg(long)]
        colors: Option<usize>,
        /// Print the matrix of the normal-ordered power :Φⁿ: (n ≤ 3).
        #[arg(long)]
        power: Option<usize>,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        alpha: String,
    },
    /// The A₂ Hecke algebra from flags over F_q. Orbits on flag pairs are
    /// labeled e, P (same line), L (same point), PL (p' on ℓ), LP (p on ℓ'),
    /// PLP (general position).
    Hecke {
        #[arg(long)]
        q: u64,
        /// Check the quadratic and braid relations on flag matrices.
        #[arg(long)]
        verify: bool,
        /// Write the structure constants of the multiplication span (q = 2, 3).
        #[arg(long)]
        constants: Option<PathBuf>,
        /// Normalization of the multiplication span; at 1 the basis is the orbit indicators.
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        alpha: String,
    },
    /// Hall algebra of a type A quiver, at alpha = 1 ([M]·[N] counts 0 → N → E → M → 0).
    Hall {
        /// a1, a2, a3:rl, ... (r: i → i+1, l: i+1 → i)
        #[arg(long)]
        quiver: String,
        #[arg(long)]
        q: u64,
        /// Per-vertex dimension bound, e.g. 2,2.
        #[arg(long, value_delimiter = ',')]
        dmax: Vec<usize>,
        /// Write the multiplication table as JSON.
        #[arg(long)]
        table: Option<PathBuf>,
        /// Check associativity, nonnegativity and the span route.
        #[arg(long)]
        verify: bool,
    },
}

/// Result of one subcommand: text for humans, JSON for machines, and
/// whether every verification passed.
pub struct Report {
    pub text: String,
    pub json: serde_json::Value,
    pub passed: bool,
}

impl Report {
    pub fn ok(text: String, json: serde_json::Value) -> Self {
        Report { text, json, passed: true }
    }
}

pub fn status_line(passed: bool, what: &str) -> String {
    format!("{} {what}", if passed { "PASS" } else { "FAIL" })
}

fn run(cli: &Cli) -> anyhow::Result<Report> {
    match &cli.command {
        Command::Check { input } => engine::check(input),
        Command::Card { input } => engine::card(input),
        Command::Degroupoidify { span, alpha, csv } => engine::degroupoidify(span, alpha, csv.as_deref()),
        Command::Compose { t, s, out, alpha, check } => engine::compose(t, s, out.as_deref(), alpha, *check),
        Command::Fock { truncate, check_ccr, colors, power, alpha } => {
            algebra::fock(*truncate, *check_ccr, *colors, *power, alpha)
        }
        Command::Hecke { q, verify, constants, alpha } => algebra::hecke(*q, *verify, constants.as_deref(), alpha),
        Command::Hall { quiver, q, dmax, table, verify } => algebra::hall(quiver, *q, dmax, table.as_deref(), *verify),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&report.json).expect("serializable"));
            } else {
                print!("{}", report.text);
            }
            if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
