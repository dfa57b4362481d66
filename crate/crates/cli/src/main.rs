//! `provcut`: generate instances, check inputs, compress, evaluate and
//! benchmark from the shell.
//!
//! Data goes to stdout or to files, diagnostics to stderr. Exit codes:
//! 0 success, 1 negative verdict, 2 invalid input, 3 no adequate cut,
//! 4 enumeration cap exceeded.

mod bench;
mod commands;

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use provcut::optimizer::DEFAULT_CAP;

#[derive(Parser)]
#[command(
    name = "provcut",
    version,
    about = "Compress provenance polynomials under abstraction trees"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a benchmark instance and its manifest into a directory
    Generate {
        #[command(subcommand)]
        what: Generate,
    },
    /// Check a forest, a polynomial/forest pair or a cut
    Verify {
        #[command(subcommand)]
        what: Verify,
    },
    /// Pick a cut that brings the polynomials under a monomial bound
    Compress(CompressArgs),
    /// Evaluate every polynomial under a valuation
    Evaluate(EvaluateArgs),
    /// Ask whether some cut leaves exactly B monomials and K variables
    Decide(DecideArgs),
    /// Sweep catalogue trees, bounds and algorithms into CSV
    Bench(bench::BenchArgs),
}

#[derive(Subcommand)]
enum Generate {
    /// Revenue per zip code over plans and months
    Telephony {
        #[arg(long, default_value_t = 1000)]
        customers: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: PathBuf,
    },
    /// Discounted revenue per supplier nation with keys taken modulo a constant
    Tpch {
        #[arg(long, default_value_t = 1000)]
        keys: usize,
        #[arg(long, default_value_t = 128)]
        modulus: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: PathBuf,
    },
    /// A single tree of a catalogue type
    Tree {
        #[arg(long = "type")]
        tree_type: u8,
        #[arg(long, value_delimiter = ',', required = true)]
        fanouts: Vec<usize>,
        #[arg(long, default_value = "Root")]
        root: String,
        #[arg(long, default_value = "x")]
        leaf_prefix: String,
        #[arg(long)]
        output: PathBuf,
    },
    /// Uniformly partitioned polynomial over numbered metavariables
    Upp {
        #[arg(long)]
        metavars: usize,
        /// Leaves per metavariable
        #[arg(long)]
        n: usize,
        /// Pairs as `a-b`, comma separated
        #[arg(long, value_delimiter = ',', required = true)]
        pairs: Vec<Pair>,
        #[arg(long)]
        output: PathBuf,
    },
    /// Decision instance equivalent to a vertex-cover question
    Vcreduce {
        #[arg(long)]
        vertices: usize,
        /// Edges as `a-b`, comma separated
        #[arg(long, value_delimiter = ',', required = true)]
        edges: Vec<Pair>,
        /// Cover size
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = provcut::benchgen::VC_MAX_VERTICES)]
        max_vertices: usize,
        #[arg(long)]
        output: PathBuf,
    },
}

#[derive(Subcommand)]
enum Verify {
    /// Structural checks: unique labels, one root per tree, no sharing
    Forest {
        #[arg(long)]
        forest: PathBuf,
    },
    /// Every monomial meets each tree in at most one leaf
    Compat {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        forest: PathBuf,
    },
    /// The labels form a cut of every tree
    Vvs {
        #[arg(long)]
        forest: PathBuf,
        #[arg(long)]
        vvs: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Algo {
    Opt,
    Greedy,
    Brute,
}

#[derive(Args)]
struct CompressArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    forest: PathBuf,
    /// Largest number of monomials allowed after compression
    #[arg(long)]
    bound: u64,
    #[arg(long, value_enum, default_value_t = Algo::Opt)]
    algo: Algo,
    /// Most cuts brute force may enumerate
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: u128,
    /// Where to write the compressed polynomials
    #[arg(long)]
    output: Option<PathBuf>,
    /// Include counters and wall-clock time in the result
    #[arg(long)]
    stats: bool,
}

#[derive(Args)]
struct EvaluateArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    valuation: PathBuf,
    /// Read the valuation over cut members and push it down to the leaves
    #[arg(long, requires_all = ["forest", "vvs"])]
    lift: bool,
    #[arg(long)]
    forest: Option<PathBuf>,
    #[arg(long)]
    vvs: Option<PathBuf>,
}

#[derive(Args)]
struct DecideArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    forest: PathBuf,
    /// Monomial count `B`, or an inclusive range `LO..HI`
    #[arg(long)]
    bound: BoundArg,
    /// Variable count `K`
    #[arg(long)]
    granularity: u64,
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: u128,
}

/// `a-b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Pair(usize, usize);

impl FromStr for Pair {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (a, b) = s
            .split_once('-')
            .ok_or_else(|| format!("`{s}` is not of the form a-b"))?;
        let num = |x: &str| x.trim().parse::<usize>().map_err(|e| format!("`{x}`: {e}"));
        Ok(Pair(num(a)?, num(b)?))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct BoundArg {
    lo: u64,
    hi: u64,
}

impl FromStr for BoundArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let num = |x: &str| x.trim().parse::<u64>().map_err(|e| format!("`{x}`: {e}"));
        let (lo, hi) = match s.split_once("..") {
            Some((lo, hi)) => (num(lo)?, num(hi.strip_prefix('=').unwrap_or(hi))?),
            None => (num(s)?, num(s)?),
        };
        if lo > hi {
            return Err(format!("empty range {lo}..{hi}"));
        }
        Ok(BoundArg { lo, hi })
    }
}

/// A command that could not produce its normal result.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn invalid(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<provcut::Error> for Failure {
    fn from(e: provcut::Error) -> Self {
        let code = match e {
            provcut::Error::TooManyCuts(_) => 4,
            _ => 2,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Generate { what } => commands::generate(what),
        Command::Verify { what } => commands::verify(what),
        Command::Compress(args) => commands::compress(args),
        Command::Evaluate(args) => commands::evaluate(args),
        Command::Decide(args) => commands::decide(args),
        Command::Bench(args) => bench::run(args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("provcut: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_pairs_and_bounds() {
        assert_eq!("1-2".parse::<Pair>().unwrap(), Pair(1, 2));
        assert!("12".parse::<Pair>().is_err());
        assert_eq!("7".parse::<BoundArg>().unwrap(), BoundArg { lo: 7, hi: 7 });
        assert_eq!("2..243".parse::<BoundArg>().unwrap(), BoundArg { lo: 2, hi: 243 });
        assert_eq!("2..=243".parse::<BoundArg>().unwrap(), BoundArg { lo: 2, hi: 243 });
        assert!("9..3".parse::<BoundArg>().is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
