use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use latcal_core::{DEFAULT_MAX_ELEMENTS, DEFAULT_TOLERANCE};

#[derive(Debug, Parser)]
#[command(
    name = "latcal",
    version,
    about = "Build finite lattices, assign valuations and check the rules of the valuation calculus"
)]
pub struct Cli {
    /// Output format written to stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Largest residual a rule check may report and still pass.
    #[arg(
        long,
        global = true,
        env = "LATCAL_TOLERANCE",
        default_value_t = DEFAULT_TOLERANCE,
        value_parser = parse_tolerance
    )]
    pub tolerance: f64,

    /// Cap on the number of elements of any poset read or built.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_ELEMENTS)]
    pub max_elements: usize,

    #[command(subcommand)]
    pub command: Command,
}

fn parse_tolerance(s: &str) -> Result<f64, String> {
    let t: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if t.is_finite() && t >= 0.0 {
        Ok(t)
    } else {
        Err("tolerance must be a finite nonnegative number".into())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Certify that a poset document describes a lattice.
    Check(CheckArgs),
    /// Construct a lattice.
    Build(BuildArgs),
    /// Extend a seed to a valuation and run rule checks.
    Valuate(ValuateArgs),
    /// Reproduce a worked example.
    Demo {
        #[arg(value_enum)]
        name: DemoName,
    },
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// Poset document to read.
    pub input: PathBuf,
    /// Accept any valid poset; only parse, cycle and size problems fail.
    #[arg(long)]
    pub poset_only: bool,
    /// Write the Hasse diagram in DOT format to this path.
    #[arg(long, value_name = "PATH")]
    pub dot: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    #[command(subcommand)]
    pub kind: BuildKind,
    /// Write the Hasse diagram in DOT format to this path.
    #[arg(long, global = true, value_name = "PATH")]
    pub dot: Option<PathBuf>,
    /// Write the result as a poset document to this path.
    #[arg(long, global = true, value_name = "PATH")]
    pub doc: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum BuildKind {
    /// Downsets of a poset ordered by inclusion.
    Downsets {
        input: PathBuf,
        /// Include the empty downset.
        #[arg(long)]
        include_empty: bool,
    },
    /// Every subset of a set of states.
    Powerset {
        /// Number of states, named s1..sN.
        #[arg(conflicts_with = "names", required_unless_present = "names")]
        count: Option<usize>,
        /// Explicit comma-separated state names.
        #[arg(long, value_delimiter = ',')]
        names: Option<Vec<String>>,
    },
    /// Nonempty downsets of the statements (subsets) over a set of states.
    Questions {
        /// Number of states, named s1..sN.
        #[arg(long, conflicts_with = "names", required_unless_present = "names")]
        states: Option<usize>,
        /// Explicit comma-separated state names.
        #[arg(long, value_delimiter = ',')]
        names: Option<Vec<String>>,
    },
    /// Partitions of an n-element set ordered by refinement.
    Partition { n: usize },
    /// Cartesian product of two lattices given as poset documents.
    Product { left: PathBuf, right: PathBuf },
    /// Divisors of N ordered by divisibility.
    Divisor { n: u64 },
}

#[derive(Debug, Args)]
pub struct ValuateArgs {
    /// Poset document of a lattice.
    pub input: PathBuf,
    /// JSON object mapping element ids to numbers.
    pub seed: PathBuf,
    /// Comma-separated rule checks to run.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "all")]
    pub check: Vec<CheckKind>,
    /// Treat the seed as values for every element instead of extending it
    /// from the join-irreducibles.
    #[arg(long)]
    pub hand_assigned: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum CheckKind {
    Sum,
    Monotone,
    Chain,
    ContextProduct,
    ContextualSum,
    Bayes,
    ProductSpaces,
    All,
}

impl CheckKind {
    pub const EVERY: [CheckKind; 7] = [
        CheckKind::Sum,
        CheckKind::Monotone,
        CheckKind::Chain,
        CheckKind::ContextProduct,
        CheckKind::ContextualSum,
        CheckKind::Bayes,
        CheckKind::ProductSpaces,
    ];

    /// Expands `all` and removes duplicates, keeping a fixed order.
    pub fn expand(requested: &[CheckKind]) -> Vec<CheckKind> {
        let mut out: Vec<CheckKind> = if requested.contains(&CheckKind::All) {
            Self::EVERY.to_vec()
        } else {
            requested.to_vec()
        };
        out.sort();
        out.dedup();
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DemoName {
    Bridge,
    Divisor,
    Partition,
}
