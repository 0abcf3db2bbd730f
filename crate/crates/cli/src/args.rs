use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Rational and quasiconvex subgroups of automatic groups.
#[derive(Parser, Debug)]
#[command(name = "qcdetect", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the normal form of a word.
    Reduce {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        word: String,
        #[command(flatten)]
        out: Output,
    },
    /// Decide whether a word is trivial (exit 0) or not (exit 3).
    Wp {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        word: String,
        #[command(flatten)]
        out: Output,
    },
    /// Search for an automaton recognizing the normal forms of a subgroup.
    DetectRational {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        subgroup: Subgroup,
        #[command(flatten)]
        budget: Budget,
        #[command(flatten)]
        out: Output,
    },
    /// Decide membership of a word in a subgroup.
    Member {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        target: SubgroupTarget,
        #[arg(long)]
        word: String,
        #[command(flatten)]
        budget: Budget,
        #[command(flatten)]
        out: Output,
    },
    /// Decide whether a subgroup is the whole group.
    Generates {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        target: SubgroupTarget,
        #[command(flatten)]
        budget: Budget,
        #[command(flatten)]
        out: Output,
    },
    /// Probe quasiconvexity in a hyperbolic group with thinness constant delta.
    DetectQc {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        subgroup: Subgroup,
        /// Thinness constant: an integer, a fraction `p/q` or a decimal.
        #[arg(long)]
        delta: String,
        /// Words up to this length are checked to have geodesic normal forms.
        #[arg(long, default_value_t = 4)]
        sample_depth: usize,
        #[command(flatten)]
        budget: Budget,
        #[command(flatten)]
        out: Output,
    },
    /// Coset enumeration; `--output DIR` dumps every snapshot.
    Tc {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        subgroup: Subgroup,
        /// Emit a snapshot every N waves.
        #[arg(long, default_value_t = 1)]
        every: usize,
        #[command(flatten)]
        budget: Budget,
        #[command(flatten)]
        out: Output,
    },
    /// Operations on automaton files.
    Fsa {
        #[command(subcommand)]
        op: FsaOp,
        #[command(flatten)]
        out: Output,
    },
    /// Check the axioms of an automatic structure.
    Validate {
        #[command(flatten)]
        source: Source,
        /// Every word up to this length is reduced.
        #[arg(long, default_value_t = 5)]
        depth: usize,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Subcommand, Debug)]
pub enum FsaOp {
    Minimize { input: PathBuf },
    Determinize { input: PathBuf },
    Intersect { first: PathBuf, second: PathBuf },
    Union { first: PathBuf, second: PathBuf },
    Difference { first: PathBuf, second: PathBuf },
    /// Exit 0 when equivalent, 3 with a distinguishing word otherwise.
    Equivalent { first: PathBuf, second: PathBuf },
    /// Exit 0 when the word is accepted, 3 otherwise.
    Accepts {
        input: PathBuf,
        #[arg(long)]
        word: String,
    },
    /// List accepted words up to a length in ShortLex order.
    Enumerate {
        input: PathBuf,
        #[arg(long, default_value_t = 4)]
        max_len: usize,
    },
    /// Exit 0 when the language is empty, 3 otherwise.
    IsEmpty { input: PathBuf },
}

#[derive(Args, Debug)]
pub struct Source {
    /// Built-in structure: free:N, zz, cyclic:N or s3.
    #[arg(long, conflicts_with = "structure")]
    pub fixture: Option<String>,
    /// Structure file.
    #[arg(long)]
    pub structure: Option<PathBuf>,
    /// Presentation file; needed with --structure for commands that enumerate cosets.
    #[arg(long)]
    pub presentation: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct Subgroup {
    /// A subgroup generator; repeat for several.
    #[arg(long = "subgroup")]
    pub words: Vec<String>,
    /// File with one subgroup generator per line.
    #[arg(long)]
    pub subgroup_file: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SubgroupTarget {
    /// Automaton recognizing the subgroup normal forms, as written by detect-rational.
    #[arg(long)]
    pub mh: Option<PathBuf>,
    #[command(flatten)]
    pub subgroup: Subgroup,
}

#[derive(Args, Debug)]
pub struct Budget {
    #[arg(long, default_value_t = 50)]
    pub max_stage: usize,
    #[arg(long)]
    pub max_states: Option<usize>,
    #[arg(long)]
    pub max_cosets: Option<usize>,
    /// Wall-clock limit in seconds.
    #[arg(long)]
    pub timeout: Option<f64>,
}

#[derive(Args, Debug)]
pub struct Output {
    /// Where to write the produced automaton or snapshots.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Emit::Text)]
    pub emit: Emit,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Emit {
    Json,
    Text,
}
