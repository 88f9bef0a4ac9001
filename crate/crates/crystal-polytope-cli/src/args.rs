use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "crystal-polytope",
    version,
    about = "Polyhedral realizations of Demazure crystals, string polytopes and valuations"
)]
pub struct Cli {
    /// Output format; each command has a default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    HrepText,
}

/// Root datum: a built-in Cartan type or a matrix file.
#[derive(Debug, Clone, Args)]
pub struct RootArgs {
    /// Cartan type letter (A, B, C, D, E, F, G).
    #[arg(long = "type", value_name = "LETTER", requires = "rank", conflicts_with = "gcm")]
    pub family: Option<char>,

    #[arg(long)]
    pub rank: Option<usize>,

    /// File with one matrix row per line; entry (i, j) is <alpha_j, h_i>.
    #[arg(long, value_name = "PATH")]
    pub gcm: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct WordArgs {
    /// Reduced word in application order, e.g. 1,2,1. Defaults to a
    /// reduced word for the longest element.
    #[arg(long, value_name = "LETTERS")]
    pub word: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct ClosureArgs {
    /// Number of sequence positions the closure operators act on
    /// (default: twice the length of the longest element).
    #[arg(long)]
    pub window: Option<usize>,

    /// Cap on closure rounds.
    #[arg(long, default_value_t = 30)]
    pub depth: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OrderArg {
    Hi,
    Tilde,
    /// The derivative algorithm; agrees with `hi` up to sign.
    Chevalley,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Elements of the Demazure crystal with their weights.
    Enumerate {
        #[command(flatten)]
        root: RootArgs,
        #[command(flatten)]
        word: WordArgs,
        #[arg(long, value_name = "INTS")]
        lambda: String,
        /// Enumerate the cut of B(∞) by ε*_i <= λ_i instead.
        #[arg(long)]
        cut: bool,
    },

    /// Lattice points of the polyhedral realization.
    DeltaPoints {
        #[command(flatten)]
        root: RootArgs,
        #[command(flatten)]
        word: WordArgs,
        #[arg(long, value_name = "INTS")]
        lambda: String,
        /// Count lattice points of the generated inequalities instead of
        /// enumerating the crystal (requires an ample pair).
        #[arg(long)]
        via_hrep: bool,
        /// Emit levels 1..=K of the graded set (λ, 2λ, ..).
        #[arg(long, value_name = "K")]
        k_max: Option<usize>,
        #[command(flatten)]
        closure: ClosureArgs,
    },

    /// H-representation of the polyhedral realization.
    DeltaHrep {
        #[command(flatten)]
        root: RootArgs,
        #[command(flatten)]
        word: WordArgs,
        /// Concrete weight; omit for the symbolic system in L1..Ln.
        #[arg(long, value_name = "INTS")]
        lambda: Option<String>,
        /// Keep rows implied by the others.
        #[arg(long)]
        no_prune: bool,
        #[command(flatten)]
        closure: ClosureArgs,
    },

    /// String parameters of the Demazure crystal along the word.
    StringPoints {
        #[command(flatten)]
        root: RootArgs,
        #[command(flatten)]
        word: WordArgs,
        #[arg(long, value_name = "INTS")]
        lambda: String,
    },

    /// Transition map from embedding coordinates to string parameters.
    Eta {
        #[command(flatten)]
        root: RootArgs,
        #[command(flatten)]
        word: WordArgs,
        #[arg(long, value_name = "INTS")]
        point: String,
    },

    /// Kashiwara's involution on embedding coordinates.
    Star {
        #[command(flatten)]
        root: RootArgs,
        #[command(flatten)]
        word: WordArgs,
        #[arg(long, value_name = "INTS")]
        point: String,
    },

    /// Ampleness of (sequence, λ).
    Ample {
        #[command(flatten)]
        root: RootArgs,
        #[command(flatten)]
        word: WordArgs,
        #[arg(long, value_name = "INTS")]
        lambda: String,
        #[command(flatten)]
        closure: ClosureArgs,
    },

    /// Value of a polynomial in t1..tr.
    Valuation {
        #[arg(long)]
        vars: usize,
        #[arg(long, value_enum)]
        order: OrderArg,
        #[arg(long)]
        poly: String,
    },

    /// exp(t_r F_{j_r}) .. exp(t_1 F_{j_1}) in a built-in representation.
    Matrix {
        #[arg(long = "type", value_name = "LETTER")]
        family: char,
        #[arg(long)]
        rank: usize,
        #[command(flatten)]
        word: WordArgs,
    },

    /// Cross-checks crystal enumeration, inequalities, levels, the string
    /// side and (type A) section value sets. Without --word and --lambda it
    /// sweeps all reduced words and all dominant weights up to --max-entry.
    TheoremCheck {
        #[command(flatten)]
        root: RootArgs,
        #[command(flatten)]
        word: WordArgs,
        #[arg(long, value_name = "INTS")]
        lambda: Option<String>,
        #[arg(long, default_value_t = 2)]
        max_entry: i64,
        #[arg(long, default_value_t = 2)]
        k_max: usize,
        #[command(flatten)]
        closure: ClosureArgs,
    },
}
