//! `scg`: command-line access to the scg-core computations.
//!
//! Results go to stdout, diagnostics to stderr. Exit codes: 0 computed and
//! the property holds, 1 computed and it fails, 2 usage or parse error, 3
//! exponent budget or step limit exceeded.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use scg_core::Error;

#[derive(Parser, Debug)]
#[command(name = "scg", version, about = "Small-cancellation groups with doubly-exponential relators")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

/// Where the presentation comes from: a JSON file, or a family over a set.
#[derive(Args, Debug, Clone)]
pub struct PresentationArgs {
    /// Presentation JSON file.
    #[arg(long, conflicts_with_all = ["set", "family"])]
    pub presentation: Option<PathBuf>,

    /// Index set for an inline family presentation, e.g. `list:1,2,3` or
    /// `evens;depth:5`.
    #[arg(long)]
    pub set: Option<String>,

    /// Relator family for `--set`.
    #[arg(long, default_value = "wise-chong")]
    pub family: String,

    /// Highest commutator base for wise-chong relators.
    #[arg(long, default_value_t = 100)]
    pub top: u64,

    /// Small-cancellation constant `p/q`; overrides the presentation's.
    #[arg(long)]
    pub lambda: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build one family relator and print it with its length.
    Build {
        #[arg(long)]
        family: String,
        /// Family index (`n`, or `k` for b-power).
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 100)]
        top: u64,
    },
    /// Check the C'(lambda) condition.
    Verify {
        #[command(flatten)]
        presentation: PresentationArgs,
        /// Only check relators up to this length.
        #[arg(long)]
        max_length: Option<String>,
    },
    /// Longest piece for every pair of relators.
    Pieces {
        #[command(flatten)]
        presentation: PresentationArgs,
        #[arg(long)]
        max_length: Option<String>,
    },
    /// Word problem by majority reduction, with the trace.
    Solve {
        #[command(flatten)]
        presentation: PresentationArgs,
        #[arg(long)]
        word: String,
        #[arg(long, default_value_t = scg_core::dehn::DEFAULT_STEP_LIMIT)]
        step_limit: usize,
    },
    /// Project a word to G_k and solve the word problem there.
    Quotient {
        /// The set S of G(S).
        #[arg(long)]
        set: String,
        #[arg(long, default_value_t = 100)]
        top: u64,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        word: String,
        #[arg(long, default_value_t = scg_core::dehn::DEFAULT_STEP_LIMIT)]
        step_limit: usize,
    },
    /// Least k such that a majority-reduced word survives in G_k.
    RfWitness {
        #[arg(long)]
        set: String,
        #[arg(long, default_value_t = 100)]
        top: u64,
        #[arg(long)]
        word: String,
    },
    /// Project Bowditch relators modulo E_n and check the quotient.
    BowditchQuotient {
        /// Comma-separated values of n.
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<u64>,
        #[arg(long)]
        set: String,
        /// Largest relator index to project.
        #[arg(long)]
        m_max: u64,
    },
    /// The k-related check on two sets, or the least such k.
    Relate {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        /// How to read the sets.
        #[arg(long, value_enum, default_value_t = SetReading::Values)]
        of: SetReading,
        #[arg(long, default_value_t = 100)]
        top: u64,
        #[arg(long, conflicts_with = "min_k", required_unless_present = "min_k")]
        k: Option<String>,
        #[arg(long)]
        min_k: bool,
    },
    /// Relator lengths {|w_n| : n in S}, or {E_n} with `--raw`.
    Spectrum {
        #[arg(long)]
        set: String,
        #[arg(long, default_value_t = 100)]
        top: u64,
        #[arg(long)]
        raw: bool,
    },
    /// Least witness k for the depth-d truncations, d = 0..=depth.
    Profile {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[arg(long)]
        depth: u64,
        #[arg(long, value_enum, default_value_t = ProfileKind::Raw)]
        mode: ProfileKind,
        #[arg(long, default_value_t = 100)]
        top: u64,
    },
    /// Symmetric difference of two index sets.
    SymDiff {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        /// Cut both sets at this index.
        #[arg(long)]
        depth: Option<u64>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SetReading {
    /// Literal integers: `2,16` or `list:2,16`.
    Values,
    /// Index sets mapped to {2^(2^n)}.
    Raw,
    /// Index sets mapped to {|w_n|}.
    Lengths,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProfileKind {
    Raw,
    Spectrum,
}

/// What a command computed: the JSON form, the text form, and whether the
/// property it checks holds.
pub struct Outcome {
    pub json: serde_json::Value,
    pub text: String,
    pub holds: bool,
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Budget { .. } | Error::StepLimit(_) => 3,
        Error::NotMajorityReduced { .. } | Error::NotSmallCancellation { .. } => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(outcome) => {
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&outcome.json).unwrap()),
                Format::Text => print!("{}", outcome.text),
            }
            ExitCode::from(if outcome.holds { 0 } else { 1 })
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
