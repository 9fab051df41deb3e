//! Command-line arguments.

use clap::{Args, Parser, Subcommand, ValueEnum};
use quatval_core::quaternion::DEFAULT_SEARCH_BOUND;

#[derive(Debug, Parser)]
#[command(name = "quatval", version, about = "Valuations on conic function fields and quaternion algebras")]
pub struct Cli {
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    /// Height bound for rational point searches.
    #[arg(long, global = true, default_value_t = DEFAULT_SEARCH_BOUND)]
    pub search_bound: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether v has the distinguished non-ruled extension to E(x)(sqrt(a x^2 + b)).
    Analyze {
        #[command(flatten)]
        conic: ConicArgs,
        /// Family size in the absent case.
        #[arg(long, default_value_t = 3)]
        count: usize,
    },
    /// Value (and residue, when the value is 0) of f + g*s under the distinguished extension.
    Eval {
        #[command(flatten)]
        conic: ConicArgs,
        /// f in E(x).
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        /// g in E(x).
        #[arg(long, allow_hyphen_values = true, default_value = "0")]
        g: String,
    },
    /// Gauss extension of a valuation with respect to a pivot in E(x).
    Gauss {
        #[arg(long)]
        val: String,
        /// Degree-one function of x, or c*x^2.
        #[arg(long, allow_hyphen_values = true, default_value = "x")]
        pivot: String,
        /// Element of E(x) to evaluate.
        #[arg(long, allow_hyphen_values = true)]
        eval: String,
    },
    /// Hilbert symbol (a, b) at a place of Q.
    Hilbert {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        /// A prime, or inf.
        #[arg(long)]
        place: String,
    },
    /// Quaternion algebras (a, b).
    Quat {
        #[command(subcommand)]
        command: QuatCommand,
    },
    /// Rational-residue extensions of v to the conic function field.
    Family {
        #[command(flatten)]
        conic: ConicArgs,
        #[arg(long, default_value_t = 5)]
        count: usize,
    },
    /// Degree of E(x) over E(y) and the minimal polynomial of x.
    Polyrep {
        #[arg(long)]
        field: String,
        /// Nonconstant y in E(x).
        #[arg(long, allow_hyphen_values = true)]
        y: String,
    },
    /// Run an oracle suite; the report is always JSON.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum QuatCommand {
    /// Whether (a, b) splits over E, with a point of a x^2 + b y^2 = z^2 when one is found.
    Split {
        #[arg(long)]
        field: String,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
    },
    /// Whether v has an unramified extension to (a, b).
    Decide {
        #[command(flatten)]
        conic: ConicArgs,
    },
}

#[derive(Debug, Args)]
pub struct ConicArgs {
    #[arg(long)]
    pub field: String,
    #[arg(long)]
    pub val: String,
    #[arg(long, allow_hyphen_values = true)]
    pub a: String,
    #[arg(long, allow_hyphen_values = true)]
    pub b: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    /// Valuation axioms for the base valuations.
    Base,
    /// Valuation axioms for Gauss extensions.
    Gauss,
    /// Valuation axioms for the distinguished extension on three fixtures.
    WStar,
    /// Harness self-test: a valuation shifted by one, which must be caught.
    Corrupted,
}
