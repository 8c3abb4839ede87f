//! `tl`: command-line front end for the Temperley–Lieb engine.
//!
//! Exit codes: 0 on success, 1 when a verification sweep has a failing
//! case, 2 on usage or input errors.

mod commands;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "tl", version, about = "Exact Temperley–Lieb calculus and spectral algebras of A_o(F) actions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Clone)]
pub struct DomainArgs {
    /// Coefficient domain: symbolic, index=q, index=4cos2(pi/m), float:index=x[,eps=e]
    #[arg(long, default_value = "symbolic")]
    pub domain: String,
    /// Tolerance for float domains (overrides the descriptor's eps)
    #[arg(long)]
    pub eps: Option<f64>,
}

#[derive(Args, Clone)]
pub struct ElementArgs {
    /// Number of strands
    #[arg(long)]
    pub n: Option<usize>,
    /// A word in the generators: "1 2 1", "1,2,1" or "e1e2e1"
    #[arg(long)]
    pub word: Option<String>,
    /// JSON element file ("-" for stdin); read from stdin when no word is given
    #[arg(long)]
    pub input: Option<String>,
}

#[derive(Args, Clone)]
pub struct OutputArgs {
    /// Emit JSON
    #[arg(long)]
    pub json: bool,
}

#[derive(Subcommand)]
pub enum Command {
    /// Multiply words and/or JSON elements left to right
    Mul {
        #[command(flatten)]
        domain: DomainArgs,
        #[arg(long)]
        n: usize,
        /// Words to multiply; several words may be separated by ';'
        #[arg(long, num_args = 1..)]
        words: Vec<String>,
        /// JSON element files multiplied after the words
        #[arg(long, num_args = 1..)]
        input: Vec<String>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Normal form in the diagram basis
    Nf {
        #[command(flatten)]
        domain: DomainArgs,
        #[command(flatten)]
        element: ElementArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Markov trace
    Trace {
        #[command(flatten)]
        domain: DomainArgs,
        #[command(flatten)]
        element: ElementArgs,
    },
    /// Conditional expectation onto fewer strands
    Expect {
        #[command(flatten)]
        domain: DomainArgs,
        #[command(flatten)]
        element: ElementArgs,
        /// Number of strands to close
        #[arg(long, default_value_t = 1)]
        steps: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Gram matrix of the diagram basis: rank, positivity, quotient basis
    Gram {
        #[command(flatten)]
        domain: DomainArgs,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// The word p^{(k)}_{r,s}
    Pword {
        #[command(flatten)]
        domain: DomainArgs,
        #[arg(long, default_value_t = 0)]
        k: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        s: usize,
        /// Ambient strands (default k + r + s)
        #[arg(long)]
        n: Option<usize>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// The Jones projection f_{r-1}
    F {
        #[command(flatten)]
        domain: DomainArgs,
        #[arg(long)]
        r: usize,
        /// Ambient strands (default 2r)
        #[arg(long)]
        n: Option<usize>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Insert R or R* into an arrow coordinate
    Insert {
        #[command(flatten)]
        domain: DomainArgs,
        #[command(flatten)]
        element: ElementArgs,
        /// Insert R after r strands with s strands to its right
        #[arg(long = "R", num_args = 2, value_names = ["R", "S"], conflicts_with = "r_star")]
        r: Option<Vec<usize>>,
        /// Contract with R* after r strands with s strands to its right
        #[arg(long = "R-star", num_args = 2, value_names = ["R", "S"])]
        r_star: Option<Vec<usize>>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Spectral *-algebra operations
    Spectral {
        #[command(subcommand)]
        op: SpectralOp,
    },
    /// Run a verification sweep and emit a JSON certificate
    Verify(VerifyArgs),
    /// Path dimensions d_r on a principal graph
    Dims {
        #[command(flatten)]
        graph: GraphArgs,
        /// Also test d_r ≤ n^r against this n
        #[arg(long)]
        embed: Option<u64>,
        #[arg(long)]
        csv: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Growth table d_r^{1/r}
    Growth {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        csv: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Bratteli diagram of the path model
    Bratteli {
        #[command(flatten)]
        graph: GraphArgs,
        /// DOT output (the default)
        #[arg(long)]
        dot: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Validate F and report σ, d, R and invariant-vector counts
    Aof {
        #[command(flatten)]
        domain: DomainArgs,
        #[arg(long = "F")]
        f: String,
        /// Report invariant vectors on H^{⊗r} for r up to this level
        #[arg(long, default_value_t = 4)]
        levels: usize,
    },
}

#[derive(Args, Clone)]
pub struct GraphArgs {
    /// A<m> or a JSON file/literal {"adjacency": [[…]], "star": 0}
    #[arg(long)]
    pub graph: String,
    #[arg(long, default_value_t = 16)]
    pub levels: usize,
}

#[derive(Args, Clone)]
pub struct SpectralArgs {
    #[command(flatten)]
    pub domain: DomainArgs,
    /// F matrix: I<p>, t=<x>, or a JSON matrix
    #[arg(long = "F")]
    pub f: String,
    /// Level cutoff (default from TL_MAX_LEVEL, else 6)
    #[arg(long)]
    pub max_level: Option<usize>,
}

#[derive(Subcommand)]
pub enum SpectralOp {
    /// Product of two elements
    Mul {
        #[command(flatten)]
        alg: SpectralArgs,
        /// Left factor (JSON file, "-" for stdin)
        a: String,
        /// Right factor (JSON file)
        b: String,
    },
    /// Star of an element
    Star {
        #[command(flatten)]
        alg: SpectralArgs,
        input: Option<String>,
    },
    /// Invariant state h
    State {
        #[command(flatten)]
        alg: SpectralArgs,
        input: Option<String>,
    },
    /// Coaction expansion
    Coact {
        #[command(flatten)]
        alg: SpectralArgs,
        input: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Lemma {
    /// Reduction of adjacent descending-run pairs
    #[value(name = "pair-reduction", alias = "5.6")]
    PairReduction,
    /// p_{r,2} p_{r+2,s} = p_{r,s} p^{(2s)}_{r-s,2}
    #[value(name = "p-exchange", alias = "5.7")]
    PExchange,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Suite {
    Relations,
    Markov,
    Catalan,
    GramDims,
    Associativity,
    Star,
    SpectralRelations,
    Traciality,
    Coaction,
    Quasitensor,
}

#[derive(Args)]
#[command(group(clap::ArgGroup::new("which").required(true).args(["lemma", "conjugate_eq", "suite"])))]
pub struct VerifyArgs {
    #[command(flatten)]
    pub domain: DomainArgs,
    #[arg(long, value_enum)]
    pub lemma: Option<Lemma>,
    /// Zigzag and loop identities of the coordinate insertions
    #[arg(long)]
    pub conjugate_eq: bool,
    #[arg(long, value_enum)]
    pub suite: Option<Suite>,
    /// Sweep bound (strands, run length, or total level by suite)
    #[arg(long, default_value_t = 4)]
    pub max: usize,
    /// Highest arrow level for --conjugate-eq
    #[arg(long, default_value_t = 6)]
    pub max_level: usize,
    /// F matrix for spectral and quasitensor suites
    #[arg(long = "F", default_value = "I2")]
    pub f: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
