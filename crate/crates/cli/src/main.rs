//! Batch CLI over the subrank library: construct and check matroids, sample
//! expanders, train and evaluate learners, and run the experiment suites.
//!
//! Every run writes a JSON manifest (parameters, seed, verdicts, artifact
//! inventory) and CSVs of raw trial data into `--out`. Exit codes: 0 on
//! success, 1 when a checked property failed, 2 on usage errors.

mod ops;

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug)]
pub enum CliError {
    /// Malformed invocation or config: exit 2.
    Usage(String),
    /// A checked property was violated: exit 1.
    Verdict(String),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn verdict(msg: impl Into<String>) -> Self {
        CliError::Verdict(msg.into())
    }
}

impl From<subrank::Error> for CliError {
    fn from(e: subrank::Error) -> Self {
        use subrank::Error as E;
        match e {
            E::NotLarge { .. }
            | E::EmptyFamily { .. }
            | E::PairwiseBound { .. }
            | E::Infeasible { .. }
            | E::NotSubmodular => CliError::Verdict(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Parser)]
#[command(
    name = "subrank",
    version,
    about = "Submodular functions, matroid oracles, expanders, and PMAC learning experiments"
)]
struct Cli {
    /// JSON config file; command flags override its keys.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Seed for every randomized step; recorded in all outputs.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory for manifests and CSVs.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Upper bound on worker threads (evaluations run single-threaded at or
    /// below this cap).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random matroid instance of the requested kind.
    GenMatroid(GenMatroidArgs),
    /// Re-validate a serialized instance and run the exhaustive checkers.
    CheckMatroid(CheckMatroidArgs),
    /// Sample a left-regular bipartite graph, optionally verifying expansion.
    GenExpander(GenExpanderArgs),
    /// Train a learner on samples from a file or drawn from a target.
    Learn(LearnArgs),
    /// Measure sandwich coverage of a hypothesis against a target.
    Evaluate(EvaluateArgs),
    /// Empirical tail-product and mean concentration checks.
    Concentration(ConcentrationArgs),
    /// The empirical univariate curve with band coverage and concavity.
    Characterize(CharacterizeArgs),
    /// The planted-rank learning experiment.
    LowerBound(LowerBoundArgs),
    /// Brute-force hardness demonstrations.
    #[command(subcommand)]
    Hardness(HardnessCommand),
    /// Print a command's parameter schema with defaults.
    Describe { command: String },
}

#[derive(Args, Clone)]
pub struct GenMatroidArgs {
    /// uncrossed | truncated | partition | pairwise | family-mb
    #[arg(long)]
    kind: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    d: Option<i64>,
    #[arg(long)]
    b: Option<i64>,
    #[arg(long)]
    tau: Option<usize>,
    /// Size of each randomly drawn constraint set.
    #[arg(long)]
    set_size: Option<usize>,
    /// Comma-separated marked indices for family-mb (default: fair coins).
    #[arg(long)]
    marked: Option<String>,
}

#[derive(Args, Clone)]
pub struct CheckMatroidArgs {
    /// Serialized matroid instance (JSON).
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Args, Clone)]
pub struct GenExpanderArgs {
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    /// One neighbor per right-side block instead of i.i.d. endpoints.
    #[arg(long)]
    partitioned: bool,
    /// Verify expansion up to this left-set size.
    #[arg(long)]
    check_l: Option<usize>,
    /// Expansion slack for the verification.
    #[arg(long)]
    check_eps: Option<f64>,
}

#[derive(Args, Clone)]
pub struct LearnArgs {
    /// product | general | robust | boolean
    mode: Option<String>,
    /// CSV of labeled samples (`set,value`); needs --n.
    #[arg(long)]
    samples: Option<PathBuf>,
    /// Ground size of the sample sets.
    #[arg(long)]
    n: Option<usize>,
    /// Draw training samples from this target instead of a file:
    /// free:N | card:N:C | matroid:PATH | tabulated:PATH
    #[arg(long)]
    target: Option<String>,
    /// Inclusion probability of the product training distribution.
    #[arg(long)]
    p: Option<f64>,
    /// Training-set size; defaults to ceil((48n/eps)·ln(9n/(delta·eps))).
    #[arg(long)]
    ell: Option<usize>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    /// Minimum nonzero target value for the product learner.
    #[arg(long)]
    eta: Option<f64>,
    /// Robustness factor for the robust separator learner.
    #[arg(long)]
    alpha: Option<f64>,
}

#[derive(Args, Clone)]
pub struct EvaluateArgs {
    /// Hypothesis file (JSON).
    #[arg(long)]
    hypothesis: Option<PathBuf>,
    /// free:N | card:N:C | matroid:PATH | tabulated:PATH
    #[arg(long)]
    target: Option<String>,
    #[arg(long)]
    p: Option<f64>,
    /// Sandwich factor; defaults to sqrt(n+1).
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    test_size: Option<usize>,
}

#[derive(Args, Clone)]
pub struct ConcentrationArgs {
    #[arg(long)]
    target: Option<String>,
    #[arg(long)]
    p: Option<f64>,
    /// Pivot value; "median" estimates it from a seeded pilot run.
    #[arg(long)]
    b: Option<String>,
    #[arg(long)]
    t: Option<f64>,
    #[arg(long)]
    trials: Option<usize>,
    /// Also run the mean-concentration check at this relative deviation.
    #[arg(long)]
    mean_alpha: Option<f64>,
}

#[derive(Args, Clone)]
pub struct CharacterizeArgs {
    #[arg(long)]
    target: Option<String>,
    #[arg(long)]
    samples_per_k: Option<usize>,
    #[arg(long)]
    c_low: Option<f64>,
    #[arg(long)]
    c_high: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
}

#[derive(Args, Clone)]
pub struct LowerBoundArgs {
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    b: Option<i64>,
    #[arg(long)]
    tau: Option<usize>,
    #[arg(long)]
    train_size: Option<usize>,
    /// general | product
    #[arg(long)]
    learner: Option<String>,
    #[arg(long)]
    epsilon: Option<f64>,
}

#[derive(Subcommand, Clone)]
pub enum HardnessCommand {
    /// Minimization under a cardinality floor on a planted family.
    Sfmcc(SfmccArgs),
    /// Minimum cut over disjoint source-sink paths.
    Stcut(StcutArgs),
    /// Vertex cover over a perfect matching.
    Vertexcover(VertexcoverArgs),
}

#[derive(Args, Clone)]
pub struct SfmccArgs {
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    b: Option<i64>,
    #[arg(long)]
    tau: Option<usize>,
    #[arg(long)]
    marked: Option<String>,
}

#[derive(Args, Clone)]
pub struct StcutArgs {
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    b: Option<i64>,
    #[arg(long)]
    tau: Option<usize>,
    #[arg(long)]
    marked: Option<String>,
}

#[derive(Args, Clone)]
pub struct VertexcoverArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    k: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = match ops::Context::new(cli.config, cli.seed, cli.out, cli.threads) {
        Ok(ctx) => ctx,
        Err(e) => return fail(e),
    };
    let result = match cli.command {
        Command::GenMatroid(args) => ops::gen_matroid(&ctx, args),
        Command::CheckMatroid(args) => ops::check_matroid(&ctx, args),
        Command::GenExpander(args) => ops::gen_expander(&ctx, args),
        Command::Learn(args) => ops::learn(&ctx, args),
        Command::Evaluate(args) => ops::evaluate(&ctx, args),
        Command::Concentration(args) => ops::concentration(&ctx, args),
        Command::Characterize(args) => ops::characterize(&ctx, args),
        Command::LowerBound(args) => ops::lower_bound(&ctx, args),
        Command::Hardness(cmd) => ops::hardness(&ctx, cmd),
        Command::Describe { command } => ops::describe(&command),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(e),
    }
}

fn fail(e: CliError) -> ExitCode {
    match e {
        CliError::Usage(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        CliError::Verdict(msg) => {
            eprintln!("verdict failure: {msg}");
            ExitCode::from(1)
        }
    }
}
