//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("element {element} is outside the universe [0, {universe})")]
    ElementOutOfRange { element: usize, universe: usize },

    #[error("self-loop ({v}, {v}) is not a valid edge")]
    SelfLoop { v: usize },

    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("value at index {index} is not finite")]
    NonFiniteValue { index: usize },

    #[error("negative weight at index {index}")]
    NegativeWeight { index: usize },

    #[error("ground set of size {n} exceeds the exhaustive limit {limit}")]
    ExhaustiveLimit { n: usize, limit: usize },

    #[error("enumeration needs {required} subsets, over the budget {budget}")]
    BudgetExceeded { required: u128, budget: u128 },

    #[error("function is not submodular; lattice check requires submodularity")]
    NotSubmodular,

    #[error("empty independence family: g({indices:?}) = {value} < 0")]
    EmptyFamily { indices: Vec<usize>, value: i64 },

    #[error("(d,tau)-largeness fails at J={indices:?}: g = {value}, needed {required}")]
    NotLarge {
        indices: Vec<usize>,
        value: i64,
        required: i64,
    },

    #[error(
        "pairwise bound fails for pair ({i}, {j}): b_i + b_j - |A_i ∩ A_j| = {bound} < d = {d}"
    )]
    PairwiseBound {
        i: usize,
        j: usize,
        bound: i64,
        d: i64,
    },

    #[error("graph degree {graph_d} does not match requested set size {d}")]
    DegreeMismatch { graph_d: usize, d: usize },

    #[error("degree {d} exceeds right-side size {n}")]
    DegreeTooLarge { d: usize, n: usize },

    #[error("right-side size {n} is not divisible by degree {d}")]
    NotDivisible { n: usize, d: usize },

    #[error("fixed neighborhood has {got} elements, expected {expected}")]
    FixedLastSize { expected: usize, got: usize },

    #[error("no training samples provided")]
    EmptySamples,

    #[error("sample value {value} at index {index} is not boolean")]
    NonBooleanValue { index: usize, value: f64 },

    #[error("no linear separator exists at margin {margin}")]
    Infeasible { margin: f64 },

    #[error("feasibility solver stalled after {iterations} iterations")]
    SolverStalled { iterations: usize },

    #[error("linear program is unbounded")]
    Unbounded,

    #[error("retry budget of {retries} exhausted while sampling {what}")]
    RetriesExhausted { what: &'static str, retries: usize },

    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("malformed {what}: {reason}")]
    Malformed { what: &'static str, reason: String },
}
