//! Submodular set functions, matroid oracles, lossless expanders, PMAC
//! learners, and seeded experiment harnesses.
//!
//! The crate is organized around a small set of primitives:
//!
//! - [`ElementSet`]: a subset of a ground set `{0, .., n-1}` with bit-vector
//!   semantics. Every set function and oracle in the crate takes these.
//! - [`SetFunction`]: an evaluatable set function (coverage, cut, cardinality
//!   profile, tabulated, or matroid rank), together with exhaustive and
//!   sampled property checkers that act as oracles for everything else.
//! - [`MatroidSpec`]: declarative matroid constructions built from constraint
//!   families `|I ∩ A(J)| ≤ g(J)`, with independence, rank, axiom, and
//!   uncrossing checkers in exact integer arithmetic.
//! - [`BipartiteNeighborhoods`]: random left-regular bipartite graphs with
//!   exhaustive expansion verification; these back the planted-rank matroid
//!   family used by the hardness and learning experiments.
//! - [`Hypothesis`]: outputs of the learners (constant, null-subcube
//!   indicator, or square-root-of-linear), evaluatable in `O(n)`.
//!
//! All randomized operations take an explicit 64-bit seed and are
//! deterministic given it. Types are immutable after construction and safe to
//! share across threads.

pub mod corpus;
pub mod dist;
pub mod error;
pub mod expander;
pub mod experiment;
pub mod func;
pub mod gs;
pub mod hardness;
pub mod learn;
pub mod lp;
pub mod matroid;
pub mod props;
pub mod report;
pub mod rng;
pub mod set;
pub mod stats;

pub use dist::{ProductDistribution, SubsetDistribution, UniformFamilyDistribution};
pub use error::Error;
pub use expander::{BipartiteNeighborhoods, ExpansionParams, ExpansionReport};
pub use func::SetFunction;
pub use gs::GsCheckResult;
pub use learn::{Hypothesis, LabeledSample, PmacParams};
pub use matroid::{ConstraintFamily, FamilyMb, MatroidSpec};
pub use props::{CheckMode, PropertyReport};
pub use set::ElementSet;

/// Default cap on ground-set size for exhaustive subset enumeration.
pub const EXHAUSTIVE_LIMIT: usize = 16;

/// Default budget on the number of index subsets enumerated while validating
/// constraint families or expansion.
pub const ENUMERATION_BUDGET: u128 = 10_000_000;

pub type Result<T> = std::result::Result<T, Error>;

#[cfg(test)]
mod thread_safety {
    use super::*;

    fn assert_send_sync<T: Send + Sync>() {}

    #[test]
    fn shared_types_are_send_and_sync() {
        assert_send_sync::<ElementSet>();
        assert_send_sync::<SetFunction>();
        assert_send_sync::<MatroidSpec>();
        assert_send_sync::<FamilyMb>();
        assert_send_sync::<BipartiteNeighborhoods>();
        assert_send_sync::<Hypothesis>();
        assert_send_sync::<ProductDistribution>();
    }
}
