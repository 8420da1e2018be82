//! Deciding SAT and TAUT with a pruned downward self-reduction tree, given a
//! reduction to a sparse language.
//!
//! * [`formula`]: the formula grammar, substitution, truth-table oracles and
//!   corpus generators.
//! * [`oracles`]: desk-scale reductions to sparse languages and a validity
//!   checker for them.
//! * [`engine`]: the pruning engine in its disjunctive (SAT), conjunctive
//!   (TAUT) and one-query forms, with traces, audits and DOT output.
//! * [`apt`]: step-clocked deciders and the reduction to their slow set.
//!
//! Bounds are [`PolyBound`]s over any unsigned scalar; the engine works in
//! [`Poly`] (`u64`).

pub mod apt;
pub mod engine;
pub mod formula;
pub mod oracles;
pub mod poly;

pub use engine::{
    decide, decide_sat_mahaney, decide_sat_one_tt, decide_taut_fortune, prune_level, width_cap,
    EngineConfig, EngineError, Mode, Outcome, PruneTrace, Width,
};
pub use formula::{combine_and, combine_or, parse, Formula};
pub use oracles::{ReductionOracle, SparseLanguage};
pub use poly::{BoundScalar, PolyBound, PolyError};

/// Bounds as the engine evaluates them.
pub type Poly = PolyBound<u64>;
/// Narrow bounds; overflow sooner, useful for probing overflow handling.
pub type Poly32 = PolyBound<u32>;
/// Wide bounds for large census or stretch polynomials.
pub type Poly128 = PolyBound<u128>;
