//! Construction and certification of maximal δ-separated sets in separable
//! (pseudo)metric spaces.
//!
//! Spaces are presented as a distance oracle over a dense enumeration. All
//! distance comparisons are exact: values are rationals, quadratic surds,
//! or square roots of multi-quadratic numbers.

pub mod arith;
pub mod complete;
pub mod document;
pub mod encode;
pub mod finite;
pub mod fixtures;
pub mod greedy;
pub mod interval;
pub mod oracle;
pub mod separation;
pub mod space;
pub mod transform;
pub mod value;

pub use arith::{QuadTower, Rational, Surd};
pub use complete::{choose_in_closed, extend_nonstrict, ClosedSet, ExtendBudgets, RegionWitness, Residual};
pub use finite::FiniteSpace;
pub use greedy::{build_maximal_strict, extend_via_excision, verify_trace, GreedyTrace};
pub use separation::{is_maximal_on_horizon, is_separated, in_excision, Certificate, Mode, SeparatedSet, Violation};
pub use space::{Point, Space, SpaceKind};
pub use transform::{quotient_to_metric, rescale, Quotient, Rescaled, Subspace};
pub use value::ExactValue;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("mixed radicands {left} and {right} cannot be combined")]
    MixedRadicand { left: String, right: String },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("search budget of {budget} points exhausted: {what}")]
    BudgetExhausted { what: String, budget: usize },
    #[error("invalid fixture: {0}")]
    Validation(String),
    #[error("choice extraction failed at n = {n}: no element selected")]
    Extraction { n: usize },
    #[error("space has {size} points, above the limit of {limit}")]
    SizeLimit { size: usize, limit: usize },
    #[error("schema error: {0}")]
    Schema(String),
    #[error("axiom audit failed: {0}")]
    Audit(String),
}
