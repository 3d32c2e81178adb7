//! The bilevel late acceptance hill climber.
//!
//! Each start builds `x` from a random permutation by [`split_initial`],
//! descends with `𝒢`, charges it with `𝒻_SE`, and then runs the late
//! acceptance loop: `𝒩` proposes, the history list `𝒫` judges, and the
//! follower is consulted only when `φ(x)` is within `γ` of the start's best
//! surrogate. A start ends when the search stalls; the incumbent survives
//! restarts and gets an exhaustive charging pass when the budget runs out.

mod descent;
mod engine;
mod explore;
mod params;
mod split;
mod trace;
mod working;

use std::fmt;

pub use descent::DESCENT_OPERATORS;
pub use engine::{
    greedy_descent, neighborhood_explore, run_ablation, run_blahc, run_with, Problem, RunOptions,
    SearchObserver, SearchOutcome, SearchStats, StopReason,
};
pub use params::{Ablation, ParamError, SearchParams};
pub use split::{first_fit, split_initial, split_optimal, SplitError};
pub use trace::{SearchTrace, TraceEvent, TraceRecord, TRACE_HEADER};

/// The budget ran out inside an operation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Interrupted;

#[derive(Debug, Clone, PartialEq)]
pub enum SearchError {
    InvalidParams(ParamError),
    /// Neither split nor the first-fit fallbacks fit the customers into `M`
    /// vehicles.
    InstanceInfeasible,
    /// The run ended without any battery-feasible solution.
    IncumbentInfeasible,
}

impl fmt::Display for SearchError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::InvalidParams(e) => write!(f, "invalid parameters: {e}"),
            Self::InstanceInfeasible => {
                f.write_str("InstanceInfeasible: customers cannot be packed into the available vehicles")
            }
            Self::IncumbentInfeasible => {
                f.write_str("IncumbentInfeasible: no battery-feasible solution was found within the budget")
            }
        }
    }
}

impl std::error::Error for SearchError {}
