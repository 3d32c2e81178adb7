//! Electric capacitated vehicle routing with a bilevel late acceptance hill
//! climber.
//!
//! The leader chooses routes `x` against the surrogate `φ(x)` (plain routing
//! distance); a follower inserts charging stations `y` along fixed routes and
//! reports the full cost `F(x, y) = φ(x) + f(x, y)`. See the guide in `book/`
//! for a walk through the model and the search.

pub mod analysis;
pub mod charging;
pub mod distance;
pub mod fixtures;
pub mod instance;
pub mod moves;
pub mod search;
pub mod solution;

pub use distance::{DistanceMatrix, DistanceOracle, EvaluationBudget};
pub use instance::{Instance, InstanceError, NodeId};
pub use solution::{ChargingPlan, CompleteSolution, RoutingPlan, Slot};

// The guide's code blocks run as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/model.md")]
    mod model {}
    #[doc = include_str!("../../../book/src/charging.md")]
    mod charging {}
    #[doc = include_str!("../../../book/src/moves.md")]
    mod moves {}
    #[doc = include_str!("../../../book/src/search.md")]
    mod search {}
    #[doc = include_str!("../../../book/src/budget.md")]
    mod budget {}
    #[doc = include_str!("../../../book/src/analysis.md")]
    mod analysis {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
