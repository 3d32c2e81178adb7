//! Neighbourhood exploration `𝒩` with the late acceptance test.

use rand::seq::IndexedRandom;
use rand::Rng;

use super::working::WorkingPlan;
use super::Interrupted;
use crate::distance::DistanceOracle;
use crate::moves::{candidates, MoveClass, MoveOperator, MoveTarget};

/// Draws one operator, then up to `η_max` random `(T, a)` draws. The first
/// capacity-feasible candidate with `φ'' < φ_vi` or `φ'' < φ(x)` is applied
/// to `wp` and its `Δφ` returned. Returns `None` at once when `x` offers no
/// target for the drawn operator.
pub(crate) fn neighborhood_explore(
    wp: &mut WorkingPlan,
    cap: u64,
    phi_vi: f64,
    max_attempts: usize,
    ops: &[MoveOperator],
    oracle: &DistanceOracle<'_>,
    rng: &mut impl Rng,
) -> Result<Option<f64>, Interrupted> {
    let op = *ops.choose(rng).expect("operator set is non-empty");
    let live = wp.nonempty();
    let sources: Vec<usize> = match op.class() {
        MoveClass::IntraRoute => live.iter().copied().filter(|&r| wp.routes[r].len() >= 2).collect(),
        MoveClass::InterRoute if live.len() >= 2 => live.clone(),
        MoveClass::InterRouteEmpty if live.len() < wp.routes.len() => {
            live.iter().copied().filter(|&r| wp.routes[r].len() >= 2).collect()
        }
        _ => Vec::new(),
    };
    if sources.is_empty() {
        return Ok(None);
    }
    for _ in 0..max_attempts {
        let r1 = *sources.choose(rng).expect("non-empty");
        let target = match op.class() {
            MoveClass::InterRoute => {
                let k = rng.random_range(0..live.len() - 1);
                let r2 = live.iter().copied().filter(|&r| r != r1).nth(k).expect("k < live - 1");
                MoveTarget::Pair(r1, r2)
            }
            _ => MoveTarget::Route(r1),
        };
        let a = *wp.routes[r1].choose(rng).expect("source is non-empty");
        let loc = |c| wp.locate(c);
        let found = candidates(op, &wp.routes, &loc, target, a).into_iter().find_map(|(_, m)| {
            if oracle.exhausted() {
                return Some(Err(Interrupted));
            }
            if !m.capacity_ok(&wp.routes, wp, cap) {
                return None;
            }
            let d = m.delta(&wp.routes, oracle);
            (wp.phi + d < phi_vi || d < 0.0).then_some(Ok((m, d)))
        });
        match found {
            Some(Ok((m, d))) => {
                wp.apply(&m, d);
                return Ok(Some(d));
            }
            Some(Err(e)) => return Err(e),
            None => {}
        }
    }
    Ok(None)
}
