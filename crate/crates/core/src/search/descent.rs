//! Greedy descent `𝒢` to a local optimum of M1–M7 under `φ`.

use rand::seq::SliceRandom;
use rand::Rng;

use super::working::WorkingPlan;
use super::Interrupted;
use crate::distance::DistanceOracle;
use crate::moves::{candidates, MoveClass, MoveOperator, MoveTarget};

/// A move counts as improving only below this, so float noise cannot make
/// the descent cycle.
pub(crate) const IMPROVEMENT_EPS: f64 = 1e-9;

/// Operators used by the descent: M1–M7.
pub const DESCENT_OPERATORS: [MoveOperator; 7] = [
    MoveOperator::IntraRelocate,
    MoveOperator::InterRelocate,
    MoveOperator::IntraSwap,
    MoveOperator::InterSwap,
    MoveOperator::IntraTwoOpt,
    MoveOperator::InterTwoOptJoin,
    MoveOperator::InterTwoOptTails,
];

fn targets(op: MoveOperator, wp: &WorkingPlan) -> Vec<MoveTarget> {
    let live = wp.nonempty();
    match op.class() {
        MoveClass::IntraRoute => live.into_iter().map(MoveTarget::Route).collect(),
        _ => live
            .iter()
            .flat_map(|&r1| live.iter().filter(move |&&r2| r2 != r1).map(move |&r2| MoveTarget::Pair(r1, r2)))
            .collect(),
    }
}

fn is_live(t: MoveTarget, wp: &WorkingPlan) -> bool {
    match t {
        MoveTarget::Route(r) => !wp.routes[r].is_empty(),
        MoveTarget::Pair(r1, r2) => !wp.routes[r1].is_empty() && !wp.routes[r2].is_empty(),
    }
}

/// Runs passes over the shuffled operators until one full pass finds no
/// strictly improving capacity-feasible move. Within a target the first
/// improving `(a, b)` is applied and the target is rescanned from the start.
pub(crate) fn greedy_descent(
    wp: &mut WorkingPlan,
    cap: u64,
    ops: &[MoveOperator],
    oracle: &DistanceOracle<'_>,
    rng: &mut impl Rng,
) -> Result<(), Interrupted> {
    let mut ops = ops.to_vec();
    let clock = oracle.budget();
    loop {
        ops.shuffle(rng);
        let mut any = false;
        for &op in &ops {
            for target in targets(op, wp) {
                while is_live(target, wp) {
                    if clock.is_some_and(|b| b.time_exhausted()) {
                        return Err(Interrupted);
                    }
                    let mut moved = false;
                    let nodes = wp.routes[target.first()].clone();
                    'scan: for a in nodes {
                        let loc = |c| wp.locate(c);
                        for (_, m) in candidates(op, &wp.routes, &loc, target, a) {
                            if oracle.exhausted() {
                                return Err(Interrupted);
                            }
                            if !m.capacity_ok(&wp.routes, wp, cap) {
                                continue;
                            }
                            let d = m.delta(&wp.routes, oracle);
                            if d < -IMPROVEMENT_EPS {
                                wp.apply(&m, d);
                                moved = true;
                                break 'scan;
                            }
                        }
                    }
                    if !moved {
                        break;
                    }
                    any = true;
                }
            }
        }
        if !any {
            return Ok(());
        }
    }
}
