//! Giant tour to routing plan.
//!
//! The permutation is cut into at most `M` contiguous capacity-feasible
//! segments by a shortest path over the split graph, layered by segment
//! count. Each segment cost is read once and shared by all layers.

use crate::distance::DistanceOracle;
use crate::instance::{Instance, NodeId};
use crate::solution::RoutingPlan;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitError {
    /// No segmentation into at most `M` capacity-feasible routes exists.
    Infeasible,
    /// The budget ran out while reading segment costs.
    Interrupted,
}

/// Optimal split of `perm` (by `φ`) into at most `M` routes, padded with
/// empty routes to exactly `M`.
pub fn split_optimal(perm: &[NodeId], inst: &Instance, oracle: &DistanceOracle<'_>) -> Result<RoutingPlan, SplitError> {
    let n = perm.len();
    let m = inst.fleet_size();
    let cap = inst.cargo_capacity();
    // segs[i]: (j, cost) for every feasible segment perm[i..j]
    let mut segs: Vec<Vec<(usize, f64)>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut out = Vec::new();
        let mut load = 0;
        if oracle.exhausted() {
            return Err(SplitError::Interrupted);
        }
        let mut acc = oracle.distance(0, perm[i]);
        for j in i..n {
            load += inst.demand(perm[j]);
            if load > cap {
                break;
            }
            if oracle.exhausted() {
                return Err(SplitError::Interrupted);
            }
            if j > i {
                acc += oracle.distance(perm[j - 1], perm[j]);
            }
            out.push((j + 1, acc + oracle.distance(perm[j], 0)));
        }
        segs.push(out);
    }
    let mut cost = vec![f64::INFINITY; n + 1];
    cost[0] = 0.0;
    let mut preds: Vec<Vec<usize>> = Vec::with_capacity(m);
    let (mut best, mut best_k) = (if n == 0 { 0.0 } else { f64::INFINITY }, 0);
    for k in 1..=m {
        let mut next = vec![f64::INFINITY; n + 1];
        let mut pred = vec![usize::MAX; n + 1];
        for i in 0..n {
            if !cost[i].is_finite() {
                continue;
            }
            for &(j, c) in &segs[i] {
                if cost[i] + c < next[j] {
                    next[j] = cost[i] + c;
                    pred[j] = i;
                }
            }
        }
        preds.push(pred);
        if next[n] < best {
            best = next[n];
            best_k = k;
        }
        cost = next;
    }
    if !best.is_finite() {
        return Err(SplitError::Infeasible);
    }
    let mut routes = Vec::with_capacity(m);
    let mut j = n;
    for k in (0..best_k).rev() {
        let i = preds[k][j];
        routes.push(perm[i..j].to_vec());
        j = i;
    }
    routes.reverse();
    routes.resize(m, Vec::new());
    Ok(RoutingPlan::new(routes))
}

/// Places customers in the given order into the first of `M` routes with
/// room left.
pub fn first_fit(order: &[NodeId], inst: &Instance) -> Option<RoutingPlan> {
    let mut routes = vec![Vec::new(); inst.fleet_size()];
    let mut loads = vec![0; inst.fleet_size()];
    for &c in order {
        let d = inst.demand(c);
        let r = (0..routes.len()).find(|&r| loads[r] + d <= inst.cargo_capacity())?;
        routes[r].push(c);
        loads[r] += d;
    }
    Some(RoutingPlan::new(routes))
}

/// Optimal split, else first-fit in permutation order, else first-fit by
/// decreasing demand. `Ok(None)` means all three failed.
pub fn split_initial(
    perm: &[NodeId],
    inst: &Instance,
    oracle: &DistanceOracle<'_>,
) -> Result<Option<RoutingPlan>, SplitError> {
    match split_optimal(perm, inst, oracle) {
        Ok(x) => return Ok(Some(x)),
        Err(SplitError::Interrupted) => return Err(SplitError::Interrupted),
        Err(SplitError::Infeasible) => {}
    }
    if let Some(x) = first_fit(perm, inst) {
        return Ok(Some(x));
    }
    let mut by_demand = perm.to_vec();
    by_demand.sort_by_key(|&c| std::cmp::Reverse(inst.demand(c)));
    Ok(first_fit(&by_demand, inst))
}
