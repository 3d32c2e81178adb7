use std::fmt;

use crate::charging::{exhaustive_route, RouteCharge};
use crate::distance::DistanceOracle;
use crate::instance::{Instance, NodeId};
use crate::solution::{ChargingPlan, CompleteSolution, RoutingPlan, Slot};

pub const MAX_BRUTE_CUSTOMERS: usize = 8;
pub const MAX_BRUTE_STATIONS: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BruteForceError {
    InstanceTooLarge { customers: usize, stations: usize },
    /// No partition into at most `M` routes admits a charging plan.
    InstanceInfeasible,
}

impl fmt::Display for BruteForceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::InstanceTooLarge { customers, stations } => write!(
                f,
                "InstanceTooLarge: {customers} customers and {stations} stations \
                 (at most {MAX_BRUTE_CUSTOMERS} and {MAX_BRUTE_STATIONS})"
            ),
            Self::InstanceInfeasible => f.write_str("InstanceInfeasible: no battery-feasible solution exists"),
        }
    }
}

impl std::error::Error for BruteForceError {}

/// Best charged route over all orders of one customer subset.
fn best_route(members: &[NodeId], inst: &Instance, o: &DistanceOracle<'_>) -> Option<(Vec<NodeId>, Vec<Slot>, f64)> {
    let mut perm = members.to_vec();
    let mut best: Option<(Vec<NodeId>, Vec<Slot>, f64)> = None;
    permute(&mut perm, 0, &mut |p| {
        // a route and its reverse cost the same on symmetric distances
        if p.len() > 1 && p[0] > p[p.len() - 1] {
            return;
        }
        let mut count = 0;
        let cutoff = best.as_ref().map_or(f64::INFINITY, |b| b.2);
        if let RouteCharge::Found { slots, length } = exhaustive_route(p, inst, o, cutoff, &mut count) {
            best = Some((p.to_vec(), slots, length));
        }
    });
    best
}

/// Lexicographic permutations of `v[k..]`.
fn permute(v: &mut Vec<NodeId>, k: usize, visit: &mut impl FnMut(&[NodeId])) {
    if k == v.len() {
        visit(v);
        return;
    }
    for i in k..v.len() {
        v[k..=i].rotate_right(1);
        permute(v, k + 1, visit);
        v[k..=i].rotate_left(1);
    }
}

/// Global optimum of the bilevel problem (under the follower's visit bound)
/// by enumeration. Every capacity-feasible customer subset gets its best
/// ordered, charged route; a subset DP then picks the cheapest partition
/// into at most `M` routes.
pub fn brute_force_optimum(inst: &Instance, oracle: &DistanceOracle<'_>) -> Result<CompleteSolution, BruteForceError> {
    let (nc, ns) = (inst.num_customers(), inst.num_stations());
    if nc > MAX_BRUTE_CUSTOMERS || ns > MAX_BRUTE_STATIONS {
        return Err(BruteForceError::InstanceTooLarge { customers: nc, stations: ns });
    }
    let customers: Vec<NodeId> = inst.customers().collect();
    let full = (1usize << nc) - 1;
    let mut route: Vec<Option<(Vec<NodeId>, Vec<Slot>, f64)>> = vec![None; full + 1];
    for mask in 1..=full {
        let members: Vec<NodeId> = (0..nc).filter(|&b| mask >> b & 1 == 1).map(|b| customers[b]).collect();
        let load: u64 = members.iter().map(|&c| inst.demand(c)).sum();
        if load <= inst.cargo_capacity() {
            route[mask] = best_route(&members, inst, oracle);
        }
    }
    // cost[k][mask]: best cover of `mask` by exactly k routes
    let m = inst.fleet_size().min(nc.max(1));
    let mut cost = vec![vec![f64::INFINITY; full + 1]; m + 1];
    let mut choice = vec![vec![0usize; full + 1]; m + 1];
    cost[0][0] = 0.0;
    for k in 1..=m {
        for mask in 1..=full {
            let low = mask & mask.wrapping_neg();
            let mut sub = mask;
            while sub > 0 {
                if sub & low != 0 {
                    if let Some((_, _, c)) = &route[sub] {
                        let total = cost[k - 1][mask ^ sub] + c;
                        if total < cost[k][mask] {
                            cost[k][mask] = total;
                            choice[k][mask] = sub;
                        }
                    }
                }
                sub = (sub - 1) & mask;
            }
        }
    }
    let k = (0..=m)
        .filter(|&k| cost[k][full].is_finite())
        .min_by(|&a, &b| cost[a][full].total_cmp(&cost[b][full]))
        .ok_or(BruteForceError::InstanceInfeasible)?;
    let (mut routes, mut slots) = (Vec::new(), Vec::new());
    let (mut mask, mut k) = (full, k);
    while mask != 0 {
        let sub = choice[k][mask];
        let (r, s, _) = route[sub].clone().expect("chosen subsets are routable");
        routes.push(r);
        slots.push(s);
        mask ^= sub;
        k -= 1;
    }
    routes.resize(inst.fleet_size(), Vec::new());
    slots.resize(inst.fleet_size(), Vec::new());
    Ok(CompleteSolution::evaluate(RoutingPlan::new(routes), ChargingPlan::new(slots), &oracle.unmetered())
        .expect("routes and slots built together"))
}
