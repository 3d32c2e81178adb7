//! Lower-level solvers: where to recharge along fixed routes.
//!
//! Both followers work route by route (routes do not interact once `x` is
//! fixed) and bound the number of station visits on route `v` to
//! `[ℓb_v, ℓb_v + 1]`, with `ℓb_v = ⌊φ(R_v)·h / Q_b⌋`.
//!
//! * [`solve_se`] allows at most one station per gap and always uses the
//!   precomputed best station `θ_ij` of that gap.
//! * [`solve_exhaustive`] lets every gap take any station or any ordered pair
//!   of distinct stations.
//!
//! Both are depth-first searches over gaps in index order (at each gap `Nil`
//! first, then stations) with battery and cost pruning. Subtrees cut by
//! pruning still count towards `enumeration_count`, so the counter always
//! equals the size of the configuration space that was ruled on.

use crate::distance::DistanceOracle;
use crate::instance::{Instance, NodeId};
use crate::solution::{total_cost, ChargingPlan, RoutingPlan, Slot};

/// `ℓb_v` for one route: the fewest station visits any battery-feasible
/// charging plan for it can use.
pub fn min_visits(route: &[NodeId], inst: &Instance, oracle: &DistanceOracle<'_>) -> usize {
    let phi = crate::solution::route_cost(route, oracle);
    min_visits_for_length(phi, inst)
}

pub(crate) fn min_visits_for_length(phi: f64, inst: &Instance) -> usize {
    (phi * inst.consumption_rate() / inst.battery_capacity()).floor() as usize
}

/// `θ_ij` for every ordered pair of non-charging nodes (depot and customers).
#[derive(Debug, Clone)]
pub struct BestStationTable {
    n: usize,
    best: Vec<Option<(NodeId, f64)>>,
}

impl BestStationTable {
    /// Scans all stations for each pair. Ties go to the lowest station id.
    /// Reads through `oracle`; callers normally pass an unmetered view since
    /// this is preprocessing.
    pub fn build(inst: &Instance, oracle: &DistanceOracle<'_>) -> Self {
        let n = 1 + inst.num_customers();
        let mut best = vec![None; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut pick: Option<(NodeId, f64)> = None;
                for s in inst.stations() {
                    let len = oracle.distance(i, s) + oracle.distance(s, j);
                    if pick.is_none_or(|(_, b)| len < b) {
                        pick = Some((s, len));
                    }
                }
                best[i * n + j] = pick;
            }
        }
        Self { n, best }
    }

    /// Best station between `i` and `j` and the length of `i → θ → j`.
    /// `None` when the instance has no stations.
    pub fn get(&self, i: NodeId, j: NodeId) -> Option<(NodeId, f64)> {
        self.best[i * self.n + j]
    }

    pub fn station(&self, i: NodeId, j: NodeId) -> Option<NodeId> {
        self.get(i, j).map(|(s, _)| s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ChargingStatus {
    Feasible { plan: ChargingPlan, total: f64, detour: f64, surrogate: f64 },
    Infeasible,
    /// The attached budget ran out mid-query; no plan is reported.
    Interrupted,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChargingQueryResult {
    pub status: ChargingStatus,
    /// Configurations ruled on, `Π_v` of the per-route counts.
    pub enumeration_count: u128,
}

impl ChargingQueryResult {
    pub fn is_feasible(&self) -> bool {
        matches!(self.status, ChargingStatus::Feasible { .. })
    }

    pub fn total(&self) -> Option<f64> {
        match self.status {
            ChargingStatus::Feasible { total, .. } => Some(total),
            _ => None,
        }
    }

    pub fn plan(&self) -> Option<&ChargingPlan> {
        match &self.status {
            ChargingStatus::Feasible { plan, .. } => Some(plan),
            _ => None,
        }
    }
}

/// Per-route outcome shared by both followers.
pub(crate) enum RouteCharge {
    Found { slots: Vec<Slot>, length: f64 },
    Infeasible,
    Interrupted,
}

/// The simple-enumeration follower `𝒻_SE`.
pub fn solve_se(
    x: &RoutingPlan,
    inst: &Instance,
    oracle: &DistanceOracle<'_>,
    table: &BestStationTable,
) -> ChargingQueryResult {
    solve_with(x, oracle, |route, count| se_route(route, inst, oracle, table, count))
}

/// The exhaustive follower `𝒻`.
pub fn solve_exhaustive(x: &RoutingPlan, inst: &Instance, oracle: &DistanceOracle<'_>) -> ChargingQueryResult {
    solve_with(x, oracle, |route, count| exhaustive_route(route, inst, oracle, f64::INFINITY, count))
}

fn solve_with(
    x: &RoutingPlan,
    oracle: &DistanceOracle<'_>,
    mut per_route: impl FnMut(&[NodeId], &mut u128) -> RouteCharge,
) -> ChargingQueryResult {
    let mut slots = Vec::with_capacity(x.len());
    let mut count: u128 = 1;
    let mut feasible = true;
    for route in x.routes() {
        if route.is_empty() {
            slots.push(Vec::new());
            continue;
        }
        let mut c = 0u128;
        let outcome = per_route(route, &mut c);
        count = count.saturating_mul(c);
        match outcome {
            RouteCharge::Found { slots: s, .. } => slots.push(s),
            RouteCharge::Infeasible => {
                // Keep counting the other routes so the product stays exact.
                feasible = false;
                slots.push(Vec::new());
            }
            RouteCharge::Interrupted => {
                return ChargingQueryResult { status: ChargingStatus::Interrupted, enumeration_count: count };
            }
        }
    }
    if !feasible {
        return ChargingQueryResult { status: ChargingStatus::Infeasible, enumeration_count: count };
    }
    let plan = ChargingPlan::new(slots);
    let c = total_cost(x, &plan, &oracle.unmetered()).expect("slots built per route");
    ChargingQueryResult {
        status: ChargingStatus::Feasible { plan, total: c.total, detour: c.detour, surrogate: c.surrogate },
        enumeration_count: count,
    }
}

fn binom(n: usize, k: isize) -> u128 {
    if k < 0 || k as usize > n {
        return 0;
    }
    let k = (k as usize).min(n - k as usize);
    (0..k).fold(1u128, |acc, i| acc.saturating_mul((n - i) as u128) / (i as u128 + 1))
}

/// Route `0 → route → 0` as its `L + 1` gaps `(p_g, q_g)`.
fn gaps(route: &[NodeId]) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
    let n = route.len();
    (0..=n).map(move |g| (if g == 0 { 0 } else { route[g - 1] }, if g == n { 0 } else { route[g] }))
}

struct SeGap {
    direct: f64,
    /// `(θ, d(p, θ), d(θ, q))`
    via: Option<(NodeId, f64, f64)>,
}

pub(crate) fn se_route(
    route: &[NodeId],
    inst: &Instance,
    oracle: &DistanceOracle<'_>,
    table: &BestStationTable,
    count: &mut u128,
) -> RouteCharge {
    let mut gs = Vec::with_capacity(route.len() + 1);
    for (p, q) in gaps(route) {
        if oracle.exhausted() {
            return RouteCharge::Interrupted;
        }
        let direct = oracle.distance(p, q);
        let via = table.station(p, q).map(|s| (s, oracle.distance(p, s), oracle.distance(s, q)));
        gs.push(SeGap { direct, via });
    }
    let phi: f64 = gs.iter().map(|g| g.direct).sum();
    let lb = min_visits_for_length(phi, inst);
    let mut suffix = vec![0.0; gs.len() + 1];
    for g in (0..gs.len()).rev() {
        suffix[g] = suffix[g + 1] + gs[g].direct;
    }
    let mut dfs = SeSearch {
        gs: &gs,
        suffix: &suffix,
        lb,
        q: inst.battery_capacity(),
        h: inst.consumption_rate(),
        chosen: vec![false; gs.len()],
        best: None,
        best_len: f64::INFINITY,
        count: 0,
    };
    dfs.visit(0, 0, dfs.q, 0.0);
    *count = dfs.count;
    match dfs.best {
        Some(chosen) => RouteCharge::Found {
            slots: chosen
                .iter()
                .zip(&gs)
                .map(|(&c, g)| if c { Slot::Single(g.via.expect("chosen gaps have a station").0) } else { Slot::Nil })
                .collect(),
            length: dfs.best_len,
        },
        None => RouteCharge::Infeasible,
    }
}

struct SeSearch<'a> {
    gs: &'a [SeGap],
    suffix: &'a [f64],
    lb: usize,
    q: f64,
    h: f64,
    chosen: Vec<bool>,
    best: Option<Vec<bool>>,
    best_len: f64,
    count: u128,
}

impl SeSearch<'_> {
    fn leaves(&self, g: usize, visits: usize) -> u128 {
        let r = self.gs.len() - g;
        binom(r, self.lb as isize - visits as isize) + binom(r, self.lb as isize + 1 - visits as isize)
    }

    fn visit(&mut self, g: usize, visits: usize, sigma: f64, len: f64) {
        let r = self.gs.len() - g;
        if visits > self.lb + 1 || visits + r < self.lb {
            return;
        }
        if len + self.suffix[g] >= self.best_len {
            self.count += self.leaves(g, visits);
            return;
        }
        if g == self.gs.len() {
            self.count += 1;
            self.best_len = len;
            self.best = Some(self.chosen.clone());
            return;
        }
        let gap = &self.gs[g];
        let arrive = sigma - self.h * gap.direct;
        if arrive < 0.0 {
            self.count += self.leaves(g + 1, visits);
        } else {
            self.visit(g + 1, visits, arrive, len + gap.direct);
        }
        match gap.via {
            Some((_, to, from)) if sigma - self.h * to >= 0.0 && self.q - self.h * from >= 0.0 => {
                self.chosen[g] = true;
                self.visit(g + 1, visits + 1, self.q - self.h * from, len + to + from);
                self.chosen[g] = false;
            }
            _ => self.count += self.leaves(g + 1, visits + 1),
        }
    }
}

struct ExGap {
    direct: f64,
    to: Vec<f64>,
    from: Vec<f64>,
}

/// Per-route exhaustive search. Plans no shorter than `cutoff` are not
/// reported; pass `f64::INFINITY` for the plain optimum.
pub(crate) fn exhaustive_route(
    route: &[NodeId],
    inst: &Instance,
    oracle: &DistanceOracle<'_>,
    cutoff: f64,
    count: &mut u128,
) -> RouteCharge {
    let stations: Vec<NodeId> = inst.stations().collect();
    let ns = stations.len();
    let mut gs = Vec::with_capacity(route.len() + 1);
    for (p, q) in gaps(route) {
        if oracle.exhausted() {
            return RouteCharge::Interrupted;
        }
        let direct = oracle.distance(p, q);
        let to = stations.iter().map(|&s| oracle.distance(p, s)).collect();
        let from = stations.iter().map(|&s| oracle.distance(s, q)).collect();
        gs.push(ExGap { direct, to, from });
    }
    let mut between = vec![0.0; ns * ns];
    for (a, &u) in stations.iter().enumerate() {
        for (b, &w) in stations.iter().enumerate() {
            if a != b {
                between[a * ns + b] = oracle.distance(u, w);
            }
        }
    }
    let phi: f64 = gs.iter().map(|g| g.direct).sum();
    let lb = min_visits_for_length(phi, inst);
    let mut suffix = vec![0.0; gs.len() + 1];
    for g in (0..gs.len()).rev() {
        suffix[g] = suffix[g + 1] + gs[g].direct;
    }
    // ways[r][k]: configurations of r gaps using exactly k visits.
    let (s1, s2) = (ns as u128, (ns * ns.saturating_sub(1)) as u128);
    let kmax = lb + 2;
    let mut ways = vec![vec![0u128; kmax + 1]; gs.len() + 1];
    ways[0][0] = 1;
    for r in 1..=gs.len() {
        for k in 0..=kmax {
            let mut w = ways[r - 1][k];
            if k >= 1 {
                w = w.saturating_add(s1.saturating_mul(ways[r - 1][k - 1]));
            }
            if k >= 2 {
                w = w.saturating_add(s2.saturating_mul(ways[r - 1][k - 2]));
            }
            ways[r][k] = w;
        }
    }
    let mut dfs = ExSearch {
        gs: &gs,
        between: &between,
        stations: &stations,
        suffix: &suffix,
        ways: &ways,
        lb,
        q: inst.battery_capacity(),
        h: inst.consumption_rate(),
        slots: vec![Slot::Nil; gs.len()],
        best: None,
        best_len: cutoff,
        count: 0,
    };
    dfs.visit(0, 0, dfs.q, 0.0);
    *count = dfs.count;
    match dfs.best {
        Some(slots) => RouteCharge::Found { slots, length: dfs.best_len },
        None => RouteCharge::Infeasible,
    }
}

struct ExSearch<'a> {
    gs: &'a [ExGap],
    between: &'a [f64],
    stations: &'a [NodeId],
    suffix: &'a [f64],
    ways: &'a [Vec<u128>],
    lb: usize,
    q: f64,
    h: f64,
    slots: Vec<Slot>,
    best: Option<Vec<Slot>>,
    best_len: f64,
    count: u128,
}

impl ExSearch<'_> {
    fn leaves(&self, g: usize, visits: usize) -> u128 {
        let r = self.gs.len() - g;
        let row = &self.ways[r];
        let at = |k: isize| if k < 0 { 0 } else { row.get(k as usize).copied().unwrap_or(0) };
        let lo = self.lb as isize - visits as isize;
        at(lo).saturating_add(at(lo + 1))
    }

    fn visit(&mut self, g: usize, visits: usize, sigma: f64, len: f64) {
        let r = self.gs.len() - g;
        if visits > self.lb + 1 || visits + 2 * r < self.lb {
            return;
        }
        if len + self.suffix[g] >= self.best_len {
            self.count = self.count.saturating_add(self.leaves(g, visits));
            return;
        }
        if g == self.gs.len() {
            self.count += 1;
            self.best_len = len;
            self.best = Some(self.slots.clone());
            return;
        }
        let gap = &self.gs[g];
        let (q, h) = (self.q, self.h);
        let arrive = sigma - h * gap.direct;
        if arrive < 0.0 {
            self.count = self.count.saturating_add(self.leaves(g + 1, visits));
        } else {
            self.visit(g + 1, visits, arrive, len + gap.direct);
        }
        let ns = self.stations.len();
        for a in 0..ns {
            if sigma - h * gap.to[a] < 0.0 {
                // u unreachable: neither the single nor any pair from it works.
                let single = self.leaves(g + 1, visits + 1);
                let pairs = self.leaves(g + 1, visits + 2).saturating_mul(ns as u128 - 1);
                self.count = self.count.saturating_add(single).saturating_add(pairs);
                continue;
            }
            let arrive = q - h * gap.from[a];
            if arrive < 0.0 {
                self.count = self.count.saturating_add(self.leaves(g + 1, visits + 1));
            } else {
                self.slots[g] = Slot::Single(self.stations[a]);
                self.visit(g + 1, visits + 1, arrive, len + gap.to[a] + gap.from[a]);
            }
            for b in 0..ns {
                if a == b {
                    continue;
                }
                let hop = self.between[a * ns + b];
                let arrive = q - h * gap.from[b];
                if q - h * hop < 0.0 || arrive < 0.0 {
                    self.count = self.count.saturating_add(self.leaves(g + 1, visits + 2));
                } else {
                    self.slots[g] = Slot::Pair(self.stations[a], self.stations[b]);
                    self.visit(g + 1, visits + 2, arrive, len + gap.to[a] + hop + gap.from[b]);
                }
            }
        }
        self.slots[g] = Slot::Nil;
    }
}

/// Unpruned oracle: every configuration of every gap, checked with the
/// battery simulator from `solution`.
#[cfg(test)]
pub(crate) fn exhaustive_route_naive(
    route: &[NodeId],
    inst: &Instance,
    oracle: &DistanceOracle<'_>,
    single_station_only_theta: Option<&BestStationTable>,
) -> (Option<(Vec<Slot>, f64)>, u128) {
    use crate::solution::{battery_feasible, expand_route, path_cost};
    let stations: Vec<NodeId> = inst.stations().collect();
    let gap_list: Vec<_> = gaps(route).collect();
    let options: Vec<Vec<Slot>> = gap_list
        .iter()
        .map(|&(p, q)| {
            let mut o = vec![Slot::Nil];
            match single_station_only_theta {
                Some(t) => o.extend(t.station(p, q).map(Slot::Single)),
                None => {
                    o.extend(stations.iter().map(|&s| Slot::Single(s)));
                    for &u in &stations {
                        for &w in &stations {
                            if u != w {
                                o.push(Slot::Pair(u, w));
                            }
                        }
                    }
                }
            }
            o
        })
        .collect();
    let lb = min_visits(route, inst, oracle);
    let mut best: Option<(Vec<Slot>, f64)> = None;
    let mut count = 0u128;
    let mut idx = vec![0usize; options.len()];
    loop {
        let slots: Vec<Slot> = idx.iter().zip(&options).map(|(&i, o)| o[i]).collect();
        let v: usize = slots.iter().map(Slot::visits).sum();
        if v >= lb && v <= lb + 1 {
            count += 1;
            let path = expand_route(route, &slots).unwrap();
            if battery_feasible(&path, inst, oracle).0.is_ok() {
                let len = path_cost(&path, oracle);
                if best.as_ref().is_none_or(|(_, b)| len < *b) {
                    best = Some((slots, len));
                }
            }
        }
        let mut k = 0;
        loop {
            if k == idx.len() {
                return (best, count);
            }
            idx[k] += 1;
            if idx[k] < options[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}
