//! Upper-level routing plans, lower-level charging plans and their evaluation.
//!
//! A routing plan `x` holds exactly `M` customer sequences (empty sequences are
//! unused vehicles). A charging plan `y` gives every route `L_v + 1` gap slots,
//! one before each customer and one before the return to the depot. Expanding
//! both yields the complete route `R̄_v` that is actually driven.
//!
//! Costs decompose as `F(x, y) = φ(x) + f(x, y)`: the surrogate `φ` ignores
//! charging, the detour `f` is what the stations add on top.

use std::fmt;

use crate::distance::DistanceOracle;
use crate::instance::{Instance, NodeId};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RoutingPlan {
    routes: Vec<Vec<NodeId>>,
}

impl RoutingPlan {
    pub fn new(routes: Vec<Vec<NodeId>>) -> Self {
        Self { routes }
    }

    /// `m` empty routes.
    pub fn empty(m: usize) -> Self {
        Self { routes: vec![Vec::new(); m] }
    }

    pub fn routes(&self) -> &[Vec<NodeId>] {
        &self.routes
    }

    pub fn route(&self, v: usize) -> &[NodeId] {
        &self.routes[v]
    }

    pub fn len(&self) -> usize {
        self.routes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.routes.is_empty()
    }

    pub fn num_nonempty(&self) -> usize {
        self.routes.iter().filter(|r| !r.is_empty()).count()
    }

    pub fn into_routes(self) -> Vec<Vec<NodeId>> {
        self.routes
    }

    /// Non-empty routes sorted by first customer. Two plans that differ only
    /// in which vehicle drives which route share this key.
    pub fn canonical(&self) -> Vec<Vec<NodeId>> {
        let mut routes: Vec<_> = self.routes.iter().filter(|r| !r.is_empty()).cloned().collect();
        routes.sort_by_key(|r| r[0]);
        routes
    }
}

/// Charging decision for one gap between consecutive nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Slot {
    #[default]
    Nil,
    Single(NodeId),
    /// Two distinct stations visited in order.
    Pair(NodeId, NodeId),
}

impl Slot {
    pub fn visits(&self) -> usize {
        match self {
            Slot::Nil => 0,
            Slot::Single(_) => 1,
            Slot::Pair(..) => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChargingPlan {
    slots: Vec<Vec<Slot>>,
}

impl ChargingPlan {
    pub fn new(slots: Vec<Vec<Slot>>) -> Self {
        Self { slots }
    }

    /// No stations anywhere, shaped for `x`.
    pub fn all_nil(x: &RoutingPlan) -> Self {
        Self {
            slots: x
                .routes()
                .iter()
                .map(|r| if r.is_empty() { Vec::new() } else { vec![Slot::Nil; r.len() + 1] })
                .collect(),
        }
    }

    pub fn slots(&self) -> &[Vec<Slot>] {
        &self.slots
    }

    pub fn route_slots(&self, v: usize) -> &[Slot] {
        &self.slots[v]
    }

    /// Total number of station visits.
    pub fn visits(&self) -> usize {
        self.slots.iter().flatten().map(Slot::visits).sum()
    }

    /// Checks that slot lists line up with `x`. Empty routes take no slots
    /// (an empty slot list or a single `Nil` are both accepted).
    pub fn check_shape(&self, x: &RoutingPlan) -> Result<(), ShapeError> {
        if self.slots.len() != x.len() {
            return Err(ShapeError::RouteCountMismatch { routes: x.len(), slot_lists: self.slots.len() });
        }
        for (v, (r, s)) in x.routes().iter().zip(&self.slots).enumerate() {
            check_slots(v, r, s)?;
        }
        Ok(())
    }
}

fn check_slots(v: usize, route: &[NodeId], slots: &[Slot]) -> Result<(), ShapeError> {
    let ok = if route.is_empty() {
        slots.is_empty() || slots == [Slot::Nil]
    } else {
        slots.len() == route.len() + 1
    };
    if !ok {
        return Err(ShapeError::SlotLengthMismatch { route: v, expected: route.len() + 1, found: slots.len() });
    }
    if let Some(Slot::Pair(u, _)) = slots.iter().find(|s| matches!(s, Slot::Pair(u, w) if u == w)) {
        return Err(ShapeError::RepeatedStationInPair { route: v, station: *u });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ShapeError {
    RouteCountMismatch { routes: usize, slot_lists: usize },
    SlotLengthMismatch { route: usize, expected: usize, found: usize },
    RepeatedStationInPair { route: usize, station: NodeId },
}

impl fmt::Display for ShapeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::RouteCountMismatch { routes, slot_lists } => {
                write!(f, "{routes} routes but {slot_lists} slot lists")
            }
            Self::SlotLengthMismatch { route, expected, found } => {
                write!(f, "route {route}: expected {expected} gap slots, found {found}")
            }
            Self::RepeatedStationInPair { route, station } => {
                write!(f, "route {route}: station {station} paired with itself")
            }
        }
    }
}

impl std::error::Error for ShapeError {}

/// Upper-level constraint that a routing plan violates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UpperViolation {
    MissingCustomer(NodeId),
    DuplicateCustomer(NodeId),
    NotACustomer(NodeId),
    CapacityExceeded { route: usize, load: u64, capacity: u64 },
    TooManyRoutes { found: usize, max: usize },
}

impl fmt::Display for UpperViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::MissingCustomer(c) => write!(f, "MissingCustomer: node {c} is not served"),
            Self::DuplicateCustomer(c) => write!(f, "DuplicateCustomer: node {c} is served twice"),
            Self::NotACustomer(c) => write!(f, "NotACustomer: node {c} appears in a route"),
            Self::CapacityExceeded { route, load, capacity } => {
                write!(f, "CapacityExceeded: route {route} carries {load} > {capacity}")
            }
            Self::TooManyRoutes { found, max } => {
                write!(f, "TooManyRoutes: {found} routes but only {max} vehicles")
            }
        }
    }
}

/// Partition, permutation and cargo-capacity checks on `x`.
pub fn check_upper_feasible(x: &RoutingPlan, inst: &Instance) -> Result<(), UpperViolation> {
    if x.len() > inst.fleet_size() {
        let found = x.num_nonempty();
        if found > inst.fleet_size() {
            return Err(UpperViolation::TooManyRoutes { found, max: inst.fleet_size() });
        }
    }
    let mut served = vec![false; inst.problem_size()];
    for (v, route) in x.routes().iter().enumerate() {
        let mut load = 0;
        for &c in route {
            if !inst.is_customer(c) {
                return Err(UpperViolation::NotACustomer(c));
            }
            if std::mem::replace(&mut served[c], true) {
                return Err(UpperViolation::DuplicateCustomer(c));
            }
            load += inst.demand(c);
        }
        if load > inst.cargo_capacity() {
            return Err(UpperViolation::CapacityExceeded { route: v, load, capacity: inst.cargo_capacity() });
        }
    }
    match inst.customers().find(|&c| !served[c]) {
        Some(c) => Err(UpperViolation::MissingCustomer(c)),
        None => Ok(()),
    }
}

/// Distance of `depot → route → depot`; zero for an empty route.
pub fn route_cost(route: &[NodeId], oracle: &DistanceOracle<'_>) -> f64 {
    let Some((&first, _)) = route.split_first() else {
        return 0.0;
    };
    let mut cost = oracle.distance(0, first);
    for w in route.windows(2) {
        cost += oracle.distance(w[0], w[1]);
    }
    cost + oracle.distance(route[route.len() - 1], 0)
}

/// Length of an explicit node path.
pub fn path_cost(path: &[NodeId], oracle: &DistanceOracle<'_>) -> f64 {
    path.windows(2).map(|w| oracle.distance(w[0], w[1])).sum()
}

/// `φ(x)`: total routing distance ignoring charging.
pub fn surrogate_cost(x: &RoutingPlan, oracle: &DistanceOracle<'_>) -> f64 {
    x.routes().iter().map(|r| route_cost(r, oracle)).sum()
}

/// `R̄_v = R_v ⊕ S_v`: depot, then for each gap its stations followed by the
/// next node, ending at the depot.
pub fn expand_route(route: &[NodeId], slots: &[Slot]) -> Result<Vec<NodeId>, ShapeError> {
    check_slots(0, route, slots)?;
    if route.is_empty() {
        return Ok(vec![0, 0]);
    }
    let mut out = Vec::with_capacity(route.len() + 2 + slots.len());
    out.push(0);
    for (g, slot) in slots.iter().enumerate() {
        match *slot {
            Slot::Nil => {}
            Slot::Single(s) => out.push(s),
            Slot::Pair(u, w) => {
                out.push(u);
                out.push(w);
            }
        }
        out.push(route.get(g).copied().unwrap_or(0));
    }
    Ok(out)
}

/// Battery level on arrival at each node of an expanded route.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BatteryTrace {
    pub points: Vec<(NodeId, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BatteryDepleted {
    /// Node reached with a negative charge.
    pub node: NodeId,
    /// Index of that node in the expanded route.
    pub position: usize,
    /// Missing energy, `-σ`.
    pub deficit: f64,
}

impl fmt::Display for BatteryDepleted {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BatteryDepleted: arriving at node {} short by {:.4}", self.node, self.deficit)
    }
}

/// Simulates the state of charge along `path`, leaving the depot and every
/// station full and draining `h · d_ij` per arc. Stops at the first node
/// reached with negative charge.
pub fn battery_feasible(
    path: &[NodeId],
    inst: &Instance,
    oracle: &DistanceOracle<'_>,
) -> (Result<(), BatteryDepleted>, BatteryTrace) {
    let q = inst.battery_capacity();
    let h = inst.consumption_rate();
    let mut trace = BatteryTrace::default();
    let Some(&start) = path.first() else {
        return (Ok(()), trace);
    };
    trace.points.push((start, q));
    let mut sigma = q;
    for (k, w) in path.windows(2).enumerate() {
        let arrive = sigma - h * oracle.distance(w[0], w[1]);
        trace.points.push((w[1], arrive));
        if arrive < 0.0 {
            return (Err(BatteryDepleted { node: w[1], position: k + 1, deficit: -arrive }), trace);
        }
        sigma = if inst.is_charging_point(w[1]) { q } else { arrive };
    }
    (Ok(()), trace)
}

/// `(F, f, φ)` of a shape-valid pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Costs {
    pub total: f64,
    pub detour: f64,
    pub surrogate: f64,
}

/// Computes the cost decomposition. Battery feasibility is not checked.
pub fn total_cost(
    x: &RoutingPlan,
    y: &ChargingPlan,
    oracle: &DistanceOracle<'_>,
) -> Result<Costs, ShapeError> {
    y.check_shape(x)?;
    let mut total = 0.0;
    let mut surrogate = 0.0;
    for (r, s) in x.routes().iter().zip(y.slots()) {
        if r.is_empty() {
            continue;
        }
        surrogate += route_cost(r, oracle);
        total += path_cost(&expand_route(r, s)?, oracle);
    }
    Ok(Costs { total, detour: total - surrogate, surrogate })
}

/// A routing plan with its charging plan and cost decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct CompleteSolution {
    pub routing: RoutingPlan,
    pub charging: ChargingPlan,
    pub total_cost: f64,
    pub detour_cost: f64,
    pub surrogate: f64,
}

impl CompleteSolution {
    pub fn evaluate(
        routing: RoutingPlan,
        charging: ChargingPlan,
        oracle: &DistanceOracle<'_>,
    ) -> Result<Self, ShapeError> {
        let c = total_cost(&routing, &charging, oracle)?;
        Ok(Self { routing, charging, total_cost: c.total, detour_cost: c.detour, surrogate: c.surrogate })
    }

    /// Expanded node sequences of the non-empty routes.
    pub fn expanded_routes(&self) -> Vec<Vec<NodeId>> {
        self.routing
            .routes()
            .iter()
            .zip(self.charging.slots())
            .filter(|(r, _)| !r.is_empty())
            .map(|(r, s)| expand_route(r, s).expect("shape checked on construction"))
            .collect()
    }

    pub fn num_routes(&self) -> usize {
        self.routing.num_nonempty()
    }

    /// First battery violation over all routes, if any.
    pub fn battery_violation(&self, inst: &Instance, oracle: &DistanceOracle<'_>) -> Option<BatteryDepleted> {
        self.expanded_routes().iter().find_map(|p| battery_feasible(p, inst, oracle).0.err())
    }
}

/// Splits an expanded route back into its customer sequence and gap slots.
/// Fails when a gap holds more than two stations or a pair repeats a station.
pub fn split_expanded(path: &[NodeId], inst: &Instance) -> Result<(Vec<NodeId>, Vec<Slot>), SolutionFileError> {
    let inner = match path {
        [0, inner @ .., 0] => inner,
        _ => return Err(SolutionFileError::NotDepotBounded { line: 0 }),
    };
    let mut route = Vec::new();
    let mut slots = Vec::new();
    let mut pending: Vec<NodeId> = Vec::new();
    let close = |pending: &mut Vec<NodeId>| -> Result<Slot, SolutionFileError> {
        let slot = match pending.as_slice() {
            [] => Slot::Nil,
            &[s] => Slot::Single(s),
            &[u, w] if u != w => Slot::Pair(u, w),
            _ => return Err(SolutionFileError::UnsupportedGap { line: 0, stations: pending.len() }),
        };
        pending.clear();
        Ok(slot)
    };
    for &n in inner {
        if n == 0 {
            return Err(SolutionFileError::DepotInsideRoute { line: 0 });
        } else if inst.is_station(n) {
            pending.push(n);
        } else {
            slots.push(close(&mut pending)?);
            route.push(n);
        }
    }
    slots.push(close(&mut pending)?);
    if route.is_empty() {
        slots.clear();
    }
    Ok((route, slots))
}

/// Route lines (original labels, comma separated) and the reported cost read
/// from a solution file.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionFile {
    /// Expanded routes in internal node ids.
    pub routes: Vec<Vec<NodeId>>,
    pub reported_cost: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SolutionFileError {
    Malformed { line: usize, message: String },
    UnknownLabel { line: usize, label: usize },
    NotDepotBounded { line: usize },
    DepotInsideRoute { line: usize },
    UnsupportedGap { line: usize, stations: usize },
}

impl SolutionFileError {
    fn at(self, line: usize) -> Self {
        match self {
            Self::NotDepotBounded { .. } => Self::NotDepotBounded { line },
            Self::DepotInsideRoute { .. } => Self::DepotInsideRoute { line },
            Self::UnsupportedGap { stations, .. } => Self::UnsupportedGap { line, stations },
            other => other,
        }
    }
}

impl fmt::Display for SolutionFileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Malformed { line, message } => write!(f, "line {line}: {message}"),
            Self::UnknownLabel { line, label } => write!(f, "line {line}: unknown node {label}"),
            Self::NotDepotBounded { line } => {
                write!(f, "line {line}: route must start and end at the depot")
            }
            Self::DepotInsideRoute { line } => write!(f, "line {line}: depot inside a route"),
            Self::UnsupportedGap { line, stations } => write!(
                f,
                "line {line}: {stations} consecutive stations (at most two distinct are supported)"
            ),
        }
    }
}

impl std::error::Error for SolutionFileError {}

/// Renders a solution: `#` header lines, one comma-separated line of file
/// labels per non-empty route, then `COST <F>` to two decimals.
pub fn format_solution(inst: &Instance, sol: &CompleteSolution, header: &[String]) -> String {
    let mut out = String::new();
    for h in header {
        out.push_str("# ");
        out.push_str(h);
        out.push('\n');
    }
    for path in sol.expanded_routes() {
        let labels: Vec<String> = path.iter().map(|&n| inst.label(n).to_string()).collect();
        out.push_str(&labels.join(","));
        out.push('\n');
    }
    out.push_str(&format!("COST {:.2}\n", sol.total_cost));
    out
}

pub fn parse_solution(text: &str, inst: &Instance) -> Result<SolutionFile, SolutionFileError> {
    let mut routes = Vec::new();
    let mut reported_cost = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("COST") {
            let v = rest.trim().parse().map_err(|_| SolutionFileError::Malformed {
                line: line_no,
                message: format!("cannot parse cost `{}`", rest.trim()),
            })?;
            reported_cost = Some(v);
            continue;
        }
        let mut path = Vec::new();
        for tok in line.split(',') {
            let tok = tok.trim();
            let label: usize = tok.parse().map_err(|_| SolutionFileError::Malformed {
                line: line_no,
                message: format!("cannot parse node id `{tok}`"),
            })?;
            let node = inst
                .node_by_label(label)
                .ok_or(SolutionFileError::UnknownLabel { line: line_no, label })?;
            path.push(node);
        }
        if path.len() < 2 || path[0] != 0 || path[path.len() - 1] != 0 {
            return Err(SolutionFileError::NotDepotBounded { line: line_no });
        }
        if path[1..path.len() - 1].contains(&0) {
            return Err(SolutionFileError::DepotInsideRoute { line: line_no });
        }
        routes.push(path);
    }
    Ok(SolutionFile { routes, reported_cost })
}

impl SolutionFile {
    /// Rebuilds `(x, y)` padded to the fleet size. Expanded routes must use
    /// at most two distinct stations per gap.
    pub fn to_plans(&self, inst: &Instance) -> Result<(RoutingPlan, ChargingPlan), SolutionFileError> {
        let mut routes = Vec::new();
        let mut slots = Vec::new();
        for (k, path) in self.routes.iter().enumerate() {
            let (r, s) = split_expanded(path, inst).map_err(|e| e.at(k + 1))?;
            routes.push(r);
            slots.push(s);
        }
        while routes.len() < inst.fleet_size() {
            routes.push(Vec::new());
            slots.push(Vec::new());
        }
        Ok((RoutingPlan::new(routes), ChargingPlan::new(slots)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distance::DistanceMatrix;
    use crate::fixtures;

    #[test]
    fn out_and_back() {
        let inst = fixtures::line_instance(&[(3.0, 4.0)], &[], 100.0);
        let m = DistanceMatrix::new(&inst);
        let x = RoutingPlan::new(vec![vec![1]]);
        assert_eq!(surrogate_cost(&x, &m.unmetered()), 10.0);
        assert_eq!(surrogate_cost(&RoutingPlan::empty(3), &m.unmetered()), 0.0);
    }

    #[test]
    fn four_customer_arc_sum() {
        // depot (0,0); 1=(0,3) 2=(4,3) 3=(0,-6) 4=(8,-6)
        let inst = fixtures::line_instance(&[(0.0, 3.0), (4.0, 3.0), (0.0, -6.0), (8.0, -6.0)], &[], 1e3);
        let m = DistanceMatrix::new(&inst);
        let x = RoutingPlan::new(vec![vec![1, 2], vec![3, 4]]);
        // route 1: 3 + 4 + 5; route 2: 6 + 8 + 10
        assert_eq!(surrogate_cost(&x, &m.unmetered()), 36.0);
    }

    #[test]
    fn upper_feasibility_verdicts() {
        let inst = fixtures::instance_with(
            (0.0, 0.0),
            &[((1.0, 0.0), 3), ((2.0, 0.0), 2), ((3.0, 0.0), 1)],
            &[],
            5,
            100.0,
            1.0,
            3,
        );
        let ok = RoutingPlan::new(vec![vec![1, 2], vec![3], vec![]]);
        assert_eq!(check_upper_feasible(&ok, &inst), Ok(()));
        let dup = RoutingPlan::new(vec![vec![1, 2], vec![3, 1], vec![]]);
        assert_eq!(check_upper_feasible(&dup, &inst), Err(UpperViolation::DuplicateCustomer(1)));
        let missing = RoutingPlan::new(vec![vec![1, 2], vec![], vec![]]);
        assert_eq!(check_upper_feasible(&missing, &inst), Err(UpperViolation::MissingCustomer(3)));
        // 3 + 2 + 1 = Q_c + 1
        let heavy = RoutingPlan::new(vec![vec![1, 2, 3], vec![], vec![]]);
        assert_eq!(
            check_upper_feasible(&heavy, &inst),
            Err(UpperViolation::CapacityExceeded { route: 0, load: 6, capacity: 5 })
        );
        let many = RoutingPlan::new(vec![vec![1], vec![2], vec![3], vec![]]);
        assert_eq!(check_upper_feasible(&many, &inst), Ok(()));
        let inst2 = fixtures::instance_with((0.0, 0.0), &[((1.0, 0.0), 1), ((2.0, 0.0), 1)], &[], 5, 100.0, 1.0, 1);
        let two = RoutingPlan::new(vec![vec![1], vec![2]]);
        assert_eq!(check_upper_feasible(&two, &inst2), Err(UpperViolation::TooManyRoutes { found: 2, max: 1 }));
    }

    #[test]
    fn expansion() {
        assert_eq!(expand_route(&[4], &[Slot::Nil, Slot::Nil]).unwrap(), vec![0, 4, 0]);
        assert_eq!(
            expand_route(&[3, 1, 2], &[Slot::Nil, Slot::Single(5), Slot::Nil, Slot::Nil]).unwrap(),
            vec![0, 3, 5, 1, 2, 0]
        );
        assert_eq!(expand_route(&[4], &[Slot::Pair(5, 6), Slot::Nil]).unwrap(), vec![0, 5, 6, 4, 0]);
        assert!(matches!(expand_route(&[4], &[Slot::Nil]), Err(ShapeError::SlotLengthMismatch { .. })));
        assert!(matches!(
            expand_route(&[4], &[Slot::Pair(5, 5), Slot::Nil]),
            Err(ShapeError::RepeatedStationInPair { .. })
        ));
    }

    #[test]
    fn battery_simulation() {
        let inst = fixtures::line_instance(&[(50.0, 0.0)], &[], 120.0);
        let m = DistanceMatrix::new(&inst);
        let (v, trace) = battery_feasible(&[0, 1, 0], &inst, &m.unmetered());
        assert_eq!(v, Ok(()));
        assert_eq!(trace.points.last(), Some(&(0, 20.0)));

        let inst = fixtures::line_instance(&[(70.0, 0.0)], &[], 120.0);
        let m = DistanceMatrix::new(&inst);
        let (v, _) = battery_feasible(&[0, 1, 0], &inst, &m.unmetered());
        let err = v.unwrap_err();
        assert_eq!((err.node, err.position), (0, 2));
        assert!((err.deficit - 20.0).abs() < 1e-12);
    }

    #[test]
    fn battery_through_station_by_hand() {
        // depot (0,0), customer (100,0), station (50,10); Q_b = 120, h = 1
        let inst = fixtures::line_instance(&[(100.0, 0.0)], &[(50.0, 10.0)], 120.0);
        let m = DistanceMatrix::new(&inst);
        let leg = 2600f64.sqrt();
        let (v, trace) = battery_feasible(&[0, 2, 1, 2, 0], &inst, &m.unmetered());
        assert_eq!(v, Ok(()));
        let expect = [120.0, 120.0 - leg, 120.0 - leg, 120.0 - 2.0 * leg, 120.0 - leg];
        for ((_, got), want) in trace.points.iter().zip(expect) {
            assert!((got - want).abs() < 1e-12);
        }
        // without the second stop the return leg needs 100 from 120 - 2·leg
        assert!(battery_feasible(&[0, 2, 1, 0], &inst, &m.unmetered()).0.is_err());
    }

    #[test]
    fn cost_decomposition() {
        let inst = fixtures::line_instance(&[(100.0, 0.0)], &[(50.0, 10.0)], 120.0);
        let m = DistanceMatrix::new(&inst);
        let o = m.unmetered();
        let x = RoutingPlan::new(vec![vec![1]]);
        let nil = total_cost(&x, &ChargingPlan::all_nil(&x), &o).unwrap();
        assert_eq!((nil.total, nil.detour, nil.surrogate), (200.0, 0.0, 200.0));
        let y = ChargingPlan::new(vec![vec![Slot::Single(2), Slot::Single(2)]]);
        let c = total_cost(&x, &y, &o).unwrap();
        let by_hand = 4.0 * 2600f64.sqrt();
        assert!((c.total - by_hand).abs() < 1e-12);
        assert!((c.detour - (by_hand - 200.0)).abs() < 1e-12);
    }

    #[test]
    fn solution_file_round_trip() {
        let inst = fixtures::line_instance(&[(100.0, 0.0), (0.0, 10.0)], &[(50.0, 10.0)], 120.0);
        let m = DistanceMatrix::new(&inst);
        let x = RoutingPlan::new(vec![vec![1], vec![2]]);
        let y = ChargingPlan::new(vec![vec![Slot::Single(3), Slot::Single(3)], vec![Slot::Nil, Slot::Nil]]);
        let sol = CompleteSolution::evaluate(x.clone(), y.clone(), &m.unmetered()).unwrap();
        let text = format_solution(&inst, &sol, &["seed 1".into()]);
        assert!(text.starts_with("# seed 1\n1,4,2,4,1\n1,3,1\nCOST "));
        let parsed = parse_solution(&text, &inst).unwrap();
        assert_eq!(parsed.to_plans(&inst).unwrap(), (x, y));
        assert_eq!(parsed.reported_cost, Some((sol.total_cost * 100.0).round() / 100.0));
    }

    #[test]
    fn solution_file_errors() {
        let inst = fixtures::line_instance(&[(1.0, 0.0), (2.0, 0.0)], &[(0.0, 1.0)], 120.0);
        assert!(matches!(parse_solution("1,2,9,1\n", &inst), Err(SolutionFileError::UnknownLabel { line: 1, label: 9 })));
        assert!(matches!(parse_solution("2,1\n", &inst), Err(SolutionFileError::NotDepotBounded { line: 1 })));
        assert!(matches!(parse_solution("1,2,1,3,1\n", &inst), Err(SolutionFileError::DepotInsideRoute { line: 1 })));
        let f = parse_solution("# c\n1,4,4,2,1\n", &inst).unwrap();
        assert!(matches!(f.to_plans(&inst), Err(SolutionFileError::UnsupportedGap { line: 1, stations: 2 })));
    }
}
