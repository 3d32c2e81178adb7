//! Mutable routing plan with the bookkeeping the operators need: where each
//! customer sits, route loads and prefix loads, and the running `φ`.

use crate::distance::DistanceOracle;
use crate::instance::{Instance, NodeId};
use crate::moves::{Loads, Resolved};
use crate::solution::{route_cost, RoutingPlan};

#[derive(Debug, Clone)]
pub(crate) struct WorkingPlan {
    pub routes: Vec<Vec<NodeId>>,
    loc: Vec<Option<(usize, usize)>>,
    loads: Vec<u64>,
    prefix: Vec<Vec<u64>>,
    demand: Vec<u64>,
    pub phi: f64,
}

impl WorkingPlan {
    /// Takes `x` and computes `φ(x)` through `oracle`.
    pub fn new(x: RoutingPlan, inst: &Instance, oracle: &DistanceOracle<'_>) -> Self {
        Self::new_checked(x, inst, oracle).0
    }

    /// As [`WorkingPlan::new`], checking the budget between routes. Once it
    /// is gone the remaining routes are costed for free and the flag is set,
    /// so a run can stop holding a consistent plan.
    pub fn new_checked(x: RoutingPlan, inst: &Instance, oracle: &DistanceOracle<'_>) -> (Self, bool) {
        let routes = x.into_routes();
        let mut out_of_budget = false;
        let mut phi = 0.0;
        for r in &routes {
            out_of_budget |= oracle.exhausted();
            phi += if out_of_budget { route_cost(r, &oracle.unmetered()) } else { route_cost(r, oracle) };
        }
        let demand = (0..inst.problem_size()).map(|n| inst.demand(n)).collect();
        let mut wp = Self {
            loc: vec![None; inst.problem_size()],
            loads: vec![0; routes.len()],
            prefix: vec![Vec::new(); routes.len()],
            routes,
            demand,
            phi,
        };
        for r in 0..wp.routes.len() {
            wp.refresh(r);
        }
        (wp, out_of_budget)
    }

    fn refresh(&mut self, r: usize) {
        let mut acc = 0;
        self.prefix[r].clear();
        for (i, &c) in self.routes[r].iter().enumerate() {
            acc += self.demand[c];
            self.prefix[r].push(acc);
            self.loc[c] = Some((r, i));
        }
        self.loads[r] = acc;
    }

    pub fn locate(&self, c: NodeId) -> Option<(usize, usize)> {
        self.loc.get(c).copied().flatten()
    }

    pub fn apply(&mut self, m: &Resolved, delta: f64) {
        m.apply(&mut self.routes);
        let (r1, r2) = m.touched();
        self.refresh(r1);
        if let Some(r2) = r2 {
            self.refresh(r2);
        }
        self.phi += delta;
    }

    pub fn to_plan(&self) -> RoutingPlan {
        RoutingPlan::new(self.routes.clone())
    }

    pub fn nonempty(&self) -> Vec<usize> {
        (0..self.routes.len()).filter(|&r| !self.routes[r].is_empty()).collect()
    }
}

impl Loads for WorkingPlan {
    fn load(&self, r: usize) -> u64 {
        self.loads[r]
    }

    fn prefix(&self, r: usize, i: usize) -> u64 {
        self.prefix[r][i]
    }

    fn demand(&self, c: NodeId) -> u64 {
        self.demand[c]
    }
}
