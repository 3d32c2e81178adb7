//! Euclidean distances and the arc-access budget.
//!
//! Every read made through a metered [`DistanceOracle`] charges one unit to
//! the attached [`EvaluationBudget`]. A full solution evaluation reads `pz`
//! arcs, so the competition limit of `25 000 * pz` evaluations becomes
//! `25 000 * pz * pz` arc accesses.

use std::cell::Cell;
use std::time::{Duration, Instant};

use crate::instance::{Instance, NodeId};

/// Evaluations granted per unit of problem size under the Max Evals rule.
pub const EVALS_PER_NODE: u64 = 25_000;

/// Dense symmetric distance table, computed once and shared read-only.
#[derive(Debug, Clone)]
pub struct DistanceMatrix {
    n: usize,
    d: Vec<f64>,
}

impl DistanceMatrix {
    pub fn new(inst: &Instance) -> Self {
        let n = inst.problem_size();
        let mut d = vec![0.0; n * n];
        for i in 0..n {
            let a = inst.site(i);
            for j in i + 1..n {
                let b = inst.site(j);
                let dist = (a.x - b.x).hypot(a.y - b.y);
                d[i * n + j] = dist;
                d[j * n + i] = dist;
            }
        }
        Self { n, d }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// A view that charges `budget` on every read.
    pub fn metered<'a>(&'a self, budget: &'a EvaluationBudget) -> DistanceOracle<'a> {
        DistanceOracle { matrix: self, budget: Some(budget) }
    }

    /// A view that reads for free (preprocessing, oracles, reporting).
    pub fn unmetered(&self) -> DistanceOracle<'_> {
        DistanceOracle { matrix: self, budget: None }
    }
}

/// Accessor over a [`DistanceMatrix`], optionally counting reads.
#[derive(Debug, Clone, Copy)]
pub struct DistanceOracle<'a> {
    matrix: &'a DistanceMatrix,
    budget: Option<&'a EvaluationBudget>,
}

impl<'a> DistanceOracle<'a> {
    #[inline]
    pub fn distance(&self, i: NodeId, j: NodeId) -> f64 {
        debug_assert!(i < self.matrix.n && j < self.matrix.n, "node out of range");
        if let Some(b) = self.budget {
            b.charge(1);
        }
        self.matrix.d[i * self.matrix.n + j]
    }

    pub fn budget(&self) -> Option<&'a EvaluationBudget> {
        self.budget
    }

    pub fn matrix(&self) -> &'a DistanceMatrix {
        self.matrix
    }

    /// Same table, reads not charged.
    pub fn unmetered(&self) -> DistanceOracle<'a> {
        DistanceOracle { matrix: self.matrix, budget: None }
    }

    /// True once the attached budget has no arc accesses left. Unmetered views
    /// never run out. Does not look at the clock.
    #[inline]
    pub fn exhausted(&self) -> bool {
        self.budget.is_some_and(EvaluationBudget::arcs_exhausted)
    }
}

/// Per-run arc-access counter with an optional wall-clock limit.
#[derive(Debug)]
pub struct EvaluationBudget {
    accesses: Cell<u64>,
    max_accesses: u64,
    wall_clock: Option<Duration>,
    started: Instant,
}

impl EvaluationBudget {
    /// Limit of `max_accesses` arc reads, no time limit.
    pub fn with_arc_limit(max_accesses: u64) -> Self {
        Self { accesses: Cell::new(0), max_accesses, wall_clock: None, started: Instant::now() }
    }

    /// The Max Evals rule: `25 000 * pz * pz` arc accesses.
    pub fn max_evals(inst: &Instance) -> Self {
        let pz = inst.problem_size() as u64;
        Self::with_arc_limit(EVALS_PER_NODE * pz * pz)
    }

    /// Wall-clock limit only.
    pub fn max_time(limit: Duration) -> Self {
        Self { wall_clock: Some(limit), ..Self::with_arc_limit(u64::MAX) }
    }

    pub fn unlimited() -> Self {
        Self::with_arc_limit(u64::MAX)
    }

    pub fn arc_accesses(&self) -> u64 {
        self.accesses.get()
    }

    pub fn max_arc_accesses(&self) -> u64 {
        self.max_accesses
    }

    pub fn wall_clock_limit(&self) -> Option<Duration> {
        self.wall_clock
    }

    pub fn elapsed(&self) -> Duration {
        self.started.elapsed()
    }

    #[inline]
    pub(crate) fn charge(&self, arcs: u64) {
        self.accesses.set(self.accesses.get().saturating_add(arcs));
    }

    #[inline]
    pub fn arcs_exhausted(&self) -> bool {
        self.accesses.get() >= self.max_accesses
    }

    pub fn time_exhausted(&self) -> bool {
        self.wall_clock.is_some_and(|limit| self.started.elapsed() >= limit)
    }

    pub fn exceeded(&self) -> bool {
        self.arcs_exhausted() || self.time_exhausted()
    }
}
