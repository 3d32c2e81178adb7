use std::time::Duration;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::descent::{self, DESCENT_OPERATORS};
use super::explore;
use super::params::{Ablation, SearchParams};
use super::split::{split_initial, SplitError};
use super::trace::{SearchTrace, TraceEvent, TraceRecord};
use super::working::WorkingPlan;
use super::{Interrupted, SearchError};
use crate::charging::{solve_exhaustive, solve_se, BestStationTable, ChargingQueryResult, ChargingStatus};
use crate::distance::{DistanceMatrix, DistanceOracle, EvaluationBudget};
use crate::instance::{Instance, NodeId};
use crate::moves::MoveOperator;
use crate::solution::{ChargingPlan, CompleteSolution, RoutingPlan};

/// An instance with its distance table and best-station table, shared
/// read-only by any number of runs.
#[derive(Debug, Clone)]
pub struct Problem {
    instance: Instance,
    matrix: DistanceMatrix,
    table: BestStationTable,
}

impl Problem {
    /// Builds both tables. This is preprocessing and is not charged to any
    /// budget.
    pub fn new(instance: Instance) -> Self {
        let matrix = DistanceMatrix::new(&instance);
        let table = BestStationTable::build(&instance, &matrix.unmetered());
        Self { instance, matrix, table }
    }

    pub fn instance(&self) -> &Instance {
        &self.instance
    }

    pub fn matrix(&self) -> &DistanceMatrix {
        &self.matrix
    }

    pub fn table(&self) -> &BestStationTable {
        &self.table
    }
}

/// Hook into a run. Called after every completed `𝒻_SE` query made by the
/// main algorithm.
pub trait SearchObserver {
    fn follower_hit(&mut self, _x: &RoutingPlan, _result: &ChargingQueryResult) {}
}

impl SearchObserver for () {}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunOptions {
    pub ablation: Ablation,
    /// Also record `accept` and `follower_hit` events. Off by default since
    /// a full-budget run accepts millions of moves.
    pub full_trace: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    ArcBudget,
    TimeBudget,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchStats {
    /// Main-loop iterations over all starts.
    pub iterations: u64,
    pub restarts: u32,
    pub follower_calls: u64,
    pub arc_accesses: u64,
    pub elapsed: Duration,
    pub stop: StopReason,
    /// `F` before the final exhaustive pass minus `F` after it.
    pub refinement_gain: f64,
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub best: CompleteSolution,
    pub trace: SearchTrace,
    pub stats: SearchStats,
}

/// Runs the full algorithm until `budget` is exhausted.
pub fn run_blahc(problem: &Problem, params: &SearchParams, budget: &EvaluationBudget) -> Result<SearchOutcome, SearchError> {
    run_with(problem, params, budget, &RunOptions::default(), &mut ())
}

/// [`run_blahc`] with components switched off.
pub fn run_ablation(
    problem: &Problem,
    params: &SearchParams,
    budget: &EvaluationBudget,
    ablation: Ablation,
) -> Result<SearchOutcome, SearchError> {
    run_with(problem, params, budget, &RunOptions { ablation, full_trace: false }, &mut ())
}

struct Incumbent {
    x: RoutingPlan,
    y: ChargingPlan,
    f: f64,
}

struct Run<'a, O: ?Sized> {
    problem: &'a Problem,
    params: &'a SearchParams,
    options: &'a RunOptions,
    budget: &'a EvaluationBudget,
    oracle: DistanceOracle<'a>,
    rng: ChaCha8Rng,
    observer: &'a mut O,
    incumbent: Option<Incumbent>,
    trace: SearchTrace,
    iterations: u64,
    restarts: u32,
    follower_calls: u64,
    phi_star: f64,
}

enum StartEnd {
    Converged(WorkingPlan),
    /// Budget gone; carries the current plan if one was built.
    Exhausted(Option<WorkingPlan>),
}

impl<O: SearchObserver + ?Sized> Run<'_, O> {
    fn record(&mut self, event: TraceEvent, phi: f64, acceptance: Option<(f64, f64)>) {
        self.trace.records.push(TraceRecord {
            arc_accesses: self.budget.arc_accesses(),
            iteration: self.iterations,
            phi_current: phi,
            phi_best: self.phi_star,
            f_best: self.incumbent.as_ref().map(|i| i.f),
            event,
            acceptance,
        });
    }

    fn exceeded(&self) -> bool {
        self.budget.arcs_exhausted() || self.budget.time_exhausted()
    }

    /// `𝒻_SE` on the current plan, updating the incumbent on improvement.
    fn follow(&mut self, wp: &WorkingPlan) -> Result<(), Interrupted> {
        let inst = self.problem.instance();
        let x = wp.to_plan();
        let r = solve_se(&x, inst, &self.oracle, self.problem.table());
        self.follower_calls += 1;
        if r.status == ChargingStatus::Interrupted {
            return Err(Interrupted);
        }
        self.observer.follower_hit(&x, &r);
        if self.options.full_trace {
            self.record(TraceEvent::FollowerHit, wp.phi, None);
        }
        if let ChargingStatus::Feasible { plan, total, .. } = r.status {
            if self.incumbent.as_ref().is_none_or(|i| total < i.f) {
                self.incumbent = Some(Incumbent { x, y: plan, f: total });
                self.record(TraceEvent::Incumbent, wp.phi, None);
            }
        }
        Ok(())
    }

    fn start(&mut self, customers: &[NodeId]) -> Result<StartEnd, SearchError> {
        let inst = self.problem.instance();
        let cap = inst.cargo_capacity();
        let mut perm = customers.to_vec();
        perm.shuffle(&mut self.rng);
        let x = match split_initial(&perm, inst, &self.oracle) {
            Ok(Some(x)) => x,
            Ok(None) => return Err(SearchError::InstanceInfeasible),
            Err(SplitError::Interrupted) => return Ok(StartEnd::Exhausted(None)),
            Err(SplitError::Infeasible) => unreachable!("split_initial reports infeasibility as None"),
        };
        let (mut wp, out_of_budget) = WorkingPlan::new_checked(x, inst, &self.oracle);
        self.phi_star = wp.phi;
        self.record(TraceEvent::Init, wp.phi, None);
        if out_of_budget {
            return Ok(StartEnd::Exhausted(Some(wp)));
        }
        if !self.options.ablation.no_descent {
            let r = descent::greedy_descent(&mut wp, cap, &DESCENT_OPERATORS, &self.oracle, &mut self.rng);
            self.debug_check(&wp);
            if r.is_err() {
                return Ok(StartEnd::Exhausted(Some(wp)));
            }
            self.phi_star = wp.phi;
            self.record(TraceEvent::DescentDone, wp.phi, None);
        }
        if self.follow(&wp).is_err() {
            return Ok(StartEnd::Exhausted(Some(wp)));
        }

        let p = self.params;
        let lh = p.history_length;
        self.phi_star = wp.phi;
        let (mut i, mut idle, mut n, mut rho) = (0u64, 0u64, lh as u64, 1.0f64);
        let mut history: Vec<f64> =
            (0..lh).map(|_| self.phi_star * self.rng.random_range(p.alpha_lb..=p.alpha_ub)).collect();
        let ops: &[MoveOperator] =
            if self.options.ablation.no_m8 { &MoveOperator::ALL[..7] } else { &MoveOperator::ALL };
        let gamma = if self.options.ablation.gamma_zero { 0.0 } else { p.follower_threshold };
        loop {
            let vi = (i % lh as u64) as usize;
            let before = wp.phi;
            let moved = match explore::neighborhood_explore(
                &mut wp,
                cap,
                history[vi],
                p.max_attempts,
                ops,
                &self.oracle,
                &mut self.rng,
            ) {
                Ok(d) => d,
                Err(Interrupted) => return Ok(StartEnd::Exhausted(Some(wp))),
            };
            if wp.phi < before {
                idle = 0;
                self.phi_star = self.phi_star.min(wp.phi);
            } else {
                idle += 1;
            }
            if vi == 0 {
                rho = n as f64 / lh as f64;
                n = 0;
            }
            if let Some(delta) = moved {
                if self.options.full_trace {
                    self.record(TraceEvent::Accept, wp.phi, Some((delta, history[vi])));
                }
                n += 1;
                history[vi] = history[vi].min(wp.phi);
                if wp.phi < gamma * self.phi_star && self.follow(&wp).is_err() {
                    return Ok(StartEnd::Exhausted(Some(wp)));
                }
            }
            i += 1;
            self.iterations += 1;
            let converged = (i >= 100_000 && idle as f64 >= 0.02 * i as f64) || rho <= 0.001;
            let exceeded = self.budget.arcs_exhausted() || (self.iterations % 1024 == 0 && self.budget.time_exhausted());
            if exceeded {
                self.debug_check(&wp);
                return Ok(StartEnd::Exhausted(Some(wp)));
            }
            if converged {
                self.debug_check(&wp);
                self.record(TraceEvent::Converged, wp.phi, None);
                return Ok(StartEnd::Converged(wp));
            }
        }
    }

    fn debug_check(&self, wp: &WorkingPlan) {
        if cfg!(debug_assertions) {
            let full = crate::solution::surrogate_cost(&wp.to_plan(), &self.oracle.unmetered());
            debug_assert!((full - wp.phi).abs() <= 1e-6 * full.max(1.0), "running φ drifted: {} vs {}", wp.phi, full);
        }
    }
}

/// [`run_blahc`] with all options and an observer.
pub fn run_with<O: SearchObserver + ?Sized>(
    problem: &Problem,
    params: &SearchParams,
    budget: &EvaluationBudget,
    options: &RunOptions,
    observer: &mut O,
) -> Result<SearchOutcome, SearchError> {
    params.validate().map_err(SearchError::InvalidParams)?;
    let inst = problem.instance();
    let customers: Vec<NodeId> = inst.customers().collect();
    let mut run = Run {
        problem,
        params,
        options,
        budget,
        oracle: problem.matrix().metered(budget),
        rng: ChaCha8Rng::seed_from_u64(params.seed),
        observer,
        incumbent: None,
        trace: SearchTrace::default(),
        iterations: 0,
        restarts: 0,
        follower_calls: 0,
        phi_star: f64::INFINITY,
    };
    let last = loop {
        match run.start(&customers)? {
            StartEnd::Converged(_) if !run.exceeded() => {
                run.restarts += 1;
                run.record(TraceEvent::Restart, run.phi_star, None);
            }
            StartEnd::Converged(wp) => break Some(wp),
            StartEnd::Exhausted(wp) => break wp,
        }
    };
    let stop = if budget.arcs_exhausted() { StopReason::ArcBudget } else { StopReason::TimeBudget };

    // Final refinement runs after the stop and reads for free.
    let free = problem.matrix().unmetered();
    let before = run.incumbent.as_ref().map(|i| i.f);
    if !options.ablation.no_refinement {
        if let Some(inc) = &run.incumbent {
            if let ChargingStatus::Feasible { plan, total, .. } = solve_exhaustive(&inc.x, inst, &free).status {
                if total < inc.f {
                    run.incumbent = Some(Incumbent { x: inc.x.clone(), y: plan, f: total });
                }
            }
        }
    }
    if run.incumbent.is_none() {
        if let Some(wp) = &last {
            let x = wp.to_plan();
            if let ChargingStatus::Feasible { plan, total, .. } = solve_exhaustive(&x, inst, &free).status {
                run.incumbent = Some(Incumbent { x, y: plan, f: total });
            }
        }
    }
    let phi_end = last.as_ref().map_or(run.phi_star, |wp| wp.phi);
    run.record(TraceEvent::Refined, phi_end, None);
    let inc = run.incumbent.take().ok_or(SearchError::IncumbentInfeasible)?;
    let best = CompleteSolution::evaluate(inc.x, inc.y, &free).expect("follower output has the plan's shape");
    let refinement_gain = before.map_or(0.0, |b| b - best.total_cost);
    Ok(SearchOutcome {
        best,
        trace: run.trace,
        stats: SearchStats {
            iterations: run.iterations,
            restarts: run.restarts,
            follower_calls: run.follower_calls,
            arc_accesses: budget.arc_accesses(),
            elapsed: budget.elapsed(),
            stop,
            refinement_gain,
        },
    })
}

/// `𝒢` on a plain plan: descends `x` with M1–M7 until no strictly
/// improving capacity-feasible move is left. Stops early, returning the
/// plan reached so far, if the oracle's budget runs out.
pub fn greedy_descent(x: RoutingPlan, inst: &Instance, oracle: &DistanceOracle<'_>, rng: &mut impl Rng) -> RoutingPlan {
    let mut wp = WorkingPlan::new(x, inst, oracle);
    let _ = descent::greedy_descent(&mut wp, inst.cargo_capacity(), &DESCENT_OPERATORS, oracle, rng);
    wp.to_plan()
}

/// `𝒩` on a plain plan with all eight operators. Returns `(x', isMoved)`.
pub fn neighborhood_explore(
    x: &RoutingPlan,
    phi_vi: f64,
    max_attempts: usize,
    inst: &Instance,
    oracle: &DistanceOracle<'_>,
    rng: &mut impl Rng,
) -> (RoutingPlan, bool) {
    let mut wp = WorkingPlan::new(x.clone(), inst, oracle);
    let ops = MoveOperator::ALL;
    match explore::neighborhood_explore(&mut wp, inst.cargo_capacity(), phi_vi, max_attempts, &ops, oracle, rng) {
        Ok(Some(_)) => (wp.to_plan(), true),
        _ => (x.clone(), false),
    }
}
