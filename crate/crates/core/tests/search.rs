use ecvrp::analysis::brute_force_optimum;
use ecvrp::fixtures;
use ecvrp::moves::{apply_move, delta_phi, enumerate_positions, MoveClass, MoveOperator, MoveTarget};
use ecvrp::search::{
    greedy_descent, neighborhood_explore, run_ablation, run_blahc, run_with, Ablation, Problem, RunOptions,
    SearchError, SearchParams, TraceEvent, DESCENT_OPERATORS,
};
use ecvrp::solution::{check_upper_feasible, surrogate_cost};
use ecvrp::{EvaluationBudget, RoutingPlan};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn small(seed: u64) -> Problem {
    Problem::new(fixtures::random_instance(seed, 6, 2, 3))
}

fn budget_for(p: &Problem) -> EvaluationBudget {
    EvaluationBudget::max_evals(p.instance())
}

fn full_trace() -> RunOptions {
    RunOptions { full_trace: true, ..RunOptions::default() }
}

#[test]
fn same_seed_same_run() {
    let p = small(11);
    let params = SearchParams::with_seed(5);
    let a = run_blahc(&p, &params, &EvaluationBudget::with_arc_limit(300_000)).unwrap();
    let b = run_blahc(&p, &params, &EvaluationBudget::with_arc_limit(300_000)).unwrap();
    assert_eq!(a.trace, b.trace);
    assert_eq!(a.best.routing, b.best.routing);
    assert_eq!(a.best.total_cost.to_bits(), b.best.total_cost.to_bits());
    assert_eq!(a.stats.iterations, b.stats.iterations);

    let c = run_blahc(&p, &SearchParams::with_seed(6), &EvaluationBudget::with_arc_limit(300_000)).unwrap();
    assert_ne!(a.trace, c.trace);
}

#[test]
fn arc_budget_is_respected() {
    for seed in 0..6 {
        let p = Problem::new(fixtures::random_instance(seed, 7, 3, 3));
        let pz = p.instance().problem_size() as u64;
        for limit in [0, 1, 7, 50, 400, 5_000, 120_000] {
            let budget = EvaluationBudget::with_arc_limit(limit);
            let r = run_blahc(&p, &SearchParams::with_seed(seed), &budget);
            assert!(budget.arc_accesses() <= limit + pz, "seed {seed}, limit {limit}: {}", budget.arc_accesses());
            match r {
                Ok(out) => assert_eq!(out.stats.arc_accesses, budget.arc_accesses()),
                Err(e) => assert_eq!(e, SearchError::IncumbentInfeasible, "limit {limit}"),
            }
        }
    }
}

#[test]
fn incumbent_never_worsens() {
    for seed in 0..4 {
        let p = small(seed);
        let out = run_with(&p, &SearchParams::with_seed(seed), &budget_for(&p), &full_trace(), &mut ()).unwrap();
        let mut last = f64::INFINITY;
        for r in &out.trace.records {
            if let Some(f) = r.f_best {
                assert!(f <= last);
                last = f;
            }
        }
        let hits: Vec<f64> = out.trace.events(TraceEvent::Incumbent).filter_map(|r| r.f_best).collect();
        assert!(hits.windows(2).all(|w| w[1] < w[0]));
        assert!(out.best.total_cost <= last + 1e-9);
        assert!(out.stats.refinement_gain >= 0.0);
    }
}

#[test]
fn accepted_moves_satisfy_late_acceptance() {
    for seed in 0..4 {
        let p = small(seed + 20);
        let out = run_with(&p, &SearchParams::with_seed(seed), &budget_for(&p), &full_trace(), &mut ()).unwrap();
        let mut accepts = 0;
        for r in out.trace.events(TraceEvent::Accept) {
            let (delta, phi_vi) = r.acceptance.expect("accept records carry the test");
            assert!(r.phi_current < phi_vi || delta < 0.0, "{r:?}");
            accepts += 1;
        }
        assert!(accepts > 0);
    }
}

/// Follower calls outside a start's opening must follow an accepted move
/// that beats `γ·φ*`.
fn follower_calls_gated(out: &ecvrp::search::SearchOutcome, gamma: f64) -> usize {
    let recs = &out.trace.records;
    let mut gated = 0;
    for (k, r) in recs.iter().enumerate() {
        if r.event != TraceEvent::FollowerHit {
            continue;
        }
        let prev = recs[k - 1].event;
        if prev == TraceEvent::Accept {
            assert!(r.phi_current < gamma * r.phi_best, "{r:?}");
            gated += 1;
        } else {
            assert!(matches!(prev, TraceEvent::Init | TraceEvent::DescentDone), "{prev:?}");
        }
    }
    gated
}

#[test]
fn follower_fires_only_below_threshold() {
    let p = small(3);
    let params = SearchParams::with_seed(1);
    let out = run_with(&p, &params, &budget_for(&p), &full_trace(), &mut ()).unwrap();
    assert!(follower_calls_gated(&out, params.follower_threshold) > 0);

    let opts = RunOptions { ablation: Ablation { gamma_zero: true, ..Ablation::default() }, full_trace: true };
    let out = run_with(&p, &params, &budget_for(&p), &opts, &mut ()).unwrap();
    assert_eq!(follower_calls_gated(&out, 0.0), 0);
    assert_eq!(out.stats.follower_calls as usize, out.trace.events(TraceEvent::Init).count());
}

#[test]
fn default_ablation_is_the_full_algorithm() {
    let p = small(8);
    let params = SearchParams::with_seed(2);
    let a = run_blahc(&p, &params, &EvaluationBudget::with_arc_limit(200_000)).unwrap();
    let b = run_ablation(&p, &params, &EvaluationBudget::with_arc_limit(200_000), Ablation::default()).unwrap();
    assert_eq!(a.trace, b.trace);
    assert_eq!(a.best.routing, b.best.routing);
}

#[test]
fn ablation_toggles_take_effect() {
    let p = small(9);
    let params = SearchParams::with_seed(4);
    let off = |a: Ablation| run_ablation(&p, &params, &EvaluationBudget::with_arc_limit(200_000), a).unwrap();
    let out = off(Ablation { no_descent: true, ..Ablation::default() });
    assert_eq!(out.trace.events(TraceEvent::DescentDone).count(), 0);
    let out = off(Ablation { no_refinement: true, ..Ablation::default() });
    assert_eq!(out.stats.refinement_gain, 0.0);
    let full = off(Ablation::default());
    assert!(full.trace.events(TraceEvent::DescentDone).count() > 0);
}

#[test]
fn descent_reaches_a_local_optimum() {
    for seed in 0..10 {
        let p = small(seed + 40);
        let inst = p.instance();
        let o = p.matrix().unmetered();
        let customers: Vec<usize> = inst.customers().collect();
        let x0 = ecvrp::search::first_fit(&customers, inst).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = greedy_descent(x0.clone(), inst, &o, &mut rng);
        check_upper_feasible(&x, inst).unwrap();
        assert!(surrogate_cost(&x, &o) <= surrogate_cost(&x0, &o) + 1e-9);

        let routes = x.routes();
        for op in DESCENT_OPERATORS {
            let mut targets = Vec::new();
            for r1 in 0..routes.len() {
                match op.class() {
                    MoveClass::IntraRoute => targets.push(MoveTarget::Route(r1)),
                    _ => targets.extend((0..routes.len()).filter(|&r2| r2 != r1).map(|r2| MoveTarget::Pair(r1, r2))),
                }
            }
            for t in targets {
                let live = match t {
                    MoveTarget::Route(r) => !routes[r].is_empty(),
                    MoveTarget::Pair(r1, r2) => !routes[r1].is_empty() && !routes[r2].is_empty(),
                };
                if !live {
                    continue;
                }
                for &a in &routes[t.first()] {
                    for b in enumerate_positions(op, &x, t, a) {
                        let y = apply_move(op, &x, t, a, b).unwrap();
                        if check_upper_feasible(&y, inst).is_err() {
                            continue;
                        }
                        let d = delta_phi(op, &x, t, a, b, &o).unwrap();
                        assert!(d >= -1e-9, "seed {seed}: {op} {t:?} {a} {b:?} improves by {d}");
                    }
                }
            }
        }
    }
}

#[test]
fn exploration_acceptance_edges() {
    let p = small(60);
    let inst = p.instance();
    let o = p.matrix().unmetered();
    let customers: Vec<usize> = inst.customers().collect();
    let x = ecvrp::search::first_fit(&customers, inst).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    // anything capacity-feasible beats an infinite threshold
    let (y, moved) = neighborhood_explore(&x, f64::INFINITY, 60, inst, &o, &mut rng);
    assert!(moved);
    assert_ne!(y, x);
    check_upper_feasible(&y, inst).unwrap();

    // at a local optimum a zero threshold leaves only (near) zero improvements
    let x = greedy_descent(x, inst, &o, &mut rng);
    let phi = surrogate_cost(&x, &o);
    for _ in 0..50 {
        let (y, moved) = neighborhood_explore(&x, 0.0, 60, inst, &o, &mut rng);
        if moved {
            let d = surrogate_cost(&y, &o) - phi;
            assert!(d < 0.0 && d > -1e-9);
        } else {
            assert_eq!(y, x);
        }
    }

    // one customer, one vehicle: no operator has a source
    let one = fixtures::instance_with((0.0, 0.0), &[((3.0, 4.0), 1)], &[], 1, 100.0, 1.0, 1);
    let p = Problem::new(one);
    let x = RoutingPlan::new(vec![vec![1]]);
    let (_, moved) = neighborhood_explore(&x, f64::INFINITY, 60, p.instance(), &p.matrix().unmetered(), &mut rng);
    assert!(!moved);
}

#[test]
fn never_beats_the_exact_optimum() {
    for seed in 0..8 {
        let p = Problem::new(fixtures::random_instance(seed + 100, 5, 2, 2));
        let o = p.matrix().unmetered();
        let Ok(opt) = brute_force_optimum(p.instance(), &o) else { continue };
        if let Ok(out) = run_blahc(&p, &SearchParams::with_seed(seed), &budget_for(&p)) {
            assert!(out.best.total_cost >= opt.total_cost - 1e-6);
            assert!(out.best.battery_violation(p.instance(), &o).is_none());
        }
    }
}

#[test]
fn charge_free_instances_reach_the_optimum() {
    // with an unbounded battery F = φ and the search is a plain CVRP solver
    let mut hits = 0;
    for seed in 0..5 {
        let base = fixtures::random_instance(seed + 200, 6, 1, 2);
        let cs: Vec<_> = base.customers().map(|c| ((base.site(c).x, base.site(c).y), base.demand(c))).collect();
        let inst = fixtures::instance_with((50.0, 50.0), &cs, &[], base.cargo_capacity(), 1e6, 1.0, 2);
        let p = Problem::new(inst);
        let opt = brute_force_optimum(p.instance(), &p.matrix().unmetered()).unwrap();
        let out = run_blahc(&p, &SearchParams::with_seed(seed), &budget_for(&p)).unwrap();
        if (out.best.total_cost - opt.total_cost).abs() <= 1e-6 {
            hits += 1;
        }
    }
    assert!(hits >= 4, "{hits} of 5");
}

#[test]
fn infeasible_instance_is_reported() {
    // one customer out of range, no stations
    let inst = fixtures::line_instance(&[(100.0, 0.0)], &[], 120.0);
    let p = Problem::new(inst);
    let r = run_blahc(&p, &SearchParams::default(), &EvaluationBudget::with_arc_limit(10_000));
    assert_eq!(r.unwrap_err(), SearchError::IncumbentInfeasible);
    // two full loads, one vehicle
    let inst = fixtures::instance_with((0.0, 0.0), &[((1.0, 0.0), 3), ((0.0, 1.0), 3)], &[], 4, 100.0, 1.0, 1);
    let p = Problem::new(inst);
    let r = run_blahc(&p, &SearchParams::default(), &EvaluationBudget::with_arc_limit(10_000));
    assert_eq!(r.unwrap_err(), SearchError::InstanceInfeasible);
}

#[test]
fn invalid_params_are_rejected() {
    let p = small(1);
    let params = SearchParams { history_length: 0, ..SearchParams::default() };
    let r = run_blahc(&p, &params, &EvaluationBudget::with_arc_limit(10));
    assert!(matches!(r, Err(SearchError::InvalidParams(_))));
}

#[test]
fn operator_labels() {
    let labels: Vec<&str> = MoveOperator::ALL.iter().map(|o| o.label()).collect();
    assert_eq!(labels, ["M1", "M2", "M3", "M4", "M5", "M6", "M7", "M8"]);
}
