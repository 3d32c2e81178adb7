use ecvrp::charging::{solve_exhaustive, solve_se, BestStationTable};
use ecvrp::fixtures;
use ecvrp::moves::{apply_move, delta_phi, enumerate_positions, MoveClass, MoveOperator, MoveTarget};
use ecvrp::search::first_fit;
use ecvrp::solution::{check_upper_feasible, format_solution, parse_solution, surrogate_cost};
use ecvrp::{ChargingPlan, CompleteSolution, DistanceMatrix, Instance, RoutingPlan};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A capacity-feasible plan: shuffled customers, first-fit packed, then
/// spread over the vehicles by random cuts where capacity allows.
fn random_plan(inst: &Instance, rng: &mut ChaCha8Rng) -> RoutingPlan {
    let mut order: Vec<usize> = inst.customers().collect();
    order.shuffle(rng);
    let packed = first_fit(&order, inst).expect("fixture fleets can carry everything");
    let mut routes = packed.into_routes();
    // move random customers to random routes when capacity allows
    for _ in 0..order.len() {
        let from = rng.random_range(0..routes.len());
        let to = rng.random_range(0..routes.len());
        if routes[from].is_empty() || from == to {
            continue;
        }
        let i = rng.random_range(0..routes[from].len());
        let c = routes[from][i];
        let load: u64 = routes[to].iter().map(|&n| inst.demand(n)).sum();
        if load + inst.demand(c) <= inst.cargo_capacity() {
            routes[from].remove(i);
            let k = rng.random_range(0..=routes[to].len());
            routes[to].insert(k, c);
        }
    }
    RoutingPlan::new(routes)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exhaustive_follower_dominates_se(seed in 0u64..10_000) {
        let inst = fixtures::random_instance(seed, 6, 3, 2);
        let m = DistanceMatrix::new(&inst);
        let o = m.unmetered();
        let table = BestStationTable::build(&inst, &o);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_plan(&inst, &mut rng);
        let se = solve_se(&x, &inst, &o, &table);
        let ex = solve_exhaustive(&x, &inst, &o);
        if let Some(f_se) = se.total() {
            let f_ex = ex.total();
            prop_assert!(f_ex.is_some_and(|f| f <= f_se + 1e-9), "{f_ex:?} vs {f_se}");
        }
        if let Some(plan) = ex.plan() {
            let sol = CompleteSolution::evaluate(x.clone(), plan.clone(), &o).unwrap();
            prop_assert!(sol.battery_violation(&inst, &o).is_none());
            prop_assert!(sol.total_cost >= surrogate_cost(&x, &o) - 1e-9);
        }
    }

    #[test]
    fn moves_preserve_the_customer_set(seed in 0u64..10_000, op_ix in 0usize..8) {
        let inst = fixtures::random_instance(seed, 7, 1, 3);
        let m = DistanceMatrix::new(&inst);
        let o = m.unmetered();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_plan(&inst, &mut rng);
        let op = MoveOperator::ALL[op_ix];
        let live: Vec<usize> = (0..x.len()).filter(|&r| !x.route(r).is_empty()).collect();
        let r1 = live[rng.random_range(0..live.len())];
        let target = match op.class() {
            MoveClass::InterRoute => {
                let others: Vec<usize> = live.iter().copied().filter(|&r| r != r1).collect();
                if others.is_empty() {
                    return Ok(());
                }
                MoveTarget::Pair(r1, others[rng.random_range(0..others.len())])
            }
            _ => MoveTarget::Route(r1),
        };
        let a = x.route(r1)[rng.random_range(0..x.route(r1).len())];
        for b in enumerate_positions(op, &x, target, a) {
            let y = apply_move(op, &x, target, a, b).unwrap();
            prop_assert_eq!(y.len(), x.len());
            let mut before: Vec<usize> = x.routes().concat();
            let mut after: Vec<usize> = y.routes().concat();
            before.sort();
            after.sort();
            prop_assert_eq!(before, after);
            let d = delta_phi(op, &x, target, a, b, &o).unwrap();
            let full = surrogate_cost(&y, &o) - surrogate_cost(&x, &o);
            prop_assert!((d - full).abs() < 1e-9, "{op} {b:?}: {d} vs {full}");
        }
    }

    #[test]
    fn solution_files_round_trip(seed in 0u64..10_000) {
        let inst = fixtures::random_instance(seed, 6, 2, 3);
        let m = DistanceMatrix::new(&inst);
        let o = m.unmetered();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_plan(&inst, &mut rng);
        let Some(plan) = solve_exhaustive(&x, &inst, &o).plan().cloned() else { return Ok(()) };
        let sol = CompleteSolution::evaluate(x, plan, &o).unwrap();
        let text = format_solution(&inst, &sol, &["seed".to_string()]);
        let file = parse_solution(&text, &inst).unwrap();
        let (xr, yr) = file.to_plans(&inst).unwrap();
        let back = CompleteSolution::evaluate(xr, yr, &o).unwrap();
        prop_assert!((back.total_cost - sol.total_cost).abs() < 1e-9);
        prop_assert_eq!(back.routing.canonical(), sol.routing.canonical());
        prop_assert!((file.reported_cost.unwrap() - sol.total_cost).abs() < 0.005 + 1e-9);
    }

    #[test]
    fn instance_text_round_trips(seed in 0u64..10_000) {
        let inst = fixtures::random_instance(seed, 5, 2, 2);
        let back = Instance::parse(&inst.to_evrp_string()).unwrap();
        prop_assert_eq!(back.to_evrp_string(), inst.to_evrp_string());
        prop_assert_eq!(back.problem_size(), inst.problem_size());
    }
}

#[test]
fn random_plans_are_feasible() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for seed in 0..50 {
        let inst = fixtures::random_instance(seed, 8, 2, 3);
        check_upper_feasible(&random_plan(&inst, &mut rng), &inst).unwrap();
    }
}

#[test]
fn all_nil_is_the_charge_free_plan() {
    let inst = fixtures::line_instance(&[(10.0, 0.0), (0.0, 10.0)], &[], 1e6);
    let m = DistanceMatrix::new(&inst);
    let x = RoutingPlan::new(vec![vec![1, 2], vec![]]);
    let sol = CompleteSolution::evaluate(x.clone(), ChargingPlan::all_nil(&x), &m.unmetered()).unwrap();
    assert_eq!(sol.detour_cost, 0.0);
    assert_eq!(sol.total_cost, sol.surrogate);
}
