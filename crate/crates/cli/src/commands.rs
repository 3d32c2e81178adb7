use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use ecvrp::analysis::{brute_force_optimum, format_pairs_csv, format_report_csv, AnalysisRow, PairCollector};
use ecvrp::charging::{solve_exhaustive, ChargingStatus};
use ecvrp::instance::max_time_budget;
use ecvrp::search::{run_with, Problem, RunOptions, SearchOutcome, SearchParams};
use ecvrp::solution::{check_upper_feasible, format_solution, parse_solution, UpperViolation};
use ecvrp::{CompleteSolution, EvaluationBudget, Instance};

use crate::config::{RunConfig, StopCriterion};
use crate::report::{RunReport, SeedResult};

pub fn load_instance(path: &Path) -> Result<Instance> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read instance {}", path.display()))?;
    Instance::parse(&text).with_context(|| format!("cannot parse instance {}", path.display()))
}

pub fn budget_for(inst: &Instance, stop: StopCriterion) -> Result<EvaluationBudget> {
    Ok(match stop {
        StopCriterion::MaxEvals => EvaluationBudget::max_evals(inst),
        StopCriterion::MaxTime { omega } => EvaluationBudget::max_time(max_time_budget(inst, omega)?),
    })
}

/// Worker count: `ECVRP_THREADS` if set, else the machine's parallelism.
fn worker_count(jobs: usize) -> usize {
    let cap = std::env::var("ECVRP_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    cap.min(jobs).max(1)
}

/// Runs `job` for every seed on up to `worker_count` threads. Results come
/// back in seed order whatever the scheduling.
fn for_each_seed<T: Send>(seeds: &[u64], job: impl Fn(u64) -> T + Sync) -> Vec<T> {
    let workers = worker_count(seeds.len());
    let mut slots: Vec<Option<T>> = seeds.iter().map(|_| None).collect();
    let next = std::sync::atomic::AtomicUsize::new(0);
    let done = std::sync::Mutex::new(&mut slots);
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let k = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                if k >= seeds.len() {
                    break;
                }
                let r = job(seeds[k]);
                done.lock().unwrap()[k] = Some(r);
            });
        }
    });
    slots.into_iter().map(|r| r.expect("every seed ran")).collect()
}

fn stem(path: &Path) -> String {
    path.file_stem().map_or_else(|| "instance".into(), |s| s.to_string_lossy().into_owned())
}

fn seed_params(cfg: &RunConfig, seed: u64) -> SearchParams {
    SearchParams { seed, ..cfg.params.clone() }
}

pub struct SolveOutput {
    pub report: RunReport,
    pub outcomes: Vec<SearchOutcome>,
    pub files: Vec<PathBuf>,
}

/// One run per seed; writes `<stem>.seed<k>.sol`, `<stem>.seed<k>.trace.csv`
/// and `<stem>.report.csv` under the output directory.
pub fn solve(cfg: &RunConfig) -> Result<SolveOutput> {
    let inst = load_instance(&cfg.instance)?;
    budget_for(&inst, cfg.stop)?;
    let problem = Problem::new(inst);
    let options = RunOptions { ablation: cfg.ablation, full_trace: cfg.full_trace };
    let results = for_each_seed(&cfg.seeds, |seed| {
        let budget = budget_for(problem.instance(), cfg.stop).expect("checked above");
        let started = Instant::now();
        let out = run_with(&problem, &seed_params(cfg, seed), &budget, &options, &mut ());
        (seed, out, started.elapsed())
    });

    fs::create_dir_all(&cfg.out).with_context(|| format!("cannot create {}", cfg.out.display()))?;
    let name = stem(&cfg.instance);
    let inst = problem.instance();
    let mut runs = Vec::new();
    let mut outcomes = Vec::new();
    let mut files = Vec::new();
    for (seed, out, runtime) in results {
        let out = out.with_context(|| format!("seed {seed}"))?;
        let header = cfg.header(Some(seed));
        let sol_path = cfg.out.join(format!("{name}.seed{seed}.sol"));
        write(&sol_path, &format_solution(inst, &out.best, &header))?;
        let trace_path = cfg.out.join(format!("{name}.seed{seed}.trace.csv"));
        let mut trace = String::new();
        for h in &header {
            trace.push_str("# ");
            trace.push_str(h);
            trace.push('\n');
        }
        trace.push_str(&out.trace.to_csv());
        write(&trace_path, &trace)?;
        files.push(sol_path);
        files.push(trace_path);
        runs.push(SeedResult {
            seed,
            best_f: out.best.total_cost,
            routes: out.best.num_routes(),
            runtime,
            arc_accesses: out.stats.arc_accesses,
            restarts: out.stats.restarts,
        });
        outcomes.push(out);
    }
    let report = RunReport { instance: name.clone(), runs };
    let report_path = cfg.out.join(format!("{name}.report.csv"));
    write(&report_path, &report.to_csv(&cfg.header(None)))?;
    files.push(report_path);
    Ok(SolveOutput { report, outcomes, files })
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    /// Feasible, with the recomputed `F` and the `COST` line if present.
    Ok { total: f64, reported: Option<f64> },
    Violation(String),
}

fn describe(v: &UpperViolation, inst: &Instance) -> String {
    let l = |n| inst.label(n);
    match *v {
        UpperViolation::MissingCustomer(c) => format!("MissingCustomer: customer {} is not served", l(c)),
        UpperViolation::DuplicateCustomer(c) => format!("DuplicateCustomer: customer {} is served twice", l(c)),
        UpperViolation::NotACustomer(c) => format!("NotACustomer: node {} is not a customer", l(c)),
        UpperViolation::CapacityExceeded { route, load, capacity } => {
            format!("CapacityExceeded: route {} carries {load} > {capacity}", route + 1)
        }
        UpperViolation::TooManyRoutes { found, max } => {
            format!("TooManyRoutes: {found} routes but only {max} vehicles")
        }
    }
}

/// Parses and checks a solution file: partition, capacity, fleet size and the
/// battery along every route. `F` is recomputed from the routes, not taken
/// from the file.
pub fn validate(instance: &Path, solution: &Path) -> Result<Verdict> {
    let inst = load_instance(instance)?;
    let text = fs::read_to_string(solution).with_context(|| format!("cannot read solution {}", solution.display()))?;
    let file = parse_solution(&text, &inst).with_context(|| format!("in {}", solution.display()))?;
    let (x, y) = file.to_plans(&inst).with_context(|| format!("in {}", solution.display()))?;
    if let Err(v) = check_upper_feasible(&x, &inst) {
        return Ok(Verdict::Violation(describe(&v, &inst)));
    }
    let problem = Problem::new(inst);
    let o = problem.matrix().unmetered();
    let sol = CompleteSolution::evaluate(x, y, &o)?;
    if let Some(b) = sol.battery_violation(problem.instance(), &o) {
        return Ok(Verdict::Violation(format!(
            "BatteryDepleted: arriving at node {} short by {:.4}",
            problem.instance().label(b.node),
            b.deficit
        )));
    }
    Ok(Verdict::Ok { total: sol.total_cost, reported: file.reported_cost })
}

pub struct Refined {
    pub before: Option<f64>,
    pub after: f64,
    pub text: String,
}

/// Drops the file's charging decisions and asks the exhaustive follower for
/// new ones. Keeps the input's plan when it is feasible and cheaper (it may
/// use a visit count outside the follower's bound).
pub fn refine(instance: &Path, solution: &Path) -> Result<Refined> {
    let inst = load_instance(instance)?;
    let text = fs::read_to_string(solution).with_context(|| format!("cannot read solution {}", solution.display()))?;
    let file = parse_solution(&text, &inst).with_context(|| format!("in {}", solution.display()))?;
    let (x, y) = file.to_plans(&inst).with_context(|| format!("in {}", solution.display()))?;
    if let Err(v) = check_upper_feasible(&x, &inst) {
        bail!("{}", describe(&v, &inst));
    }
    let problem = Problem::new(inst);
    let o = problem.matrix().unmetered();
    let input = CompleteSolution::evaluate(x.clone(), y, &o)?;
    let before = input.battery_violation(problem.instance(), &o).is_none().then_some(input.total_cost);
    let best = match solve_exhaustive(&x, problem.instance(), &o).status {
        ChargingStatus::Feasible { plan, total, .. } if before.is_none_or(|b| total <= b) => {
            CompleteSolution::evaluate(x, plan, &o)?
        }
        _ if before.is_some() => input,
        _ => bail!("Infeasible: no charging plan within the visit bound exists for these routes"),
    };
    let header = vec![format!("ecvrp {}", env!("CARGO_PKG_VERSION")), "refined by the exhaustive follower".into()];
    let text = format_solution(problem.instance(), &best, &header);
    Ok(Refined { before, after: best.total_cost, text })
}

/// Pools follower samples over all seeds per instance. Writes
/// `<stem>.pairs.csv` per instance and `analysis.csv` with one row each.
pub fn analyze(instances: &[PathBuf], cfg: &RunConfig) -> Result<Vec<AnalysisRow>> {
    fs::create_dir_all(&cfg.out).with_context(|| format!("cannot create {}", cfg.out.display()))?;
    let options = RunOptions { ablation: cfg.ablation, full_trace: false };
    let mut rows = Vec::new();
    for path in instances {
        let inst = load_instance(path)?;
        budget_for(&inst, cfg.stop)?;
        let problem = Problem::new(inst);
        // collectors per seed, merged in seed order so pooling stays deterministic
        let per_seed = for_each_seed(&cfg.seeds, |seed| {
            let budget = budget_for(problem.instance(), cfg.stop).expect("checked above");
            let mut c = PairCollector::new();
            let r = run_with(&problem, &seed_params(cfg, seed), &budget, &options, &mut c);
            (r.err(), c)
        });
        let mut pooled = PairCollector::new();
        for (err, c) in per_seed {
            match err {
                None | Some(ecvrp::search::SearchError::IncumbentInfeasible) => pooled.merge(c),
                Some(e) => return Err(e).with_context(|| format!("analyzing {}", path.display())),
            }
        }
        let name = stem(path);
        write(&cfg.out.join(format!("{name}.pairs.csv")), &format_pairs_csv(pooled.pairs()))?;
        rows.push(AnalysisRow::from_pairs(&name, pooled.pairs()));
    }
    write(&cfg.out.join("analysis.csv"), &format_report_csv(&rows))?;
    Ok(rows)
}

pub fn oracle(instance: &Path) -> Result<(CompleteSolution, String)> {
    let inst = load_instance(instance)?;
    let problem = Problem::new(inst);
    let sol = brute_force_optimum(problem.instance(), &problem.matrix().unmetered())?;
    let header = vec![format!("ecvrp {}", env!("CARGO_PKG_VERSION")), "exact optimum by enumeration".into()];
    let text = format_solution(problem.instance(), &sol, &header);
    Ok((sol, text))
}
