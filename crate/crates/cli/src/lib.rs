//! Front end for the `ecvrp` binary. Commands are plain functions so tests
//! can drive them without spawning a process.

pub mod args;
pub mod commands;
pub mod config;
pub mod report;

use std::fs;
use std::process::ExitCode;

use anyhow::{Context, Result};

use args::{Cli, Command};
use commands::Verdict;
use config::RunConfig;

pub fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Solve { instance, run } => {
            let cfg = RunConfig::from_args(instance, &run)?;
            let out = commands::solve(&cfg)?;
            for r in &out.report.runs {
                println!(
                    "seed {:>3}  F {:.2}  routes {}  arcs {}  restarts {}  {:.1}s",
                    r.seed,
                    r.best_f,
                    r.routes,
                    r.arc_accesses,
                    r.restarts,
                    r.runtime.as_secs_f64()
                );
            }
            println!("{}", out.report.summary());
        }
        Command::Validate { instance, solution } => match commands::validate(&instance, &solution)? {
            Verdict::Ok { total, reported } => {
                println!("OK F={total:.2}");
                if let Some(r) = reported.filter(|r| (r - total).abs() > 0.005 + 1e-9) {
                    eprintln!("warning: file reports COST {r:.2}");
                }
            }
            Verdict::Violation(v) => {
                println!("{v}");
                return Ok(ExitCode::FAILURE);
            }
        },
        Command::Refine { instance, solution, out } => {
            let r = commands::refine(&instance, &solution)?;
            match r.before {
                Some(b) => eprintln!("F {b:.2} -> {:.2}", r.after),
                None => eprintln!("F (infeasible) -> {:.2}", r.after),
            }
            match out {
                Some(p) => fs::write(&p, &r.text).with_context(|| format!("cannot write {}", p.display()))?,
                None => print!("{}", r.text),
            }
        }
        Command::Analyze { instances, run } => {
            let cfg = RunConfig::from_args(instances[0].clone(), &run)?;
            let rows = commands::analyze(&instances, &cfg)?;
            print!("{}", ecvrp::analysis::format_report_csv(&rows));
        }
        Command::Oracle { instance, out } => {
            let (sol, text) = commands::oracle(&instance)?;
            eprintln!("optimum F={:.2} with {} routes", sol.total_cost, sol.num_routes());
            match out {
                Some(p) => fs::write(&p, &text).with_context(|| format!("cannot write {}", p.display()))?,
                None => print!("{text}"),
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
