use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "ecvrp", version, about = "Bilevel late-acceptance solver for the electric CVRP")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one instance once per seed.
    Solve {
        instance: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Check a solution file against an instance and recompute its cost.
    Validate { instance: PathBuf, solution: PathBuf },
    /// Replace a solution's charging decisions by the exhaustive follower's.
    Refine {
        instance: PathBuf,
        solution: PathBuf,
        /// Write the refined solution here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Surrogate-correlation report (Kendall τ_b, Recall@k) per instance.
    Analyze {
        #[arg(required = true)]
        instances: Vec<PathBuf>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Exact optimum of a tiny instance by enumeration.
    Oracle {
        instance: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StopArg {
    /// 25 000·pz evaluations, metered as arc accesses.
    Evals,
    /// Wall clock, ω·(|Vc|+|Vf|)/100 hours.
    Time,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[arg(long, value_enum, default_value = "evals")]
    pub stop: StopArg,
    /// Scale of the time budget; only read with `--stop time`.
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,
    /// History length L_h.
    #[arg(long)]
    pub lh: Option<usize>,
    /// Attempts per exploration call η_max.
    #[arg(long)]
    pub eta_max: Option<usize>,
    /// Follower threshold γ.
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub alpha_lb: Option<f64>,
    #[arg(long)]
    pub alpha_ub: Option<f64>,
    /// Seed list: `7`, `1..10` (inclusive) or `1,4,9`.
    #[arg(long, default_value = "1")]
    pub seeds: String,
    /// Output directory.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Skip the greedy descent.
    #[arg(long)]
    pub no_g: bool,
    /// Skip the final exhaustive refinement.
    #[arg(long)]
    pub no_f: bool,
    /// Never call the follower inside the main loop.
    #[arg(long)]
    pub gamma_zero: bool,
    /// Drop the move-to-empty-route operator.
    #[arg(long)]
    pub no_m8: bool,
    /// Also trace every accepted move and follower call.
    #[arg(long)]
    pub full_trace: bool,
}
