use std::collections::HashSet;
use std::fmt::Write as _;

use crate::charging::{ChargingQueryResult, ChargingStatus};
use crate::distance::EvaluationBudget;
use crate::instance::NodeId;
use crate::search::{run_with, Problem, RunOptions, SearchError, SearchObserver, SearchParams};
use crate::solution::RoutingPlan;

/// Surrogate and true cost of one routing plan met during search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplePair {
    pub phi: f64,
    pub f: f64,
}

/// Observer that keeps one pair per distinct routing plan. Plans that differ
/// only in route order count once. Reuse one collector across seeds to pool
/// their samples.
#[derive(Debug, Default)]
pub struct PairCollector {
    seen: HashSet<Vec<Vec<NodeId>>>,
    /// Key of each entry of `pairs`, for merging.
    order: Vec<Vec<Vec<NodeId>>>,
    pairs: Vec<SamplePair>,
}

impl PairCollector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn pairs(&self) -> &[SamplePair] {
        &self.pairs
    }

    pub fn into_pairs(self) -> Vec<SamplePair> {
        self.pairs
    }

    /// Appends `other`'s samples whose plans this collector has not seen.
    pub fn merge(&mut self, other: PairCollector) {
        for (key, pair) in other.order.into_iter().zip(other.pairs) {
            if self.seen.insert(key.clone()) {
                self.order.push(key);
                self.pairs.push(pair);
            }
        }
    }
}

impl SearchObserver for PairCollector {
    fn follower_hit(&mut self, x: &RoutingPlan, result: &ChargingQueryResult) {
        if let ChargingStatus::Feasible { total, surrogate, .. } = result.status {
            let key = x.canonical();
            if self.seen.insert(key.clone()) {
                self.order.push(key);
                self.pairs.push(SamplePair { phi: surrogate, f: total });
            }
        }
    }
}

/// One run, returning every distinct feasible follower sample.
pub fn collect_pairs(
    problem: &Problem,
    params: &SearchParams,
    budget: &EvaluationBudget,
) -> Result<Vec<SamplePair>, SearchError> {
    let mut collector = PairCollector::new();
    match run_with(problem, params, budget, &RunOptions::default(), &mut collector) {
        // samples gathered before the end are still valid
        Ok(_) | Err(SearchError::IncumbentInfeasible) => Ok(collector.into_pairs()),
        Err(e) => Err(e),
    }
}

pub fn format_pairs_csv(pairs: &[SamplePair]) -> String {
    let mut out = String::from("phi,F\n");
    for p in pairs {
        writeln!(out, "{:.6},{:.6}", p.phi, p.f).unwrap();
    }
    out
}

pub const REPORT_HEADER: &str = "instance,n_samples,tau_b,recall_1,recall_5,recall_10,recall_20";

#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisRow {
    pub instance: String,
    pub n_samples: usize,
    /// `None` when the sample is degenerate.
    pub tau_b: Option<f64>,
    /// Recall at 1, 5, 10 and 20 percent; `None` for an empty sample.
    pub recall: Option<[f64; 4]>,
}

impl AnalysisRow {
    pub fn from_pairs(instance: &str, pairs: &[SamplePair]) -> Self {
        let recall = (!pairs.is_empty()).then(|| [1.0, 5.0, 10.0, 20.0].map(|k| super::recall_at_k(pairs, k)));
        Self {
            instance: instance.to_string(),
            n_samples: pairs.len(),
            tau_b: super::kendall_tau_b(pairs).ok(),
            recall,
        }
    }
}

/// Report with one row per instance; undefined statistics are left blank.
pub fn format_report_csv(rows: &[AnalysisRow]) -> String {
    let mut out = format!("{REPORT_HEADER}\n");
    let opt = |v: Option<f64>| v.map_or(String::new(), |v| format!("{v:.4}"));
    for r in rows {
        let rec = r.recall.map_or([None; 4], |a| a.map(Some));
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.instance,
            r.n_samples,
            opt(r.tau_b),
            opt(rec[0]),
            opt(rec[1]),
            opt(rec[2]),
            opt(rec[3])
        )
        .unwrap();
    }
    out
}
