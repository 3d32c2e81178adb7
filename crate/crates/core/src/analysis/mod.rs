//! Exact solving of tiny instances, and the surrogate-correlation study.

mod brute;
mod pairs;
mod stats;

pub use brute::{brute_force_optimum, BruteForceError, MAX_BRUTE_CUSTOMERS, MAX_BRUTE_STATIONS};
pub use pairs::{
    collect_pairs, format_pairs_csv, format_report_csv, AnalysisRow, PairCollector, SamplePair, REPORT_HEADER,
};
pub use stats::{kendall_tau_b, kendall_tau_b_xy, recall_at_k, DegenerateInput};
