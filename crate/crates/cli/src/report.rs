use std::fmt::Write as _;
use std::time::Duration;

#[derive(Debug, Clone, PartialEq)]
pub struct SeedResult {
    pub seed: u64,
    pub best_f: f64,
    pub routes: usize,
    pub runtime: Duration,
    pub arc_accesses: u64,
    pub restarts: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub instance: String,
    pub runs: Vec<SeedResult>,
}

impl RunReport {
    pub fn best(&self) -> f64 {
        self.runs.iter().map(|r| r.best_f).fold(f64::INFINITY, f64::min)
    }

    pub fn mean(&self) -> f64 {
        self.runs.iter().map(|r| r.best_f).sum::<f64>() / self.runs.len() as f64
    }

    /// Sample standard deviation; `None` for a single run.
    pub fn std(&self) -> Option<f64> {
        let n = self.runs.len();
        if n < 2 {
            return None;
        }
        let m = self.mean();
        let ss: f64 = self.runs.iter().map(|r| (r.best_f - m).powi(2)).sum();
        Some((ss / (n - 1) as f64).sqrt())
    }

    /// Per-seed CSV followed by the aggregate as comment lines.
    pub fn to_csv(&self, header: &[String]) -> String {
        let mut out = String::new();
        for h in header {
            let _ = writeln!(out, "# {h}");
        }
        out.push_str("seed,best_F,routes,runtime_s,arc_accesses,restarts\n");
        for r in &self.runs {
            let _ = writeln!(
                out,
                "{},{:.6},{},{:.3},{},{}",
                r.seed,
                r.best_f,
                r.routes,
                r.runtime.as_secs_f64(),
                r.arc_accesses,
                r.restarts
            );
        }
        let _ = writeln!(out, "# {}", self.summary());
        out
    }

    /// `best / mean / std` to two decimals.
    pub fn summary(&self) -> String {
        let std = self.std().map_or_else(|| "-".to_string(), |s| format!("{s:.2}"));
        format!(
            "{}: best {:.2} mean {:.2} std {} over {} runs",
            self.instance,
            self.best(),
            self.mean(),
            std,
            self.runs.len()
        )
    }
}
