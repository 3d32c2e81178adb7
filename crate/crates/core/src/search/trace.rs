//! Convergence trace, written as CSV
//! `arc_accesses,iteration,phi_current,phi_best,F_best,event`.

use std::fmt::Write as _;
use std::io;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TraceEvent {
    Init,
    DescentDone,
    Accept,
    FollowerHit,
    Incumbent,
    Restart,
    Converged,
    Refined,
}

impl TraceEvent {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Init => "init",
            Self::DescentDone => "descent_done",
            Self::Accept => "accept",
            Self::FollowerHit => "follower_hit",
            Self::Incumbent => "incumbent",
            Self::Restart => "restart",
            Self::Converged => "converged",
            Self::Refined => "refined",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    pub arc_accesses: u64,
    /// Main-loop iterations since the run began, across restarts.
    pub iteration: u64,
    pub phi_current: f64,
    /// `φ*` of the current start.
    pub phi_best: f64,
    pub f_best: Option<f64>,
    pub event: TraceEvent,
    /// For `accept`: the move's `Δφ` and the `φ_vi` it was tested against.
    /// Kept in memory only.
    pub acceptance: Option<(f64, f64)>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SearchTrace {
    pub records: Vec<TraceRecord>,
}

pub const TRACE_HEADER: &str = "arc_accesses,iteration,phi_current,phi_best,F_best,event";

impl SearchTrace {
    pub fn events(&self, e: TraceEvent) -> impl Iterator<Item = &TraceRecord> {
        self.records.iter().filter(move |r| r.event == e)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(64 * (self.records.len() + 1));
        out.push_str(TRACE_HEADER);
        out.push('\n');
        for r in &self.records {
            let f = r.f_best.map(|f| format!("{f:.6}")).unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{},{:.6},{:.6},{},{}",
                r.arc_accesses,
                r.iteration,
                r.phi_current,
                r.phi_best,
                f,
                r.event.as_str()
            );
        }
        out
    }

    pub fn write_csv(&self, mut w: impl io::Write) -> io::Result<()> {
        w.write_all(self.to_csv().as_bytes())
    }
}
