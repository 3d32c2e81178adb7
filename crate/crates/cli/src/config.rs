use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use ecvrp::search::{Ablation, SearchParams};

use crate::args::{RunArgs, StopArg};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StopCriterion {
    MaxEvals,
    MaxTime { omega: f64 },
}

/// Everything that determines a batch of runs.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub instance: PathBuf,
    pub stop: StopCriterion,
    /// Seed field is ignored; each run takes its seed from `seeds`.
    pub params: SearchParams,
    pub seeds: Vec<u64>,
    pub ablation: Ablation,
    pub full_trace: bool,
    pub out: PathBuf,
}

impl RunConfig {
    pub fn from_args(instance: PathBuf, a: &RunArgs) -> Result<Self> {
        let mut params = SearchParams::default();
        if let Some(v) = a.lh {
            params.history_length = v;
        }
        if let Some(v) = a.eta_max {
            params.max_attempts = v;
        }
        if let Some(v) = a.gamma {
            params.follower_threshold = v;
        }
        if let Some(v) = a.alpha_lb {
            params.alpha_lb = v;
        }
        if let Some(v) = a.alpha_ub {
            params.alpha_ub = v;
        }
        params.validate()?;
        let stop = match a.stop {
            StopArg::Evals => StopCriterion::MaxEvals,
            StopArg::Time => StopCriterion::MaxTime { omega: a.omega },
        };
        Ok(Self {
            instance,
            stop,
            params,
            seeds: parse_seeds(&a.seeds)?,
            ablation: Ablation { no_descent: a.no_g, no_refinement: a.no_f, gamma_zero: a.gamma_zero, no_m8: a.no_m8 },
            full_trace: a.full_trace,
            out: a.out.clone(),
        })
    }

    /// Header lines written at the top of every output file.
    pub fn header(&self, seed: Option<u64>) -> Vec<String> {
        let p = &self.params;
        let stop = match self.stop {
            StopCriterion::MaxEvals => "max_evals".to_string(),
            StopCriterion::MaxTime { omega } => format!("max_time omega={omega}"),
        };
        let a = &self.ablation;
        let mut h = vec![
            format!("ecvrp {}", env!("CARGO_PKG_VERSION")),
            format!("instance {}", self.instance.file_name().map_or_else(String::new, |f| f.to_string_lossy().into())),
            format!("stop {stop}"),
            format!(
                "params lh={} eta_max={} gamma={} alpha_lb={} alpha_ub={}",
                p.history_length, p.max_attempts, p.follower_threshold, p.alpha_lb, p.alpha_ub
            ),
            format!(
                "ablation no_g={} no_f={} gamma_zero={} no_m8={}",
                a.no_descent, a.no_refinement, a.gamma_zero, a.no_m8
            ),
        ];
        if let Some(s) = seed {
            h.push(format!("seed {s}"));
        }
        h
    }
}

/// `7`, `1..10` (inclusive) or a comma list of either.
pub fn parse_seeds(spec: &str) -> Result<Vec<u64>> {
    let mut seeds = Vec::new();
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((a, b)) = part.split_once("..") {
            let a: u64 = a.trim().parse().with_context(|| format!("bad seed range start in {part:?}"))?;
            let b: u64 = b.trim().parse().with_context(|| format!("bad seed range end in {part:?}"))?;
            if b < a {
                bail!("empty seed range {part:?}");
            }
            seeds.extend(a..=b);
        } else {
            seeds.push(part.parse().with_context(|| format!("bad seed {part:?}"))?);
        }
    }
    if seeds.is_empty() {
        bail!("no seeds given");
    }
    Ok(seeds)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seed_specs() {
        assert_eq!(parse_seeds("1..10").unwrap(), (1..=10).collect::<Vec<_>>());
        assert_eq!(parse_seeds("7").unwrap(), [7]);
        assert_eq!(parse_seeds("3, 1..2").unwrap(), [3, 1, 2]);
        assert!(parse_seeds("5..4").is_err());
        assert!(parse_seeds("").is_err());
        assert!(parse_seeds("x").is_err());
    }
}
