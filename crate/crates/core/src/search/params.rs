use std::fmt;

/// Tunable constants of the search. Defaults are the published settings.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchParams {
    /// `L_h`
    pub history_length: usize,
    /// `η_max`
    pub max_attempts: usize,
    /// `γ`: the follower runs only when `φ(x) < γ·φ*`.
    pub follower_threshold: f64,
    /// `α_lb`, `α_ub`: noise on the initial history entries.
    pub alpha_lb: f64,
    pub alpha_ub: f64,
    pub seed: u64,
}

impl Default for SearchParams {
    fn default() -> Self {
        Self {
            history_length: 5723,
            max_attempts: 60,
            follower_threshold: 1.01,
            alpha_lb: 0.98,
            alpha_ub: 1.02,
            seed: 0,
        }
    }
}

impl SearchParams {
    pub fn with_seed(seed: u64) -> Self {
        Self { seed, ..Self::default() }
    }

    pub fn validate(&self) -> Result<(), ParamError> {
        let bad = |name, value: f64, rule| Err(ParamError { name, value, rule });
        if self.history_length < 1 {
            return bad("history_length", self.history_length as f64, "must be at least 1");
        }
        if self.max_attempts < 1 {
            return bad("max_attempts", self.max_attempts as f64, "must be at least 1");
        }
        if !(self.follower_threshold >= 1.0) {
            return bad("follower_threshold", self.follower_threshold, "must be at least 1");
        }
        if !(self.alpha_lb > 0.0 && self.alpha_lb <= 1.0) {
            return bad("alpha_lb", self.alpha_lb, "must lie in (0, 1]");
        }
        if !(self.alpha_ub >= 1.0 && self.alpha_ub.is_finite()) {
            return bad("alpha_ub", self.alpha_ub, "must be finite and at least 1");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParamError {
    pub name: &'static str,
    pub value: f64,
    pub rule: &'static str,
}

impl fmt::Display for ParamError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {} {}", self.name, self.value, self.rule)
    }
}

impl std::error::Error for ParamError {}

/// Components switched off for the ablation study. `Default` is the full
/// algorithm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Ablation {
    /// Skip the greedy descent after each (re)start.
    pub no_descent: bool,
    /// Skip the exhaustive refinement at the end.
    pub no_refinement: bool,
    /// `γ = 0`: the follower never fires inside the main loop.
    pub gamma_zero: bool,
    /// Drop M8 from the exploration operators.
    pub no_m8: bool,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let p = SearchParams::default();
        assert_eq!((p.history_length, p.max_attempts, p.follower_threshold), (5723, 60, 1.01));
        assert_eq!(p.validate(), Ok(()));
    }

    #[test]
    fn rejects_out_of_range() {
        let cases = [
            SearchParams { history_length: 0, ..Default::default() },
            SearchParams { max_attempts: 0, ..Default::default() },
            SearchParams { follower_threshold: 0.99, ..Default::default() },
            SearchParams { follower_threshold: f64::NAN, ..Default::default() },
            SearchParams { alpha_lb: 0.0, ..Default::default() },
            SearchParams { alpha_lb: 1.01, ..Default::default() },
            SearchParams { alpha_ub: 0.99, ..Default::default() },
        ];
        for p in cases {
            assert!(p.validate().is_err(), "{p:?}");
        }
    }
}
