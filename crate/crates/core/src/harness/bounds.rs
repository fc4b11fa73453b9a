use serde::{Deserialize, Serialize};

use super::TrialReport;

/// A claimed guarantee to check a report against.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Bound {
    /// Every `ê_t ≤ e0`.
    InstantError(f64),
    /// Failure ratio at the report's threshold is at most `f0`.
    FailureRatio(f64),
    /// Observed maximum space is at most this many bits.
    Space(u64),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub bound_kind: String,
    pub pass: bool,
    pub observed: f64,
    pub bound: f64,
    /// Statistical allowance added to the bound; 0 for exact comparisons.
    pub margin: f64,
}

impl BoundCheck {
    /// `bound + margin - observed`; negative on failure.
    pub fn slack(&self) -> f64 {
        self.bound + self.margin - self.observed
    }
}

/// Three binomial standard deviations at rate `p` over `trials` runs.
pub fn three_sigma(p: f64, trials: u64) -> f64 {
    3.0 * (p * (1.0 - p) / trials as f64).sqrt()
}

/// Compares a report with a bound. Randomized algorithms get a `3σ` margin
/// on error rates; for the failure ratio the margin goes on the per-instant
/// threshold, and the ratio itself is compared exactly.
pub fn verify_bounds(report: &TrialReport, bound: Bound) -> BoundCheck {
    let randomized = report.algorithm.randomized;
    let (kind, observed, bound, margin) = match bound {
        Bound::InstantError(e0) => {
            let margin = if randomized {
                three_sigma(e0, report.trials)
            } else {
                0.0
            };
            ("instant-error", report.max_error(), e0, margin)
        }
        Bound::FailureRatio(f0) => {
            let eps = report.threshold;
            let observed = if randomized {
                report.failure_ratio_at(eps + three_sigma(eps, report.trials))
            } else {
                report.failure_ratio
            };
            ("failure-ratio", observed, f0, 0.0)
        }
        Bound::Space(bits) => ("space", report.space_max as f64, bits as f64, 0.0),
    };
    BoundCheck {
        bound_kind: kind.to_string(),
        pass: observed <= bound + margin,
        observed,
        bound,
        margin,
    }
}
