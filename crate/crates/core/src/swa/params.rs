use serde::{Deserialize, Serialize};

use super::SwaError;

/// Parameters of the constant-space left-ideal algorithm.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct XiEpsilon {
    pub xi: f64,
    pub eps: f64,
    /// Smallest window size from which the randomized algorithm is used.
    pub n1: usize,
}

impl XiEpsilon {
    /// `(1 - ξ + 1/n)·|Q|·(1 + 1/ξ)`, the failure-ratio bound at window size `n`.
    pub fn failure_bound(&self, q_count: usize, n: usize) -> f64 {
        (1.0 - self.xi + 1.0 / n as f64) * q_count as f64 * (1.0 + 1.0 / self.xi)
    }

    /// `β = ln(1/ε)/n`.
    pub fn beta(&self, n: usize) -> f64 {
        (1.0 / self.eps).ln() / n as f64
    }
}

fn bisect(mut lo: f64, mut hi: f64, positive_at_hi: impl Fn(f64) -> bool) -> (f64, f64) {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if positive_at_hi(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (lo, hi)
}

/// `1 - ε ≤ (1 - ln(1/ε)/n)^{ξn}`, evaluated in log space.
fn tail_holds(xi: f64, eps: f64, n: usize) -> bool {
    let c = (1.0 / eps).ln();
    let n = n as f64;
    if c >= n {
        return false;
    }
    xi * n * (1.0 - c / n).ln() >= (1.0 - eps).ln()
}

/// Chooses `ξ`, `ε` and `n1` for failure ratio `phi` on a DFA with `q_count`
/// states.
///
/// `ξ` is the upper end of a bisection for `(1-ξ)·|Q|·(1+1/ξ) = phi/2`, so the
/// strict inequality holds and the other half of `phi` absorbs the `1/n` term.
/// `ε` is halfway between the root of `x^ξ + x - 1` and `1/2`. `n1` is the
/// least `n ≥ ⌈ln(1/ε)⌉` at which both the failure bound and the tail
/// inequality hold; both are monotone in `n`.
pub fn solve_xi_epsilon(q_count: usize, phi: f64) -> Result<XiEpsilon, SwaError> {
    if !(phi > 0.0 && phi < 1.0) {
        return Err(SwaError::InvalidFailureRatio(phi));
    }
    let q = q_count.max(1) as f64;
    let (_, xi) = bisect(0.0, 1.0, |x| (1.0 - x) * q * (1.0 + 1.0 / x) < phi / 2.0);
    let (root, _) = bisect(0.0, 0.5, |x| x.powf(xi) + x - 1.0 > 0.0);
    let eps = 0.5 * (root + 0.5);
    let params = XiEpsilon { xi, eps, n1: 0 };
    let ok = |n: usize| params.failure_bound(q_count.max(1), n) <= phi && tail_holds(xi, eps, n);
    let start = ((1.0 / eps).ln().ceil() as usize).max(1);
    let mut hi = start;
    while !ok(hi) {
        hi = hi.checked_mul(2).expect("solution exists for every phi in (0,1)");
    }
    let mut lo = start;
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(XiEpsilon { n1: lo, ..params })
}

/// Number of copies whose majority vote turns per-instant error `eps` into
/// `target`: the least odd `k ≥ ln(1/target)·2(1-eps)/(1/2-eps)²`.
pub fn amplification_copies(eps: f64, target: f64) -> Result<usize, SwaError> {
    if !(eps > 0.0 && eps < 0.5 && target > 0.0 && target < eps) {
        return Err(SwaError::BadAmplification { eps, target });
    }
    let bound = (1.0 / target).ln() * 2.0 * (1.0 - eps) / (0.5 - eps).powi(2);
    let k = (bound.ceil() as usize).max(1);
    Ok(if k.is_multiple_of(2) { k + 1 } else { k })
}
