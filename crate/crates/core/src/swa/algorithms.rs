//! Constructors returning a [`Factory`] per algorithm and window size.

use std::sync::Arc;

use super::{
    amplify, ceil_log2, derive_seed, solve_xi_epsilon, AlgorithmInfo, Bernoulli, Constant, DfaRunner, ExactOracle,
    Factory, LogLog, ModPrime, PathSummary, QueryMode, SlidingWindow, SwaError,
};
use crate::automata::{is_left_ideal, is_prefix_free, minimize, reverse, suffix_pattern_dfa, Dfa, Symbol};

/// Window sizes below this use the exact oracle in the log-log algorithm,
/// since `(1 - 1/(2n))^n ≥ 0.6` needs `n ≥ 12`.
pub const LOGLOG_MIN_N: usize = 12;

/// Ground truth: stores the window and runs the DFA for `L` on it.
pub fn exact_oracle(dfa_for_l: &Dfa, n: usize) -> Factory {
    let dfa = Arc::new(dfa_for_l.clone());
    let bits = n as u64 * ceil_log2(dfa.num_symbols() as u64);
    let info = AlgorithmInfo::new("exact_oracle", n, bits).param("states", dfa.state_count());
    Factory::new(info, move |_| Box::new(ExactOracle::new(dfa.clone(), n)))
}

/// Deterministic path summary over a DFA for `L^R`.
pub fn path_summary_swa(dfa_for_l_rev: &Dfa, n: usize, mode: QueryMode) -> Factory {
    let dfa = Arc::new(dfa_for_l_rev.clone());
    let info = AlgorithmInfo::new("path_summary", n, PathSummary::space_for(dfa.state_count(), n))
        .param("mode", serde_json::to_value(mode).expect("mode serializes"))
        .param("states", dfa.state_count());
    Factory::new(info, move |_| Box::new(PathSummary::new(dfa.clone(), n, mode)))
}

/// Bernoulli flags with a fixed clearing probability `beta`.
pub fn bernoulli_swa(dfa_for_l_rev: &Dfa, n: usize, beta: f64) -> Result<Factory, SwaError> {
    let dfa = Arc::new(dfa_for_l_rev.clone());
    // validate once up front so the factory closure cannot fail
    Bernoulli::new(dfa.clone(), beta, 0)?;
    let nonfinal = (0..dfa.state_count()).filter(|&q| !dfa.is_final(q)).count() as u64;
    let info = AlgorithmInfo::new("bernoulli", n, nonfinal)
        .param("beta", beta)
        .randomized(true);
    Ok(Factory::new(info, move |seed| {
        Box::new(Bernoulli::new(dfa.clone(), beta, seed).expect("validated"))
    }))
}

/// Path summary modulo a random prime from the first `3k` primes.
pub fn mod_prime_swa(dfa_for_l_rev: &Dfa, n: usize) -> Result<Factory, SwaError> {
    if n < 1 {
        return Err(SwaError::WindowTooSmall { n, min: 1 });
    }
    let dfa = Arc::new(dfa_for_l_rev.clone());
    let info = AlgorithmInfo::new("mod_prime", n, ModPrime::max_space_for(dfa.state_count(), n))
        .param("pool", super::prime_pool_size(n))
        .randomized(true);
    Ok(Factory::new(info, move |seed| {
        Box::new(ModPrime::new(dfa.clone(), n, seed))
    }))
}

/// Bernoulli (`β = 1/(2n)`) and the modular counter combined by conjunction.
/// Per-instant error is at most 0.4 for `n ≥ 12`; smaller windows use the
/// exact oracle. Not amplified; see [`amplify`].
pub fn loglog_suffix_free_swa(dfa_for_l_rev: &Dfa, n: usize) -> Result<Factory, SwaError> {
    if !is_prefix_free(dfa_for_l_rev) {
        return Err(SwaError::NotSuffixFree);
    }
    let rev = Arc::new(minimize(dfa_for_l_rev));
    if n < LOGLOG_MIN_N {
        let f = exact_oracle(&minimize(&reverse(&rev)), n);
        let info = f.info().clone();
        return Ok(f.with_info(
            AlgorithmInfo {
                algorithm: "loglog_suffix_free".into(),
                ..info
            }
            .param("fallback", "exact_oracle"),
        ));
    }
    let beta = 1.0 / (2.0 * n as f64);
    let states = rev.state_count();
    let nonfinal = (0..states).filter(|&q| !rev.is_final(q)).count() as u64;
    let info = AlgorithmInfo::new("loglog_suffix_free", n, nonfinal + ModPrime::max_space_for(states, n))
        .param("beta", beta)
        .param("pool", super::prime_pool_size(n))
        .randomized(true);
    Ok(Factory::new(info, move |seed| {
        Box::new(LogLog {
            threshold: Bernoulli::new(rev.clone(), beta, derive_seed(seed, 0)).expect("beta in range"),
            counter: ModPrime::new(rev.clone(), n, derive_seed(seed, 1)),
        })
    }))
}

/// Log-log algorithm amplified by majority vote from error 0.4 to `target`.
pub fn amplified_loglog(dfa_for_l_rev: &Dfa, n: usize, target: f64) -> Result<Factory, SwaError> {
    let base = loglog_suffix_free_swa(dfa_for_l_rev, n)?;
    if !base.is_randomized() {
        return Ok(base);
    }
    amplify(&base, 0.4, target)
}

/// Constant-space algorithm for a nonempty left ideal with failure ratio
/// `phi`: Bernoulli flags with `β = ln(1/ε)/n` from window size `n1` on, the
/// exact oracle below.
pub fn const_left_ideal_swa(dfa_for_l_rev: &Dfa, n: usize, phi: f64) -> Result<Factory, SwaError> {
    let rev = minimize(dfa_for_l_rev);
    let forward = minimize(&reverse(&rev));
    if forward.is_empty_language() {
        return Err(SwaError::EmptyLanguage);
    }
    if !is_left_ideal(&forward) {
        return Err(SwaError::NotLeftIdeal);
    }
    let params = solve_xi_epsilon(rev.state_count(), phi)?;
    let tag = |info: AlgorithmInfo| {
        AlgorithmInfo {
            algorithm: "const_left_ideal".into(),
            ..info
        }
        .param("phi", phi)
        .param("xi", params.xi)
        .param("eps", params.eps)
        .param("n1", params.n1)
    };
    if n < params.n1 {
        let f = exact_oracle(&forward, n);
        let info = tag(f.info().clone()).param("fallback", "exact_oracle");
        return Ok(f.with_info(info));
    }
    let f = bernoulli_swa(&rev, n, params.beta(n))?;
    let info = tag(f.info().clone());
    Ok(f.with_info(info))
}

/// Always rejects from `n0 = ⌈2·q_count/phi⌉` on; the exact oracle for
/// `dfa_for_l` below. Sound for prefix-free `L` (with `q_count` states in a
/// DFA for `L`) and suffix-free `L` (with `q_count` states in a DFA for `L^R`).
pub fn trivial_reject_swa(q_count: usize, n: usize, phi: f64, dfa_for_l: &Dfa) -> Result<Factory, SwaError> {
    let n0 = failure_cutoff(q_count, phi)?;
    let tag = |info: AlgorithmInfo| {
        AlgorithmInfo {
            algorithm: "trivial_reject".into(),
            ..info
        }
        .param("phi", phi)
        .param("n0", n0)
    };
    if n < n0 {
        let f = exact_oracle(dfa_for_l, n);
        let info = tag(f.info().clone()).param("fallback", "exact_oracle");
        return Ok(f.with_info(info));
    }
    Ok(Factory::new(tag(AlgorithmInfo::new("trivial_reject", n, 0)), |_| {
        Box::new(Constant(false))
    }))
}

/// Runs the DFA for `L = Σ*K` (`K` bifix-free) from `δ(q0, □^n)`; only false
/// positives. Exact oracle below `n0 = ⌈2|Q|/phi⌉`.
pub fn lb_direct_swa(dfa_for_l: &Dfa, n: usize, phi: f64) -> Result<Factory, SwaError> {
    let dfa = Arc::new(minimize(dfa_for_l));
    let n0 = failure_cutoff(dfa.state_count(), phi)?;
    let tag = |info: AlgorithmInfo| {
        AlgorithmInfo {
            algorithm: "lb_direct".into(),
            ..info
        }
        .param("phi", phi)
        .param("n0", n0)
    };
    if n < n0 {
        let f = exact_oracle(&dfa, n);
        let info = tag(f.info().clone()).param("fallback", "exact_oracle");
        return Ok(f.with_info(info));
    }
    let start = pad_power(&dfa, n);
    let info = tag(AlgorithmInfo::new("lb_direct", n, ceil_log2(dfa.state_count() as u64)));
    Ok(Factory::new(info, move |_| {
        Box::new(DfaRunner::new(dfa.clone(), start))
    }))
}

/// Constant-space comparator for `Σ*w`: the DFA for `Σ*w` run on the padded
/// stream; windows shorter than `w` never match.
pub fn suffix_comparator_swa(alphabet_dfa: &Dfa, word: &[Symbol], n: usize) -> Factory {
    let dfa = suffix_pattern_dfa(alphabet_dfa.alphabet(), word)
        .with_pad(alphabet_dfa.pad())
        .expect("pad comes from the same alphabet");
    let dfa = Arc::new(dfa);
    let pattern = alphabet_dfa.alphabet().decode(word);
    if n < word.len() {
        let info = AlgorithmInfo::new("suffix_comparator", n, 0).param("word", pattern);
        return Factory::new(info, |_| Box::new(Constant(false)));
    }
    let start = pad_power(&dfa, n);
    let info = AlgorithmInfo::new("suffix_comparator", n, ceil_log2(dfa.state_count() as u64)).param("word", pattern);
    Factory::new(info, move |_| Box::new(DfaRunner::new(dfa.clone(), start)))
}

fn failure_cutoff(q_count: usize, phi: f64) -> Result<usize, SwaError> {
    if !(phi > 0.0 && phi <= 1.0) {
        return Err(SwaError::InvalidFailureRatio(phi));
    }
    Ok((2.0 * q_count as f64 / phi).ceil() as usize)
}

/// `δ(q0, □^n)`, following the pad chain until it cycles.
pub(crate) fn pad_power(dfa: &Dfa, n: usize) -> usize {
    let mut seen = vec![usize::MAX; dfa.state_count()];
    let mut q = dfa.initial();
    let mut i = 0;
    while i < n {
        if seen[q] != usize::MAX {
            let period = i - seen[q];
            for _ in 0..(n - i) % period {
                q = dfa.step(q, dfa.pad());
            }
            return q;
        }
        seen[q] = i;
        q = dfa.step(q, dfa.pad());
        i += 1;
    }
    q
}

impl Factory {
    /// Runs one instance over `stream` and returns the query after each
    /// prefix, starting with the empty one.
    pub fn transcript(&self, seed: u64, stream: &[Symbol]) -> Vec<bool> {
        let mut r: Box<dyn SlidingWindow> = self.instance(seed);
        let mut out = Vec::with_capacity(stream.len() + 1);
        out.push(r.query());
        for &a in stream {
            r.step(a);
            out.push(r.query());
        }
        out
    }
}
