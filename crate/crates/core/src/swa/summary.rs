//! Path summaries `ℓ_w(q) = inf{k : δ(q, last_k(w)^R) ∈ F}` over a DFA for the
//! reversed language, exact and modulo a random prime.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{ceil_log2, Bernoulli, SlidingWindow};
use crate::automata::{Dfa, Symbol};

/// `ℓ_ε(q)` for every state: the number of pad steps from `q` to a final
/// state, `None` when the pad chain never reaches one.
pub fn pad_distances(dfa_rev: &Dfa) -> Vec<Option<usize>> {
    let states = dfa_rev.state_count();
    (0..states)
        .map(|q| {
            let mut s = q;
            // the pad chain is eventually periodic within |Q| steps
            for k in 0..states {
                if dfa_rev.is_final(s) {
                    return Some(k);
                }
                s = dfa_rev.step(s, dfa_rev.pad());
            }
            None
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QueryMode {
    /// Accept iff `ℓ_w(q0) ≤ n` (left ideals).
    AtMostN,
    /// Accept iff `ℓ_w(q0) = n` (suffix-free languages).
    ExactlyN,
}

/// Deterministic path summary, values capped at `n + 1` with `∞` stored as
/// `n + 2`.
#[derive(Clone, Debug)]
pub struct PathSummary {
    dfa: Arc<Dfa>,
    n: u64,
    mode: QueryMode,
    values: Vec<u64>,
    scratch: Vec<u64>,
    bits: u64,
}

impl PathSummary {
    pub fn new(dfa_rev: Arc<Dfa>, n: usize, mode: QueryMode) -> Self {
        let n = n as u64;
        let values: Vec<u64> = pad_distances(&dfa_rev)
            .into_iter()
            .map(|d| d.map_or(n + 2, |k| (k as u64).min(n + 1)))
            .collect();
        let bits = dfa_rev.state_count() as u64 * ceil_log2(n + 3);
        Self {
            scratch: values.clone(),
            values,
            dfa: dfa_rev,
            n,
            mode,
            bits,
        }
    }

    /// Space of the encoding for `states` states and window size `n`.
    pub fn space_for(states: usize, n: usize) -> u64 {
        states as u64 * ceil_log2(n as u64 + 3)
    }

    pub fn infinity(&self) -> u64 {
        self.n + 2
    }

    /// Raw stored values (`n + 2` means unreachable).
    pub fn values(&self) -> &[u64] {
        &self.values
    }

    /// `ℓ_w(q0)`, with `None` for the unreachable sentinel.
    pub fn initial_value(&self) -> Option<u64> {
        let v = self.values[self.dfa.initial()];
        (v != self.infinity()).then_some(v)
    }
}

impl SlidingWindow for PathSummary {
    fn step(&mut self, a: Symbol) {
        let inf = self.n + 2;
        for q in 0..self.values.len() {
            self.scratch[q] = if self.dfa.is_final(q) {
                0
            } else {
                match self.values[self.dfa.step(q, a)] {
                    v if v == inf => inf,
                    v => (v + 1).min(self.n + 1),
                }
            };
        }
        std::mem::swap(&mut self.values, &mut self.scratch);
    }

    fn query(&self) -> bool {
        let v = self.values[self.dfa.initial()];
        match self.mode {
            QueryMode::AtMostN => v <= self.n,
            QueryMode::ExactlyN => v == self.n,
        }
    }

    fn space_bits(&self) -> u64 {
        self.bits
    }
}

/// The first `count` primes.
pub fn first_primes(count: usize) -> Vec<u64> {
    let mut primes: Vec<u64> = Vec::with_capacity(count);
    let mut c = 2u64;
    while primes.len() < count {
        if primes
            .iter()
            .take_while(|&&p| p * p <= c)
            .all(|&p| !c.is_multiple_of(p))
        {
            primes.push(c);
        }
        c += 1;
    }
    primes
}

/// Size `3k` of the prime pool, where `k` is the least number with
/// `p_1 ⋯ p_k ≥ n`.
pub fn prime_pool_size(n: usize) -> usize {
    let mut product: u128 = 1;
    let mut k = 0;
    let primes = first_primes(40);
    while product < n as u128 || k == 0 {
        product *= u128::from(primes[k]);
        k += 1;
    }
    3 * k
}

/// Path summary modulo a prime drawn uniformly from the pool.
#[derive(Clone, Debug)]
pub struct ModPrime {
    dfa: Arc<Dfa>,
    p: u32,
    index: usize,
    pool: usize,
    target: u32,
    bits: u64,
    finite: Vec<bool>,
    residue: Vec<u32>,
    scratch_finite: Vec<bool>,
    scratch_residue: Vec<u32>,
}

impl ModPrime {
    pub fn new(dfa_rev: Arc<Dfa>, n: usize, seed: u64) -> Self {
        let pool = prime_pool_size(n.max(1));
        let primes = first_primes(pool);
        let index = ChaCha8Rng::seed_from_u64(seed).gen_range(0..pool);
        let p = primes[index] as u32;
        let dist = pad_distances(&dfa_rev);
        let finite: Vec<bool> = dist.iter().map(Option::is_some).collect();
        let residue: Vec<u32> = dist.iter().map(|d| d.map_or(0, |k| (k % p as usize) as u32)).collect();
        Self {
            target: (n % p as usize) as u32,
            bits: ceil_log2(pool as u64) + finite.len() as u64 * (ceil_log2(u64::from(p)) + 1),
            scratch_finite: finite.clone(),
            scratch_residue: residue.clone(),
            finite,
            residue,
            dfa: dfa_rev,
            p,
            index,
            pool,
        }
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn prime_index(&self) -> usize {
        self.index
    }

    /// Bits for the index of the chosen prime within the pool.
    pub fn index_bits(&self) -> u64 {
        ceil_log2(self.pool as u64)
    }

    /// Largest encoding over all prime choices for this window size.
    pub fn max_space_for(states: usize, n: usize) -> u64 {
        let pool = prime_pool_size(n.max(1));
        let p_max = *first_primes(pool).last().expect("pool is nonempty");
        ceil_log2(pool as u64) + states as u64 * (ceil_log2(p_max) + 1)
    }

    /// Residue of `ℓ_w(q0)`, `None` when it is infinite.
    pub fn initial_residue(&self) -> Option<u32> {
        let q0 = self.dfa.initial();
        self.finite[q0].then_some(self.residue[q0])
    }
}

impl SlidingWindow for ModPrime {
    fn step(&mut self, a: Symbol) {
        for q in 0..self.finite.len() {
            if self.dfa.is_final(q) {
                self.scratch_finite[q] = true;
                self.scratch_residue[q] = 0;
            } else {
                let t = self.dfa.step(q, a);
                self.scratch_finite[q] = self.finite[t];
                let r = self.residue[t] + 1;
                self.scratch_residue[q] = if r == self.p { 0 } else { r };
            }
        }
        std::mem::swap(&mut self.finite, &mut self.scratch_finite);
        std::mem::swap(&mut self.residue, &mut self.scratch_residue);
    }

    fn query(&self) -> bool {
        let q0 = self.dfa.initial();
        self.finite[q0] && self.residue[q0] == self.target
    }

    fn space_bits(&self) -> u64 {
        self.bits
    }
}

/// Conjunction of a Bernoulli threshold test with `β = 1/(2n)` and the
/// modular counter, run with independent seeds.
#[derive(Clone, Debug)]
pub struct LogLog {
    pub(crate) threshold: Bernoulli,
    pub(crate) counter: ModPrime,
}

impl LogLog {
    pub fn threshold(&self) -> &Bernoulli {
        &self.threshold
    }

    pub fn counter(&self) -> &ModPrime {
        &self.counter
    }
}

impl SlidingWindow for LogLog {
    fn step(&mut self, a: Symbol) {
        self.threshold.step(a);
        self.counter.step(a);
    }

    fn query(&self) -> bool {
        self.threshold.query() && self.counter.query()
    }

    fn space_bits(&self) -> u64 {
        self.threshold.space_bits() + self.counter.space_bits()
    }
}
