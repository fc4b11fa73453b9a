//! Sliding-window algorithms behind one step/query interface.
//!
//! Every algorithm is built through a [`Factory`] for a fixed window size `n`;
//! the factory turns a seed into an independent instance. Deterministic
//! algorithms ignore the seed.

mod algorithms;
mod bernoulli;
mod combinators;
mod exact;
mod params;
mod spec;
mod summary;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::automata::{AutomataError, Symbol};

pub use algorithms::{
    amplified_loglog, bernoulli_swa, const_left_ideal_swa, exact_oracle, lb_direct_swa, loglog_suffix_free_swa,
    mod_prime_swa, path_summary_swa, suffix_comparator_swa, trivial_reject_swa, LOGLOG_MIN_N,
};
pub use bernoulli::Bernoulli;
pub use combinators::{amplify, boolean_combine, space_cap, Majority, SpaceCap, TruthFn};
pub use exact::{Constant, DfaRunner, ExactOracle};
pub use params::{amplification_copies, solve_xi_epsilon, XiEpsilon};
pub use spec::{compile, Compiled, Formula, LanguageSpec, Setting};
pub use summary::{first_primes, pad_distances, prime_pool_size, LogLog, ModPrime, PathSummary, QueryMode};

/// One sliding-window algorithm instance for a fixed window size.
pub trait SlidingWindow: Send {
    /// Consumes one stream symbol.
    fn step(&mut self, a: Symbol);
    /// Answers whether the current window belongs to the language.
    fn query(&self) -> bool;
    /// Encoding length of the current state in bits.
    fn space_bits(&self) -> u64;
}

/// Metadata emitted with every instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmInfo {
    pub algorithm: String,
    pub n: usize,
    pub params: BTreeMap<String, serde_json::Value>,
    pub space_bits_max: u64,
    #[serde(default)]
    pub randomized: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<AlgorithmInfo>,
}

impl AlgorithmInfo {
    pub fn new(algorithm: &str, n: usize, space_bits_max: u64) -> Self {
        Self {
            algorithm: algorithm.to_string(),
            n,
            params: BTreeMap::new(),
            space_bits_max,
            randomized: false,
            notes: Vec::new(),
            children: Vec::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<serde_json::Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn randomized(mut self, r: bool) -> Self {
        self.randomized = r;
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("metadata serialization cannot fail")
    }
}

type MakeFn = dyn Fn(u64) -> Box<dyn SlidingWindow> + Send + Sync;

/// Builds instances of one algorithm for one window size.
#[derive(Clone)]
pub struct Factory {
    info: AlgorithmInfo,
    make: Arc<MakeFn>,
}

impl Factory {
    pub fn new(info: AlgorithmInfo, make: impl Fn(u64) -> Box<dyn SlidingWindow> + Send + Sync + 'static) -> Self {
        Self {
            info,
            make: Arc::new(make),
        }
    }

    pub fn info(&self) -> &AlgorithmInfo {
        &self.info
    }

    pub fn n(&self) -> usize {
        self.info.n
    }

    pub fn is_randomized(&self) -> bool {
        self.info.randomized
    }

    pub fn instance(&self, seed: u64) -> Box<dyn SlidingWindow> {
        (self.make)(seed)
    }

    pub(crate) fn with_info(mut self, info: AlgorithmInfo) -> Self {
        self.info = info;
        self
    }
}

impl fmt::Debug for Factory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Factory")
            .field("info", &self.info)
            .finish_non_exhaustive()
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SwaError {
    #[error("probability {0} is outside [0, 1]")]
    InvalidProbability(f64),
    #[error("failure ratio {0} must lie in (0, 1]")]
    InvalidFailureRatio(f64),
    #[error("window size must be at least {min}, got {n}")]
    WindowTooSmall { n: usize, min: usize },
    #[error("language is not suffix-free")]
    NotSuffixFree,
    #[error("language is not a left ideal")]
    NotLeftIdeal,
    #[error("language is empty")]
    EmptyLanguage,
    #[error("child error {eps} must be below 1/2 and above the target {target}")]
    BadAmplification { eps: f64, target: f64 },
    #[error("space budget must be at least one bit")]
    ZeroBudget,
    #[error("combination needs at least one child")]
    NoChildren,
    #[error("children disagree on the window size")]
    WindowMismatch,
    #[error("leaf {leaf} does not have the structure of tag {tag}")]
    TagMismatch { leaf: usize, tag: String },
    #[error("leaves use different alphabets")]
    AlphabetMismatch,
    #[error("invalid language spec: {0}")]
    Spec(String),
    #[error("invalid setting {0:?}; expected det-zero, rand-zero, det-failure=PHI or rand-failure=PHI")]
    Setting(String),
    #[error(transparent)]
    Automata(#[from] AutomataError),
}

/// Derives the seed of sub-run `index` from `master` (SplitMix64 mixing).
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// `⌈log2 x⌉` for `x ≥ 1`, and 0 for `x ≤ 1`.
pub fn ceil_log2(x: u64) -> u64 {
    if x <= 1 {
        0
    } else {
        u64::from(64 - (x - 1).leading_zeros())
    }
}

#[cfg(test)]
mod tests;
