use std::io::Write;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::automata::{last_n, Dfa, Symbol};
use crate::swa::{derive_seed, AlgorithmInfo, ExactOracle, Factory, SlidingWindow};

/// How trials are scheduled. Results do not depend on the choice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    /// Rayon's global pool. Without the `parallel` feature this runs
    /// sequentially, as does `ParallelJobs`.
    #[default]
    Parallel,
    /// A dedicated pool with this many workers.
    ParallelJobs(usize),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrialConfig {
    pub trials: u64,
    /// Error threshold `ε` used for the failure ratio.
    pub threshold: f64,
    pub seed: u64,
    pub execution: Execution,
}

impl TrialConfig {
    pub fn new(trials: u64, threshold: f64, seed: u64) -> Self {
        Self {
            trials,
            threshold,
            seed,
            execution: Execution::default(),
        }
    }

    pub fn execution(mut self, execution: Execution) -> Self {
        self.execution = execution;
        self
    }
}

/// Monte Carlo estimate of per-instant errors for one algorithm on one stream.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialReport {
    pub n: usize,
    /// Stream length; instants run over `0..=m`.
    pub m: usize,
    pub trials: u64,
    pub threshold: f64,
    pub seed: u64,
    /// `ê_t`, the fraction of runs answering wrongly at instant `t`.
    pub errors: Vec<f64>,
    /// Window membership at each instant.
    pub truth: Vec<bool>,
    /// `|{t : ê_t > threshold}| / (m + 1)`.
    pub failure_ratio: f64,
    /// Fraction of runs with at least one wrong answer.
    pub strict_error: f64,
    /// Observed maximum of the state encoding over all runs and instants.
    pub space_max: u64,
    pub space_mean: f64,
    pub algorithm: AlgorithmInfo,
}

impl TrialReport {
    pub fn max_error(&self) -> f64 {
        self.errors.iter().copied().fold(0.0, f64::max)
    }

    /// Failure ratio recomputed at another threshold.
    pub fn failure_ratio_at(&self, threshold: f64) -> f64 {
        self.errors.iter().filter(|&&e| e > threshold).count() as f64 / self.errors.len() as f64
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    /// One row per instant: `t, error, truth`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), HarnessError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["t", "error", "truth"])?;
        for (t, (e, truth)) in self.errors.iter().zip(&self.truth).enumerate() {
            w.serialize((t, e, truth))?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Window membership after each prefix of `stream` (including the empty
/// one), cross-checked against direct recomputation every 100th instant.
pub fn truth_transcript(truth: &Dfa, n: usize, stream: &[Symbol]) -> Result<Vec<bool>, HarnessError> {
    if let Some(&a) = stream.iter().find(|&&a| usize::from(a) >= truth.num_symbols()) {
        return Err(HarnessError::ForeignSymbol(a));
    }
    let mut oracle = ExactOracle::new(Arc::new(truth.clone()), n);
    let mut out = Vec::with_capacity(stream.len() + 1);
    for t in 0..=stream.len() {
        if t > 0 {
            oracle.step(stream[t - 1]);
        }
        let answer = oracle.query();
        if t % 100 == 0 && answer != truth.accepts(&last_n(n, &stream[..t], truth.pad())) {
            return Err(HarnessError::OracleMismatch(t));
        }
        out.push(answer);
    }
    Ok(out)
}

#[derive(Clone, Debug)]
struct Tally {
    wrong: Vec<u64>,
    ever_wrong: u64,
    space_max: u64,
    space_sum: u64,
}

impl Tally {
    fn new(instants: usize) -> Self {
        Self {
            wrong: vec![0; instants],
            ever_wrong: 0,
            space_max: 0,
            space_sum: 0,
        }
    }

    fn run(mut self, factory: &Factory, seed: u64, stream: &[Symbol], truth: &[bool]) -> Self {
        let mut r = factory.instance(seed);
        let mut any = false;
        for t in 0..truth.len() {
            if t > 0 {
                r.step(stream[t - 1]);
            }
            if r.query() != truth[t] {
                self.wrong[t] += 1;
                any = true;
            }
            let s = r.space_bits();
            self.space_max = self.space_max.max(s);
            self.space_sum += s;
        }
        self.ever_wrong += u64::from(any);
        self
    }

    #[cfg_attr(not(feature = "parallel"), allow(dead_code))]
    fn merge(mut self, other: Self) -> Self {
        for (a, b) in self.wrong.iter_mut().zip(other.wrong) {
            *a += b;
        }
        self.ever_wrong += other.ever_wrong;
        self.space_max = self.space_max.max(other.space_max);
        self.space_sum += other.space_sum;
        self
    }
}

fn tally_sequential(factory: &Factory, stream: &[Symbol], truth: &[bool], cfg: &TrialConfig) -> Tally {
    (0..cfg.trials).fold(Tally::new(truth.len()), |acc, i| {
        acc.run(factory, derive_seed(cfg.seed, i), stream, truth)
    })
}

#[cfg(feature = "parallel")]
fn tally_parallel(factory: &Factory, stream: &[Symbol], truth: &[bool], cfg: &TrialConfig) -> Tally {
    use rayon::prelude::*;
    (0..cfg.trials)
        .into_par_iter()
        .fold(
            || Tally::new(truth.len()),
            |acc, i| acc.run(factory, derive_seed(cfg.seed, i), stream, truth),
        )
        .reduce(|| Tally::new(truth.len()), Tally::merge)
}

fn tally(factory: &Factory, stream: &[Symbol], truth: &[bool], cfg: &TrialConfig) -> Result<Tally, HarnessError> {
    match cfg.execution {
        Execution::Sequential => Ok(tally_sequential(factory, stream, truth, cfg)),
        #[cfg(feature = "parallel")]
        Execution::Parallel => Ok(tally_parallel(factory, stream, truth, cfg)),
        #[cfg(feature = "parallel")]
        Execution::ParallelJobs(jobs) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build()
                .map_err(|e| HarnessError::ThreadPool(e.to_string()))?;
            Ok(pool.install(|| tally_parallel(factory, stream, truth, cfg)))
        }
        #[cfg(not(feature = "parallel"))]
        Execution::Parallel | Execution::ParallelJobs(_) => Ok(tally_sequential(factory, stream, truth, cfg)),
    }
}

/// Runs `cfg.trials` independent instances of `factory` over `stream` and
/// compares every answer with the exact window membership in `truth`.
///
/// Instance `i` uses seed `derive_seed(cfg.seed, i)`, so the report depends
/// only on the inputs, never on scheduling.
pub fn estimate_errors(
    factory: &Factory,
    truth: &Dfa,
    stream: &[Symbol],
    cfg: &TrialConfig,
) -> Result<TrialReport, HarnessError> {
    if cfg.trials == 0 {
        return Err(HarnessError::NoTrials);
    }
    let n = factory.n();
    let expected = truth_transcript(truth, n, stream)?;
    let tally = tally(factory, stream, &expected, cfg)?;
    let t = cfg.trials as f64;
    let errors: Vec<f64> = tally.wrong.iter().map(|&w| w as f64 / t).collect();
    let failures = errors.iter().filter(|&&e| e > cfg.threshold).count();
    let instants = expected.len();
    Ok(TrialReport {
        n,
        m: stream.len(),
        trials: cfg.trials,
        threshold: cfg.threshold,
        seed: cfg.seed,
        failure_ratio: failures as f64 / instants as f64,
        strict_error: tally.ever_wrong as f64 / t,
        space_max: tally.space_max,
        space_mean: tally.space_sum as f64 / (t * instants as f64),
        errors,
        truth: expected,
        algorithm: factory.info().clone(),
    })
}
