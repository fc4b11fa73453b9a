use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Geometric};

use super::{pad_distances, SlidingWindow, SwaError};
use crate::automata::{Dfa, StateId, Symbol};

/// One Boolean flag per state; a non-final flag is cleared with probability
/// `β` per step and otherwise copies the flag of its successor. Accepts iff
/// the flag of the initial state is set, which happens with probability
/// `(1 - β)^{ℓ_w(q0)}`.
#[derive(Clone, Debug)]
pub struct Bernoulli {
    dfa: Arc<Dfa>,
    beta: f64,
    flags: Vec<bool>,
    scratch: Vec<bool>,
    nonfinal: Vec<StateId>,
    // Steps until each state's next clearing coin comes up. Sampling the gaps
    // geometrically gives the same joint law as one coin per state and step.
    countdown: Vec<u64>,
    gap: Option<Geometric>,
    rng: ChaCha8Rng,
}

impl Bernoulli {
    pub fn new(dfa_rev: Arc<Dfa>, beta: f64, seed: u64) -> Result<Self, SwaError> {
        if !(0.0..=1.0).contains(&beta) || beta.is_nan() {
            return Err(SwaError::InvalidProbability(beta));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let states = dfa_rev.state_count();
        let mut flags = vec![true; states];
        let nonfinal: Vec<StateId> = (0..states).filter(|&q| !dfa_rev.is_final(q)).collect();
        for (q, d) in pad_distances(&dfa_rev).into_iter().enumerate() {
            if dfa_rev.is_final(q) {
                continue;
            }
            flags[q] = match d {
                Some(l) => rng.gen_bool((1.0 - beta).powi(l as i32)),
                None => false,
            };
        }
        let gap = (beta > 0.0).then(|| Geometric::new(beta).expect("beta checked above"));
        let countdown = match &gap {
            Some(g) => (0..states).map(|_| g.sample(&mut rng)).collect(),
            None => vec![u64::MAX; states],
        };
        Ok(Self {
            scratch: flags.clone(),
            flags,
            dfa: dfa_rev,
            beta,
            nonfinal,
            countdown,
            gap,
            rng,
        })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn flags(&self) -> &[bool] {
        &self.flags
    }
}

impl SlidingWindow for Bernoulli {
    fn step(&mut self, a: Symbol) {
        for &q in &self.nonfinal {
            let cleared = match &self.gap {
                Some(g) if self.countdown[q] == 0 => {
                    self.countdown[q] = g.sample(&mut self.rng);
                    true
                }
                Some(_) => {
                    self.countdown[q] -= 1;
                    false
                }
                None => false,
            };
            self.scratch[q] = !cleared && self.flags[self.dfa.step(q, a)];
        }
        std::mem::swap(&mut self.flags, &mut self.scratch);
    }

    fn query(&self) -> bool {
        self.flags[self.dfa.initial()]
    }

    fn space_bits(&self) -> u64 {
        self.nonfinal.len() as u64
    }
}
