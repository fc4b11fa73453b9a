use std::sync::Arc;

use super::{ceil_log2, SlidingWindow};
use crate::automata::{Dfa, StateId, Symbol};

/// Exact window membership: keeps the last `n` symbols.
///
/// The window is a two-stack queue whose entries carry composed transition
/// functions, so a step costs amortized `O(|Q|)` and a query `O(1)`.
#[derive(Clone, Debug)]
pub struct ExactOracle {
    dfa: Arc<Dfa>,
    n: usize,
    /// Oldest symbol on top. Entry `i` of `front_fns` maps a state to the
    /// state reached after reading `front[i]` and everything newer in front.
    front: Vec<Symbol>,
    front_fns: Vec<StateId>,
    back: Vec<Symbol>,
    back_fn: Vec<StateId>,
    symbol_bits: u64,
}

impl ExactOracle {
    pub fn new(dfa_for_l: Arc<Dfa>, n: usize) -> Self {
        let states = dfa_for_l.state_count();
        let symbol_bits = ceil_log2(dfa_for_l.num_symbols() as u64);
        let mut o = Self {
            n,
            front: Vec::with_capacity(n),
            front_fns: Vec::with_capacity(n * states),
            back: Vec::with_capacity(n),
            back_fn: (0..states).collect(),
            symbol_bits,
            dfa: dfa_for_l,
        };
        for _ in 0..n {
            o.push(o.dfa.pad());
        }
        o
    }

    fn push(&mut self, a: Symbol) {
        self.back.push(a);
        for q in self.back_fn.iter_mut() {
            *q = self.dfa.step(*q, a);
        }
    }

    fn flip(&mut self) {
        let states = self.dfa.state_count();
        self.front_fns.clear();
        let mut next: Vec<StateId> = (0..states).collect();
        for &a in self.back.iter().rev() {
            let f: Vec<StateId> = (0..states).map(|q| next[self.dfa.step(q, a)]).collect();
            self.front.push(a);
            self.front_fns.extend_from_slice(&f);
            next = f;
        }
        self.back.clear();
        for (q, t) in self.back_fn.iter_mut().enumerate() {
            *t = q;
        }
    }

    fn pop(&mut self) {
        if self.front.is_empty() {
            self.flip();
        }
        self.front.pop();
        let len = self.front_fns.len() - self.dfa.state_count();
        self.front_fns.truncate(len);
    }

    /// State reached by reading the current window from the initial state.
    pub fn window_state(&self) -> StateId {
        let states = self.dfa.state_count();
        let q = if self.front.is_empty() {
            self.dfa.initial()
        } else {
            self.front_fns[self.front_fns.len() - states + self.dfa.initial()]
        };
        self.back_fn[q]
    }

    /// The current window, oldest symbol first.
    pub fn window(&self) -> Vec<Symbol> {
        self.front.iter().rev().chain(self.back.iter()).copied().collect()
    }
}

impl SlidingWindow for ExactOracle {
    fn step(&mut self, a: Symbol) {
        if self.n == 0 {
            return;
        }
        self.push(a);
        self.pop();
    }

    fn query(&self) -> bool {
        self.dfa.is_final(self.window_state())
    }

    fn space_bits(&self) -> u64 {
        self.n as u64 * self.symbol_bits
    }
}

/// Runs a DFA over the padded stream from a fixed start state.
#[derive(Clone, Debug)]
pub struct DfaRunner {
    dfa: Arc<Dfa>,
    state: StateId,
    bits: u64,
}

impl DfaRunner {
    pub fn new(dfa: Arc<Dfa>, start: StateId) -> Self {
        let bits = ceil_log2(dfa.state_count() as u64);
        Self {
            dfa,
            state: start,
            bits,
        }
    }

    pub fn state(&self) -> StateId {
        self.state
    }
}

impl SlidingWindow for DfaRunner {
    fn step(&mut self, a: Symbol) {
        self.state = self.dfa.step(self.state, a);
    }

    fn query(&self) -> bool {
        self.dfa.is_final(self.state)
    }

    fn space_bits(&self) -> u64 {
        self.bits
    }
}

/// Ignores the stream and always gives the same answer.
#[derive(Clone, Copy, Debug)]
pub struct Constant(pub bool);

impl SlidingWindow for Constant {
    fn step(&mut self, _: Symbol) {}

    fn query(&self) -> bool {
        self.0
    }

    fn space_bits(&self) -> u64 {
        0
    }
}
