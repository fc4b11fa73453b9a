//! Breadth-first search in products of a DFA with itself.
//!
//! A node is a tuple of states. With independent letters, each component reads
//! its own symbol per step (so all component words have equal length); with
//! same letters, every component reads the same symbol.

use std::collections::VecDeque;

use super::{Dfa, StateId, Symbol};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Letters {
    Independent,
    Same,
}

/// Path found by [`ProductGraph::search`]: the tuple reached and one word per
/// component, all of the same length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductPath {
    pub end: Vec<StateId>,
    pub words: Vec<Vec<Symbol>>,
}

#[derive(Clone, Copy)]
enum Parent {
    Unseen,
    Root(usize),
    Node(usize, usize),
}

pub struct ProductGraph<'a> {
    dfa: &'a Dfa,
    arity: usize,
    letters: Letters,
    allowed: Option<&'a [bool]>,
}

impl<'a> ProductGraph<'a> {
    pub fn new(dfa: &'a Dfa, arity: usize, letters: Letters) -> Self {
        assert!(arity >= 1);
        Self {
            dfa,
            arity,
            letters,
            allowed: None,
        }
    }

    /// Only tuples whose components all satisfy `allowed` are visited.
    pub fn restricted_to(mut self, allowed: &'a [bool]) -> Self {
        self.allowed = Some(allowed);
        self
    }

    fn node_count(&self) -> usize {
        self.dfa.state_count().pow(self.arity as u32)
    }

    fn encode(&self, states: &[StateId]) -> usize {
        let n = self.dfa.state_count();
        states.iter().fold(0, |acc, &q| acc * n + q)
    }

    fn decode(&self, mut id: usize, out: &mut [StateId]) {
        let n = self.dfa.state_count();
        for slot in out.iter_mut().rev() {
            *slot = id % n;
            id /= n;
        }
    }

    fn label_count(&self) -> usize {
        let k = self.dfa.num_symbols();
        match self.letters {
            Letters::Same => k,
            Letters::Independent => k.pow(self.arity as u32),
        }
    }

    fn decode_label(&self, mut label: usize, out: &mut [Symbol]) {
        let k = self.dfa.num_symbols();
        match self.letters {
            Letters::Same => out.iter_mut().for_each(|s| *s = label as Symbol),
            Letters::Independent => {
                for slot in out.iter_mut().rev() {
                    *slot = (label % k) as Symbol;
                    label /= k;
                }
            }
        }
    }

    fn allowed(&self, states: &[StateId]) -> bool {
        self.allowed.is_none_or(|ok| states.iter().all(|&q| ok[q]))
    }

    /// Shortest path from `start` to a tuple satisfying `target`, using at
    /// least `min_steps` (0 or 1) steps. Labels are explored in lexicographic
    /// symbol order, so ties resolve by alphabet order.
    pub fn search(
        &self,
        start: &[StateId],
        min_steps: usize,
        mut target: impl FnMut(&[StateId]) -> bool,
    ) -> Option<ProductPath> {
        assert_eq!(start.len(), self.arity);
        assert!(min_steps <= 1);
        if min_steps == 0 && target(start) {
            return Some(ProductPath {
                end: start.to_vec(),
                words: vec![Vec::new(); self.arity],
            });
        }
        let mut parent = vec![Parent::Unseen; self.node_count()];
        let mut queue = VecDeque::new();
        let mut cur = vec![0; self.arity];
        let mut next = vec![0; self.arity];
        let mut syms = vec![0 as Symbol; self.arity];
        let labels = self.label_count();

        let mut expand = |from: Option<usize>,
                          states: &[StateId],
                          parent: &mut [Parent],
                          queue: &mut VecDeque<usize>,
                          next: &mut [StateId],
                          syms: &mut [Symbol]|
         -> Option<usize> {
            for label in 0..labels {
                self.decode_label(label, syms);
                for i in 0..self.arity {
                    next[i] = self.dfa.step(states[i], syms[i]);
                }
                if !self.allowed(next) {
                    continue;
                }
                let id = self.encode(next);
                if !matches!(parent[id], Parent::Unseen) {
                    continue;
                }
                parent[id] = match from {
                    None => Parent::Root(label),
                    Some(p) => Parent::Node(p, label),
                };
                if target(next) {
                    return Some(id);
                }
                queue.push_back(id);
            }
            None
        };

        let mut hit = expand(None, start, &mut parent, &mut queue, &mut next, &mut syms);
        while hit.is_none() {
            let Some(id) = queue.pop_front() else { break };
            self.decode(id, &mut cur);
            hit = expand(Some(id), &cur, &mut parent, &mut queue, &mut next, &mut syms);
        }
        let end = hit?;

        let mut labels_rev = Vec::new();
        let mut at = end;
        loop {
            match parent[at] {
                Parent::Root(l) => {
                    labels_rev.push(l);
                    break;
                }
                Parent::Node(p, l) => {
                    labels_rev.push(l);
                    at = p;
                }
                Parent::Unseen => unreachable!("path reconstruction left the search tree"),
            }
        }
        let mut words = vec![Vec::with_capacity(labels_rev.len()); self.arity];
        for &l in labels_rev.iter().rev() {
            self.decode_label(l, &mut syms);
            for (w, &s) in words.iter_mut().zip(&syms) {
                w.push(s);
            }
        }
        let mut end_states = vec![0; self.arity];
        self.decode(end, &mut end_states);
        Some(ProductPath { end: end_states, words })
    }

    /// Every tuple reachable from `start` in at least `min_steps` steps.
    pub fn reachable(&self, start: &[StateId], min_steps: usize) -> Vec<Vec<StateId>> {
        let mut found = Vec::new();
        self.search(start, min_steps, |t| {
            found.push(t.to_vec());
            false
        });
        found
    }
}
