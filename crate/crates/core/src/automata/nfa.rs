use std::collections::{HashMap, VecDeque};

use super::{Alphabet, AutomataError, Dfa, StateId, Symbol};

/// Nondeterministic automaton without epsilon moves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nfa {
    alphabet: Alphabet,
    state_count: usize,
    initials: Vec<StateId>,
    finals: Vec<bool>,
    /// `succ[q * k + a]` lists the `a`-successors of `q`.
    succ: Vec<Vec<StateId>>,
    pad: Symbol,
}

impl Nfa {
    pub fn new(
        alphabet: Alphabet,
        state_count: usize,
        initials: &[StateId],
        finals: &[StateId],
        transitions: &[(StateId, Symbol, StateId)],
    ) -> Result<Self, AutomataError> {
        let k = alphabet.len();
        let check = |q: StateId| {
            if q < state_count {
                Ok(())
            } else {
                Err(AutomataError::StateOutOfRange(q))
            }
        };
        let mut fin = vec![false; state_count];
        for &f in finals {
            check(f)?;
            fin[f] = true;
        }
        for &i in initials {
            check(i)?;
        }
        let mut succ = vec![Vec::new(); state_count * k];
        for &(p, a, q) in transitions {
            check(p)?;
            check(q)?;
            if usize::from(a) >= k {
                return Err(AutomataError::ForeignSymbol(a));
            }
            let cell = &mut succ[p * k + usize::from(a)];
            if !cell.contains(&q) {
                cell.push(q);
            }
        }
        let mut initials = initials.to_vec();
        initials.sort_unstable();
        initials.dedup();
        Ok(Self {
            alphabet,
            state_count,
            initials,
            finals: fin,
            succ,
            pad: 0,
        })
    }

    pub fn with_pad(mut self, pad: Symbol) -> Self {
        assert!(usize::from(pad) < self.alphabet.len(), "pad symbol outside alphabet");
        self.pad = pad;
        self
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.state_count
    }

    pub fn initials(&self) -> &[StateId] {
        &self.initials
    }

    pub fn is_final(&self, q: StateId) -> bool {
        self.finals[q]
    }

    pub fn successors(&self, q: StateId, a: Symbol) -> &[StateId] {
        &self.succ[q * self.alphabet.len() + usize::from(a)]
    }

    /// All transitions as `(from, symbol, to)` triples.
    pub fn transitions(&self) -> impl Iterator<Item = (StateId, Symbol, StateId)> + '_ {
        let k = self.alphabet.len();
        self.succ.iter().enumerate().flat_map(move |(i, ts)| {
            let (p, a) = (i / k, (i % k) as Symbol);
            ts.iter().map(move |&q| (p, a, q))
        })
    }

    pub fn accepts(&self, word: &[Symbol]) -> bool {
        let mut cur = vec![false; self.state_count];
        for &i in &self.initials {
            cur[i] = true;
        }
        for &a in word {
            let mut next = vec![false; self.state_count];
            for q in (0..self.state_count).filter(|&q| cur[q]) {
                for &t in self.successors(q, a) {
                    next[t] = true;
                }
            }
            cur = next;
        }
        (0..self.state_count).any(|q| cur[q] && self.finals[q])
    }

    /// The same language viewed as an NFA.
    pub fn from_dfa(dfa: &Dfa) -> Self {
        let k = dfa.num_symbols();
        let mut succ = vec![Vec::new(); dfa.state_count() * k];
        for q in 0..dfa.state_count() {
            for (a, &t) in dfa.row(q).iter().enumerate() {
                succ[q * k + a].push(t);
            }
        }
        Self {
            alphabet: dfa.alphabet().clone(),
            state_count: dfa.state_count(),
            initials: vec![dfa.initial()],
            finals: dfa.finals().to_vec(),
            succ,
            pad: dfa.pad(),
        }
    }

    /// Edge-reversed automaton: initial and final roles swap.
    pub fn reversed(&self) -> Self {
        let k = self.alphabet.len();
        let mut succ = vec![Vec::new(); self.state_count * k];
        for (p, a, q) in self.transitions() {
            succ[q * k + usize::from(a)].push(p);
        }
        let initials = (0..self.state_count).filter(|&q| self.finals[q]).collect();
        let mut finals = vec![false; self.state_count];
        for &i in &self.initials {
            finals[i] = true;
        }
        Self {
            alphabet: self.alphabet.clone(),
            state_count: self.state_count,
            initials,
            finals,
            succ,
            pad: self.pad,
        }
    }

    /// Subset construction over reachable subsets. The empty subset, if
    /// reached, becomes the sink.
    pub fn determinize(&self) -> Dfa {
        let k = self.alphabet.len();
        let mut index: HashMap<Vec<StateId>, StateId> = HashMap::new();
        let mut subsets: Vec<Vec<StateId>> = Vec::new();
        let mut delta: Vec<StateId> = Vec::new();
        let mut queue = VecDeque::new();

        let start = self.initials.clone();
        index.insert(start.clone(), 0);
        subsets.push(start);
        queue.push_back(0);
        let mut mark = vec![false; self.state_count];
        while let Some(id) = queue.pop_front() {
            let row_base = id * k;
            if delta.len() < row_base + k {
                delta.resize(row_base + k, 0);
            }
            for a in self.alphabet.indices() {
                let mut next = Vec::new();
                for &q in &subsets[id] {
                    for &t in self.successors(q, a) {
                        if !mark[t] {
                            mark[t] = true;
                            next.push(t);
                        }
                    }
                }
                for &t in &next {
                    mark[t] = false;
                }
                next.sort_unstable();
                let target = match index.get(&next) {
                    Some(&t) => t,
                    None => {
                        let t = subsets.len();
                        index.insert(next.clone(), t);
                        subsets.push(next);
                        queue.push_back(t);
                        t
                    }
                };
                delta[row_base + usize::from(a)] = target;
            }
        }
        delta.resize(subsets.len() * k, 0);
        let finals = subsets.iter().map(|s| s.iter().any(|&q| self.finals[q])).collect();
        Dfa::from_parts(self.alphabet.clone(), 0, finals, delta, self.pad)
    }
}
