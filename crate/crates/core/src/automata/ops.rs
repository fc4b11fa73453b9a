use std::collections::{HashMap, VecDeque};

use super::{AutomataError, Dfa, Nfa, StateId, Symbol};

/// Boolean operations accepted by [`combine`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BoolOp {
    Union,
    Intersection,
    Complement,
    Difference,
}

impl BoolOp {
    fn apply(self, a: bool, b: bool) -> bool {
        match self {
            BoolOp::Union => a || b,
            BoolOp::Intersection => a && b,
            BoolOp::Complement => !a,
            BoolOp::Difference => a && !b,
        }
    }
}

/// Automaton for the reversed language. Keeps the pad symbol.
pub fn reverse(dfa: &Dfa) -> Dfa {
    Nfa::from_dfa(dfa).reversed().determinize()
}

/// Minimal complete DFA, states numbered in BFS order from the initial state
/// (symbols explored in alphabet order).
pub fn minimize(dfa: &Dfa) -> Dfa {
    let k = dfa.num_symbols();
    let reach = dfa.reachable();
    let live: Vec<StateId> = (0..dfa.state_count()).filter(|&q| reach[q]).collect();

    // Moore refinement on reachable states.
    let mut class = vec![usize::MAX; dfa.state_count()];
    for &q in &live {
        class[q] = usize::from(dfa.is_final(q));
    }
    let mut count = {
        let f = live.iter().filter(|&&q| dfa.is_final(q)).count();
        usize::from(f > 0) + usize::from(f < live.len())
    };
    loop {
        let mut sigs: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut next = vec![usize::MAX; dfa.state_count()];
        for &q in &live {
            let mut sig = Vec::with_capacity(k + 1);
            sig.push(class[q]);
            sig.extend(dfa.row(q).iter().map(|&t| class[t]));
            let len = sigs.len();
            next[q] = *sigs.entry(sig).or_insert(len);
        }
        let new_count = sigs.len();
        class = next;
        if new_count == count {
            break;
        }
        count = new_count;
    }

    // Canonical renumbering.
    let mut rep = vec![usize::MAX; count];
    for &q in &live {
        if rep[class[q]] == usize::MAX {
            rep[class[q]] = q;
        }
    }
    let mut order = vec![usize::MAX; count];
    let mut queue = VecDeque::from([class[dfa.initial()]]);
    order[class[dfa.initial()]] = 0;
    let mut next_id = 1;
    let mut delta = vec![0; count * k];
    let mut finals = vec![false; count];
    while let Some(c) = queue.pop_front() {
        let q = rep[c];
        let id = order[c];
        finals[id] = dfa.is_final(q);
        for a in dfa.alphabet().indices() {
            let tc = class[dfa.step(q, a)];
            if order[tc] == usize::MAX {
                order[tc] = next_id;
                next_id += 1;
                queue.push_back(tc);
            }
            delta[id * k + usize::from(a)] = order[tc];
        }
    }
    Dfa::from_parts(dfa.alphabet().clone(), 0, finals, delta, dfa.pad())
}

/// Product construction over reachable pairs. `b` is required for the
/// binary operations and ignored by `Complement`.
pub fn combine(op: BoolOp, a: &Dfa, b: Option<&Dfa>) -> Result<Dfa, AutomataError> {
    if op == BoolOp::Complement {
        return Ok(a.complemented());
    }
    let b = b.ok_or(AutomataError::MissingOperand)?;
    product(a, b, |x, y| op.apply(x, y))
}

fn product(a: &Dfa, b: &Dfa, accept: impl Fn(bool, bool) -> bool) -> Result<Dfa, AutomataError> {
    if a.alphabet() != b.alphabet() {
        return Err(AutomataError::AlphabetMismatch);
    }
    let k = a.num_symbols();
    let mut index: HashMap<(StateId, StateId), StateId> = HashMap::new();
    let mut pairs = vec![(a.initial(), b.initial())];
    index.insert(pairs[0], 0);
    let mut delta = Vec::new();
    let mut i = 0;
    while i < pairs.len() {
        let (p, q) = pairs[i];
        for s in a.alphabet().indices() {
            let t = (a.step(p, s), b.step(q, s));
            let id = *index.entry(t).or_insert_with(|| {
                pairs.push(t);
                pairs.len() - 1
            });
            delta.push(id);
        }
        i += 1;
    }
    debug_assert_eq!(delta.len(), pairs.len() * k);
    let finals = pairs
        .iter()
        .map(|&(p, q)| accept(a.is_final(p), b.is_final(q)))
        .collect();
    Ok(Dfa::from_parts(a.alphabet().clone(), 0, finals, delta, a.pad()))
}

/// Shortest word on which `a` and `b` disagree, if any.
pub fn distinguishing_word(a: &Dfa, b: &Dfa) -> Result<Option<Vec<Symbol>>, AutomataError> {
    Ok(product(a, b, |x, y| x != y)?.shortest_accepted())
}

pub fn equivalent(a: &Dfa, b: &Dfa) -> Result<bool, AutomataError> {
    Ok(distinguishing_word(a, b)?.is_none())
}

/// `L(a) ⊆ L(b)`.
pub fn is_subset(a: &Dfa, b: &Dfa) -> Result<bool, AutomataError> {
    Ok(combine(BoolOp::Difference, a, Some(b))?.is_empty_language())
}
