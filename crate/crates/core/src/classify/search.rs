//! Structural searches on a DFA. All functions here work on whatever automaton
//! they are given; classification feeds them the minimal DFA of the reversal.

use crate::automata::product::{Letters, ProductGraph};
use crate::automata::{sccs, Dfa, StateId, Symbol};

fn inconsistent(dfa: &Dfa, p: StateId, q: StateId) -> bool {
    dfa.is_final(p) != dfa.is_final(q)
}

/// Shortest word from `from` to `to`, ties by alphabet order.
pub fn path_between(dfa: &Dfa, from: StateId, to: StateId) -> Option<Vec<Symbol>> {
    ProductGraph::new(dfa, 1, Letters::Same)
        .search(&[from], 0, |t| t[0] == to)
        .map(|p| p.words[0].clone())
}

/// A nonempty `x` with `δ(q0,x) = δ(q,x) = q`, if one exists.
pub fn idempotent_word(dfa: &Dfa, q: StateId) -> Option<Vec<Symbol>> {
    ProductGraph::new(dfa, 2, Letters::Same)
        .search(&[dfa.initial(), q], 1, |t| t[0] == q && t[1] == q)
        .map(|p| p.words[0].clone())
}

/// Positively idempotent states with a witnessing word each, ascending.
pub fn positively_idempotent_states(dfa: &Dfa) -> Vec<(StateId, Vec<Symbol>)> {
    (0..dfa.state_count())
        .filter_map(|q| idempotent_word(dfa, q).map(|x| (q, x)))
        .collect()
}

/// Words `(x, y, z)` of equal positive length with `δ(p,x) = p`, `δ(p,y) = q`
/// and `δ(q,z) = q`.
pub fn synchronizing_words(dfa: &Dfa, p: StateId, q: StateId) -> Option<[Vec<Symbol>; 3]> {
    ProductGraph::new(dfa, 3, Letters::Independent)
        .search(&[p, p, q], 1, |t| t == [p, q, q])
        .map(|path| {
            let [x, y, z]: [Vec<Symbol>; 3] = path.words.try_into().expect("three components");
            [x, y, z]
        })
}

/// All synchronized pairs, in lexicographic order.
pub fn synchronized_pairs(dfa: &Dfa) -> Vec<(StateId, StateId)> {
    let n = dfa.state_count();
    let nontrivial = sccs(dfa).nontrivial;
    let mut out = Vec::new();
    for p in (0..n).filter(|&p| nontrivial[p]) {
        let reach = dfa.reachable_from(p);
        for q in (0..n).filter(|&q| reach[q]) {
            if synchronizing_words(dfa, p, q).is_some() {
                out.push((p, q));
            }
        }
    }
    out
}

/// F-inconsistent pair reachable from `(anchor, anchor)` by equal-length
/// words. Returns `(p, q, v_p, v_q)` with `v_p` leading to the non-final state
/// `p` and `v_q` to the final state `q`.
pub fn equal_length_inconsistent_pair(
    dfa: &Dfa,
    anchor: StateId,
) -> Option<(StateId, StateId, Vec<Symbol>, Vec<Symbol>)> {
    inconsistent_from(dfa, anchor, None)
}

fn inconsistent_from(
    dfa: &Dfa,
    anchor: StateId,
    within: Option<&[bool]>,
) -> Option<(StateId, StateId, Vec<Symbol>, Vec<Symbol>)> {
    let mut g = ProductGraph::new(dfa, 2, Letters::Independent);
    if let Some(c) = within {
        g = g.restricted_to(c);
    }
    let path = g.search(&[anchor, anchor], 0, |t| inconsistent(dfa, t[0], t[1]))?;
    let [w0, w1]: [Vec<Symbol>; 2] = path.words.try_into().expect("two components");
    let (p, q) = (path.end[0], path.end[1]);
    if dfa.is_final(p) {
        Some((q, p, w1, w0))
    } else {
        Some((p, q, w0, w1))
    }
}

/// Evidence that an SCC is not well-behaved: from `state` (in the SCC), the
/// equal-length words `to_reject`/`to_accept` stay in the SCC and end in a
/// non-final/final state respectively.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SccViolation {
    pub component: Vec<StateId>,
    pub state: StateId,
    pub reject_end: StateId,
    pub accept_end: StateId,
    pub to_reject: Vec<Symbol>,
    pub to_accept: Vec<Symbol>,
}

fn scc_violation(dfa: &Dfa, component: &[StateId]) -> Option<SccViolation> {
    let mut member = vec![false; dfa.state_count()];
    for &q in component {
        member[q] = true;
    }
    component.iter().find_map(|&q| {
        inconsistent_from(dfa, q, Some(&member)).map(|(r0, r1, v0, v1)| SccViolation {
            component: component.to_vec(),
            state: q,
            reject_end: r0,
            accept_end: r1,
            to_reject: v0,
            to_accept: v1,
        })
    })
}

/// Checks every SCC reachable from some state in `roots`.
fn first_violation_from(dfa: &Dfa, roots: &[StateId]) -> Option<SccViolation> {
    let s = sccs(dfa);
    let mut reach = vec![false; dfa.state_count()];
    for &r in roots {
        for (q, hit) in dfa.reachable_from(r).into_iter().enumerate() {
            reach[q] |= hit;
        }
    }
    // Visit components in order of their smallest state for stable output.
    let mut comps: Vec<&Vec<StateId>> = s.components.iter().filter(|c| reach[c[0]]).collect();
    comps.sort_by_key(|c| c[0]);
    comps.into_iter().find_map(|c| scc_violation(dfa, c))
}

/// True iff every SCC reachable from the initial state is well-behaved.
pub fn well_behaved(dfa: &Dfa) -> (bool, Option<SccViolation>) {
    let v = first_violation_from(dfa, &[dfa.initial()]);
    (v.is_none(), v)
}

/// Evidence against idempotent well-behavedness: a positively idempotent state
/// with its word, and a violating SCC reachable from it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdempotentViolation {
    pub idempotent: StateId,
    pub idempotent_word: Vec<Symbol>,
    pub violation: SccViolation,
}

pub fn idempotently_well_behaved(dfa: &Dfa) -> (bool, Option<IdempotentViolation>) {
    for (p, x) in positively_idempotent_states(dfa) {
        if let Some(v) = first_violation_from(dfa, &[p]) {
            return (
                false,
                Some(IdempotentViolation {
                    idempotent: p,
                    idempotent_word: x,
                    violation: v,
                }),
            );
        }
    }
    (true, None)
}

/// An F-inconsistent synchronized pair `(p, q)` with its words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyncViolation {
    pub p: StateId,
    pub q: StateId,
    pub x: Vec<Symbol>,
    pub y: Vec<Symbol>,
    pub z: Vec<Symbol>,
}

fn inconsistent_sync_pair_from(dfa: &Dfa, root: StateId) -> Option<SyncViolation> {
    let reach = dfa.reachable_from(root);
    let n = dfa.state_count();
    for p in (0..n).filter(|&p| reach[p]) {
        let from_p = dfa.reachable_from(p);
        for q in (0..n).filter(|&q| from_p[q] && inconsistent(dfa, p, q)) {
            if let Some([x, y, z]) = synchronizing_words(dfa, p, q) {
                return Some(SyncViolation { p, q, x, y, z });
            }
        }
    }
    None
}

/// Every synchronized pair reachable from the initial state is F-consistent.
pub fn sync_pairs_consistent(dfa: &Dfa) -> (bool, Option<SyncViolation>) {
    let v = inconsistent_sync_pair_from(dfa, dfa.initial());
    (v.is_none(), v)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdempotentSyncViolation {
    pub idempotent: StateId,
    pub idempotent_word: Vec<Symbol>,
    pub sync: SyncViolation,
}

/// Every synchronized pair reachable from a positively idempotent state is
/// F-consistent.
pub fn idempotent_sync_pairs_consistent(dfa: &Dfa) -> (bool, Option<IdempotentSyncViolation>) {
    for (p, x) in positively_idempotent_states(dfa) {
        if let Some(sync) = inconsistent_sync_pair_from(dfa, p) {
            return (
                false,
                Some(IdempotentSyncViolation {
                    idempotent: p,
                    idempotent_word: x,
                    sync,
                }),
            );
        }
    }
    (true, None)
}

/// Loop-plus-partner pattern: `q1` reachable, `δ(q1,x) = q1`, `δ(q1,y) = q2`,
/// `|x| = |y| ≥ 1`, `(q1, q2)` F-inconsistent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoopPartner {
    pub q1: StateId,
    pub q2: StateId,
    pub x: Vec<Symbol>,
    pub y: Vec<Symbol>,
}

pub fn loop_partner_pattern(dfa: &Dfa) -> Option<LoopPartner> {
    let reach = dfa.reachable();
    let g = ProductGraph::new(dfa, 2, Letters::Independent);
    (0..dfa.state_count()).filter(|&q| reach[q]).find_map(|q1| {
        g.search(&[q1, q1], 1, |t| t[0] == q1 && inconsistent(dfa, q1, t[1]))
            .map(|path| {
                let [x, y]: [Vec<Symbol>; 2] = path.words.try_into().expect("two components");
                LoopPartner {
                    q1,
                    q2: path.end[1],
                    x,
                    y,
                }
            })
    })
}
