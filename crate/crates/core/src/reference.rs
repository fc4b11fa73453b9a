//! Brute-force reference implementations.
//!
//! Everything here is exponential or otherwise slow, and computed by a route
//! independent of the production algorithms. Tests compare the two.

use crate::automata::{Dfa, Regex, StateId, Symbol};

/// All words over `k` symbols with length at most `max_len`, shortest first.
pub fn words_up_to(k: usize, max_len: usize) -> Vec<Vec<Symbol>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * k);
        for w in &layer {
            for a in 0..k {
                let mut v: Vec<Symbol> = w.clone();
                v.push(a as Symbol);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// All words of exactly length `len`.
pub fn words_of_len(k: usize, len: usize) -> Vec<Vec<Symbol>> {
    words_up_to(k, len).into_iter().filter(|w| w.len() == len).collect()
}

/// Backtracking regex matcher working directly on the syntax tree.
pub fn regex_matches(r: &Regex, word: &[Symbol]) -> bool {
    ends(r, word, 0).contains(&word.len())
}

fn ends(r: &Regex, w: &[Symbol], start: usize) -> Vec<usize> {
    let mut out: Vec<usize> = match r {
        Regex::Empty => Vec::new(),
        Regex::Epsilon => vec![start],
        Regex::Symbol(a) => {
            if w.get(start) == Some(a) {
                vec![start + 1]
            } else {
                Vec::new()
            }
        }
        Regex::Concat(x, y) => ends(x, w, start).into_iter().flat_map(|m| ends(y, w, m)).collect(),
        Regex::Union(x, y) => {
            let mut v = ends(x, w, start);
            v.extend(ends(y, w, start));
            v
        }
        Regex::Star(x) | Regex::Plus(x) => {
            let mut reached = vec![false; w.len() + 1];
            let mut frontier = vec![start];
            let mut result = Vec::new();
            if matches!(r, Regex::Star(_)) {
                reached[start] = true;
                result.push(start);
            }
            while let Some(p) = frontier.pop() {
                for e in ends(x, w, p) {
                    if !reached[e] {
                        reached[e] = true;
                        result.push(e);
                        frontier.push(e);
                    }
                }
            }
            result
        }
    };
    out.sort_unstable();
    out.dedup();
    out
}

/// Prefix-freeness by scanning accepted words up to `max_len`.
pub fn prefix_free_up_to(dfa: &Dfa, max_len: usize) -> bool {
    let accepted: Vec<Vec<Symbol>> = words_up_to(dfa.num_symbols(), max_len)
        .into_iter()
        .filter(|w| dfa.accepts(w))
        .collect();
    !accepted
        .iter()
        .any(|x| accepted.iter().any(|y| y.len() > x.len() && y.starts_with(x)))
}

pub fn suffix_free_up_to(dfa: &Dfa, max_len: usize) -> bool {
    let accepted: Vec<Vec<Symbol>> = words_up_to(dfa.num_symbols(), max_len)
        .into_iter()
        .filter(|w| dfa.accepts(w))
        .collect();
    !accepted
        .iter()
        .any(|x| accepted.iter().any(|y| y.len() > x.len() && y.ends_with(x)))
}

/// `w ∈ L ⇒ aw ∈ L` for all words up to `max_len`.
pub fn left_ideal_up_to(dfa: &Dfa, max_len: usize) -> bool {
    words_up_to(dfa.num_symbols(), max_len)
        .iter()
        .filter(|w| dfa.accepts(w))
        .all(|w| {
            (0..dfa.num_symbols()).all(|a| {
                let mut v = vec![a as Symbol];
                v.extend_from_slice(w);
                dfa.accepts(&v)
            })
        })
}

pub fn length_language_up_to(dfa: &Dfa, max_len: usize) -> bool {
    (0..=max_len).all(|m| {
        let ws = words_of_len(dfa.num_symbols(), m);
        let first = dfa.accepts(&ws[0]);
        ws.iter().all(|w| dfa.accepts(w) == first)
    })
}

/// Number of Myhill-Nerode classes, approximated by residual signatures on
/// words up to `probe_len`, over prefixes up to `prefix_len`.
pub fn nerode_class_count(dfa: &Dfa, prefix_len: usize, probe_len: usize) -> usize {
    let probes = words_up_to(dfa.num_symbols(), probe_len);
    let mut sigs: Vec<Vec<bool>> = words_up_to(dfa.num_symbols(), prefix_len)
        .iter()
        .map(|u| {
            probes
                .iter()
                .map(|v| {
                    let mut w = u.clone();
                    w.extend_from_slice(v);
                    dfa.accepts(&w)
                })
                .collect()
        })
        .collect();
    sigs.sort();
    sigs.dedup();
    sigs.len()
}

type BoolMatrix = Vec<Vec<bool>>;

fn one_step(dfa: &Dfa) -> BoolMatrix {
    let n = dfa.state_count();
    let mut m = vec![vec![false; n]; n];
    for (p, row) in m.iter_mut().enumerate() {
        for &t in dfa.row(p) {
            row[t] = true;
        }
    }
    m
}

fn mat_mul(a: &BoolMatrix, b: &BoolMatrix) -> BoolMatrix {
    let n = a.len();
    let mut c = vec![vec![false; n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] {
                for j in 0..n {
                    c[i][j] |= b[k][j];
                }
            }
        }
    }
    c
}

/// Synchronized pairs via boolean matrix powers: `(p,q)` is synchronized iff
/// for some length `1 ≤ l ≤ |Q|³` there are words of length `l` looping `p`,
/// leading `p` to `q` and looping `q`.
pub fn synchronized_pairs_by_powers(dfa: &Dfa) -> Vec<(StateId, StateId)> {
    let n = dfa.state_count();
    let m = one_step(dfa);
    let mut power = m.clone();
    let mut sync = vec![vec![false; n]; n];
    for _ in 1..=n * n * n {
        for p in 0..n {
            if !power[p][p] {
                continue;
            }
            for q in 0..n {
                if power[p][q] && power[q][q] {
                    sync[p][q] = true;
                }
            }
        }
        power = mat_mul(&power, &m);
    }
    let mut out = Vec::new();
    for (p, row) in sync.iter().enumerate() {
        for (q, &s) in row.iter().enumerate() {
            if s {
                out.push((p, q));
            }
        }
    }
    out
}

/// States `q` with `δ(q0,x) = δ(q,x) = q` for some `1 ≤ |x| ≤ max_len`.
pub fn positively_idempotent_by_enumeration(dfa: &Dfa, max_len: usize) -> Vec<StateId> {
    let words = words_up_to(dfa.num_symbols(), max_len);
    (0..dfa.state_count())
        .filter(|&q| {
            words
                .iter()
                .any(|x| !x.is_empty() && dfa.run(x) == q && dfa.run_from(q, x) == q)
        })
        .collect()
}

/// Equal-length words from `anchor` to an F-inconsistent pair, searched by
/// enumeration up to `max_len`.
pub fn inconsistent_pair_by_enumeration(dfa: &Dfa, anchor: StateId, max_len: usize) -> bool {
    (0..=max_len).any(|len| {
        let ends: Vec<StateId> = words_of_len(dfa.num_symbols(), len)
            .iter()
            .map(|w| dfa.run_from(anchor, w))
            .collect();
        ends.iter().any(|&p| dfa.is_final(p)) && ends.iter().any(|&p| !dfa.is_final(p))
    })
}

/// Path-summary value `inf{k ≤ cap : δ(q, last_k(w)^R) ∈ F}` computed from the
/// padded stream directly; `None` when no such `k ≤ cap` exists.
pub fn path_summary_value(dfa_rev: &Dfa, q: StateId, stream: &[Symbol], cap: usize) -> Option<usize> {
    let mut padded = vec![dfa_rev.pad(); cap];
    padded.extend_from_slice(stream);
    (0..=cap).find(|&k| {
        let suffix: Vec<Symbol> = padded[padded.len() - k..].iter().rev().copied().collect();
        dfa_rev.is_final(dfa_rev.run_from(q, &suffix))
    })
}

/// Chernoff amplification count by linear scan over odd integers.
pub fn amplification_copies_by_scan(eps: f64, target: f64) -> usize {
    let bound = (1.0 / target).ln() * 2.0 * (1.0 - eps) / (0.5 - eps).powi(2);
    (1..).step_by(2).find(|&k| k as f64 >= bound).expect("unbounded scan")
}
