use serde::{Deserialize, Serialize};

use super::product::{Letters, ProductGraph};
use super::{minimize, ops, reverse, Alphabet, Dfa, Nfa, Symbol};

/// Structural tag attached to a leaf language.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AtomTag {
    /// `Σ*w` for the literal word `w`.
    SuffixPattern(String),
    /// `Σ^r (Σ^q)*`; with `q = 0` this is `Σ^r`.
    LengthMod(usize, usize),
    LeftIdeal,
    PrefixFree,
    SuffixFree,
    /// `Σ*K` with `K` bifix-free.
    BifixFreeLeftIdeal,
}

impl AtomTag {
    pub fn name(&self) -> &'static str {
        match self {
            AtomTag::SuffixPattern(_) => "suffix-pattern",
            AtomTag::LengthMod(..) => "length-mod",
            AtomTag::LeftIdeal => "left-ideal",
            AtomTag::PrefixFree => "prefix-free",
            AtomTag::SuffixFree => "suffix-free",
            AtomTag::BifixFreeLeftIdeal => "bifix-free-left-ideal",
        }
    }
}

pub fn is_prefix_free(dfa: &Dfa) -> bool {
    let reach = dfa.reachable();
    dfa.final_states().filter(|&f| reach[f]).all(|f| {
        // any final reachable from f by a nonempty word?
        dfa.row(f).iter().all(|&t| {
            !dfa.reachable_from(t)
                .iter()
                .zip(dfa.finals())
                .any(|(&r, &fin)| r && fin)
        })
    })
}

pub fn is_suffix_free(dfa: &Dfa) -> bool {
    is_prefix_free(&reverse(dfa))
}

/// `ΣL ⊆ L`, one product-emptiness check per symbol.
pub fn is_left_ideal(dfa: &Dfa) -> bool {
    dfa.alphabet().indices().all(|a| {
        let shifted = dfa.rerooted(dfa.step(dfa.initial(), a));
        ops::is_subset(dfa, &shifted).expect("same alphabet")
    })
}

/// True iff membership depends only on word length.
pub fn is_length_language(dfa: &Dfa) -> bool {
    let q0 = dfa.initial();
    ProductGraph::new(dfa, 2, Letters::Independent)
        .search(&[q0, q0], 0, |t| dfa.is_final(t[0]) != dfa.is_final(t[1]))
        .is_none()
}

/// Minimal automaton for `Σ*w`.
pub fn suffix_pattern_dfa(alphabet: &Alphabet, word: &[Symbol]) -> Dfa {
    let k = alphabet.len();
    let m = word.len();
    let mut transitions = Vec::new();
    for a in alphabet.indices() {
        transitions.push((0, a, 0));
    }
    for (i, &a) in word.iter().enumerate() {
        transitions.push((i, a, i + 1));
    }
    debug_assert!(k > 0);
    let nfa = Nfa::new(alphabet.clone(), m + 1, &[0], &[m], &transitions).expect("valid ids");
    minimize(&nfa.determinize())
}

/// Minimal automaton for `Σ^r (Σ^q)*`.
pub fn length_mod_dfa(alphabet: &Alphabet, q: usize, r: usize) -> Dfa {
    // states 0..r count the prefix; with q > 0 the states r..r+q form a cycle,
    // with q = 0 state r+1 is a sink.
    let states = if q == 0 { r + 2 } else { r + q };
    let table: Vec<Vec<usize>> = (0..states)
        .map(|s| {
            let t = if q == 0 {
                (s + 1).min(r + 1)
            } else if s + 1 < r + q {
                s + 1
            } else {
                r
            };
            vec![t; alphabet.len()]
        })
        .collect();
    let dfa = Dfa::new(alphabet.clone(), 0, &[r], &table).expect("valid table");
    minimize(&dfa)
}

/// `K = L \ ΣL`: the words of `L` with no proper suffix in `L` when `L` is a
/// left ideal.
pub fn minimal_generator(dfa: &Dfa) -> Dfa {
    let k = dfa.num_symbols();
    let n = dfa.state_count();
    // NFA for ΣL: a fresh start state steps on any symbol into q0.
    let mut transitions: Vec<(usize, Symbol, usize)> = Vec::with_capacity(n * k + k);
    for q in 0..n {
        for a in dfa.alphabet().indices() {
            transitions.push((q, a, dfa.step(q, a)));
        }
    }
    for a in dfa.alphabet().indices() {
        transitions.push((n, a, dfa.initial()));
    }
    let finals: Vec<usize> = dfa.final_states().collect();
    let sigma_l = Nfa::new(dfa.alphabet().clone(), n + 1, &[n], &finals, &transitions)
        .expect("valid ids")
        .with_pad(dfa.pad())
        .determinize();
    minimize(&ops::combine(ops::BoolOp::Difference, dfa, Some(&sigma_l)).expect("same alphabet"))
}

pub fn is_bifix_free_left_ideal(dfa: &Dfa) -> bool {
    if !is_left_ideal(dfa) {
        return false;
    }
    let gen = minimal_generator(dfa);
    is_prefix_free(&gen) && is_suffix_free(&gen)
}

/// Checks that `dfa` has the structure `tag` claims.
pub fn check_atom_tag(dfa: &Dfa, tag: &AtomTag) -> bool {
    match tag {
        AtomTag::SuffixPattern(w) => match dfa.alphabet().encode(w) {
            Ok(word) => ops::equivalent(dfa, &suffix_pattern_dfa(dfa.alphabet(), &word)).expect("same alphabet"),
            Err(_) => false,
        },
        AtomTag::LengthMod(q, r) => {
            is_length_language(dfa)
                && ops::equivalent(dfa, &length_mod_dfa(dfa.alphabet(), *q, *r)).expect("same alphabet")
        }
        AtomTag::LeftIdeal => is_left_ideal(dfa),
        AtomTag::PrefixFree => is_prefix_free(dfa),
        AtomTag::SuffixFree => is_suffix_free(dfa),
        AtomTag::BifixFreeLeftIdeal => is_bifix_free_left_ideal(dfa),
    }
}
