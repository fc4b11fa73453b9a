//! Finite automata and the constructions the other modules consume.

mod dfa;
mod nfa;
mod ops;
pub mod product;
mod regex;
mod scc;
mod tags;
mod window;

use thiserror::Error;

pub use dfa::{Alphabet, Dfa, DfaFile, StateId, Symbol};
pub use nfa::Nfa;
pub use ops::{combine, distinguishing_word, equivalent, is_subset, minimize, reverse, BoolOp};
pub use regex::{dfa_from_regex, infer_alphabet, Regex};
pub use scc::{sccs, Sccs};
pub use tags::{
    check_atom_tag, is_bifix_free_left_ideal, is_left_ideal, is_length_language, is_prefix_free, is_suffix_free,
    length_mod_dfa, minimal_generator, suffix_pattern_dfa, AtomTag,
};
pub use window::last_n;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AutomataError {
    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("undeclared symbol '{0}'")]
    UndeclaredSymbol(char),
    #[error("symbol index {0} is outside the alphabet")]
    ForeignSymbol(Symbol),
    #[error("incomplete delta: state {state} has {width} transitions, expected {expected}")]
    IncompleteDelta {
        state: StateId,
        width: usize,
        expected: usize,
    },
    #[error("incomplete delta: state {state} has no transition on symbol {symbol}")]
    MissingTransition { state: StateId, symbol: usize },
    #[error("state {0} out of range")]
    StateOutOfRange(StateId),
    #[error("automaton has no states")]
    NoStates,
    #[error("alphabet is empty")]
    EmptyAlphabet,
    #[error("alphabet has {0} symbols, at most 256 are supported")]
    AlphabetTooLarge(usize),
    #[error("duplicate symbol '{0}' in alphabet")]
    DuplicateSymbol(char),
    #[error("symbols must be single characters, got {0:?}")]
    BadSymbol(String),
    #[error("pad symbol is not in the alphabet")]
    PadNotInAlphabet,
    #[error("alphabet mismatch")]
    AlphabetMismatch,
    #[error("binary operation needs a second operand")]
    MissingOperand,
    #[error("invalid automaton JSON: {0}")]
    Json(String),
    #[error("cannot read automaton: {0}")]
    Io(String),
}

/// Parses either a DFA JSON document or a regex over `alphabet` (inferred
/// from the pattern when absent).
pub fn build_dfa(description: &str, alphabet: Option<&Alphabet>) -> Result<Dfa, AutomataError> {
    if description.trim_start().starts_with('{') {
        return Dfa::from_json_str(description);
    }
    match alphabet {
        Some(a) => dfa_from_regex(description, a),
        None => dfa_from_regex(description, &infer_alphabet(description)?),
    }
}
