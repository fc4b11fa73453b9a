//! Sliding-window membership for regular languages.
//!
//! The crate is organised bottom-up:
//!
//! * [`automata`]: DFAs, NFAs, regex input, reversal, minimization, products,
//!   SCCs and atom-tag checks.
//! * [`classify`]: decides the five space classes on the reversed minimal DFA
//!   and extracts witness words when a class check fails.
//! * [`swa`]: the sliding-window algorithms behind one step/query interface,
//!   plus combinators and a compiler from tagged language specs.
//! * [`harness`]: stream generators, Monte Carlo error estimation, bound checks
//!   and space-growth fitting.
//! * [`acceptance`]: the end-to-end acceptance suite shared by the CLI and tests.

pub mod acceptance;
pub mod automata;
pub mod classify;
pub mod harness;
pub mod reference;
pub mod swa;

pub use automata::{Alphabet, AtomTag, AutomataError, BoolOp, Dfa, Nfa, StateId, Symbol};
pub use classify::{classify, extract_witness, ClassId, Complexity, SpaceVerdict, WitnessPattern};
