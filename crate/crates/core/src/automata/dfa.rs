use std::collections::VecDeque;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::AutomataError;

/// Dense state identifier.
pub type StateId = usize;
/// Index of a symbol in its alphabet.
pub type Symbol = u8;

/// Ordered alphabet of single-character symbols.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    symbols: Vec<char>,
}

impl Alphabet {
    pub fn new(symbols: impl IntoIterator<Item = char>) -> Result<Self, AutomataError> {
        let symbols: Vec<char> = symbols.into_iter().collect();
        if symbols.is_empty() {
            return Err(AutomataError::EmptyAlphabet);
        }
        if symbols.len() > usize::from(Symbol::MAX) + 1 {
            return Err(AutomataError::AlphabetTooLarge(symbols.len()));
        }
        for (i, c) in symbols.iter().enumerate() {
            if symbols[..i].contains(c) {
                return Err(AutomataError::DuplicateSymbol(*c));
            }
        }
        Ok(Self { symbols })
    }

    /// Alphabet made of the characters of `s`, in order.
    pub fn from_chars(s: &str) -> Result<Self, AutomataError> {
        Self::new(s.chars())
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    pub fn char_of(&self, s: Symbol) -> char {
        self.symbols[usize::from(s)]
    }

    pub fn index_of(&self, c: char) -> Option<Symbol> {
        self.symbols.iter().position(|&d| d == c).map(|i| i as Symbol)
    }

    pub fn encode(&self, word: &str) -> Result<Vec<Symbol>, AutomataError> {
        word.chars()
            .map(|c| self.index_of(c).ok_or(AutomataError::UndeclaredSymbol(c)))
            .collect()
    }

    pub fn decode(&self, word: &[Symbol]) -> String {
        word.iter().map(|&s| self.char_of(s)).collect()
    }

    /// All symbols as indices `0..len`.
    pub fn indices(&self) -> impl Iterator<Item = Symbol> + Clone {
        (0..self.symbols.len()).map(|i| i as Symbol)
    }
}

/// Complete deterministic finite automaton.
///
/// The transition table is stored flat, row-major by state. `pad` is the
/// symbol that fills the initial window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfa {
    alphabet: Alphabet,
    initial: StateId,
    finals: Vec<bool>,
    delta: Vec<StateId>,
    pad: Symbol,
}

impl Dfa {
    /// Builds a DFA from a `[state][symbol]` table. The pad defaults to the
    /// first symbol.
    pub fn new(
        alphabet: Alphabet,
        initial: StateId,
        finals: &[StateId],
        table: &[Vec<StateId>],
    ) -> Result<Self, AutomataError> {
        let k = alphabet.len();
        let states = table.len();
        if states == 0 {
            return Err(AutomataError::NoStates);
        }
        if initial >= states {
            return Err(AutomataError::StateOutOfRange(initial));
        }
        let mut delta = Vec::with_capacity(states * k);
        for (q, row) in table.iter().enumerate() {
            if row.len() != k {
                return Err(AutomataError::IncompleteDelta {
                    state: q,
                    width: row.len(),
                    expected: k,
                });
            }
            for &t in row {
                if t >= states {
                    return Err(AutomataError::StateOutOfRange(t));
                }
                delta.push(t);
            }
        }
        let mut fin = vec![false; states];
        for &f in finals {
            if f >= states {
                return Err(AutomataError::StateOutOfRange(f));
            }
            fin[f] = true;
        }
        Ok(Self {
            alphabet,
            initial,
            finals: fin,
            delta,
            pad: 0,
        })
    }

    pub(crate) fn from_parts(
        alphabet: Alphabet,
        initial: StateId,
        finals: Vec<bool>,
        delta: Vec<StateId>,
        pad: Symbol,
    ) -> Self {
        debug_assert_eq!(delta.len(), finals.len() * alphabet.len());
        debug_assert!(initial < finals.len());
        Self {
            alphabet,
            initial,
            finals,
            delta,
            pad,
        }
    }

    /// Replaces the pad symbol.
    pub fn with_pad(mut self, pad: Symbol) -> Result<Self, AutomataError> {
        if usize::from(pad) >= self.alphabet.len() {
            return Err(AutomataError::PadNotInAlphabet);
        }
        self.pad = pad;
        Ok(self)
    }

    /// Replaces the pad symbol, given as a character.
    pub fn with_pad_char(self, pad: char) -> Result<Self, AutomataError> {
        let p = self.alphabet.index_of(pad).ok_or(AutomataError::PadNotInAlphabet)?;
        self.with_pad(p)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_symbols(&self) -> usize {
        self.alphabet.len()
    }

    pub fn state_count(&self) -> usize {
        self.finals.len()
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn pad(&self) -> Symbol {
        self.pad
    }

    pub fn is_final(&self, q: StateId) -> bool {
        self.finals[q]
    }

    pub fn finals(&self) -> &[bool] {
        &self.finals
    }

    pub fn final_states(&self) -> impl Iterator<Item = StateId> + '_ {
        self.finals.iter().enumerate().filter(|(_, &f)| f).map(|(q, _)| q)
    }

    #[inline]
    pub fn step(&self, q: StateId, a: Symbol) -> StateId {
        self.delta[q * self.alphabet.len() + usize::from(a)]
    }

    /// Row of successors of `q`, indexed by symbol.
    #[inline]
    pub fn row(&self, q: StateId) -> &[StateId] {
        let k = self.alphabet.len();
        &self.delta[q * k..(q + 1) * k]
    }

    pub fn run_from(&self, q: StateId, word: &[Symbol]) -> StateId {
        word.iter().fold(q, |q, &a| self.step(q, a))
    }

    pub fn run(&self, word: &[Symbol]) -> StateId {
        self.run_from(self.initial, word)
    }

    /// Membership test. Panics if the word contains a symbol outside the
    /// alphabet; use [`Dfa::accepts_str`] or [`Dfa::check_word`] for checked input.
    pub fn accepts(&self, word: &[Symbol]) -> bool {
        self.finals[self.run(word)]
    }

    pub fn check_word(&self, word: &[Symbol]) -> Result<(), AutomataError> {
        match word.iter().find(|&&a| usize::from(a) >= self.alphabet.len()) {
            Some(&a) => Err(AutomataError::ForeignSymbol(a)),
            None => Ok(()),
        }
    }

    pub fn accepts_str(&self, word: &str) -> Result<bool, AutomataError> {
        Ok(self.accepts(&self.alphabet.encode(word)?))
    }

    /// States reachable from `from`, as a membership vector.
    pub fn reachable_from(&self, from: StateId) -> Vec<bool> {
        let mut seen = vec![false; self.state_count()];
        let mut queue = VecDeque::from([from]);
        seen[from] = true;
        while let Some(q) = queue.pop_front() {
            for &t in self.row(q) {
                if !seen[t] {
                    seen[t] = true;
                    queue.push_back(t);
                }
            }
        }
        seen
    }

    pub fn reachable(&self) -> Vec<bool> {
        self.reachable_from(self.initial)
    }

    /// Copy of the automaton with a different initial state.
    pub fn rerooted(&self, q: StateId) -> Self {
        let mut d = self.clone();
        d.initial = q;
        d
    }

    /// Copy with finality flipped on every state.
    pub fn complemented(&self) -> Self {
        let mut d = self.clone();
        d.finals.iter_mut().for_each(|f| *f = !*f);
        d
    }

    /// True if no final state is reachable.
    pub fn is_empty_language(&self) -> bool {
        self.reachable().iter().zip(&self.finals).all(|(&r, &f)| !(r && f))
    }

    /// Shortest accepted word, ties broken by alphabet order.
    pub fn shortest_accepted(&self) -> Option<Vec<Symbol>> {
        let n = self.state_count();
        let mut parent: Vec<Option<(StateId, Symbol)>> = vec![None; n];
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([self.initial]);
        seen[self.initial] = true;
        while let Some(q) = queue.pop_front() {
            if self.finals[q] {
                let mut word = Vec::new();
                let mut cur = q;
                while let Some((p, a)) = parent[cur] {
                    word.push(a);
                    cur = p;
                }
                word.reverse();
                return Some(word);
            }
            for a in self.alphabet.indices() {
                let t = self.step(q, a);
                if !seen[t] {
                    seen[t] = true;
                    parent[t] = Some((q, a));
                    queue.push_back(t);
                }
            }
        }
        None
    }

    pub fn to_json(&self) -> DfaFile {
        DfaFile {
            alphabet: self.alphabet.symbols().iter().map(|c| c.to_string()).collect(),
            initial: self.initial,
            finals: self.final_states().collect(),
            delta: (0..self.state_count())
                .map(|q| self.row(q).iter().map(|&t| Some(t)).collect())
                .collect(),
            pad: Some(self.alphabet.char_of(self.pad).to_string()),
        }
    }

    pub fn from_json_str(text: &str) -> Result<Self, AutomataError> {
        let file: DfaFile = serde_json::from_str(text).map_err(|e| AutomataError::Json(e.to_string()))?;
        file.into_dfa()
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("DFA serialization cannot fail")
    }

    pub fn load(path: &Path) -> Result<Self, AutomataError> {
        let text = std::fs::read_to_string(path).map_err(|e| AutomataError::Io(format!("{}: {e}", path.display())))?;
        Self::from_json_str(&text)
    }
}

impl fmt::Display for Dfa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "      ")?;
        for c in self.alphabet.symbols() {
            write!(f, " {c:>3}")?;
        }
        writeln!(f)?;
        for q in 0..self.state_count() {
            let mark = match (q == self.initial, self.finals[q]) {
                (true, true) => "->*",
                (true, false) => "-> ",
                (false, true) => "  *",
                (false, false) => "   ",
            };
            write!(f, "{mark}{q:>3}")?;
            for &t in self.row(q) {
                write!(f, " {t:>3}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// On-disk JSON form of a [`Dfa`].
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct DfaFile {
    pub alphabet: Vec<String>,
    pub initial: StateId,
    pub finals: Vec<StateId>,
    /// `delta[state][symbol]`; `null` entries are rejected as incomplete.
    pub delta: Vec<Vec<Option<StateId>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pad: Option<String>,
}

fn single_char(s: &str) -> Result<char, AutomataError> {
    let mut it = s.chars();
    match (it.next(), it.next()) {
        (Some(c), None) => Ok(c),
        _ => Err(AutomataError::BadSymbol(s.to_string())),
    }
}

impl DfaFile {
    pub fn into_dfa(self) -> Result<Dfa, AutomataError> {
        let chars = self
            .alphabet
            .iter()
            .map(|s| single_char(s))
            .collect::<Result<Vec<_>, _>>()?;
        let alphabet = Alphabet::new(chars)?;
        let mut table = Vec::with_capacity(self.delta.len());
        for (q, row) in self.delta.into_iter().enumerate() {
            let row = row
                .into_iter()
                .enumerate()
                .map(|(a, t)| t.ok_or(AutomataError::MissingTransition { state: q, symbol: a }))
                .collect::<Result<Vec<_>, _>>()?;
            table.push(row);
        }
        let dfa = Dfa::new(alphabet, self.initial, &self.finals, &table)?;
        match self.pad {
            Some(p) => dfa.with_pad_char(single_char(&p)?),
            None => Ok(dfa),
        }
    }
}
