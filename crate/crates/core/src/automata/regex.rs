//! Small regex dialect: concatenation, `|`, `*`, `+`, parentheses, and the
//! literals `∅` (empty language) and `ε` (empty word). Whitespace is ignored.
//! An empty pattern denotes the empty language.

use super::{Alphabet, AutomataError, Dfa, Nfa, StateId, Symbol};

const EMPTY_SET: char = '∅';
const EPSILON: char = 'ε';

fn is_operator(c: char) -> bool {
    matches!(c, '(' | ')' | '|' | '*' | '+') || c == EMPTY_SET || c == EPSILON
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Regex {
    Empty,
    Epsilon,
    Symbol(Symbol),
    Concat(Box<Regex>, Box<Regex>),
    Union(Box<Regex>, Box<Regex>),
    Star(Box<Regex>),
    Plus(Box<Regex>),
}

/// Symbols used by a pattern, sorted. Handy when no alphabet is declared.
pub fn infer_alphabet(pattern: &str) -> Result<Alphabet, AutomataError> {
    let mut chars: Vec<char> = pattern
        .chars()
        .filter(|c| !c.is_whitespace() && !is_operator(*c))
        .collect();
    chars.sort_unstable();
    chars.dedup();
    Alphabet::new(chars)
}

struct Parser<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    alphabet: &'a Alphabet,
}

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn offset(&self) -> usize {
        self.chars
            .get(self.pos)
            .map_or_else(|| self.chars.last().map_or(0, |&(i, c)| i + c.len_utf8()), |&(i, _)| i)
    }

    fn error(&self, message: impl Into<String>) -> AutomataError {
        AutomataError::Parse {
            position: self.offset(),
            message: message.into(),
        }
    }

    fn union(&mut self) -> Result<Regex, AutomataError> {
        let mut left = self.concat()?;
        while self.peek() == Some('|') {
            self.pos += 1;
            let right = self.concat()?;
            left = Regex::Union(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn concat(&mut self) -> Result<Regex, AutomataError> {
        let mut parts = Vec::new();
        while let Some(c) = self.peek() {
            if c == '|' || c == ')' {
                break;
            }
            parts.push(self.repeat()?);
        }
        let mut it = parts.into_iter();
        let first = it.next().ok_or_else(|| self.error("expected an expression"))?;
        Ok(it.fold(first, |acc, r| Regex::Concat(Box::new(acc), Box::new(r))))
    }

    fn repeat(&mut self) -> Result<Regex, AutomataError> {
        let mut r = self.atom()?;
        loop {
            match self.peek() {
                Some('*') => r = Regex::Star(Box::new(r)),
                Some('+') => r = Regex::Plus(Box::new(r)),
                _ => return Ok(r),
            }
            self.pos += 1;
        }
    }

    fn atom(&mut self) -> Result<Regex, AutomataError> {
        let c = self.peek().ok_or_else(|| self.error("unexpected end of pattern"))?;
        match c {
            '(' => {
                self.pos += 1;
                let inner = self.union()?;
                if self.peek() != Some(')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            '*' | '+' => Err(self.error(format!("'{c}' has nothing to repeat"))),
            ')' | '|' => Err(self.error(format!("unexpected '{c}'"))),
            EMPTY_SET => {
                self.pos += 1;
                Ok(Regex::Empty)
            }
            EPSILON => {
                self.pos += 1;
                Ok(Regex::Epsilon)
            }
            _ => {
                let s = self.alphabet.index_of(c).ok_or(AutomataError::UndeclaredSymbol(c))?;
                self.pos += 1;
                Ok(Regex::Symbol(s))
            }
        }
    }
}

impl Regex {
    pub fn parse(pattern: &str, alphabet: &Alphabet) -> Result<Self, AutomataError> {
        let chars: Vec<(usize, char)> = pattern.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
        if chars.is_empty() {
            return Ok(Regex::Empty);
        }
        let mut p = Parser {
            chars,
            pos: 0,
            alphabet,
        };
        let r = p.union()?;
        if p.pos < p.chars.len() {
            return Err(p.error(format!("unexpected '{}'", p.peek().unwrap_or(' '))));
        }
        Ok(r)
    }

    /// Thompson construction followed by epsilon elimination.
    pub fn to_nfa(&self, alphabet: &Alphabet) -> Nfa {
        let mut b = EpsBuilder::default();
        let (start, end) = b.build(self);
        b.into_nfa(alphabet, start, end)
    }
}

#[derive(Default)]
struct EpsBuilder {
    eps: Vec<Vec<StateId>>,
    moves: Vec<(StateId, Symbol, StateId)>,
}

impl EpsBuilder {
    fn fresh(&mut self) -> StateId {
        self.eps.push(Vec::new());
        self.eps.len() - 1
    }

    fn build(&mut self, r: &Regex) -> (StateId, StateId) {
        let s = self.fresh();
        let t = self.fresh();
        match r {
            Regex::Empty => {}
            Regex::Epsilon => self.eps[s].push(t),
            Regex::Symbol(a) => self.moves.push((s, *a, t)),
            Regex::Concat(x, y) => {
                let (xs, xt) = self.build(x);
                let (ys, yt) = self.build(y);
                self.eps[s].push(xs);
                self.eps[xt].push(ys);
                self.eps[yt].push(t);
            }
            Regex::Union(x, y) => {
                for r in [x, y] {
                    let (rs, rt) = self.build(r);
                    self.eps[s].push(rs);
                    self.eps[rt].push(t);
                }
            }
            Regex::Star(x) | Regex::Plus(x) => {
                let (xs, xt) = self.build(x);
                self.eps[s].push(xs);
                self.eps[xt].push(xs);
                self.eps[xt].push(t);
                if matches!(r, Regex::Star(_)) {
                    self.eps[s].push(t);
                }
            }
        }
        (s, t)
    }

    fn closure(&self, q: StateId) -> Vec<StateId> {
        let mut seen = vec![false; self.eps.len()];
        let mut stack = vec![q];
        seen[q] = true;
        let mut out = Vec::new();
        while let Some(p) = stack.pop() {
            out.push(p);
            for &t in &self.eps[p] {
                if !seen[t] {
                    seen[t] = true;
                    stack.push(t);
                }
            }
        }
        out
    }

    fn into_nfa(self, alphabet: &Alphabet, start: StateId, end: StateId) -> Nfa {
        let n = self.eps.len();
        let closures: Vec<Vec<StateId>> = (0..n).map(|q| self.closure(q)).collect();
        let finals: Vec<StateId> = (0..n).filter(|&q| closures[q].contains(&end)).collect();
        let mut out_moves: Vec<Vec<(Symbol, StateId)>> = vec![Vec::new(); n];
        for &(p, a, q) in &self.moves {
            out_moves[p].push((a, q));
        }
        let mut transitions = Vec::new();
        for (q, closure) in closures.iter().enumerate() {
            for &p in closure {
                for &(a, t) in &out_moves[p] {
                    transitions.push((q, a, t));
                }
            }
        }
        Nfa::new(alphabet.clone(), n, &[start], &finals, &transitions).expect("regex construction yields valid ids")
    }
}

/// Parses `pattern` over `alphabet` and determinizes it.
pub fn dfa_from_regex(pattern: &str, alphabet: &Alphabet) -> Result<Dfa, AutomataError> {
    Ok(Regex::parse(pattern, alphabet)?.to_nfa(alphabet).determinize())
}
