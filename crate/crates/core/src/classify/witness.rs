//! Witness words for failed class checks.
//!
//! Patterns are found as paths in the reversed automaton and then reversed, so
//! every word here is over the alphabet of the original language and reads in
//! stream order.

use serde::{Deserialize, Serialize};

use super::search::{
    path_between, IdempotentSyncViolation, IdempotentViolation, LoopPartner, SccViolation, SyncViolation,
};
use crate::automata::product::{Letters, ProductGraph};
use crate::automata::{Alphabet, Dfa, Symbol};

/// Concrete words certifying that a language lies outside a class. Each
/// variant documents the membership conditions it guarantees; `case` selects
/// which alternative holds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "variant")]
pub enum WitnessPattern {
    /// `|x0| = |x1| ≥ 1`, `|u0| = |u1| ≥ 1`,
    /// `u1 {x0 u0, x1 u1}* u ⊆ L` and `u0 {x0 u0, x1 u1}* u ∩ L = ∅`.
    LinearGap {
        x0: String,
        u0: String,
        x1: String,
        u1: String,
        u: String,
    },
    /// `|x| = |y| = |z| ≥ 1`. Case 1: `x*u ⊆ L`, `z*yx*u ∩ L = ∅`.
    /// Case 2: `x*u ∩ L = ∅`, `z*yx*u ⊆ L`.
    LogGap {
        u: String,
        x: String,
        y: String,
        z: String,
        case: u8,
    },
    /// `|x| = |y| = |z| ≥ 1`. Cases 1 and 2 as for [`WitnessPattern::LogGap`].
    /// Case 3: `x*u ⊆ L`, `yx*u ∩ L = ∅`, `z+yx*u ⊆ L`.
    /// Case 4: `x*u ∩ L = ∅`, `yx*u ⊆ L`, `z+yx*u ∩ L = ∅`.
    LogLogGap {
        u: String,
        x: String,
        y: String,
        z: String,
        case: u8,
    },
    /// `|y0| = |y1|`, `|x| = |z0 y0| = |z1 y1|`,
    /// `y0 {z0 y0}* u x+ ∩ L = ∅` and `y1 {z1 y1}* u x+ ⊆ L`.
    FailureLinearGap {
        x: String,
        y0: String,
        y1: String,
        z0: String,
        z1: String,
        u: String,
    },
    /// `|uv| = |w| = |x| ≥ 1`. Case 1: `(vu)*v ⊆ L`, `x*w(vu)*v ∩ L = ∅`.
    /// Case 2: `(vu)*v ∩ L = ∅`, `x*w(vu)*v ⊆ L`.
    FailureLogGap {
        u: String,
        v: String,
        w: String,
        x: String,
        case: u8,
    },
}

/// One membership requirement implied by a witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Obligation {
    pub word: String,
    pub member: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub checked: usize,
    pub shape_error: Option<String>,
    pub violations: Vec<Obligation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.shape_error.is_none() && self.violations.is_empty()
    }
}

fn pow(w: &str, k: usize) -> String {
    w.repeat(k)
}

fn len(w: &str) -> usize {
    w.chars().count()
}

impl WitnessPattern {
    pub fn variant_name(&self) -> &'static str {
        match self {
            WitnessPattern::LinearGap { .. } => "LinearGap",
            WitnessPattern::LogGap { .. } => "LogGap",
            WitnessPattern::LogLogGap { .. } => "LogLogGap",
            WitnessPattern::FailureLinearGap { .. } => "FailureLinearGap",
            WitnessPattern::FailureLogGap { .. } => "FailureLogGap",
        }
    }

    /// Named word components in a fixed order.
    pub fn components(&self) -> Vec<(&'static str, &str)> {
        match self {
            WitnessPattern::LinearGap { x0, u0, x1, u1, u } => {
                vec![("x0", x0), ("u0", u0), ("x1", x1), ("u1", u1), ("u", u)]
            }
            WitnessPattern::LogGap { u, x, y, z, .. } | WitnessPattern::LogLogGap { u, x, y, z, .. } => {
                vec![("u", u), ("x", x), ("y", y), ("z", z)]
            }
            WitnessPattern::FailureLinearGap { x, y0, y1, z0, z1, u } => {
                vec![("x", x), ("y0", y0), ("y1", y1), ("z0", z0), ("z1", z1), ("u", u)]
            }
            WitnessPattern::FailureLogGap { u, v, w, x, .. } => vec![("u", u), ("v", v), ("w", w), ("x", x)],
        }
    }

    /// Length constraints; `Err` names the first one violated.
    pub fn check_shape(&self) -> Result<(), String> {
        let ok = |cond: bool, what: &str| if cond { Ok(()) } else { Err(what.to_string()) };
        match self {
            WitnessPattern::LinearGap { x0, u0, x1, u1, .. } => {
                ok(len(x0) == len(x1) && len(x0) >= 1, "|x0| = |x1| >= 1")?;
                ok(len(u0) == len(u1) && len(u0) >= 1, "|u0| = |u1| >= 1")
            }
            WitnessPattern::LogGap { x, y, z, case, .. } => {
                ok(
                    len(x) == len(y) && len(y) == len(z) && len(x) >= 1,
                    "|x| = |y| = |z| >= 1",
                )?;
                ok(matches!(case, 1 | 2), "case in 1..=2")
            }
            WitnessPattern::LogLogGap { x, y, z, case, .. } => {
                ok(
                    len(x) == len(y) && len(y) == len(z) && len(x) >= 1,
                    "|x| = |y| = |z| >= 1",
                )?;
                ok(matches!(case, 1..=4), "case in 1..=4")
            }
            WitnessPattern::FailureLinearGap { x, y0, y1, z0, z1, .. } => {
                ok(len(y0) == len(y1) && len(y0) >= 1, "|y0| = |y1| >= 1")?;
                ok(len(z0) >= 1 && len(z1) >= 1, "z0, z1 nonempty")?;
                ok(
                    len(x) == len(z0) + len(y0) && len(x) == len(z1) + len(y1),
                    "|x| = |z0 y0| = |z1 y1|",
                )
            }
            WitnessPattern::FailureLogGap { u, v, w, x, case } => {
                ok(
                    len(u) + len(v) == len(w) && len(w) == len(x) && len(x) >= 1,
                    "|uv| = |w| = |x| >= 1",
                )?;
                ok(matches!(case, 1 | 2), "case in 1..=2")
            }
        }
    }

    /// Membership requirements for all exponents (and block sequences) up to
    /// `max_exp`.
    pub fn obligations(&self, max_exp: usize) -> Vec<Obligation> {
        let mut out = Vec::new();
        let mut push = |word: String, member: bool| out.push(Obligation { word, member });
        match self {
            WitnessPattern::LinearGap { x0, u0, x1, u1, u } => {
                let blocks = [format!("{x0}{u0}"), format!("{x1}{u1}")];
                for m in 0..=max_exp {
                    for bits in 0..(1usize << m) {
                        let middle: String = (0..m).map(|i| blocks[(bits >> i) & 1].as_str()).collect();
                        push(format!("{u1}{middle}{u}"), true);
                        push(format!("{u0}{middle}{u}"), false);
                    }
                }
            }
            WitnessPattern::LogGap { u, x, y, z, case } => {
                let base = *case == 1;
                for i in 0..=max_exp {
                    push(format!("{}{u}", pow(x, i)), base);
                    for j in 0..=max_exp {
                        push(format!("{}{y}{}{u}", pow(z, j), pow(x, i)), !base);
                    }
                }
            }
            WitnessPattern::LogLogGap { u, x, y, z, case } => {
                // (x*u, yx*u, z+yx*u) memberships per case
                let (a, b, c) = match case {
                    1 => (true, false, false),
                    2 => (false, true, true),
                    3 => (true, false, true),
                    _ => (false, true, false),
                };
                for i in 0..=max_exp {
                    let xi = pow(x, i);
                    push(format!("{xi}{u}"), a);
                    push(format!("{y}{xi}{u}"), b);
                    for j in 1..=max_exp {
                        push(format!("{}{y}{xi}{u}", pow(z, j)), c);
                    }
                }
            }
            WitnessPattern::FailureLinearGap { x, y0, y1, z0, z1, u } => {
                for m in 0..=max_exp {
                    for j in 1..=max_exp {
                        let tail = format!("{u}{}", pow(x, j));
                        push(format!("{y0}{}{tail}", pow(&format!("{z0}{y0}"), m)), false);
                        push(format!("{y1}{}{tail}", pow(&format!("{z1}{y1}"), m)), true);
                    }
                }
            }
            WitnessPattern::FailureLogGap { u, v, w, x, case } => {
                let base = *case == 1;
                let vu = format!("{v}{u}");
                for i in 0..=max_exp {
                    let body = format!("{}{v}", pow(&vu, i));
                    push(body.clone(), base);
                    for j in 0..=max_exp {
                        push(format!("{}{w}{body}", pow(x, j)), !base);
                    }
                }
            }
        }
        out
    }

    /// Checks the length constraints and every membership obligation up to
    /// `max_exp` against `dfa`, an automaton for the language itself.
    pub fn validate(&self, dfa: &Dfa, max_exp: usize) -> ValidationReport {
        let shape_error = self.check_shape().err();
        let obligations = self.obligations(max_exp);
        let checked = obligations.len();
        let violations = obligations
            .into_iter()
            .filter(|o| dfa.accepts_str(&o.word).ok() != Some(o.member))
            .collect();
        ValidationReport {
            checked,
            shape_error,
            violations,
        }
    }
}

fn rev(w: &[Symbol]) -> Vec<Symbol> {
    w.iter().rev().copied().collect()
}

fn cat(parts: &[&[Symbol]]) -> Vec<Symbol> {
    parts.concat()
}

fn power(w: &[Symbol], k: usize) -> Vec<Symbol> {
    w.repeat(k)
}

/// Reverses each word and decodes it.
fn out(alphabet: &Alphabet, w: &[Symbol]) -> String {
    alphabet.decode(&rev(w))
}

/// From the loop-plus-partner pattern in the reversed automaton `ar`.
pub(super) fn log_log_gap(ar: &Dfa, pat: &LoopPartner) -> WitnessPattern {
    let u = path_between(ar, ar.initial(), pat.q1).expect("q1 is reachable");
    // Orbit of q2 under y: find preperiod t and period d.
    let mut orbit = vec![pat.q2];
    let (t, d) = loop {
        let next = ar.run_from(*orbit.last().expect("nonempty"), &pat.y);
        if let Some(pos) = orbit.iter().position(|&s| s == next) {
            break (pos, orbit.len() - pos);
        }
        orbit.push(next);
    };
    let k = (t + 1) * d;
    let q3 = ar.run_from(pat.q2, &power(&pat.y, k));
    let big_x = power(&pat.x, k);
    let big_y = cat(&[&power(&pat.x, k - 1), &pat.y]);
    let big_z = power(&pat.y, k);
    let case = match (ar.is_final(pat.q1), ar.is_final(q3)) {
        (true, false) => 1,
        (false, true) => 2,
        (true, true) => 3,
        (false, false) => 4,
    };
    let a = ar.alphabet();
    WitnessPattern::LogLogGap {
        u: out(a, &u),
        x: out(a, &big_x),
        y: out(a, &big_y),
        z: out(a, &big_z),
        case,
    }
}

/// From an F-inconsistent synchronized pair reachable from the initial state.
pub(super) fn log_gap(ar: &Dfa, v: &SyncViolation) -> WitnessPattern {
    let u = path_between(ar, ar.initial(), v.p).expect("p is reachable");
    let case = if ar.is_final(v.p) { 1 } else { 2 };
    let a = ar.alphabet();
    WitnessPattern::LogGap {
        u: out(a, &u),
        x: out(a, &v.x),
        y: out(a, &v.y),
        z: out(a, &v.z),
        case,
    }
}

/// Words `(g0, g1)` of equal positive length leading `r0` and `r1` back to
/// `q`: a product search first, otherwise the swap construction.
fn equal_returns(ar: &Dfa, v: &SccViolation) -> (Vec<Symbol>, Vec<Symbol>) {
    let q = v.state;
    if let Some(path) =
        ProductGraph::new(ar, 2, Letters::Independent).search(&[v.reject_end, v.accept_end], 1, |t| t == [q, q])
    {
        let [a, b]: [Vec<Symbol>; 2] = path.words.try_into().expect("two components");
        return (a, b);
    }
    let g0 = path_between(ar, v.reject_end, q).expect("same SCC");
    let g1 = path_between(ar, v.accept_end, q).expect("same SCC");
    (cat(&[&g0, &v.to_accept, &g1]), cat(&[&g1, &v.to_reject, &g0]))
}

/// From a non-well-behaved SCC reachable from the initial state.
pub(super) fn linear_gap(ar: &Dfa, v: &SccViolation) -> WitnessPattern {
    let s = path_between(ar, ar.initial(), v.state).expect("SCC is reachable");
    let (x0, x1) = equal_returns(ar, v);
    let a = ar.alphabet();
    WitnessPattern::LinearGap {
        x0: out(a, &x0),
        u0: out(a, &v.to_reject),
        x1: out(a, &x1),
        u1: out(a, &v.to_accept),
        u: out(a, &s),
    }
}

/// From a non-well-behaved SCC reachable from a positively idempotent state.
pub(super) fn failure_linear_gap(ar: &Dfa, v: &IdempotentViolation) -> WitnessPattern {
    let scc = &v.violation;
    let q = scc.state;
    let u = path_between(ar, v.idempotent, q).expect("SCC reachable from idempotent state");
    let (y0, y1) = (scc.to_reject.clone(), scc.to_accept.clone());
    let ret = |from, y: &[Symbol]| {
        let z = path_between(ar, from, q).expect("same SCC");
        if z.is_empty() {
            y.to_vec()
        } else {
            z
        }
    };
    let z0 = ret(scc.reject_end, &y0);
    let z1 = ret(scc.accept_end, &y1);
    let x = &v.idempotent_word;
    let (l0, l1) = (y0.len() + z0.len(), y1.len() + z1.len());
    // Equalize |x| = |y0 z0| = |y1 z1| by pumping the loops at p and q.
    let z0 = cat(&[&z0, &power(&cat(&[&y0, &z0]), x.len() * l1 - 1)]);
    let z1 = cat(&[&z1, &power(&cat(&[&y1, &z1]), x.len() * l0 - 1)]);
    let x = power(x, l0 * l1);
    let a = ar.alphabet();
    WitnessPattern::FailureLinearGap {
        x: out(a, &x),
        y0: out(a, &y0),
        y1: out(a, &y1),
        z0: out(a, &z0),
        z1: out(a, &z1),
        u: out(a, &u),
    }
}

/// From an F-inconsistent synchronized pair reachable from a positively
/// idempotent state.
pub(super) fn failure_log_gap(ar: &Dfa, v: &IdempotentSyncViolation) -> WitnessPattern {
    let p = v.idempotent;
    let (q, r) = (v.sync.p, v.sync.q);
    let y = path_between(ar, p, q).expect("pair reachable from idempotent state");
    let mut x = v.idempotent_word.clone();
    if x.len() < y.len() {
        x = power(&x, y.len());
    }
    let (su, sv, sw) = (&v.sync.x, &v.sync.y, &v.sync.z);
    let (lx, lu) = (x.len(), su.len());
    let x = power(&x, lu);
    let u = power(su, lx);
    let vv = cat(&[&power(su, lx - 1), sv]);
    let w = power(sw, lx);
    let (x1, x2) = x.split_at(y.len());
    let p1 = ar.run_from(p, x1);
    let z1 = x2.to_vec();
    let z2 = cat(&[x1, x2, x1]);
    let z3 = cat(&[x2, &y]);
    let (lw, lx_out) = if ar.is_final(p1) != ar.is_final(q) {
        (cat(&[&z3, &u]), cat(&[&u, &u]))
    } else {
        debug_assert!(ar.is_final(p1) != ar.is_final(r));
        (cat(&[&z3, &vv]), cat(&[&w, &w]))
    };
    let case = if ar.is_final(p1) { 1 } else { 2 };
    let a = ar.alphabet();
    WitnessPattern::FailureLogGap {
        u: out(a, &z1),
        v: out(a, &z2),
        w: out(a, &lw),
        x: out(a, &lx_out),
        case,
    }
}
