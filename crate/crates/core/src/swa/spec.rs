//! Tagged language specifications and their compilation to algorithms.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::algorithms::pad_power;
use super::{
    amplified_loglog, boolean_combine, const_left_ideal_swa, exact_oracle, lb_direct_swa, path_summary_swa,
    solve_xi_epsilon, suffix_comparator_swa, trivial_reject_swa, AlgorithmInfo, Constant, Factory, QueryMode, SwaError,
};
use crate::automata::{
    check_atom_tag, combine, dfa_from_regex, infer_alphabet, minimize, reverse, Alphabet, AtomTag, BoolOp, Dfa, DfaFile,
};

/// Algorithmic setting: deterministic or randomized, with failure ratio zero
/// or a fixed failure ratio `φ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Setting {
    DetZero,
    RandZero,
    DetFailure(f64),
    RandFailure(f64),
}

impl Setting {
    pub fn phi(&self) -> Option<f64> {
        match *self {
            Setting::DetFailure(p) | Setting::RandFailure(p) => Some(p),
            _ => None,
        }
    }

    pub fn is_failure(&self) -> bool {
        self.phi().is_some()
    }
}

impl fmt::Display for Setting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Setting::DetZero => f.write_str("det-zero"),
            Setting::RandZero => f.write_str("rand-zero"),
            Setting::DetFailure(p) => write!(f, "det-failure={p}"),
            Setting::RandFailure(p) => write!(f, "rand-failure={p}"),
        }
    }
}

impl FromStr for Setting {
    type Err = SwaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || SwaError::Setting(s.to_string());
        let (name, value) = match s.split_once('=') {
            Some((a, b)) => (a.trim(), Some(b.trim())),
            None => (s.trim(), None),
        };
        let phi = || -> Result<f64, SwaError> {
            let p: f64 = value.ok_or_else(bad)?.parse().map_err(|_| bad())?;
            if p > 0.0 && p <= 1.0 {
                Ok(p)
            } else {
                Err(SwaError::InvalidFailureRatio(p))
            }
        };
        match name {
            "det-zero" if value.is_none() => Ok(Setting::DetZero),
            "rand-zero" if value.is_none() => Ok(Setting::RandZero),
            "det-failure" => Ok(Setting::DetFailure(phi()?)),
            "rand-failure" => Ok(Setting::RandFailure(phi()?)),
            _ => Err(bad()),
        }
    }
}

/// Boolean formula over tagged leaf languages.
#[derive(Clone, Debug, PartialEq)]
pub enum LanguageSpec {
    Leaf { dfa: Dfa, tag: AtomTag },
    And(Vec<LanguageSpec>),
    Or(Vec<LanguageSpec>),
    Not(Box<LanguageSpec>),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNode {
    op: String,
    #[serde(default)]
    children: Vec<RawNode>,
    dfa: Option<serde_json::Value>,
    regex: Option<String>,
    alphabet: Option<String>,
    pad: Option<char>,
    tag: Option<AtomTag>,
}

struct Context<'a> {
    base: Option<&'a Path>,
    alphabet: Option<Alphabet>,
    pad: Option<char>,
}

impl LanguageSpec {
    pub fn leaf(dfa: Dfa, tag: AtomTag) -> Self {
        LanguageSpec::Leaf { dfa, tag }
    }

    pub fn negate(inner: LanguageSpec) -> Self {
        LanguageSpec::Not(Box::new(inner))
    }

    /// Parses the JSON form. Leaf `"dfa"` values are inline automata, paths
    /// ending in `.json` (relative to `base`), or regexes; a `"regex"` field
    /// may be used instead. `"alphabet"` and `"pad"` are inherited by
    /// children.
    pub fn from_json_str(text: &str, base: Option<&Path>) -> Result<Self, SwaError> {
        let raw: RawNode = serde_json::from_str(text).map_err(|e| SwaError::Spec(e.to_string()))?;
        Self::resolve(
            raw,
            &Context {
                base,
                alphabet: None,
                pad: None,
            },
        )
    }

    pub fn load(path: &Path) -> Result<Self, SwaError> {
        let text = std::fs::read_to_string(path).map_err(|e| SwaError::Spec(format!("{}: {e}", path.display())))?;
        Self::from_json_str(&text, path.parent())
    }

    fn resolve(raw: RawNode, ctx: &Context<'_>) -> Result<Self, SwaError> {
        let alphabet = match &raw.alphabet {
            Some(s) => Some(Alphabet::from_chars(s)?),
            None => ctx.alphabet.clone(),
        };
        let ctx = Context {
            base: ctx.base,
            alphabet,
            pad: raw.pad.or(ctx.pad),
        };
        let children = |nodes: Vec<RawNode>| -> Result<Vec<LanguageSpec>, SwaError> {
            nodes.into_iter().map(|c| Self::resolve(c, &ctx)).collect()
        };
        match raw.op.as_str() {
            "and" | "or" if raw.children.is_empty() => Err(SwaError::Spec(format!("{} without children", raw.op))),
            "and" => Ok(LanguageSpec::And(children(raw.children)?)),
            "or" => Ok(LanguageSpec::Or(children(raw.children)?)),
            "not" => {
                let mut c = children(raw.children)?;
                if c.len() != 1 {
                    return Err(SwaError::Spec("not takes exactly one child".into()));
                }
                Ok(LanguageSpec::negate(c.remove(0)))
            }
            "leaf" => {
                let tag = raw.tag.ok_or_else(|| SwaError::Spec("leaf without tag".into()))?;
                let dfa = Self::leaf_dfa(raw.dfa, raw.regex, &ctx)?;
                Ok(LanguageSpec::Leaf { dfa, tag })
            }
            other => Err(SwaError::Spec(format!("unknown op {other:?}"))),
        }
    }

    fn leaf_dfa(dfa: Option<serde_json::Value>, regex: Option<String>, ctx: &Context<'_>) -> Result<Dfa, SwaError> {
        let from_regex = |pattern: &str| -> Result<Dfa, SwaError> {
            let alphabet = match &ctx.alphabet {
                Some(a) => a.clone(),
                None => infer_alphabet(pattern)?,
            };
            Ok(dfa_from_regex(pattern, &alphabet)?)
        };
        let dfa = match (dfa, regex) {
            (Some(_), Some(_)) => return Err(SwaError::Spec("leaf has both dfa and regex".into())),
            (None, None) => return Err(SwaError::Spec("leaf needs dfa or regex".into())),
            (None, Some(r)) => from_regex(&r)?,
            (Some(serde_json::Value::String(s)), None) if s.ends_with(".json") => {
                let path: PathBuf = match ctx.base {
                    Some(b) => b.join(&s),
                    None => PathBuf::from(&s),
                };
                Dfa::load(&path)?
            }
            (Some(serde_json::Value::String(s)), None) => from_regex(&s)?,
            (Some(v), None) => {
                let file: DfaFile = serde_json::from_value(v).map_err(|e| SwaError::Spec(e.to_string()))?;
                file.into_dfa()?
            }
        };
        if let Some(a) = &ctx.alphabet {
            if dfa.alphabet() != a {
                return Err(SwaError::AlphabetMismatch);
            }
        }
        Ok(match ctx.pad {
            Some(p) => dfa.with_pad_char(p)?,
            None => dfa,
        })
    }

    fn flatten(&self, leaves: &mut Vec<(Dfa, AtomTag)>) -> Formula {
        match self {
            LanguageSpec::Leaf { dfa, tag } => {
                leaves.push((dfa.clone(), tag.clone()));
                Formula::Leaf(leaves.len() - 1)
            }
            LanguageSpec::And(cs) => Formula::And(cs.iter().map(|c| c.flatten(leaves)).collect()),
            LanguageSpec::Or(cs) => Formula::Or(cs.iter().map(|c| c.flatten(leaves)).collect()),
            LanguageSpec::Not(c) => Formula::Not(Box::new(c.flatten(leaves))),
        }
    }
}

/// Formula over leaf indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Formula {
    Leaf(usize),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Not(Box<Formula>),
}

impl Formula {
    pub fn eval(&self, leaves: &[bool]) -> bool {
        match self {
            Formula::Leaf(i) => leaves[*i],
            Formula::And(cs) => cs.iter().all(|c| c.eval(leaves)),
            Formula::Or(cs) => cs.iter().any(|c| c.eval(leaves)),
            Formula::Not(c) => !c.eval(leaves),
        }
    }

    fn dfa(&self, leaves: &[(Dfa, AtomTag)]) -> Dfa {
        let fold = |cs: &[Formula], op| {
            let mut it = cs.iter().map(|c| c.dfa(leaves));
            let first = it.next().expect("nonempty by construction");
            it.fold(first, |acc, d| {
                minimize(&combine(op, &acc, Some(&d)).expect("alphabets checked"))
            })
        };
        match self {
            Formula::Leaf(i) => leaves[*i].0.clone(),
            Formula::And(cs) => fold(cs, BoolOp::Intersection),
            Formula::Or(cs) => fold(cs, BoolOp::Union),
            Formula::Not(c) => c.dfa(leaves).complemented(),
        }
    }
}

/// A checked specification bound to a setting; produces a factory per window
/// size.
#[derive(Clone, Debug)]
pub struct Compiled {
    leaves: Vec<(Dfa, AtomTag)>,
    formula: Formula,
    setting: Setting,
}

/// Verifies every leaf tag and binds the specification to `setting`.
pub fn compile(spec: &LanguageSpec, setting: Setting) -> Result<Compiled, SwaError> {
    let mut leaves = Vec::new();
    let formula = spec.flatten(&mut leaves);
    let (first, _) = &leaves[0];
    for (i, (dfa, tag)) in leaves.iter().enumerate() {
        if dfa.alphabet() != first.alphabet() || dfa.pad() != first.pad() {
            return Err(SwaError::AlphabetMismatch);
        }
        if !check_atom_tag(dfa, tag) {
            return Err(SwaError::TagMismatch {
                leaf: i,
                tag: tag.name().to_string(),
            });
        }
    }
    if let Some(phi) = setting.phi() {
        if !(phi > 0.0 && phi <= 1.0) {
            return Err(SwaError::InvalidFailureRatio(phi));
        }
    }
    Ok(Compiled {
        leaves,
        formula,
        setting,
    })
}

impl Compiled {
    pub fn setting(&self) -> Setting {
        self.setting
    }

    pub fn leaf_count(&self) -> usize {
        self.leaves.len()
    }

    pub fn formula(&self) -> &Formula {
        &self.formula
    }

    /// DFA for the whole specified language (the ground truth).
    pub fn truth_dfa(&self) -> Dfa {
        minimize(&self.formula.dfa(&self.leaves))
    }

    fn leaf_error(&self) -> f64 {
        1.0 / (3.0 * self.leaves.len() as f64)
    }

    fn leaf_phi(&self) -> Option<f64> {
        self.setting.phi().map(|p| p / self.leaves.len() as f64)
    }

    /// Per-instant error the compiled algorithm guarantees outside its
    /// failure instants: the sum of the leaf budgets of randomized leaves.
    pub fn error_threshold(&self) -> f64 {
        self.leaves
            .iter()
            .map(|(dfa, tag)| match (self.setting, tag) {
                (Setting::RandZero, AtomTag::SuffixFree) => self.leaf_error(),
                (Setting::RandFailure(_), AtomTag::LeftIdeal) => {
                    let rev = minimize(&reverse(dfa));
                    solve_xi_epsilon(rev.state_count(), self.leaf_phi().expect("failure setting"))
                        .map_or(0.0, |p| p.eps)
                }
                _ => 0.0,
            })
            .sum()
    }

    /// The algorithm for window size `n`.
    pub fn factory(&self, n: usize) -> Result<Factory, SwaError> {
        let children = self
            .leaves
            .iter()
            .map(|(dfa, tag)| self.leaf_factory(dfa, tag, n))
            .collect::<Result<Vec<_>, _>>()?;
        let setting = self.setting.to_string();
        let finish = |f: Factory| {
            let info = f.info().clone().param("setting", setting.clone());
            f.with_info(info)
        };
        if let (Formula::Leaf(0), [only]) = (&self.formula, children.as_slice()) {
            return Ok(finish(only.clone()));
        }
        let formula = self.formula.clone();
        let combined = boolean_combine(children, Arc::new(move |answers: &[bool]| formula.eval(answers)))?;
        let mut info = combined.info().clone();
        let notes: Vec<String> = info.children.iter().flat_map(|c| c.notes.clone()).collect();
        info.notes.extend(notes);
        Ok(finish(combined.with_info(info)))
    }

    fn leaf_factory(&self, dfa: &Dfa, tag: &AtomTag, n: usize) -> Result<Factory, SwaError> {
        let rev = || minimize(&reverse(dfa));
        let phi = self.leaf_phi();
        let f = match (tag, self.setting) {
            (AtomTag::SuffixPattern(w), _) => suffix_comparator_swa(dfa, &dfa.alphabet().encode(w)?, n),
            (AtomTag::LengthMod(q, r), _) => {
                let min = minimize(dfa);
                let answer = min.is_final(pad_power(&min, n));
                let info = AlgorithmInfo::new("length_constant", n, 0)
                    .param("q", *q)
                    .param("r", *r);
                Factory::new(info, move |_| Box::new(Constant(answer)))
            }
            (AtomTag::LeftIdeal, Setting::RandFailure(_)) => {
                const_left_ideal_swa(&rev(), n, phi.expect("failure setting"))?
            }
            (AtomTag::LeftIdeal, _) => path_summary_swa(&rev(), n, QueryMode::AtMostN),
            (AtomTag::PrefixFree, Setting::DetFailure(_) | Setting::RandFailure(_)) => {
                trivial_reject_swa(minimize(dfa).state_count(), n, phi.expect("failure setting"), dfa)?
            }
            (AtomTag::PrefixFree, _) => {
                let f = exact_oracle(dfa, n);
                let info = f.info().clone().note(format!(
                    "prefix-free leaf has no sublinear algorithm in setting {}",
                    self.setting
                ));
                f.with_info(info)
            }
            (AtomTag::SuffixFree, Setting::DetFailure(_) | Setting::RandFailure(_)) => {
                trivial_reject_swa(rev().state_count(), n, phi.expect("failure setting"), dfa)?
            }
            (AtomTag::SuffixFree, Setting::DetZero) => path_summary_swa(&rev(), n, QueryMode::ExactlyN),
            (AtomTag::SuffixFree, Setting::RandZero) => amplified_loglog(&rev(), n, self.leaf_error())?,
            (AtomTag::BifixFreeLeftIdeal, Setting::DetFailure(_) | Setting::RandFailure(_)) => {
                lb_direct_swa(dfa, n, phi.expect("failure setting"))?
            }
            (AtomTag::BifixFreeLeftIdeal, _) => path_summary_swa(&rev(), n, QueryMode::AtMostN),
        };
        Ok(f)
    }
}
