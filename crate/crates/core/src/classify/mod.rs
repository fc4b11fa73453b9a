//! Space-class classification of regular languages.
//!
//! All checks run on `A_R`, the minimal DFA of the reversed language.

pub mod search;
mod witness;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::automata::{minimize, reverse, Dfa};
pub use search::{
    equal_length_inconsistent_pair, idempotently_well_behaved, positively_idempotent_states, synchronized_pairs,
    synchronizing_words, well_behaved, SccViolation,
};
pub use witness::{Obligation, ValidationReport, WitnessPattern};

/// The five Boolean-closure classes, in lattice order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ClassId {
    #[serde(rename = "ST-Len")]
    StLen,
    #[serde(rename = "ST-SF-Len")]
    StSfLen,
    #[serde(rename = "LI-Len")]
    LiLen,
    #[serde(rename = "LB-PF-SF-Len")]
    LbPfSfLen,
    #[serde(rename = "LI-PF-Len")]
    LiPfLen,
}

impl ClassId {
    pub const ALL: [ClassId; 5] = [
        ClassId::StLen,
        ClassId::StSfLen,
        ClassId::LiLen,
        ClassId::LbPfSfLen,
        ClassId::LiPfLen,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ClassId::StLen => "ST-Len",
            ClassId::StSfLen => "ST-SF-Len",
            ClassId::LiLen => "LI-Len",
            ClassId::LbPfSfLen => "LB-PF-SF-Len",
            ClassId::LiPfLen => "LI-PF-Len",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name().eq_ignore_ascii_case(s))
    }

    /// Direct inclusions `self ⊆ other` of the class lattice.
    pub const INCLUSIONS: [(ClassId, ClassId); 5] = [
        (ClassId::StLen, ClassId::StSfLen),
        (ClassId::StSfLen, ClassId::LiLen),
        (ClassId::LiLen, ClassId::LiPfLen),
        (ClassId::StSfLen, ClassId::LbPfSfLen),
        (ClassId::LbPfSfLen, ClassId::LiPfLen),
    ];
}

impl fmt::Display for ClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Asymptotic space class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Complexity {
    Const,
    LogLog,
    Log,
    Linear,
}

impl fmt::Display for Complexity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Complexity::Const => "O(1)",
            Complexity::LogLog => "O(log log n)",
            Complexity::Log => "O(log n)",
            Complexity::Linear => "O(n)",
        })
    }
}

/// Complexity per algorithmic setting: deterministic or randomized, with zero
/// failure ratio or failure ratio tending to zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Settings {
    #[serde(rename = "det-zero")]
    pub det_zero: Complexity,
    #[serde(rename = "rand-zero")]
    pub rand_zero: Complexity,
    #[serde(rename = "det-failure")]
    pub det_failure: Complexity,
    #[serde(rename = "rand-failure")]
    pub rand_failure: Complexity,
}

/// Class-membership flags in lattice order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classes {
    #[serde(rename = "ST-Len")]
    pub st_len: bool,
    #[serde(rename = "ST-SF-Len")]
    pub st_sf_len: bool,
    #[serde(rename = "LI-Len")]
    pub li_len: bool,
    #[serde(rename = "LB-PF-SF-Len")]
    pub lb_pf_sf_len: bool,
    #[serde(rename = "LI-PF-Len")]
    pub li_pf_len: bool,
}

impl Classes {
    pub fn get(&self, c: ClassId) -> bool {
        match c {
            ClassId::StLen => self.st_len,
            ClassId::StSfLen => self.st_sf_len,
            ClassId::LiLen => self.li_len,
            ClassId::LbPfSfLen => self.lb_pf_sf_len,
            ClassId::LiPfLen => self.li_pf_len,
        }
    }

    /// Inclusions violated by these flags, if any.
    pub fn lattice_violations(&self) -> Vec<(ClassId, ClassId)> {
        ClassId::INCLUSIONS
            .into_iter()
            .filter(|&(a, b)| self.get(a) && !self.get(b))
            .collect()
    }

    pub fn settings(&self) -> Settings {
        use Complexity::*;
        Settings {
            det_zero: if self.st_len {
                Const
            } else if self.li_len {
                Log
            } else {
                Linear
            },
            rand_zero: if self.st_len {
                Const
            } else if self.st_sf_len {
                LogLog
            } else if self.li_len {
                Log
            } else {
                Linear
            },
            det_failure: if self.lb_pf_sf_len {
                Const
            } else if self.li_pf_len {
                Log
            } else {
                Linear
            },
            rand_failure: if self.li_pf_len { Const } else { Linear },
        }
    }
}

/// Classification result.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceVerdict {
    pub classes: Classes,
    pub settings: Settings,
    #[serde(default)]
    pub witnesses: BTreeMap<ClassId, WitnessPattern>,
}

impl SpaceVerdict {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("verdict serialization cannot fail")
    }

    /// Plain-text table: one row per class, then one per setting.
    pub fn table(&self) -> String {
        let mut s = String::new();
        s.push_str("class          member\n");
        for c in ClassId::ALL {
            s.push_str(&format!(
                "{:<14} {}\n",
                c.name(),
                if self.classes.get(c) { "YES" } else { "no" }
            ));
        }
        s.push_str("\nsetting        space\n");
        let st = &self.settings;
        for (name, v) in [
            ("det-zero", st.det_zero),
            ("rand-zero", st.rand_zero),
            ("det-failure", st.det_failure),
            ("rand-failure", st.rand_failure),
        ] {
            s.push_str(&format!("{name:<14} {v}\n"));
        }
        s
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("no witness: the language belongs to {0}")]
    NoWitness(ClassId),
}

/// The automaton all checks run on.
pub fn reversed_minimal(dfa_for_l: &Dfa) -> Dfa {
    minimize(&reverse(dfa_for_l))
}

struct Analysis {
    ar: Dfa,
}

impl Analysis {
    fn new(dfa_for_l: &Dfa) -> Self {
        Self {
            ar: reversed_minimal(dfa_for_l),
        }
    }

    fn member(&self, class: ClassId) -> bool {
        self.witness(class).is_none()
    }

    fn witness(&self, class: ClassId) -> Option<WitnessPattern> {
        let ar = &self.ar;
        match class {
            ClassId::StLen => search::loop_partner_pattern(ar).map(|p| witness::log_log_gap(ar, &p)),
            ClassId::StSfLen => search::sync_pairs_consistent(ar).1.map(|v| witness::log_gap(ar, &v)),
            ClassId::LiLen => well_behaved(ar).1.map(|v| witness::linear_gap(ar, &v)),
            ClassId::LbPfSfLen => search::idempotent_sync_pairs_consistent(ar)
                .1
                .map(|v| witness::failure_log_gap(ar, &v)),
            ClassId::LiPfLen => idempotently_well_behaved(ar)
                .1
                .map(|v| witness::failure_linear_gap(ar, &v)),
        }
    }
}

/// Membership flags, setting verdicts and a witness for every failed class.
pub fn classify(dfa_for_l: &Dfa) -> SpaceVerdict {
    let a = Analysis::new(dfa_for_l);
    let mut witnesses = BTreeMap::new();
    for c in ClassId::ALL {
        if let Some(w) = a.witness(c) {
            witnesses.insert(c, w);
        }
    }
    let flag = |c| !witnesses.contains_key(&c);
    let classes = Classes {
        st_len: flag(ClassId::StLen),
        st_sf_len: flag(ClassId::StSfLen),
        li_len: flag(ClassId::LiLen),
        lb_pf_sf_len: flag(ClassId::LbPfSfLen),
        li_pf_len: flag(ClassId::LiPfLen),
    };
    SpaceVerdict {
        settings: classes.settings(),
        classes,
        witnesses,
    }
}

/// Membership flags only (no witness construction).
pub fn class_flags(dfa_for_l: &Dfa) -> Classes {
    let a = Analysis::new(dfa_for_l);
    Classes {
        st_len: a.member(ClassId::StLen),
        st_sf_len: a.member(ClassId::StSfLen),
        li_len: a.member(ClassId::LiLen),
        lb_pf_sf_len: a.member(ClassId::LbPfSfLen),
        li_pf_len: a.member(ClassId::LiPfLen),
    }
}

/// Witness words showing the language lies outside `class`.
pub fn extract_witness(dfa_for_l: &Dfa, class: ClassId) -> Result<WitnessPattern, ClassifyError> {
    Analysis::new(dfa_for_l)
        .witness(class)
        .ok_or(ClassifyError::NoWitness(class))
}
