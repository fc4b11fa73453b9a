use std::sync::Arc;

use super::{amplification_copies, derive_seed, AlgorithmInfo, Factory, SlidingWindow, SwaError};
use crate::automata::Symbol;

/// Boolean function of the children's answers.
pub type TruthFn = Arc<dyn Fn(&[bool]) -> bool + Send + Sync>;

struct Combined {
    children: Vec<Box<dyn SlidingWindow>>,
    truth: TruthFn,
}

impl SlidingWindow for Combined {
    fn step(&mut self, a: Symbol) {
        for c in &mut self.children {
            c.step(a);
        }
    }

    fn query(&self) -> bool {
        let answers: Vec<bool> = self.children.iter().map(|c| c.query()).collect();
        (self.truth)(&answers)
    }

    fn space_bits(&self) -> u64 {
        // separator-encoded concatenation of the child states
        2 * self.children.iter().map(|c| c.space_bits()).sum::<u64>()
    }
}

/// Runs all children side by side with independent seeds and answers
/// `truth` of their answers.
pub fn boolean_combine(children: Vec<Factory>, truth: TruthFn) -> Result<Factory, SwaError> {
    let n = children.first().ok_or(SwaError::NoChildren)?.n();
    if children.iter().any(|c| c.n() != n) {
        return Err(SwaError::WindowMismatch);
    }
    let mut info = AlgorithmInfo::new(
        "boolean_combine",
        n,
        2 * children.iter().map(|c| c.info().space_bits_max).sum::<u64>(),
    )
    .param("arity", children.len())
    .randomized(children.iter().any(Factory::is_randomized));
    info.children = children.iter().map(|c| c.info().clone()).collect();
    Ok(Factory::new(info, move |seed| {
        Box::new(Combined {
            children: children
                .iter()
                .enumerate()
                .map(|(i, c)| c.instance(derive_seed(seed, i as u64)))
                .collect(),
            truth: truth.clone(),
        })
    }))
}

/// Majority vote over independent copies.
pub struct Majority {
    copies: Vec<Box<dyn SlidingWindow>>,
}

impl Majority {
    pub fn copies(&self) -> usize {
        self.copies.len()
    }
}

impl SlidingWindow for Majority {
    fn step(&mut self, a: Symbol) {
        for c in &mut self.copies {
            c.step(a);
        }
    }

    fn query(&self) -> bool {
        2 * self.copies.iter().filter(|c| c.query()).count() > self.copies.len()
    }

    fn space_bits(&self) -> u64 {
        self.copies.iter().map(|c| c.space_bits()).sum()
    }
}

/// Majority of `k` copies of `child`, with `k` from
/// [`amplification_copies`]`(eps, target)`.
pub fn amplify(child: &Factory, eps: f64, target: f64) -> Result<Factory, SwaError> {
    let k = amplification_copies(eps, target)?;
    let mut info = AlgorithmInfo::new("amplify", child.n(), k as u64 * child.info().space_bits_max)
        .param("copies", k)
        .param("child_error", eps)
        .param("target_error", target)
        .randomized(child.is_randomized());
    info.children = vec![child.info().clone()];
    let child = child.clone();
    Ok(Factory::new(info, move |seed| {
        Box::new(Majority {
            copies: (0..k).map(|i| child.instance(derive_seed(seed, i as u64))).collect(),
        })
    }))
}

/// Wraps a child and collapses to an absorbing rejecting state as soon as
/// the child's encoding exceeds the budget.
pub struct SpaceCap {
    child: Option<Box<dyn SlidingWindow>>,
    budget: u64,
}

impl SpaceCap {
    pub fn new(child: Box<dyn SlidingWindow>, budget: u64) -> Self {
        let child = (child.space_bits() <= budget).then_some(child);
        Self { child, budget }
    }

    pub fn collapsed(&self) -> bool {
        self.child.is_none()
    }
}

impl SlidingWindow for SpaceCap {
    fn step(&mut self, a: Symbol) {
        if let Some(c) = &mut self.child {
            c.step(a);
            if c.space_bits() > self.budget {
                self.child = None;
            }
        }
    }

    fn query(&self) -> bool {
        self.child.as_ref().is_some_and(|c| c.query())
    }

    fn space_bits(&self) -> u64 {
        match &self.child {
            Some(c) => c.space_bits(),
            None => 1,
        }
    }
}

pub fn space_cap(child: &Factory, budget_bits: u64) -> Result<Factory, SwaError> {
    if budget_bits == 0 {
        return Err(SwaError::ZeroBudget);
    }
    let mut info = AlgorithmInfo::new(
        "space_cap",
        child.n(),
        budget_bits.min(child.info().space_bits_max).max(1),
    )
    .param("budget_bits", budget_bits)
    .randomized(child.is_randomized());
    info.children = vec![child.info().clone()];
    let child = child.clone();
    Ok(Factory::new(info, move |seed| {
        Box::new(SpaceCap::new(child.instance(seed), budget_bits))
    }))
}
