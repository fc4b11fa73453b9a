//! Stream generation, Monte Carlo error estimation, bound checks and space
//! growth measurement.
//!
//! Every comparison routes through the exact window membership computed by
//! [`truth_transcript`]. Trials run on rayon when the `parallel` feature is on;
//! the tallies are integer counts merged by addition, so reports are
//! byte-identical whatever the schedule.

mod bounds;
mod growth;
mod stream;
mod trials;

use thiserror::Error;

use crate::automata::{AutomataError, Symbol};
use crate::swa::SwaError;

pub use bounds::{three_sigma, verify_bounds, Bound, BoundCheck};
pub use growth::{
    best_shape, fit_shapes, measure_space_growth, powers_of_two, GrowthReport, ProbeSet, Shape, ShapeFit,
};
pub use stream::{gen_stream, StreamSpec, WitnessFamily};
pub use trials::{estimate_errors, truth_transcript, Execution, TrialConfig, TrialReport};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid stream spec: {0}")]
    Parse(String),
    #[error("stream symbol {0} is outside the alphabet")]
    ForeignSymbol(Symbol),
    #[error("at least one trial is required")]
    NoTrials,
    #[error("window sizes must be nonempty and increasing")]
    BadRange,
    #[error("exact oracle disagrees with direct recomputation at t = {0}")]
    OracleMismatch(usize),
    #[error("cannot build thread pool: {0}")]
    ThreadPool(String),
    #[error(transparent)]
    Automata(#[from] AutomataError),
    #[error(transparent)]
    Swa(#[from] SwaError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

#[cfg(test)]
mod tests;
