use std::fmt;

use serde::{Deserialize, Serialize};

use super::{HarnessError, StreamSpec, WitnessFamily};
use crate::automata::Alphabet;
use crate::classify::WitnessPattern;
use crate::swa::{derive_seed, Factory, SwaError};

/// Growth shapes, simplest first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Shape {
    Constant,
    LogLog,
    Log,
    Linear,
}

impl Shape {
    pub const ALL: [Shape; 4] = [Shape::Constant, Shape::LogLog, Shape::Log, Shape::Linear];

    /// The regressor for window size `n`.
    pub fn eval(self, n: usize) -> f64 {
        let x = n as f64;
        match self {
            Shape::Constant => 0.0,
            Shape::LogLog => x.log2().max(1.0).log2(),
            Shape::Log => x.log2(),
            Shape::Linear => x,
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Shape::Constant => "1",
            Shape::LogLog => "log log n",
            Shape::Log => "log n",
            Shape::Linear => "n",
        })
    }
}

/// Least-squares fit `y ≈ intercept + slope · shape(n)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShapeFit {
    pub shape: Shape,
    pub intercept: f64,
    pub slope: f64,
    pub sse: f64,
    pub max_residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthReport {
    pub algorithm: String,
    pub ns: Vec<usize>,
    /// Observed maximum space in bits per window size, over all probes.
    pub observed_max: Vec<u64>,
    pub fits: Vec<ShapeFit>,
    pub best: Shape,
}

impl GrowthReport {
    pub fn fit(&self, shape: Shape) -> &ShapeFit {
        self.fits
            .iter()
            .find(|f| f.shape == shape)
            .expect("every shape is fitted")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("growth report serialization cannot fail")
    }
}

/// Fits every shape to `(ns, ys)`.
pub fn fit_shapes(ns: &[usize], ys: &[f64]) -> Vec<ShapeFit> {
    let k = ys.len() as f64;
    let my = ys.iter().sum::<f64>() / k;
    Shape::ALL
        .iter()
        .map(|&shape| {
            let xs: Vec<f64> = ns.iter().map(|&n| shape.eval(n)).collect();
            let mx = xs.iter().sum::<f64>() / k;
            let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
            let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
            let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
            let intercept = my - slope * mx;
            let residuals: Vec<f64> = xs.iter().zip(ys).map(|(x, y)| y - intercept - slope * x).collect();
            ShapeFit {
                shape,
                intercept,
                slope,
                sse: residuals.iter().map(|r| r * r).sum(),
                max_residual: residuals.iter().fold(0.0, |m, r| m.max(r.abs())),
            }
        })
        .collect()
}

/// Lowest SSE among the constant fit and fits with positive slope; near-ties
/// go to the simpler shape.
pub fn best_shape(fits: &[ShapeFit], ys: &[f64]) -> Shape {
    let tol = 1e-9 * ys.iter().map(|y| y * y).sum::<f64>().max(1.0);
    let eligible: Vec<&ShapeFit> = fits
        .iter()
        .filter(|f| f.shape == Shape::Constant || f.slope > 1e-12)
        .collect();
    let min = eligible.iter().map(|f| f.sse).fold(f64::INFINITY, f64::min);
    eligible
        .iter()
        .filter(|f| f.sse <= min + tol)
        .map(|f| f.shape)
        .min()
        .unwrap_or(Shape::Constant)
}

/// Probe streams for space measurement at window size `n`: one uniform
/// stream of length `length_factor · n` plus every witness family expanded
/// with `α = (10)^*` of length `n` and exponents `m = i = n`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbeSet {
    pub length_factor: usize,
    pub families: Vec<WitnessPattern>,
    /// Instances (seeds) run per probe stream.
    pub instances: u64,
    pub seed: u64,
}

impl ProbeSet {
    pub fn uniform(length_factor: usize, instances: u64, seed: u64) -> Self {
        Self {
            length_factor,
            families: Vec::new(),
            instances,
            seed,
        }
    }

    pub fn with_families(mut self, families: Vec<WitnessPattern>) -> Self {
        self.families = families;
        self
    }

    pub fn streams(&self, alphabet: &Alphabet, n: usize) -> Result<Vec<StreamSpec>, HarnessError> {
        let mut out = vec![StreamSpec::uniform(
            self.length_factor * n,
            derive_seed(self.seed, n as u64),
        )];
        let alpha: String = (0..n).map(|j| if j % 2 == 0 { '1' } else { '0' }).collect();
        for p in &self.families {
            let family = WitnessFamily::new(p.clone()).alpha(&alpha).m(n).i(n);
            // reject families over another alphabet early
            alphabet.encode(&family.expand()?)?;
            out.push(StreamSpec::Witness(family));
        }
        Ok(out)
    }
}

/// Observed maximum space of `family(n)` over the probe streams for each
/// `n` in `ns`, with fits against every [`Shape`].
pub fn measure_space_growth<F>(
    family: F,
    alphabet: &Alphabet,
    ns: &[usize],
    probes: &ProbeSet,
) -> Result<GrowthReport, HarnessError>
where
    F: Fn(usize) -> Result<Factory, SwaError>,
{
    if ns.is_empty() || ns.windows(2).any(|w| w[0] >= w[1]) {
        return Err(HarnessError::BadRange);
    }
    let mut algorithm = String::new();
    let mut observed_max = Vec::with_capacity(ns.len());
    for &n in ns {
        let factory = family(n)?;
        algorithm = factory.info().algorithm.clone();
        let mut best = 0;
        for spec in probes.streams(alphabet, n)? {
            let stream = spec.generate(alphabet)?;
            for j in 0..probes.instances.max(1) {
                let mut r = factory.instance(derive_seed(probes.seed ^ n as u64, j));
                best = best.max(r.space_bits());
                for &a in &stream {
                    r.step(a);
                    best = best.max(r.space_bits());
                }
            }
        }
        observed_max.push(best);
    }
    let ys: Vec<f64> = observed_max.iter().map(|&y| y as f64).collect();
    let fits = fit_shapes(ns, &ys);
    let best = best_shape(&fits, &ys);
    Ok(GrowthReport {
        algorithm,
        ns: ns.to_vec(),
        observed_max,
        fits,
        best,
    })
}

/// `[2^lo, 2^(lo+1), ..., 2^hi]`.
pub fn powers_of_two(lo: u32, hi: u32) -> Vec<usize> {
    (lo..=hi).map(|e| 1usize << e).collect()
}
