use std::path::Path;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::automata::{Alphabet, Symbol};
use crate::classify::WitnessPattern;

/// Declarative description of an input stream.
///
/// Text form (see [`FromStr`]): `uniform:LEN[:SEED]`, `literal:WORD`,
/// `repeat:BLOCK:COUNT`, joined with `+` for concatenation. Witness families
/// only have a JSON form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StreamSpec {
    Uniform {
        length: usize,
        #[serde(default)]
        seed: u64,
    },
    Literal {
        word: String,
    },
    Repeat {
        block: String,
        count: usize,
    },
    Witness(WitnessFamily),
    Concat(Vec<StreamSpec>),
}

/// A witness pattern expanded into the stream used by its lower-bound
/// reduction. `alpha` is a bit string (`'0'`/`'1'`, first bit first), `m` and
/// `i` are block exponents; unused fields are ignored by the variant.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessFamily {
    pub pattern: WitnessPattern,
    #[serde(default)]
    pub alpha: String,
    #[serde(default)]
    pub m: usize,
    #[serde(default)]
    pub i: usize,
}

impl WitnessFamily {
    pub fn new(pattern: WitnessPattern) -> Self {
        Self {
            pattern,
            alpha: String::new(),
            m: 0,
            i: 0,
        }
    }

    pub fn alpha(mut self, alpha: &str) -> Self {
        self.alpha = alpha.to_string();
        self
    }

    pub fn m(mut self, m: usize) -> Self {
        self.m = m;
        self
    }

    pub fn i(mut self, i: usize) -> Self {
        self.i = i;
        self
    }

    /// The stream as text:
    ///
    /// * `LinearGap`: `w_α (x0 u0)^i u` with `w_α = x_{α1} u_{α1} ··· x_{αk} u_{αk}`
    /// * `LogGap`, `LogLogGap`: `z^m y x^i u`
    /// * `FailureLinearGap`: `w_α u x^i` with `w_α = z_{α1} y_{α1} ··· z_{αk} y_{αk}`
    /// * `FailureLogGap`: `x^{m-1} w v (u v)^i`
    pub fn expand(&self) -> Result<String, HarnessError> {
        let bits = self
            .alpha
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(HarnessError::Parse(format!(
                    "alpha must be a bit string, got {:?}",
                    self.alpha
                ))),
            })
            .collect::<Result<Vec<usize>, _>>()?;
        let (m, i) = (self.m, self.i);
        Ok(match &self.pattern {
            WitnessPattern::LinearGap { x0, u0, x1, u1, u } => {
                let blocks = [format!("{x0}{u0}"), format!("{x1}{u1}")];
                let w: String = bits.iter().map(|&b| blocks[b].as_str()).collect();
                format!("{w}{}{u}", blocks[0].repeat(i))
            }
            WitnessPattern::LogGap { u, x, y, z, .. } | WitnessPattern::LogLogGap { u, x, y, z, .. } => {
                format!("{}{y}{}{u}", z.repeat(m), x.repeat(i))
            }
            WitnessPattern::FailureLinearGap { x, y0, y1, z0, z1, u } => {
                let blocks = [format!("{z0}{y0}"), format!("{z1}{y1}")];
                let w: String = bits.iter().map(|&b| blocks[b].as_str()).collect();
                format!("{w}{u}{}", x.repeat(i))
            }
            WitnessPattern::FailureLogGap { u, v, w, x, .. } => {
                format!("{}{w}{v}{}", x.repeat(m.saturating_sub(1)), format!("{u}{v}").repeat(i))
            }
        })
    }
}

impl StreamSpec {
    pub fn uniform(length: usize, seed: u64) -> Self {
        StreamSpec::Uniform { length, seed }
    }

    pub fn literal(word: &str) -> Self {
        StreamSpec::Literal { word: word.to_string() }
    }

    pub fn repeat(block: &str, count: usize) -> Self {
        StreamSpec::Repeat {
            block: block.to_string(),
            count,
        }
    }

    /// Parses a command-line argument: `@file.json` loads a JSON spec, anything
    /// else goes through [`FromStr`].
    pub fn from_arg(arg: &str) -> Result<Self, HarnessError> {
        match arg.strip_prefix('@') {
            Some(path) => Self::load(Path::new(path)),
            None => arg.parse(),
        }
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    /// Expands the spec over `alphabet`. Deterministic; uniform parts draw
    /// from a ChaCha8 generator seeded by their own seed.
    pub fn generate(&self, alphabet: &Alphabet) -> Result<Vec<Symbol>, HarnessError> {
        let mut out = Vec::new();
        self.generate_into(alphabet, &mut out)?;
        Ok(out)
    }

    fn generate_into(&self, alphabet: &Alphabet, out: &mut Vec<Symbol>) -> Result<(), HarnessError> {
        match self {
            StreamSpec::Uniform { length, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                let k = alphabet.len() as Symbol;
                out.extend((0..*length).map(|_| rng.gen_range(0..k)));
            }
            StreamSpec::Literal { word } => out.extend(alphabet.encode(word)?),
            StreamSpec::Repeat { block, count } => {
                let block = alphabet.encode(block)?;
                for _ in 0..*count {
                    out.extend_from_slice(&block);
                }
            }
            StreamSpec::Witness(family) => out.extend(alphabet.encode(&family.expand()?)?),
            StreamSpec::Concat(parts) => {
                for p in parts {
                    p.generate_into(alphabet, out)?;
                }
            }
        }
        Ok(())
    }
}

impl FromStr for StreamSpec {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split('+').collect();
        if parts.len() > 1 {
            return parts
                .iter()
                .map(|p| p.parse())
                .collect::<Result<_, _>>()
                .map(StreamSpec::Concat);
        }
        let bad = || HarnessError::Parse(format!("unrecognised stream {s:?}"));
        let number = |t: &str| t.parse::<u64>().map_err(|_| bad());
        let fields: Vec<&str> = s.split(':').collect();
        match fields.as_slice() {
            ["uniform", len] => Ok(StreamSpec::uniform(number(len)? as usize, 0)),
            ["uniform", len, seed] => Ok(StreamSpec::uniform(number(len)? as usize, number(seed)?)),
            ["literal", word] => Ok(StreamSpec::literal(word)),
            ["literal"] => Ok(StreamSpec::literal("")),
            ["repeat", block, count] => Ok(StreamSpec::repeat(block, number(count)? as usize)),
            _ => Err(bad()),
        }
    }
}

/// Free-function form of [`StreamSpec::generate`].
pub fn gen_stream(spec: &StreamSpec, alphabet: &Alphabet) -> Result<Vec<Symbol>, HarnessError> {
    spec.generate(alphabet)
}
