//! Declarative JSON descriptions of digit sequences.
//!
//! The format is discriminated by `"kind"`:
//!
//! ```json
//! {"kind": "automaton", "k": 2, "states": 2,
//!  "transitions": [[0,1],[1,0]], "initial": 0, "output": [0,1]}
//! {"kind": "morphic", "images": [[0,1],[0]], "coding": [0,1], "seed": 0}
//! {"kind": "sturmian", "theta": {"quadratic": [-1,1,2,5]}, "rho": "0",
//!  "variant": "floor", "coding": [0,1]}
//! {"kind": "indicator", "theta": {"quadratic": [1,1,2,5]}, "rho": "0"}
//! ```
//!
//! `rho` is an exact rational written `"num/den"` (or just `"num"`); slopes
//! are either exact quadratic irrationals `(a + b*sqrt(d))/c` or declared
//! continued-fraction prefixes. Unknown kinds are rejected.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::{
    morphism::{MorphicStream, MorphicSystem, Morphism},
    sturmian::{IndicatorParams, IndicatorStream, SturmianParams, SturmianStream, Variant},
    Automaton, Stream,
};
use crate::quadratic::{CfPrefixSlope, QuadraticIrrational, Slope};
use crate::words::FiniteWord;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum SequenceSpec {
    Automaton {
        k: u32,
        states: u32,
        transitions: Vec<Vec<u32>>,
        initial: u32,
        output: Vec<u32>,
    },
    Morphic {
        images: Vec<Vec<u32>>,
        coding: Vec<u32>,
        seed: u32,
    },
    Sturmian {
        theta: SlopeSpec,
        rho: String,
        variant: Variant,
        #[serde(default)]
        coding: Option<[u32; 2]>,
    },
    Indicator {
        theta: SlopeSpec,
        rho: String,
        #[serde(default)]
        variant: Option<Variant>,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum SlopeSpec {
    /// `(a + b*sqrt(d)) / c`
    Quadratic([i64; 4]),
    /// `[a0; a1, a2, ...]`
    CfPrefix(Vec<u64>),
}

impl SlopeSpec {
    pub fn build(&self) -> Result<Slope> {
        match self {
            SlopeSpec::Quadratic([a, b, c, d]) => {
                Ok(Slope::Quadratic(QuadraticIrrational::new(*a, *b, *c, *d)?))
            }
            SlopeSpec::CfPrefix(q) => Ok(Slope::CfPrefix(CfPrefixSlope::new(q.clone())?)),
        }
    }

    fn describe(&self) -> String {
        match self {
            SlopeSpec::Quadratic([a, b, c, d]) => format!("({a} + {b}*sqrt({d}))/{c}"),
            SlopeSpec::CfPrefix(q) => {
                let tail: Vec<String> = q[1..].iter().map(|a| a.to_string()).collect();
                format!("[{}; {}, ...]", q[0], tail.join(", "))
            }
        }
    }
}

/// Parse `"num/den"` or `"num"` into an exact rational.
pub fn parse_ratio(text: &str) -> Result<BigRational> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt =
        num.parse().map_err(|_| Error::Parse(format!("bad rational numerator {num:?}")))?;
    let den: BigInt =
        den.parse().map_err(|_| Error::Parse(format!("bad rational denominator {den:?}")))?;
    if den == 0.into() {
        return Err(Error::Parse("rational with zero denominator".into()));
    }
    Ok(BigRational::new(num, den))
}

pub fn format_ratio(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl SequenceSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serialization cannot fail")
    }

    pub fn build(&self) -> Result<Stream> {
        match self {
            SequenceSpec::Automaton { k, states, transitions, initial, output } => {
                if transitions.len() != *states as usize {
                    return Err(Error::Parse(format!(
                        "automaton declares {states} states but lists {} transition rows",
                        transitions.len()
                    )));
                }
                Ok(Stream::Automaton(Automaton::new(
                    *k,
                    transitions.clone(),
                    *initial,
                    output.clone(),
                )?))
            }
            SequenceSpec::Morphic { images, coding, seed } => {
                let alphabet = images.len() as u32;
                let image_words: Result<Vec<FiniteWord>> =
                    images.iter().map(|w| FiniteWord::new(w.clone(), alphabet)).collect();
                let sigma = Morphism::new(image_words?)?;
                if coding.len() != images.len() {
                    return Err(Error::Parse("coding must list one letter per alphabet letter".into()));
                }
                let out_alphabet = coding.iter().copied().max().unwrap_or(0) + 1;
                let coding_words: Result<Vec<FiniteWord>> =
                    coding.iter().map(|&s| FiniteWord::new(vec![s], out_alphabet)).collect();
                let tau = Morphism::new(coding_words?)?;
                let system = MorphicSystem::new(sigma, tau, *seed)?;
                Ok(Stream::Morphic(MorphicStream::new(system)))
            }
            SequenceSpec::Sturmian { theta, rho, variant, coding } => {
                let params = SturmianParams::new(
                    theta.build()?,
                    parse_ratio(rho)?,
                    *variant,
                    coding.unwrap_or([0, 1]),
                )?;
                Ok(Stream::Sturmian(SturmianStream::new(params)))
            }
            SequenceSpec::Indicator { theta, rho, variant } => {
                let params = IndicatorParams::new(
                    theta.build()?,
                    parse_ratio(rho)?,
                    variant.unwrap_or(Variant::Floor),
                )?;
                Ok(Stream::Indicator(IndicatorStream::new(params)))
            }
        }
    }

    /// Short description used in reports.
    pub fn describe(&self) -> String {
        match self {
            SequenceSpec::Automaton { k, states, .. } => {
                format!("base-{k} automaton with {states} states")
            }
            SequenceSpec::Morphic { images, .. } => {
                format!("morphic fixed point over {} letters", images.len())
            }
            SequenceSpec::Sturmian { theta, variant, .. } => {
                format!("sturmian ({variant:?} variant, slope {})", theta.describe()).to_lowercase()
            }
            SequenceSpec::Indicator { theta, .. } => {
                format!("beatty indicator (theta = {})", theta.describe())
            }
        }
    }
}
