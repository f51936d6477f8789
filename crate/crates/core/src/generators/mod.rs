//! Sequence generators: automata reading base-k digits, morphic fixed
//! points, Sturmian words, and Beatty indicators, all with exact arithmetic,
//! plus the JSON spec format describing them.

pub mod automaton;
pub mod morphism;
pub mod spec;
pub mod sturmian;

pub use automaton::{thue_morse_automaton, Automaton, KernelSize};
pub use morphism::{
    fibonacci_system, is_primitive, period_doubling_system, thue_morse_system, wielandt_exponent,
    MorphicStream, MorphicSystem, Morphism,
};
pub use spec::SequenceSpec;
pub use sturmian::{
    golden_sturmian_params, indicator_pair, verify_st_identity, IndicatorParams, IndicatorStream,
    SturmianParams, SturmianStream, Variant,
};

use crate::error::Result;
use crate::words::{FiniteWord, Symbol};

/// A deterministic infinite word with a fixed starting index (0 for automatic
/// and morphic sequences, 1 for Sturmian and indicator sequences).
///
/// Streams memoize internally, so they take `&mut self`; analysis code
/// extracts immutable prefixes first and parallelizes over those.
#[derive(Clone, Debug)]
pub enum Stream {
    Automaton(Automaton),
    Morphic(MorphicStream),
    Sturmian(SturmianStream),
    Indicator(IndicatorStream),
}

impl Stream {
    pub fn index_base(&self) -> u64 {
        match self {
            Stream::Automaton(_) | Stream::Morphic(_) => 0,
            Stream::Sturmian(_) | Stream::Indicator(_) => 1,
        }
    }

    pub fn alphabet_size(&self) -> u32 {
        match self {
            Stream::Automaton(a) => a.output_alphabet_size(),
            Stream::Morphic(m) => m.system().output_alphabet(),
            Stream::Sturmian(s) => s.params().output_alphabet(),
            Stream::Indicator(_) => 2,
        }
    }

    /// Symbol at absolute index `n` (must be `>= index_base`).
    pub fn symbol_at(&mut self, n: u64) -> Result<Symbol> {
        match self {
            Stream::Automaton(a) => Ok(a.eval(n)),
            Stream::Morphic(m) => Ok(m.symbol_at(n)),
            Stream::Sturmian(s) => s.symbol_at(n),
            Stream::Indicator(t) => t.symbol_at(n),
        }
    }

    /// The first `len` symbols starting at the stream's index base.
    pub fn prefix(&mut self, len: usize) -> Result<FiniteWord> {
        match self {
            Stream::Automaton(a) => {
                let symbols: Vec<Symbol> = (0..len as u64).map(|n| a.eval(n)).collect();
                FiniteWord::new(symbols, a.output_alphabet_size())
            }
            Stream::Morphic(m) => Ok(m.prefix(len)),
            Stream::Sturmian(s) => s.prefix(len),
            Stream::Indicator(t) => t.prefix(len),
        }
    }
}
