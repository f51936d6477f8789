//! Finite words over small integer alphabets: fractional powers, factor
//! search, and ultimate-periodicity detection on prefixes.

use std::fmt;

use num_rational::Rational64;
use num_traits::Signed;
use serde::Serialize;

use crate::error::{Error, Result};

/// A letter. Alphabets are `{0, 1, ..., alphabet_size - 1}`; anything
/// printable is a presentation-layer concern.
pub type Symbol = u32;

/// An immutable finite word together with the alphabet it lives over.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct FiniteWord {
    symbols: Vec<Symbol>,
    alphabet_size: u32,
}

impl FiniteWord {
    pub fn new(symbols: Vec<Symbol>, alphabet_size: u32) -> Result<Self> {
        if alphabet_size == 0 {
            return Err(Error::invalid("alphabet_size must be positive"));
        }
        if let Some(&bad) = symbols.iter().find(|&&s| s >= alphabet_size) {
            return Err(Error::invalid(format!(
                "symbol {bad} out of range for alphabet of size {alphabet_size}"
            )));
        }
        Ok(FiniteWord { symbols, alphabet_size })
    }

    pub fn empty(alphabet_size: u32) -> Self {
        FiniteWord { symbols: Vec::new(), alphabet_size: alphabet_size.max(1) }
    }

    /// Parse a word from ASCII digits, e.g. `"0110"`. Test/CLI convenience;
    /// only works for alphabets up to 10.
    pub fn parse_digits(text: &str, alphabet_size: u32) -> Result<Self> {
        let mut symbols = Vec::with_capacity(text.len());
        for ch in text.chars() {
            let d = ch
                .to_digit(10)
                .ok_or_else(|| Error::invalid(format!("non-digit character {ch:?}")))?;
            symbols.push(d);
        }
        FiniteWord::new(symbols, alphabet_size)
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn alphabet_size(&self) -> u32 {
        self.alphabet_size
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn last(&self) -> Option<Symbol> {
        self.symbols.last().copied()
    }

    pub fn slice(&self, start: usize, end: usize) -> Result<FiniteWord> {
        if start > end || end > self.len() {
            return Err(Error::invalid(format!(
                "slice {start}..{end} out of bounds for word of length {}",
                self.len()
            )));
        }
        Ok(FiniteWord {
            symbols: self.symbols[start..end].to_vec(),
            alphabet_size: self.alphabet_size,
        })
    }

    pub fn concat(&self, other: &FiniteWord) -> FiniteWord {
        let mut symbols = self.symbols.clone();
        symbols.extend_from_slice(&other.symbols);
        FiniteWord {
            symbols,
            alphabet_size: self.alphabet_size.max(other.alphabet_size),
        }
    }
}

impl std::ops::Index<usize> for FiniteWord {
    type Output = Symbol;
    fn index(&self, i: usize) -> &Symbol {
        &self.symbols[i]
    }
}

impl fmt::Display for FiniteWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.alphabet_size <= 10 {
            for &s in &self.symbols {
                write!(f, "{s}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.symbols.iter().map(|s| s.to_string()).collect();
            write!(f, "{}", parts.join(" "))
        }
    }
}

impl fmt::Debug for FiniteWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteWord(\"{self}\", |A|={})", self.alphabet_size)
    }
}

/// Length of `W^w` under the ceiling convention:
/// `|W^w| = floor(w) * |W| + ceil(frac(w) * |W|)`.
pub fn fractional_power_len(word_len: usize, exponent: Rational64) -> Result<usize> {
    if exponent.is_negative() {
        return Err(Error::invalid("exponent must be non-negative"));
    }
    let whole = exponent.floor().to_integer() as i128;
    let frac = exponent - exponent.floor();
    let len = word_len as i128;
    // ceil((num * len) / den) for a non-negative proper fraction
    let num = *frac.numer() as i128;
    let den = *frac.denom() as i128;
    let extra = (num * len + den - 1).div_euclid(den);
    let total = whole * len + extra;
    if total > (1_i128 << 33) {
        return Err(Error::invalid(format!("fractional power of length {total} is too long")));
    }
    Ok(total as usize)
}

/// `W^w`: `floor(w)` copies of `W` followed by the prefix of `W` of length
/// `ceil(frac(w) * |W|)`. `W^0` is the empty word.
pub fn fractional_power(word: &FiniteWord, exponent: Rational64) -> Result<FiniteWord> {
    if exponent.is_negative() {
        return Err(Error::invalid("exponent must be non-negative"));
    }
    use num_traits::Zero;
    if exponent.is_zero() {
        return Ok(FiniteWord::empty(word.alphabet_size()));
    }
    if word.is_empty() {
        return Err(Error::invalid("positive fractional power of the empty word"));
    }
    let total = fractional_power_len(word.len(), exponent)?;
    let mut symbols = Vec::with_capacity(total);
    for i in 0..total {
        symbols.push(word[i % word.len()]);
    }
    Ok(FiniteWord { symbols, alphabet_size: word.alphabet_size() })
}

/// All start positions of `pattern` inside `text`, sorted. KMP.
pub fn occurrences(pattern: &FiniteWord, text: &FiniteWord) -> Result<Vec<usize>> {
    if pattern.is_empty() {
        return Err(Error::invalid("occurrences of the empty word are ill-defined"));
    }
    let p = pattern.symbols();
    let t = text.symbols();
    if t.len() < p.len() {
        return Ok(Vec::new());
    }
    let fail = failure_function(p);
    let mut out = Vec::new();
    let mut k = 0usize;
    for (i, &c) in t.iter().enumerate() {
        while k > 0 && p[k] != c {
            k = fail[k - 1];
        }
        if p[k] == c {
            k += 1;
        }
        if k == p.len() {
            out.push(i + 1 - k);
            k = fail[k - 1];
        }
    }
    Ok(out)
}

/// KMP failure function: `fail[i]` = length of the longest proper border of
/// `w[..=i]`.
pub(crate) fn failure_function(w: &[Symbol]) -> Vec<usize> {
    let mut fail = vec![0usize; w.len()];
    let mut k = 0usize;
    for i in 1..w.len() {
        while k > 0 && w[i] != w[k] {
            k = fail[k - 1];
        }
        if w[i] == w[k] {
            k += 1;
        }
        fail[i] = k;
    }
    fail
}

/// Smallest period of `w` (the minimal `v >= 1` with `w[i] == w[i+v]` for all
/// valid `i`); equals `|w| - border(w)`.
pub(crate) fn minimal_period(w: &[Symbol]) -> usize {
    if w.is_empty() {
        return 0;
    }
    let fail = failure_function(w);
    w.len() - fail[w.len() - 1]
}

/// Searches for a decomposition `prefix = U · V V V ...` (truncated) with
/// `|U| <= max_preperiod` and `|V| <= max_period`, preferring minimal `|U|`
/// then minimal `|V|`.
///
/// A returned `(U, V)` certifies only the examined prefix; for an infinite
/// word it is a hypothesis, not a proof.
pub fn detect_ultimate_period(
    prefix: &FiniteWord,
    max_preperiod: usize,
    max_period: usize,
) -> Result<Option<(FiniteWord, FiniteWord)>> {
    if max_period == 0 {
        return Err(Error::invalid("max_period must be positive"));
    }
    if prefix.len() < max_preperiod + 2 * max_period {
        return Err(Error::invalid(format!(
            "prefix of length {} is too short for bounds ({max_preperiod}, {max_period}); need at least {}",
            prefix.len(),
            max_preperiod + 2 * max_period
        )));
    }
    let w = prefix.symbols();
    for u in 0..=max_preperiod {
        let period = minimal_period(&w[u..]);
        if period >= 1 && period <= max_period {
            let head = prefix.slice(0, u)?;
            let block = prefix.slice(u, u + period)?;
            return Ok(Some((head, block)));
        }
    }
    Ok(None)
}
