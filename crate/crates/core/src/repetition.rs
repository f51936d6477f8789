//! Prefix repetitions `U V^w` and the certified evidence they give for the
//! repetition (Diophantine) exponent of an infinite word.
//!
//! Two independent routes are kept side by side: the constructive pigeonhole
//! search [`find_repetition_in`] whose output is re-verified from raw words
//! by [`verify_triple`], and the exhaustive per-prefix optimum
//! [`best_prefix_repetition`].

use num_rational::Rational64;
use serde::Serialize;
use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::generators::Stream;
use crate::par;
use crate::words::{fractional_power_len, FiniteWord, Symbol};

/// A prefix decomposition `U V^w` of a word, with exact rational exponent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepetitionTriple {
    pub head: FiniteWord,
    pub block: FiniteWord,
    pub exponent: Rational64,
}

impl RepetitionTriple {
    /// `|V^w|` under the ceiling convention.
    pub fn power_len(&self) -> usize {
        fractional_power_len(self.block.len(), self.exponent).expect("exponent is non-negative")
    }

    /// `|U V^w|`.
    pub fn total_len(&self) -> usize {
        self.head.len() + self.power_len()
    }

    /// `|U V^w| / |U V|`, the quantity Condition-style bounds are about.
    pub fn ratio(&self) -> Rational64 {
        Rational64::new(self.total_len() as i64, (self.head.len() + self.block.len()) as i64)
    }
}

/// The six properties a constructed triple must satisfy, re-checked from raw
/// words (see [`verify_triple`]).
#[derive(Clone, Copy, Debug, Serialize, PartialEq, Eq)]
pub struct TripleChecks {
    /// (i) `U V^w` is a prefix of the examined word
    pub i: bool,
    /// (ii) `|U| <= 2 kappa |V|`
    pub ii: bool,
    /// (iii) `n/2 <= |V| <= kappa n`
    pub iii: bool,
    /// (iv) if `U` is nonempty, its last letter differs from `V`'s
    pub iv: bool,
    /// (v) `|U V^w| / |U V| >= 1 + 1/(4 kappa + 2)`
    pub v: bool,
    /// (vi) `|U V| <= (kappa + 1) n - 1`
    pub vi: bool,
}

impl TripleChecks {
    pub fn all(&self) -> bool {
        self.i && self.ii && self.iii && self.iv && self.v && self.vi
    }
}

/// Constructive repetition search in the window `A((kappa+1) n)`.
///
/// Finds the leftmost repeated length-`n` factor (leftmost first occurrence,
/// then leftmost second occurrence), shifts the occurrence pair left while
/// the letters before both occurrences agree, and splits into the
/// non-overlapping (`U = B`, `V = W F`) or overlapping (`W = C^d`,
/// `V = C^ceil(d/2)`) case.
///
/// The caller is responsible for `p(a, n) <= kappa * n`; when no length-`n`
/// factor repeats the search reports [`Error::Infeasible`].
pub fn find_repetition_in(prefix: &FiniteWord, n: usize, kappa: u64) -> Result<RepetitionTriple> {
    if n == 0 {
        return Err(Error::invalid("repetition length n must be positive"));
    }
    if kappa < 2 {
        return Err(Error::invalid("kappa must be at least 2"));
    }
    let window = (kappa as usize + 1) * n;
    if prefix.len() < window {
        return Err(Error::invalid(format!(
            "prefix of length {} is shorter than the required window {window}",
            prefix.len()
        )));
    }
    let w = &prefix.symbols()[..window];

    // best (first, second) occurrence pair, lexicographically smallest
    let mut best: Option<(usize, usize)> = None;
    let mut first_seen: HashMap<&[Symbol], usize> = HashMap::new();
    for j in 0..=window - n {
        let factor = &w[j..j + n];
        match first_seen.get(factor) {
            Some(&i) => {
                if best.is_none_or(|(bi, bj)| (i, j) < (bi, bj)) {
                    best = Some((i, j));
                }
            }
            None => {
                first_seen.insert(factor, j);
            }
        }
    }
    let (mut i, mut j) = best.ok_or(Error::Infeasible { n, kappa, window })?;

    // absorb equal letters on the left so that the letter before the first
    // occurrence differs from the letter before the second one
    while i > 0 && w[i - 1] == w[j - 1] {
        i -= 1;
        j -= 1;
    }

    let gap = j - i;
    let head = prefix.slice(0, i)?;
    if gap >= n {
        // A = B W F W E with V = W F of length `gap`
        let block = prefix.slice(i, j)?;
        let exponent = Rational64::new((gap + n) as i64, gap as i64);
        Ok(RepetitionTriple { head, block, exponent })
    } else {
        // overlapping occurrences: W = C^d with |C| = gap, d = n/gap > 1
        let half_up = n.div_ceil(2 * gap); // ceil(d/2)
        let block = prefix.slice(i, i + half_up * gap)?;
        // w = (d + 1) / ceil(d/2)
        let exponent = Rational64::new((n + gap) as i64, (half_up * gap) as i64);
        Ok(RepetitionTriple { head, block, exponent })
    }
}

/// Re-verifies the six properties from the raw words. Shares no code with
/// [`find_repetition_in`]: the power expansion and all inequalities are
/// recomputed inline with integer arithmetic.
pub fn verify_triple(
    prefix: &FiniteWord,
    n: usize,
    kappa: u64,
    triple: &RepetitionTriple,
) -> TripleChecks {
    let w = prefix.symbols();
    let u = triple.head.symbols();
    let v = triple.block.symbols();
    let k = kappa as i128;

    // |V^w| recomputed from the definition
    let exp = triple.exponent;
    let whole = exp.floor().to_integer() as i128;
    let frac_num = (*exp.numer() as i128) - whole * (*exp.denom() as i128);
    let den = *exp.denom() as i128;
    let power_len = (whole * v.len() as i128
        + (frac_num * v.len() as i128 + den - 1).div_euclid(den)) as usize;
    let total = u.len() + power_len;

    let i = total <= w.len()
        && !v.is_empty()
        && w[..u.len()] == *u
        && (0..power_len).all(|t| w[u.len() + t] == v[t % v.len()]);
    let ii = (u.len() as i128) <= 2 * k * v.len() as i128;
    let iii = (n as i128) <= 2 * v.len() as i128 && (v.len() as i128) <= k * n as i128;
    let iv = u.is_empty() || u.last() != v.last();
    // ratio >= (4k+3)/(4k+2), cross-multiplied
    let v_ok = (total as i128) * (4 * k + 2) >= (u.len() + v.len()) as i128 * (4 * k + 3);
    let vi = ((u.len() + v.len()) as i128) < (k + 1) * n as i128;

    TripleChecks { i, ii, iii, iv, v: v_ok, vi }
}

/// Stream-facing wrapper: materializes `A((kappa+1) n)` and searches it.
pub fn find_repetition(stream: &mut Stream, n: usize, kappa: u64) -> Result<RepetitionTriple> {
    let prefix = stream.prefix((kappa as usize + 1) * n)?;
    find_repetition_in(&prefix, n, kappa)
}

/// One row of a repetition scan, in the shape the JSON interface promises.
#[derive(Clone, Debug, Serialize)]
pub struct TripleReport {
    pub n: usize,
    pub kappa: u64,
    #[serde(rename = "U_len")]
    pub u_len: usize,
    #[serde(rename = "V_len")]
    pub v_len: usize,
    pub w: String,
    pub ratio: String,
    pub checks: TripleChecks,
}

impl TripleReport {
    pub fn new(n: usize, kappa: u64, triple: &RepetitionTriple, checks: TripleChecks) -> Self {
        let r = triple.ratio();
        TripleReport {
            n,
            kappa,
            u_len: triple.head.len(),
            v_len: triple.block.len(),
            w: format!("{}/{}", triple.exponent.numer(), triple.exponent.denom()),
            ratio: format!("{}/{}", r.numer(), r.denom()),
            checks,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanRow {
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<TripleReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Runs [`find_repetition_in`] and the independent checker for every `n` in
/// the range, in parallel over `n`. Infeasible rows are reported, not fatal.
pub fn repetition_scan(
    stream: &mut Stream,
    n_from: usize,
    n_to: usize,
    kappa: u64,
) -> Result<Vec<ScanRow>> {
    if n_from == 0 || n_from > n_to {
        return Err(Error::invalid("need 1 <= n_from <= n_to"));
    }
    let prefix = stream.prefix((kappa as usize + 1) * n_to)?;
    let ns: Vec<usize> = (n_from..=n_to).collect();
    let rows = par::map_collect(&ns, |&n| match find_repetition_in(&prefix, n, kappa) {
        Ok(triple) => {
            let checks = verify_triple(&prefix, n, kappa, &triple);
            ScanRow { n, report: Some(TripleReport::new(n, kappa, &triple, checks)), error: None }
        }
        Err(e) => ScanRow { n, report: None, error: Some(e.to_string()) },
    });
    Ok(rows)
}

fn best_for_block_len(w: &[Symbol], v: usize) -> (Rational64, usize, usize) {
    let len = w.len();
    // first mismatch position >= u + v (w[x] != w[x-v]), walked with u
    // descending so it updates in O(1) per step
    let mut cur = len;
    let mut best: Option<(Rational64, usize, usize)> = None;
    for u in (0..=len - v).rev() {
        let x = u + v;
        if x < len && w[x] != w[x - v] {
            cur = x;
        }
        let ratio = Rational64::new(cur as i64, (u + v) as i64);
        let better = match &best {
            None => true,
            // fixed v: smaller u also means smaller |U V|
            Some((br, bu, _)) => ratio > *br || (ratio == *br && u < *bu),
        };
        if better {
            best = Some((ratio, u, cur));
        }
    }
    best.expect("v <= len gives at least the u = 0 candidate")
}

/// Exhaustive search over all decompositions `prefix-of-A = U V^w` with
/// `|V| >= 1` and `w >= 1`, maximizing `|U V^w| / |U V|`. Ties prefer the
/// smaller `|U V|`, then the smaller `|U|`, then the smaller `|V|`. `O(L^2)`,
/// parallel over the block length.
pub fn best_prefix_repetition(prefix: &FiniteWord) -> Result<RepetitionTriple> {
    best_prefix_repetition_impl(prefix, false)
}

/// Always-sequential twin of [`best_prefix_repetition`] for benchmarks.
pub fn best_prefix_repetition_serial(prefix: &FiniteWord) -> Result<RepetitionTriple> {
    best_prefix_repetition_impl(prefix, true)
}

fn best_prefix_repetition_impl(prefix: &FiniteWord, serial: bool) -> Result<RepetitionTriple> {
    if prefix.len() < 2 {
        return Err(Error::invalid("prefix must have length at least 2"));
    }
    let w = prefix.symbols();
    let vs: Vec<usize> = (1..=w.len()).collect();
    let eval = |&v: &usize| best_for_block_len(w, v);
    let per_v = if serial { par::map_collect_serial(&vs, eval) } else { par::map_collect(&vs, eval) };

    // ratio desc, then |U V| asc, then |U| asc, then |V| asc
    let mut best: Option<(Rational64, usize, usize, usize, usize)> = None;
    for (idx, &(ratio, u, end)) in per_v.iter().enumerate() {
        let v = idx + 1;
        let better = match &best {
            None => true,
            Some((br, buv, bu, bv, _)) => {
                (ratio, std::cmp::Reverse(u + v), std::cmp::Reverse(u), std::cmp::Reverse(v))
                    > (*br, std::cmp::Reverse(*buv), std::cmp::Reverse(*bu), std::cmp::Reverse(*bv))
            }
        };
        if better {
            best = Some((ratio, u + v, u, v, end));
        }
    }
    let (_, _, u, v, end) = best.expect("at least one candidate for len >= 2");
    let head = prefix.slice(0, u)?;
    let block = prefix.slice(u, u + v)?;
    let exponent = Rational64::new((end - u) as i64, v as i64);
    Ok(RepetitionTriple { head, block, exponent })
}

/// Evidence for the repetition exponent gathered from a ladder of prefix
/// lengths.
#[derive(Clone, Debug)]
pub struct DioEstimate {
    /// `max(1, best ratio seen)`: every value below this is witnessed by a
    /// prefix repetition at some examined scale.
    pub bound: Rational64,
    /// Triples achieving `ratio >= bound`, deduplicated to strictly
    /// increasing `|V^w|`.
    pub chain: Vec<RepetitionTriple>,
    /// The best triple found at each examined prefix length.
    pub rungs: Vec<RungEvidence>,
}

#[derive(Clone, Debug)]
pub struct RungEvidence {
    pub prefix_len: usize,
    pub triple: RepetitionTriple,
}

impl DioEstimate {
    /// Largest ratio witnessed by prefixes of length `<= len`.
    pub fn bound_at(&self, len: usize) -> Rational64 {
        let one = Rational64::new(1, 1);
        self.rungs
            .iter()
            .filter(|r| r.prefix_len <= len)
            .map(|r| r.triple.ratio())
            .fold(one, |a, b| a.max(b))
    }
}

/// Greedy witness-chain assembly over a strictly increasing list of prefix
/// lengths. The result is monotone in the ladder: adding lengths never lowers
/// the bound.
pub fn dio_lower_bound(stream: &mut Stream, ladder: &[usize]) -> Result<DioEstimate> {
    if ladder.is_empty() || ladder.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("ladder must be nonempty and strictly increasing"));
    }
    if ladder[0] < 2 {
        return Err(Error::invalid("ladder entries must be at least 2"));
    }
    let longest = stream.prefix(*ladder.last().unwrap())?;
    dio_lower_bound_from_prefix(&longest, ladder)
}

/// Same as [`dio_lower_bound`] once the longest prefix is materialized.
pub fn dio_lower_bound_from_prefix(longest: &FiniteWord, ladder: &[usize]) -> Result<DioEstimate> {
    let lens: Vec<usize> = ladder.to_vec();
    let rung_triples: Vec<Result<RepetitionTriple>> = par::map_collect(&lens, |&len| {
        let sub = longest.slice(0, len)?;
        best_prefix_repetition(&sub)
    });
    let mut rungs = Vec::with_capacity(lens.len());
    for (len, t) in lens.iter().zip(rung_triples) {
        rungs.push(RungEvidence { prefix_len: *len, triple: t? });
    }
    let one = Rational64::new(1, 1);
    let bound = rungs.iter().map(|r| r.triple.ratio()).fold(one, |a, b| a.max(b));

    let mut chain: Vec<RepetitionTriple> = rungs
        .iter()
        .map(|r| r.triple.clone())
        .filter(|t| t.ratio() >= bound)
        .collect();
    chain.sort_by_key(|t| t.power_len());
    chain.dedup_by_key(|t| t.power_len());
    Ok(DioEstimate { bound, chain, rungs })
}
