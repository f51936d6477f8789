//! Subword complexity `p(n)` on finite prefixes: a linear-time count via a
//! suffix automaton, a naive set-based reference, and the per-family bound
//! checks.

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigUint;
use num_rational::Rational64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::par;
use crate::words::{FiniteWord, Symbol};

/// Suffix automaton over `u32` symbols.
/// References: https://cp-algorithms.com/string/suffix-automaton.html
struct SuffixAutomaton {
    len: Vec<usize>,
    link: Vec<i64>,
    next: Vec<BTreeMap<Symbol, u32>>,
    last: u32,
}

impl SuffixAutomaton {
    fn new() -> Self {
        SuffixAutomaton { len: vec![0], link: vec![-1], next: vec![BTreeMap::new()], last: 0 }
    }

    fn alloc(&mut self, len: usize, link: i64, next: BTreeMap<Symbol, u32>) -> u32 {
        self.len.push(len);
        self.link.push(link);
        self.next.push(next);
        (self.len.len() - 1) as u32
    }

    fn push(&mut self, c: Symbol) {
        let cur = self.alloc(self.len[self.last as usize] + 1, -1, BTreeMap::new());
        let mut p = self.last as i64;
        while p >= 0 && !self.next[p as usize].contains_key(&c) {
            self.next[p as usize].insert(c, cur);
            p = self.link[p as usize];
        }
        if p == -1 {
            self.link[cur as usize] = 0;
        } else {
            let q = self.next[p as usize][&c];
            if self.len[p as usize] + 1 == self.len[q as usize] {
                self.link[cur as usize] = q as i64;
            } else {
                let clone = self.alloc(
                    self.len[p as usize] + 1,
                    self.link[q as usize],
                    self.next[q as usize].clone(),
                );
                while p >= 0 && self.next[p as usize].get(&c) == Some(&q) {
                    self.next[p as usize].insert(c, clone);
                    p = self.link[p as usize];
                }
                self.link[q as usize] = clone as i64;
                self.link[cur as usize] = clone as i64;
            }
        }
        self.last = cur;
    }

    fn build(word: &[Symbol]) -> Self {
        let mut sa = SuffixAutomaton::new();
        for &c in word {
            sa.push(c);
        }
        sa
    }

    /// `counts[n-1]` = number of distinct factors of length `n`, for
    /// `n = 1..=max_n`. Every non-root state contributes one factor for each
    /// length in `(len(link), len]`; a difference array turns that into all
    /// counts in one pass.
    fn distinct_factor_counts(&self, max_n: usize) -> Vec<u64> {
        let mut diff = vec![0i64; max_n + 2];
        for v in 1..self.len.len() {
            let lo = self.len[self.link[v] as usize] + 1;
            let hi = self.len[v];
            let lo = lo.min(max_n + 1);
            let hi = hi.min(max_n);
            if lo <= hi {
                diff[lo] += 1;
                diff[hi + 1] -= 1;
            }
        }
        let mut out = Vec::with_capacity(max_n);
        let mut acc = 0i64;
        for d in &diff[1..=max_n] {
            acc += d;
            out.push(acc as u64);
        }
        out
    }
}

/// `p(n)` for `n = 1..=n_max` of a finite prefix, counted in `O(L)` by the
/// suffix automaton. The values are lower bounds for the infinite word's
/// complexity, marked as such in [`ComplexityProfile`].
pub fn profile(prefix: &FiniteWord, n_max: usize) -> Result<ComplexityProfile> {
    if n_max == 0 || n_max > prefix.len() {
        return Err(Error::invalid(format!(
            "n_max {n_max} out of range for a prefix of length {}",
            prefix.len()
        )));
    }
    let sa = SuffixAutomaton::build(prefix.symbols());
    Ok(ComplexityProfile {
        window_len: prefix.len(),
        alphabet_size: prefix.alphabet_size(),
        values: sa.distinct_factor_counts(n_max),
        prefix_lower_bound: true,
    })
}

/// Number of distinct length-`n` factors of the prefix.
pub fn subword_complexity(prefix: &FiniteWord, n: usize) -> Result<u64> {
    if n == 0 || n > prefix.len() {
        return Err(Error::invalid(format!(
            "factor length {n} out of range for a prefix of length {}",
            prefix.len()
        )));
    }
    let sa = SuffixAutomaton::build(prefix.symbols());
    Ok(sa.distinct_factor_counts(n)[n - 1])
}

/// Reference implementation: hash every window. Quadratic, kept as the oracle
/// the fast path is tested against.
pub fn subword_complexity_naive(prefix: &FiniteWord, n: usize) -> Result<u64> {
    if n == 0 || n > prefix.len() {
        return Err(Error::invalid(format!(
            "factor length {n} out of range for a prefix of length {}",
            prefix.len()
        )));
    }
    let w = prefix.symbols();
    let set: HashSet<&[Symbol]> = w.windows(n).collect();
    Ok(set.len() as u64)
}

/// Naive profile, evaluated per `n` (in parallel when enabled).
pub fn profile_naive(prefix: &FiniteWord, n_max: usize) -> Result<ComplexityProfile> {
    profile_naive_impl(prefix, n_max, false)
}

/// Always-sequential twin of [`profile_naive`] for benchmarks.
pub fn profile_naive_serial(prefix: &FiniteWord, n_max: usize) -> Result<ComplexityProfile> {
    profile_naive_impl(prefix, n_max, true)
}

fn profile_naive_impl(prefix: &FiniteWord, n_max: usize, serial: bool) -> Result<ComplexityProfile> {
    if n_max == 0 || n_max > prefix.len() {
        return Err(Error::invalid("n_max out of range"));
    }
    let ns: Vec<usize> = (1..=n_max).collect();
    let count = |&n: &usize| subword_complexity_naive(prefix, n).expect("n validated");
    let values =
        if serial { par::map_collect_serial(&ns, count) } else { par::map_collect(&ns, count) };
    Ok(ComplexityProfile {
        window_len: prefix.len(),
        alphabet_size: prefix.alphabet_size(),
        values,
        prefix_lower_bound: true,
    })
}

/// `p(n)` for `n = 1..=values.len()` measured on a window of length
/// `window_len`. Always a lower bound for the infinite word's complexity.
#[derive(Clone, Debug, Serialize)]
pub struct ComplexityProfile {
    pub window_len: usize,
    pub alphabet_size: u32,
    pub values: Vec<u64>,
    /// Finite windows can only bound `p(a, n)` from below.
    pub prefix_lower_bound: bool,
}

impl ComplexityProfile {
    pub fn value(&self, n: usize) -> Option<u64> {
        self.values.get(n - 1).copied()
    }

    pub fn n_max(&self) -> usize {
        self.values.len()
    }

    /// Standard sanity facts for subword complexity on a window.
    pub fn is_internally_consistent(&self) -> bool {
        let ok_window =
            self.values.iter().enumerate().all(|(i, &p)| p <= (self.window_len - i) as u64);
        let ok_monotone = self.values.windows(2).all(|w| w[0] <= w[1]);
        let ok_growth =
            self.values.windows(2).all(|w| w[1] <= w[0].saturating_mul(self.alphabet_size as u64));
        ok_window && ok_monotone && ok_growth
    }
}

/// Measured kappa: the smallest integer `kappa >= 2` with
/// `p(n) <= kappa * n` on the whole range, plus the tightest ratio.
#[derive(Clone, Debug, Serialize)]
pub struct KappaReport {
    pub kappa: u64,
    #[serde(with = "ratio64_serde")]
    pub max_ratio: Rational64,
    pub argmax_n: usize,
    pub n_range: (usize, usize),
}

pub(crate) mod ratio64_serde {
    use num_rational::Rational64;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(r: &Rational64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
    }
}

pub fn complexity_kappa(profile: &ComplexityProfile, n0: usize, n1: usize) -> Result<KappaReport> {
    if n0 == 0 || n0 > n1 || n1 > profile.values.len() {
        return Err(Error::invalid(format!(
            "kappa range [{n0}, {n1}] out of bounds (profile covers 1..={})",
            profile.values.len()
        )));
    }
    let mut max_ratio = Rational64::new(0, 1);
    let mut argmax = n0;
    for n in n0..=n1 {
        let r = Rational64::new(profile.values[n - 1] as i64, n as i64);
        if r > max_ratio {
            max_ratio = r;
            argmax = n;
        }
    }
    let kappa = (max_ratio.ceil().to_integer().max(2)) as u64;
    Ok(KappaReport { kappa, max_ratio, argmax_n: argmax, n_range: (n0, n1) })
}

/// Which complexity bound applies to a sequence family.
#[derive(Clone, Debug, Serialize)]
pub enum Family {
    /// base `k`, internal alphabet of size `d`: `p(n) <= k d^2 n`
    Automatic { k: u64, d: u64 },
    /// width `v`, alphabet size `b >= 2`: `p(n) <= 2 v^(4b-2) b^3 n`
    PrimitiveMorphic { width: u64, alphabet: u64 },
    /// exact equality `p(n) = n + 1`
    Sturmian,
}

impl Family {
    /// Per-`n` linear coefficient of the bound, when it is an upper bound.
    pub fn linear_coefficient(&self) -> Result<Option<BigUint>> {
        match self {
            Family::Automatic { k, d } => {
                Ok(Some(BigUint::from(*k) * BigUint::from(*d) * BigUint::from(*d)))
            }
            Family::PrimitiveMorphic { width, alphabet } => {
                if *alphabet < 2 {
                    return Err(Error::invalid(
                        "the primitive-morphic bound requires an alphabet of size at least 2",
                    ));
                }
                let b = BigUint::from(*alphabet);
                let bound = BigUint::from(2u32)
                    * BigUint::from(*width).pow((4 * *alphabet - 2) as u32)
                    * (&b * &b * &b);
                Ok(Some(bound))
            }
            Family::Sturmian => Ok(None),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundRow {
    pub n: usize,
    pub p_n: u64,
    /// Upper bound at this `n`; for Sturmian it is the exact required value.
    pub bound: String,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub family: Family,
    pub rows: Vec<BoundRow>,
    pub all_pass: bool,
}

impl BoundReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,p_n,bound,pass\n");
        for row in &self.rows {
            out.push_str(&format!("{},{},{},{}\n", row.n, row.p_n, row.bound, row.pass));
        }
        out
    }
}

/// Per-`n` pass/fail of the family's complexity bound; Sturmian sequences are
/// checked for the exact equality `p(n) = n + 1`.
pub fn check_complexity_bound(family: Family, profile: &ComplexityProfile) -> Result<BoundReport> {
    let coeff = family.linear_coefficient()?;
    let mut rows = Vec::with_capacity(profile.values.len());
    let mut all_pass = true;
    for (i, &p_n) in profile.values.iter().enumerate() {
        let n = i + 1;
        let (bound_str, pass) = match &coeff {
            Some(c) => {
                let bound = c * BigUint::from(n);
                let pass = BigUint::from(p_n) <= bound;
                (bound.to_string(), pass)
            }
            None => {
                let want = (n + 1) as u64;
                (want.to_string(), p_n == want)
            }
        };
        all_pass &= pass;
        rows.push(BoundRow { n, p_n, bound: bound_str, pass });
    }
    Ok(BoundReport { family, rows, all_pass })
}
