//! Deterministic finite automata with output, reading base-k digits of the
//! index most-significant-first, and the exact kernel-size computation.

use std::collections::{HashSet, VecDeque};

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::words::Symbol;

/// A complete DFAO: `states x digits -> states` plus an output map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Automaton {
    k: u32,
    transitions: Vec<Vec<u32>>,
    initial: u32,
    output: Vec<Symbol>,
}

impl Automaton {
    pub fn new(k: u32, transitions: Vec<Vec<u32>>, initial: u32, output: Vec<Symbol>) -> Result<Self> {
        let states = transitions.len() as u32;
        if k < 2 {
            return Err(Error::invalid("k must be at least 2"));
        }
        if states == 0 {
            return Err(Error::invalid("automaton needs at least one state"));
        }
        if output.len() != transitions.len() {
            return Err(Error::invalid("output map must cover every state"));
        }
        for (q, row) in transitions.iter().enumerate() {
            if row.len() != k as usize {
                return Err(Error::invalid(format!(
                    "state {q} has {} transitions, expected {k}",
                    row.len()
                )));
            }
            if let Some(&t) = row.iter().find(|&&t| t >= states) {
                return Err(Error::invalid(format!("transition {q} -> {t} leaves the state set")));
            }
        }
        if initial >= states {
            return Err(Error::invalid("initial state out of range"));
        }
        Ok(Automaton { k, transitions, initial, output })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn state_count(&self) -> usize {
        self.transitions.len()
    }

    pub fn output_alphabet_size(&self) -> u32 {
        self.output.iter().copied().max().unwrap_or(0) + 1
    }

    fn step(&self, q: u32, digit: u32) -> u32 {
        self.transitions[q as usize][digit as usize]
    }

    /// Feeds the base-k digits of `n` most-significant-first from the initial
    /// state. `n = 0` is the empty digit string by convention, yielding
    /// `output(q0)`.
    pub fn eval(&self, n: u64) -> Symbol {
        let mut digits = [0u32; 64];
        let mut len = 0;
        let mut m = n;
        while m > 0 {
            digits[len] = (m % self.k as u64) as u32;
            m /= self.k as u64;
            len += 1;
        }
        let mut q = self.initial;
        for i in (0..len).rev() {
            q = self.step(q, digits[i]);
        }
        self.output[q as usize]
    }

    /// Same convention for arbitrarily large indices.
    pub fn eval_big(&self, n: &BigUint) -> Symbol {
        let mut digits = Vec::new();
        let mut m = n.clone();
        let k = BigUint::from(self.k);
        while !m.is_zero() {
            let (quot, rem) = num_integer::Integer::div_rem(&m, &k);
            digits.push(u32::try_from(&rem).unwrap());
            m = quot;
        }
        let mut q = self.initial;
        for &d in digits.iter().rev() {
            q = self.step(q, d);
        }
        self.output[q as usize]
    }

    /// States reachable by digit strings with a nonzero leading digit, i.e.
    /// the states that occur as `delta(q0, digits(m))` for some `m >= 1`.
    fn reachable_by_positive_index(&self) -> Vec<u32> {
        let mut seen = vec![false; self.state_count()];
        let mut queue = VecDeque::new();
        for d in 1..self.k {
            let q = self.step(self.initial, d);
            if !seen[q as usize] {
                seen[q as usize] = true;
                queue.push_back(q);
            }
        }
        while let Some(q) = queue.pop_front() {
            for d in 0..self.k {
                let t = self.step(q, d);
                if !seen[t as usize] {
                    seen[t as usize] = true;
                    queue.push_back(t);
                }
            }
        }
        (0..self.state_count() as u32).filter(|&q| seen[q as usize]).collect()
    }

    /// Number of distinct sequences in the k-kernel
    /// `{ (a_{k^i m + j})_m : i >= 0, 0 <= j < k^i }`, where two elements are
    /// identified iff they agree as infinite sequences.
    ///
    /// Each kernel element `(i, j)` is the map
    /// `m >= 1 |-> output(g(delta(q0, digits(m))))` together with its value at
    /// `m = 0`, where `g` is the state action of the length-i digit word for
    /// `j`. Two elements are equal as sequences iff their `m = 0` values agree
    /// and `output . g` agree on every state reachable with `m >= 1`, so that
    /// pair is a complete invariant and the BFS below decides equality
    /// exactly, never by prefix sampling.
    pub fn kernel_size(&self, max_size: u64) -> KernelSize {
        let reachable = self.reachable_by_positive_index();
        let states = self.state_count();
        let key_of = |g: &[u32], v0: Symbol| -> (Symbol, Vec<Symbol>) {
            (v0, reachable.iter().map(|&q| self.output[g[q as usize] as usize]).collect())
        };

        // root element: the sequence itself (g = identity, value at 0 = a_0)
        let id: Vec<u32> = (0..states as u32).collect();
        let root_v0 = self.output[self.initial as usize];

        let mut seen: HashSet<(Symbol, Vec<Symbol>)> = HashSet::new();
        let mut queue: VecDeque<(Vec<u32>, BigUint, u32)> = VecDeque::new();
        seen.insert(key_of(&id, root_v0));
        queue.push_back((id, BigUint::zero(), 0));

        while let Some((g, j, i)) = queue.pop_front() {
            for d in 0..self.k {
                // child (i+1, j + d*k^i): digit word = d followed by the old word
                let g_child: Vec<u32> =
                    (0..states as u32).map(|q| g[self.step(q, d) as usize]).collect();
                let j_child = &j + BigUint::from(d) * BigUint::from(self.k).pow(i);
                let v0 = self.eval_big(&j_child);
                let key = key_of(&g_child, v0);
                if seen.insert(key) {
                    if seen.len() as u64 > max_size {
                        return KernelSize::Exceeded;
                    }
                    queue.push_back((g_child, j_child, i + 1));
                }
            }
        }
        KernelSize::Finite(seen.len() as u64)
    }

    /// Relabel states by a permutation; the generated sequence is unchanged.
    pub fn relabeled(&self, perm: &[u32]) -> Result<Automaton> {
        let n = self.state_count();
        if perm.len() != n {
            return Err(Error::invalid("permutation length mismatch"));
        }
        let mut check: Vec<u32> = perm.to_vec();
        check.sort_unstable();
        if check != (0..n as u32).collect::<Vec<_>>() {
            return Err(Error::invalid("not a permutation"));
        }
        let mut transitions = vec![vec![0u32; self.k as usize]; n];
        let mut output = vec![0 as Symbol; n];
        for q in 0..n {
            output[perm[q] as usize] = self.output[q];
            for d in 0..self.k as usize {
                transitions[perm[q] as usize][d] = perm[self.transitions[q][d] as usize];
            }
        }
        Automaton::new(self.k, transitions, perm[self.initial as usize], output)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KernelSize {
    Finite(u64),
    Exceeded,
}

/// The two-state parity automaton generating the Thue-Morse sequence.
pub fn thue_morse_automaton() -> Automaton {
    Automaton::new(2, vec![vec![0, 1], vec![1, 0]], 0, vec![0, 1]).unwrap()
}
