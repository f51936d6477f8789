//! Morphisms on free monoids, primitivity, prolongable fixed points, and the
//! uniform-morphic-to-automaton construction.

use crate::error::{Error, Result};
use crate::generators::automaton::Automaton;
use crate::words::{FiniteWord, Symbol};

/// A monoid morphism `A* -> B*` given by the images of the letters of `A`.
/// Images are required nonempty (no erasing morphisms anywhere in this crate).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    images: Vec<FiniteWord>,
    target_alphabet: u32,
}

impl Morphism {
    pub fn new(images: Vec<FiniteWord>) -> Result<Self> {
        if images.is_empty() {
            return Err(Error::invalid("morphism needs a nonempty alphabet"));
        }
        if images.iter().any(|w| w.is_empty()) {
            return Err(Error::invalid("erasing morphisms are not supported"));
        }
        let target_alphabet = images.iter().map(|w| w.alphabet_size()).max().unwrap();
        Ok(Morphism { images, target_alphabet })
    }

    pub fn alphabet_size(&self) -> u32 {
        self.images.len() as u32
    }

    pub fn target_alphabet(&self) -> u32 {
        self.target_alphabet
    }

    pub fn image(&self, letter: Symbol) -> &FiniteWord {
        &self.images[letter as usize]
    }

    /// `max |sigma(a)|` over letters `a`.
    pub fn width(&self) -> usize {
        self.images.iter().map(|w| w.len()).max().unwrap()
    }

    /// `Some(k)` when every image has length `k`.
    pub fn uniform_width(&self) -> Option<usize> {
        let k = self.images[0].len();
        self.images.iter().all(|w| w.len() == k).then_some(k)
    }

    pub fn is_coding(&self) -> bool {
        self.uniform_width() == Some(1)
    }

    pub fn apply(&self, word: &FiniteWord) -> Result<FiniteWord> {
        let mut symbols = Vec::new();
        for &s in word.symbols() {
            if s >= self.alphabet_size() {
                return Err(Error::invalid(format!("letter {s} outside the morphism's domain")));
            }
            symbols.extend_from_slice(self.images[s as usize].symbols());
        }
        FiniteWord::new(symbols, self.target_alphabet)
    }

    /// Entrywise-boolean incidence structure: `reaches[a][b]` iff `a` occurs
    /// in `sigma(b)`.
    fn occurrence_matrix(&self) -> Vec<Vec<bool>> {
        let n = self.images.len();
        let mut m = vec![vec![false; n]; n];
        for (b, img) in self.images.iter().enumerate() {
            for &a in img.symbols() {
                m[a as usize][b] = true;
            }
        }
        m
    }
}

/// True iff some power `sigma^n`, `n <= max_exponent`, maps every letter to a
/// word containing every letter. With
/// `max_exponent >= (alphabet - 1)^2 + 1` the answer is exact.
pub fn is_primitive(sigma: &Morphism, max_exponent: u32) -> Result<bool> {
    if sigma.target_alphabet() > sigma.alphabet_size() {
        return Err(Error::invalid("primitivity needs an endomorphism A* -> A*"));
    }
    let base = sigma.occurrence_matrix();
    let n = base.len();
    let all_true = |m: &Vec<Vec<bool>>| m.iter().all(|row| row.iter().all(|&x| x));
    let mut acc = base.clone();
    for _ in 0..max_exponent {
        if all_true(&acc) {
            return Ok(true);
        }
        // acc <- base * acc over the boolean semiring
        let mut next = vec![vec![false; n]; n];
        for (a, row) in next.iter_mut().enumerate() {
            for (b, cell) in row.iter_mut().enumerate() {
                *cell = (0..n).any(|c| base[a][c] && acc[c][b]);
            }
        }
        acc = next;
    }
    Ok(false)
}

/// Exact exponent bound for [`is_primitive`] on an alphabet of `n` letters.
pub fn wielandt_exponent(alphabet_size: u32) -> u32 {
    let n = alphabet_size;
    (n.saturating_sub(1)).pow(2) + 1
}

/// `sigma` prolongable on `seed` plus a coding: defines the infinite word
/// `lim tau(sigma^n(seed))`.
#[derive(Clone, Debug)]
pub struct MorphicSystem {
    sigma: Morphism,
    coding: Morphism,
    seed: Symbol,
}

impl MorphicSystem {
    pub fn new(sigma: Morphism, coding: Morphism, seed: Symbol) -> Result<Self> {
        if sigma.target_alphabet() > sigma.alphabet_size() {
            return Err(Error::invalid("sigma must map its alphabet into itself"));
        }
        if seed >= sigma.alphabet_size() {
            return Err(Error::invalid("seed letter outside the alphabet"));
        }
        if !coding.is_coding() {
            return Err(Error::invalid("coding must send every letter to a single letter"));
        }
        if coding.alphabet_size() < sigma.alphabet_size() {
            return Err(Error::invalid("coding must cover sigma's alphabet"));
        }
        let first = sigma.image(seed);
        if first[0] != seed || first.len() < 2 {
            return Err(Error::invalid(
                "sigma is not prolongable on the seed: sigma(seed) must start with the seed and have length >= 2",
            ));
        }
        Ok(MorphicSystem { sigma, coding, seed })
    }

    /// Identity coding on `sigma`'s alphabet.
    pub fn with_identity_coding(sigma: Morphism, seed: Symbol) -> Result<Self> {
        let n = sigma.alphabet_size();
        let coding =
            Morphism::new((0..n).map(|a| FiniteWord::new(vec![a], n).unwrap()).collect())?;
        MorphicSystem::new(sigma, coding, seed)
    }

    pub fn sigma(&self) -> &Morphism {
        &self.sigma
    }

    pub fn coding(&self) -> &Morphism {
        &self.coding
    }

    pub fn seed(&self) -> Symbol {
        self.seed
    }

    pub fn output_alphabet(&self) -> u32 {
        self.coding.target_alphabet()
    }

    /// Cobham's construction: a k-uniform prolongable system is a base-k DFAO
    /// with the internal alphabet as state set.
    pub fn to_automaton(&self) -> Result<Automaton> {
        let k = self
            .sigma
            .uniform_width()
            .ok_or_else(|| Error::invalid("automaton construction needs a uniform morphism"))?;
        if k < 2 {
            return Err(Error::invalid("uniform width must be at least 2"));
        }
        let n = self.sigma.alphabet_size() as usize;
        let transitions: Vec<Vec<u32>> =
            (0..n).map(|a| self.sigma.image(a as u32).symbols().to_vec()).collect();
        let output: Vec<Symbol> =
            (0..n).map(|a| self.coding.image(a as u32)[0]).collect();
        Automaton::new(k as u32, transitions, self.seed, output)
    }
}

/// Lazily expanded fixed point `tau(sigma^infinity(seed))`.
///
/// The raw fixed point is grown by self-reading: the buffer starts at
/// `sigma(seed)` and is extended by applying `sigma` to the letter the read
/// pointer is on, which never recomputes earlier output.
#[derive(Clone, Debug)]
pub struct MorphicStream {
    system: MorphicSystem,
    raw: Vec<Symbol>,
    read_ptr: usize,
}

impl MorphicStream {
    pub fn new(system: MorphicSystem) -> Self {
        let raw = system.sigma.image(system.seed).symbols().to_vec();
        MorphicStream { system, raw, read_ptr: 1 }
    }

    pub fn system(&self) -> &MorphicSystem {
        &self.system
    }

    fn grow_to(&mut self, len: usize) {
        while self.raw.len() < len {
            let letter = self.raw[self.read_ptr];
            self.read_ptr += 1;
            let img = self.system.sigma.image(letter);
            self.raw.extend_from_slice(img.symbols());
        }
    }

    pub fn symbol_at(&mut self, n: u64) -> Symbol {
        let idx = n as usize;
        self.grow_to(idx + 1);
        self.system.coding.image(self.raw[idx])[0]
    }

    pub fn prefix(&mut self, len: usize) -> FiniteWord {
        self.grow_to(len);
        let symbols: Vec<Symbol> =
            self.raw[..len].iter().map(|&a| self.system.coding.image(a)[0]).collect();
        FiniteWord::new(symbols, self.system.output_alphabet()).expect("coding output in range")
    }
}

pub fn thue_morse_system() -> MorphicSystem {
    let sigma = Morphism::new(vec![
        FiniteWord::new(vec![0, 1], 2).unwrap(),
        FiniteWord::new(vec![1, 0], 2).unwrap(),
    ])
    .unwrap();
    MorphicSystem::with_identity_coding(sigma, 0).unwrap()
}

pub fn fibonacci_system() -> MorphicSystem {
    let sigma = Morphism::new(vec![
        FiniteWord::new(vec![0, 1], 2).unwrap(),
        FiniteWord::new(vec![0], 2).unwrap(),
    ])
    .unwrap();
    MorphicSystem::with_identity_coding(sigma, 0).unwrap()
}

pub fn period_doubling_system() -> MorphicSystem {
    let sigma = Morphism::new(vec![
        FiniteWord::new(vec![0, 1], 2).unwrap(),
        FiniteWord::new(vec![0, 0], 2).unwrap(),
    ])
    .unwrap();
    MorphicSystem::with_identity_coding(sigma, 0).unwrap()
}
