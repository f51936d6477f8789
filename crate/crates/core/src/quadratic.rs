//! Exact arithmetic for quadratic irrationals `(a + b*sqrt(d))/c` and for
//! slopes given as finite continued-fraction prefixes with a certified
//! enclosure interval.
//!
//! Floors and ceilings are decided by integer comparisons only; nothing here
//! touches floating point.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Ordering of `b * sqrt(d)` against the integer `t`, decided by sign
/// analysis and squaring. `d` must be positive and non-square whenever
/// `b != 0` (so equality can only happen at `b == 0, t == 0`).
fn cmp_bsqrtd_int(b: &BigInt, d: &BigInt, t: &BigInt) -> std::cmp::Ordering {
    use std::cmp::Ordering::*;
    match (b.sign(), t.sign()) {
        (num_bigint::Sign::NoSign, _) => BigInt::zero().cmp(t),
        (num_bigint::Sign::Plus, num_bigint::Sign::Minus | num_bigint::Sign::NoSign) => Greater,
        (num_bigint::Sign::Minus, num_bigint::Sign::Plus | num_bigint::Sign::NoSign) => Less,
        (num_bigint::Sign::Plus, num_bigint::Sign::Plus) => (b * b * d).cmp(&(t * t)),
        (num_bigint::Sign::Minus, num_bigint::Sign::Minus) => (t * t).cmp(&(b * b * d)),
    }
}

/// Floor of `(a + b*sqrt(d)) / c` with `c != 0`.
fn floor_quad(a: &BigInt, b: &BigInt, c: &BigInt, d: &BigInt) -> BigInt {
    let (a, b, c) = if c.is_negative() {
        (-a.clone(), -b.clone(), -c.clone())
    } else {
        (a.clone(), b.clone(), c.clone())
    };
    // Approximate numerator, then correct by exact comparison. The guess is
    // within 1 of the truth, so the loops run at most twice.
    let s = (&b * &b * d).sqrt();
    let approx_num = if b.is_negative() { &a - &s - BigInt::one() } else { &a + &s };
    let mut q = approx_num.div_floor(&c);
    // invariant wanted: q*c <= a + b*sqrt(d) < (q+1)*c
    let at_most = |q: &BigInt| -> bool {
        // q*c <= a + b sqrt(d)  <=>  q*c - a <= b sqrt(d)
        cmp_bsqrtd_int(&b, d, &(q * &c - &a)) != std::cmp::Ordering::Less
    };
    while !at_most(&q) {
        q -= 1;
    }
    while at_most(&(&q + BigInt::one())) {
        q += 1;
    }
    q
}

fn ceil_quad(a: &BigInt, b: &BigInt, c: &BigInt, d: &BigInt) -> BigInt {
    -floor_quad(&-a, &-b, c, d)
}

fn is_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &(&r * &r) == n
}

/// `(a + b*sqrt(d)) / c` with `d > 0` non-square and `b != 0`: an exact,
/// certifiably irrational real number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticIrrational {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

impl QuadraticIrrational {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        Self::from_bigints(a.into(), b.into(), c.into(), d.into())
    }

    pub fn from_bigints(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Result<Self> {
        if c.is_zero() {
            return Err(Error::invalid("quadratic irrational with zero denominator"));
        }
        if b.is_zero() {
            return Err(Error::invalid("b = 0 gives a rational, not a quadratic irrational"));
        }
        if !d.is_positive() || is_square(&d) {
            return Err(Error::invalid("d must be positive and non-square"));
        }
        let (mut a, mut b, mut c) = (a, b, c);
        if c.is_negative() {
            a = -a;
            b = -b;
            c = -c;
        }
        let g = a.gcd(&b).gcd(&c);
        if g > BigInt::one() {
            a /= &g;
            b /= &g;
            c /= &g;
        }
        Ok(QuadraticIrrational { a, b, c, d })
    }

    pub fn coefficients(&self) -> (&BigInt, &BigInt, &BigInt, &BigInt) {
        (&self.a, &self.b, &self.c, &self.d)
    }

    pub fn floor(&self) -> BigInt {
        floor_quad(&self.a, &self.b, &self.c, &self.d)
    }

    pub fn ceil(&self) -> BigInt {
        ceil_quad(&self.a, &self.b, &self.c, &self.d)
    }

    /// Floor of `n * theta + rho`, fully exact.
    pub fn floor_linear(&self, n: &BigInt, rho: &BigRational) -> BigInt {
        let (a, b, c) = self.linear_coeffs(n, rho);
        floor_quad(&a, &b, &c, &self.d)
    }

    pub fn ceil_linear(&self, n: &BigInt, rho: &BigRational) -> BigInt {
        let (a, b, c) = self.linear_coeffs(n, rho);
        ceil_quad(&a, &b, &c, &self.d)
    }

    /// `n * theta + rho` as `(a' + b'*sqrt(d)) / c'`.
    fn linear_coeffs(&self, n: &BigInt, rho: &BigRational) -> (BigInt, BigInt, BigInt) {
        let rn = rho.numer();
        let rd = rho.denom();
        let a = &self.a * n * rd + &self.c * rn;
        let b = &self.b * n * rd;
        let c = &self.c * rd;
        (a, b, c)
    }

    /// Ordering of this number against a rational.
    pub fn cmp_rational(&self, r: &BigRational) -> std::cmp::Ordering {
        // (a + b sqrt d)/c vs rn/rd  <=>  b sqrt(d) * c_sign... normalize c > 0 at construction
        let t = r.numer() * &self.c - &self.a * r.denom();
        // compare b*rd*sqrt(d) vs t
        cmp_bsqrtd_int(&(&self.b * r.denom()), &self.d, &t)
    }

    pub fn is_positive(&self) -> bool {
        self.cmp_rational(&BigRational::zero()) == std::cmp::Ordering::Greater
    }

    /// `1 / theta`, still in the same quadratic field.
    pub fn recip(&self) -> Result<Self> {
        // c / (a + b sqrt d) = c (a - b sqrt d) / (a^2 - b^2 d)
        let norm = &self.a * &self.a - &self.b * &self.b * &self.d;
        if norm.is_zero() {
            return Err(Error::invalid("cannot invert zero"));
        }
        Self::from_bigints(&self.c * &self.a, -(&self.c * &self.b), norm, self.d.clone())
    }

    /// `q * theta + r` for rationals `q != 0`, `r`.
    pub fn affine(&self, scale: &BigRational, shift: &BigRational) -> Result<Self> {
        if scale.is_zero() {
            return Err(Error::invalid("scale must be nonzero"));
        }
        // (q (a + b sqrt d)/c) + r, q = qn/qd, r = rn/rd
        let (qn, qd) = (scale.numer(), scale.denom());
        let (rn, rd) = (shift.numer(), shift.denom());
        let a = qn * rd * &self.a + rn * qd * &self.c;
        let b = qn * rd * &self.b;
        let c = qd * rd * &self.c;
        Self::from_bigints(a, b, c, self.d.clone())
    }

    /// Rational lower and upper bounds with `2^-bits` accuracy; used only to
    /// seed search ranges, never to decide anything.
    pub fn rational_bounds(&self, bits: u32) -> (BigRational, BigRational) {
        let scale = BigInt::one() << bits;
        let num = floor_quad(&(&self.a * &scale), &(&self.b * &scale), &self.c, &self.d);
        let lo = BigRational::new(num.clone(), scale.clone());
        let hi = BigRational::new(num + BigInt::one(), scale);
        (lo, hi)
    }

    /// The regular continued-fraction expansion, computed exactly until the
    /// `(P, Q)` state repeats. Returns the quotient list and the index where
    /// the period starts.
    pub fn continued_fraction(&self, max_terms: usize) -> Result<CfExpansion> {
        // Bring x = (a + b sqrt d)/c into the classical (P + sqrt D)/Q form
        // with Q | D - P^2.
        let mut dd = &self.b * &self.b * &self.d;
        let (mut p, mut q) = if self.b.is_negative() {
            (-self.a.clone(), -self.c.clone())
        } else {
            (self.a.clone(), self.c.clone())
        };
        let rem = (&dd - &p * &p) % &q;
        if !rem.is_zero() {
            let qa = q.abs();
            p *= &qa;
            dd *= &qa * &qa;
            q *= &qa;
        }
        let mut quotients: Vec<BigUint> = Vec::new();
        let mut seen: HashMap<(BigInt, BigInt), usize> = HashMap::new();
        loop {
            if let Some(&start) = seen.get(&(p.clone(), q.clone())) {
                return Ok(CfExpansion { quotients, period_start: start });
            }
            if quotients.len() >= max_terms {
                return Err(Error::invalid(format!(
                    "continued fraction did not become periodic within {max_terms} terms"
                )));
            }
            seen.insert((p.clone(), q.clone()), quotients.len());
            let a_i = floor_quad(&p, &BigInt::one(), &q, &dd);
            quotients.push(
                a_i.to_biguint()
                    .ok_or_else(|| Error::invalid("negative partial quotient; value not handled"))?,
            );
            let p_next = &a_i * &q - &p;
            let q_next = (&dd - &p_next * &p_next) / &q;
            p = p_next;
            q = q_next;
        }
    }
}

/// Eventually periodic continued fraction of a quadratic irrational.
#[derive(Clone, Debug)]
pub struct CfExpansion {
    /// Quotients `a_0, a_1, ...` up to the end of the first period.
    pub quotients: Vec<BigUint>,
    /// Index into `quotients` where the periodic part begins.
    pub period_start: usize,
}

impl CfExpansion {
    pub fn max_quotient(&self) -> &BigUint {
        // a_0 of a slope in (0,1) is 0; the max over preperiod + period is
        // what bounded-partial-quotient checks care about.
        self.quotients.iter().skip(1).max().unwrap_or(&self.quotients[0])
    }

    pub fn period_len(&self) -> usize {
        self.quotients.len() - self.period_start
    }
}

/// A slope known only through a finite continued-fraction prefix
/// `[a0; a1, ..., am]`. Every irrational with this prefix lies strictly
/// between the last convergent `p_m/q_m` and the mediant
/// `(p_m + p_{m-1})/(q_m + q_{m-1})`; that open interval is the certificate
/// all evaluations are checked against.
#[derive(Clone, Debug)]
pub struct CfPrefixSlope {
    quotients: Vec<u64>,
    lo: BigRational,
    hi: BigRational,
}

impl CfPrefixSlope {
    pub fn new(quotients: Vec<u64>) -> Result<Self> {
        if quotients.len() < 2 {
            return Err(Error::invalid("continued-fraction prefix needs at least two terms"));
        }
        if quotients[1..].contains(&0) {
            return Err(Error::invalid("partial quotients a_1, a_2, ... must be positive"));
        }
        let (mut p_prev, mut q_prev) = (BigInt::one(), BigInt::zero());
        let (mut p, mut q) = (BigInt::from(quotients[0]), BigInt::one());
        for &a in &quotients[1..] {
            let p_next = BigInt::from(a) * &p + &p_prev;
            let q_next = BigInt::from(a) * &q + &q_prev;
            p_prev = std::mem::replace(&mut p, p_next);
            q_prev = std::mem::replace(&mut q, q_next);
        }
        let conv = BigRational::new(p.clone(), q.clone());
        let mediant = BigRational::new(&p + &p_prev, &q + &q_prev);
        let (lo, hi) = if conv < mediant { (conv, mediant) } else { (mediant, conv) };
        Ok(CfPrefixSlope { quotients, lo, hi })
    }

    pub fn quotients(&self) -> &[u64] {
        &self.quotients
    }

    pub fn interval(&self) -> (&BigRational, &BigRational) {
        (&self.lo, &self.hi)
    }

    pub fn depth(&self) -> usize {
        self.quotients.len()
    }

    fn certified<F>(&self, what: &str, f: F) -> Result<BigInt>
    where
        F: Fn(&BigRational) -> BigInt,
    {
        let at_lo = f(&self.lo);
        let at_hi = f(&self.hi);
        if at_lo == at_hi {
            Ok(at_lo)
        } else {
            Err(Error::PrecisionExhausted { what: what.to_string(), depth: self.depth() })
        }
    }

    pub fn floor_linear(&self, n: &BigInt, rho: &BigRational) -> Result<BigInt> {
        self.certified(&format!("floor({n}*theta + {rho})"), |theta| {
            (theta * BigRational::from(n.clone()) + rho).floor().to_integer()
        })
    }

    pub fn ceil_linear(&self, n: &BigInt, rho: &BigRational) -> Result<BigInt> {
        self.certified(&format!("ceil({n}*theta + {rho})"), |theta| {
            (theta * BigRational::from(n.clone()) + rho).ceil().to_integer()
        })
    }

    /// Whole enclosure strictly inside `(lo, hi)`?
    pub fn within(&self, lo: &BigRational, hi: &BigRational) -> bool {
        &self.lo > lo && &self.hi < hi
    }

    /// `1/theta` at the prefix level: strip or prepend the leading zero.
    pub fn reciprocal(&self) -> Result<CfPrefixSlope> {
        if self.quotients[0] == 0 {
            CfPrefixSlope::new(self.quotients[1..].to_vec())
        } else {
            let mut q = Vec::with_capacity(self.quotients.len() + 1);
            q.push(0);
            q.extend_from_slice(&self.quotients);
            CfPrefixSlope::new(q)
        }
    }
}

/// A Sturmian slope: exact quadratic irrational, or a declared prefix with a
/// certified enclosure.
#[derive(Clone, Debug)]
pub enum Slope {
    Quadratic(QuadraticIrrational),
    CfPrefix(CfPrefixSlope),
}

impl Slope {
    pub fn floor_linear(&self, n: &BigInt, rho: &BigRational) -> Result<BigInt> {
        match self {
            Slope::Quadratic(q) => Ok(q.floor_linear(n, rho)),
            Slope::CfPrefix(c) => c.floor_linear(n, rho),
        }
    }

    pub fn ceil_linear(&self, n: &BigInt, rho: &BigRational) -> Result<BigInt> {
        match self {
            Slope::Quadratic(q) => Ok(q.ceil_linear(n, rho)),
            Slope::CfPrefix(c) => c.ceil_linear(n, rho),
        }
    }

    /// Certified `lo < theta < hi`?
    pub fn within(&self, lo: &BigRational, hi: &BigRational) -> bool {
        match self {
            Slope::Quadratic(q) => {
                q.cmp_rational(lo) == std::cmp::Ordering::Greater
                    && q.cmp_rational(hi) == std::cmp::Ordering::Less
            }
            Slope::CfPrefix(c) => c.within(lo, hi),
        }
    }

    pub fn gt_one(&self) -> bool {
        match self {
            Slope::Quadratic(q) => q.cmp_rational(&BigRational::one()) == std::cmp::Ordering::Greater,
            Slope::CfPrefix(c) => c.interval().0 >= &BigRational::one(),
        }
    }

    /// Rational bounds good enough to seed enumeration ranges.
    pub fn rational_bounds(&self) -> (BigRational, BigRational) {
        match self {
            Slope::Quadratic(q) => q.rational_bounds(64),
            Slope::CfPrefix(c) => (c.interval().0.clone(), c.interval().1.clone()),
        }
    }
}
