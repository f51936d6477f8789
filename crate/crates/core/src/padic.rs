//! Exact p-adic machinery: valuations, rationals from periodic digit tails,
//! digit-level distances, the degree-1 Liouville bound, lattice search for
//! good rational approximants, and degree-1 approximation-exponent estimates.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::generators::Stream;
use crate::par;
use crate::words::Symbol;

/// Reduced fraction with positive denominator; the universe of degree-1
/// approximants. Height is `max(|num|, den)`, the height of the minimal
/// polynomial `den*X - num`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactRational(BigRational);

impl ExactRational {
    pub fn new(num: BigInt, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::invalid("zero denominator"));
        }
        Ok(ExactRational(BigRational::new(num, den)))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        ExactRational(BigRational::from(n.into()))
    }

    pub fn from_big_rational(r: BigRational) -> Self {
        ExactRational(r)
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn as_big_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn height(&self) -> BigUint {
        self.0.numer().magnitude().clone().max(self.0.denom().magnitude().clone())
    }

    pub fn sub(&self, other: &ExactRational) -> ExactRational {
        ExactRational(&self.0 - &other.0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl std::fmt::Display for ExactRational {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

/// Multiplicity of `p` in a nonzero integer; `None` for zero.
pub fn int_valuation(x: &BigInt, p: u64) -> Option<u64> {
    if x.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut v = 0u64;
    let mut cur = x.clone();
    loop {
        let (q, r) = cur.div_rem(&p);
        if !r.is_zero() {
            return Some(v);
        }
        v += 1;
        cur = q;
    }
}

/// `|x|_p` as an exact object: zero, or `p^(-exponent)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PadicAbs {
    Zero,
    Power { exponent: i64 },
}

impl PadicAbs {
    pub fn as_big_rational(&self, p: u64) -> BigRational {
        match self {
            PadicAbs::Zero => BigRational::zero(),
            PadicAbs::Power { exponent } => power_of_p(p, -exponent),
        }
    }
}

/// `p^e` as an exact rational, `e` of either sign.
pub fn power_of_p(p: u64, e: i64) -> BigRational {
    let mag = BigUint::from(p).pow(e.unsigned_abs());
    if e >= 0 {
        BigRational::from(BigInt::from(mag))
    } else {
        BigRational::new(BigInt::one(), BigInt::from(mag))
    }
}

/// `|x|_p = p^-(v(num) - v(den))`, normalized so `|p|_p = 1/p`.
pub fn padic_abs(x: &ExactRational, p: u64) -> PadicAbs {
    match int_valuation(x.numer(), p) {
        None => PadicAbs::Zero,
        Some(vn) => {
            let vd = int_valuation(x.denom(), p).expect("denominator is nonzero");
            PadicAbs::Power { exponent: vn as i64 - vd as i64 }
        }
    }
}

/// The exact rational whose p-adic digit expansion is `U V V V ...`:
/// `((p^s - 1) * val(U) - p^r * val(V) ) / (p^s - 1)` with `r = |U|`,
/// `s = |V|`, all digits in `{0, ..., p-1}`. Its height is at most
/// `p^(r+s)`.
pub fn periodic_value(
    head: &crate::words::FiniteWord,
    block: &crate::words::FiniteWord,
    p: u64,
) -> Result<ExactRational> {
    if block.is_empty() {
        return Err(Error::invalid("periodic block must be nonempty"));
    }
    for w in [head, block] {
        if w.symbols().iter().any(|&d| d as u64 >= p) {
            return Err(Error::invalid(format!("digit out of range for p = {p}")));
        }
    }
    let pb = BigInt::from(p);
    let poly = |w: &crate::words::FiniteWord| -> BigInt {
        let mut acc = BigInt::zero();
        for &d in w.symbols().iter().rev() {
            acc = acc * &pb + BigInt::from(d);
        }
        acc
    };
    let r = head.len() as u32;
    let s = block.len() as u32;
    let ps1 = pb.clone().pow(s) - BigInt::one();
    let num = &ps1 * poly(head) - pb.clone().pow(r) * poly(block);
    ExactRational::new(num, ps1)
}

/// Digits `a_0 ... a_{len-1}` of a rational that is a p-adic integer
/// (denominator coprime to `p`).
pub fn rational_digit_expansion(alpha: &ExactRational, p: u64, len: usize) -> Result<Vec<Symbol>> {
    let mut iter = RationalDigits::new(alpha, p)?;
    Ok((0..len).map(|_| iter.next_digit()).collect())
}

/// Streaming digit expansion of a p-adic-integer rational.
struct RationalDigits {
    p: BigInt,
    den: BigInt,
    den_inv_mod_p: BigInt,
    num: BigInt,
}

impl RationalDigits {
    fn new(alpha: &ExactRational, p: u64) -> Result<Self> {
        let pb = BigInt::from(p);
        if int_valuation(alpha.denom(), p) != Some(0) {
            return Err(Error::NotPadicInteger { value: alpha.to_string(), p });
        }
        let e = alpha.denom().extended_gcd(&pb);
        Ok(RationalDigits {
            den_inv_mod_p: e.x.mod_floor(&pb),
            p: pb,
            den: alpha.denom().clone(),
            num: alpha.numer().clone(),
        })
    }

    fn next_digit(&mut self) -> Symbol {
        let digit = (self.num.mod_floor(&self.p) * &self.den_inv_mod_p).mod_floor(&self.p);
        let d = digit.to_u64().expect("digit < p") as Symbol;
        self.num = (&self.num - BigInt::from(d) * &self.den) / &self.p;
        d
    }
}

/// A prime together with the digit stream of `xi = sum a_n p^n`.
#[derive(Debug)]
pub struct PadicDigits {
    p: u64,
    stream: Stream,
    nonperiodic_certified: bool,
}

impl PadicDigits {
    pub fn new(p: u64, stream: Stream) -> Result<Self> {
        if p < 2 {
            return Err(Error::invalid("p must be a prime >= 2"));
        }
        if stream.alphabet_size() as u64 > p {
            return Err(Error::invalid(format!(
                "stream emits symbols up to {}, which do not fit in base p = {p}",
                stream.alphabet_size() - 1
            )));
        }
        Ok(PadicDigits { p, stream, nonperiodic_certified: false })
    }

    /// Marks the digit stream as certifiably non-ultimately-periodic, which
    /// certifies `xi != alpha` for every rational `alpha`. Callers set this
    /// when the construction proves it (e.g. Sturmian digits with a certified
    /// irrational slope).
    pub fn with_nonperiodic_certificate(mut self) -> Self {
        self.nonperiodic_certified = true;
        self
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn nonperiodic_certified(&self) -> bool {
        self.nonperiodic_certified
    }

    /// Digit at p-power `m`: the stream symbol at `index_base + m`.
    pub fn digit(&mut self, m: u64) -> Result<Symbol> {
        let base = self.stream.index_base();
        self.stream.symbol_at(base + m)
    }

    pub fn digits_prefix(&mut self, len: usize) -> Result<Vec<Symbol>> {
        Ok(self.stream.prefix(len)?.symbols().to_vec())
    }
}

/// Exponent information about `|xi - alpha|_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Distance {
    /// `|xi - alpha|_p = p^-m` exactly (digits differ first at index `m`).
    Exact(u64),
    /// Digits agree through the examined precision: `|xi - alpha|_p <= p^-m`.
    AtLeast(u64),
}

impl Distance {
    pub fn lower_exponent(&self) -> u64 {
        match *self {
            Distance::Exact(m) | Distance::AtLeast(m) => m,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Distance::Exact(_))
    }
}

/// Index of the first digit where `xi` and `alpha` disagree, or a certified
/// bound when they agree through `precision` digits. `alpha` must be a
/// p-adic integer; callers widen `precision` explicitly when they need more.
pub fn distance(xi: &mut PadicDigits, alpha: &ExactRational, precision: usize) -> Result<Distance> {
    let p = xi.p;
    let xi_digits = xi.digits_prefix(precision)?;
    let mut alpha_digits = RationalDigits::new(alpha, p)?;
    for (m, &a) in xi_digits.iter().enumerate() {
        if a != alpha_digits.next_digit() {
            return Ok(Distance::Exact(m as u64));
        }
    }
    Ok(Distance::AtLeast(precision as u64))
}

/// Degree-1 Liouville bound `1 / (4 H(alpha) H(beta))` for distinct
/// rationals.
pub fn liouville_lower_bound(a: &ExactRational, b: &ExactRational) -> Result<BigRational> {
    if a == b {
        return Err(Error::invalid("Liouville bound needs distinct numbers"));
    }
    let denom = BigInt::from(4u32) * BigInt::from(a.height()) * BigInt::from(b.height());
    Ok(BigRational::new(BigInt::one(), denom))
}

/// Checks `|a - b|_p >= 1 / (4 H(a) H(b))` exactly.
pub fn liouville_check(a: &ExactRational, b: &ExactRational, p: u64) -> Result<bool> {
    let bound = liouville_lower_bound(a, b)?;
    let dist = padic_abs(&a.sub(b), p).as_big_rational(p);
    Ok(dist >= bound)
}

// --- certified comparisons of m / log_p(H) quantities ------------------------

/// `log2(x)` with absolute error below `1e-13`, from the leading 53 bits.
fn log2_big(x: &BigUint) -> f64 {
    debug_assert!(!x.is_zero());
    let bits = x.bits();
    if bits <= 53 {
        return x.to_f64().expect("fits f64").log2();
    }
    let shift = bits - 53;
    let top = (x >> shift).to_f64().expect("53 bits fit");
    top.log2() + shift as f64
}

/// Ordering of `a^e1` vs `b^e2` for `a, b >= 1`. A floating-point log
/// comparison with a certified error margin decides the far-apart cases;
/// anything inside the margin falls back to exact big-integer powers, with
/// the gcd of the exponents divided out first.
pub(crate) fn cmp_pow(a: &BigUint, e1: u64, b: &BigUint, e2: u64) -> std::cmp::Ordering {
    use std::cmp::Ordering::*;
    let one_a = e1 == 0 || a.is_one();
    let one_b = e2 == 0 || b.is_one();
    match (one_a, one_b) {
        (true, true) => return Equal,
        (true, false) => return Less,
        (false, true) => return Greater,
        _ => {}
    }
    let l1 = e1 as f64 * log2_big(a);
    let l2 = e2 as f64 * log2_big(b);
    let tol = 1e-12 * (e1 as f64 + e2 as f64) + 1e-14 * (l1.abs() + l2.abs()) + 1e-9;
    if (l1 - l2).abs() > tol {
        return if l1 < l2 { Less } else { Greater };
    }
    let g = gcd_u64(e1, e2);
    Pow::pow(a, e1 / g).cmp(&Pow::pow(b, e2 / g))
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}

/// The quantity `m / log_p(H) - 1`, stored exactly as the pair `(m, H)` with
/// `H >= 2`: the exponent `w` solving `p^-m = H^-(w+1)` for an approximant at
/// distance `p^-m` and height `H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quality {
    pub dist_exp: u64,
    pub height: BigUint,
}

impl Quality {
    pub fn new(dist_exp: u64, height: BigUint) -> Result<Self> {
        if height < BigUint::from(2u32) {
            return Err(Error::invalid("quality needs height >= 2"));
        }
        Ok(Quality { dist_exp, height })
    }

    /// `m1/log H1 vs m2/log H2  <=>  H2^m1 vs H1^m2`.
    #[allow(clippy::should_implement_trait)]
    pub fn cmp(&self, other: &Quality) -> std::cmp::Ordering {
        cmp_pow(&other.height, self.dist_exp, &self.height, other.dist_exp)
    }

    /// Exact ordering of the quality value against a rational.
    pub fn cmp_rational(&self, r: &BigRational, p: u64) -> std::cmp::Ordering {
        // m/log_p H - 1 vs a/b  <=>  p^(b m) vs H^(a + b)
        let target = r + BigRational::one();
        let (num, den) = (target.numer(), target.denom());
        debug_assert!(den.is_positive());
        if !num.is_positive() {
            // quality + 1 >= 0 with equality only at m = 0
            return if self.dist_exp == 0 && num.is_zero() {
                std::cmp::Ordering::Equal
            } else {
                std::cmp::Ordering::Greater
            };
        }
        let b_m = den
            .to_u64()
            .and_then(|b| b.checked_mul(self.dist_exp))
            .expect("comparison exponent fits u64");
        let a_pow = num.to_u64().expect("comparison exponent fits u64");
        cmp_pow(&BigUint::from(p), b_m, &self.height, a_pow)
    }

    pub fn approx(&self, p: u64) -> f64 {
        self.dist_exp as f64 * (p as f64).log2() / log2_big(&self.height) - 1.0
    }
}

/// One rational approximant with certified distance data.
#[derive(Clone, Debug)]
pub struct ApproximationRecord {
    /// Precision level (lattice) or examined scale the record came from.
    pub level: u32,
    pub alpha: ExactRational,
    pub height: BigUint,
    pub distance: Distance,
    /// `xi != alpha` is certified: a digit mismatch was seen, or the stream
    /// carries a structural non-periodicity certificate.
    pub nonzero_certified: bool,
}

impl ApproximationRecord {
    /// Lower bound on the record's quality; `None` for heights below 2.
    pub fn quality(&self) -> Option<Quality> {
        Quality::new(self.distance.lower_exponent(), self.height.clone()).ok()
    }

    /// Usable as a witness for a degree-1 exponent lower bound: the distance
    /// bound `|xi - alpha|_p <= p^-m` holds and the difference is certifiably
    /// nonzero, which is what the exponent definition needs.
    pub fn usable_for_w1(&self) -> bool {
        self.distance.is_exact() || self.nonzero_certified
    }

    /// JSON line `{p, j, alpha, H, m, quality}`. `quality` is a decimal
    /// rendering rounded down at 1e-6; the exact content is the `(m, H)`
    /// pair also present in the record.
    pub fn to_json_line(&self, p: u64) -> String {
        let quality = match self.quality() {
            Some(q) => {
                let scaled = (q.approx(p) * 1e6).floor() as i64;
                let r = num_rational::Rational64::new(scaled, 1_000_000);
                format!("\"{}/{}\"", r.numer(), r.denom())
            }
            None => "null".to_string(),
        };
        format!(
            "{{\"p\":{},\"j\":{},\"alpha\":\"{}\",\"H\":\"{}\",\"m\":{},\"m_exact\":{},\"quality\":{}}}",
            p,
            self.level,
            self.alpha,
            self.height,
            self.distance.lower_exponent(),
            self.distance.is_exact(),
            quality
        )
    }
}

/// `max(1, best record quality)`: a certified lower estimate for the degree-1
/// approximation exponent of an irrational `xi`.
#[derive(Clone, Debug)]
pub enum W1Estimate {
    /// No record improves on the a-priori bound `w1 >= 1`.
    TrivialOne,
    Witnessed(Quality),
}

impl W1Estimate {
    pub fn cmp_rational(&self, r: &BigRational, p: u64) -> std::cmp::Ordering {
        match self {
            W1Estimate::TrivialOne => BigRational::one().cmp(r),
            W1Estimate::Witnessed(q) => q.cmp_rational(r, p),
        }
    }

    pub fn approx(&self, p: u64) -> f64 {
        match self {
            W1Estimate::TrivialOne => 1.0,
            W1Estimate::Witnessed(q) => q.approx(p),
        }
    }
}

/// Largest usable record quality, floored at 1.
pub fn w1_lower_estimate(p: u64, records: &[ApproximationRecord]) -> Result<W1Estimate> {
    if records.is_empty() {
        return Err(Error::invalid("w1 estimate needs at least one record"));
    }
    let mut best: Option<Quality> = None;
    for rec in records.iter().filter(|r| r.usable_for_w1()) {
        if let Some(q) = rec.quality() {
            let better = match &best {
                None => true,
                Some(b) => q.cmp(b) == std::cmp::Ordering::Greater,
            };
            if better {
                best = Some(q);
            }
        }
    }
    Ok(match best {
        Some(q) if q.cmp_rational(&BigRational::one(), p) == std::cmp::Ordering::Greater => {
            W1Estimate::Witnessed(q)
        }
        _ => W1Estimate::TrivialOne,
    })
}

// --- two-dimensional lattice search -------------------------------------------

type Vec2 = (BigInt, BigInt);

fn norm2(v: &Vec2) -> BigInt {
    &v.0 * &v.0 + &v.1 * &v.1
}

fn dot(a: &Vec2, b: &Vec2) -> BigInt {
    &a.0 * &b.0 + &a.1 * &b.1
}

/// Gauss (Lagrange) reduction; afterwards `u1` is a shortest nonzero vector
/// of the lattice.
pub(crate) fn gauss_reduce(mut u1: Vec2, mut u2: Vec2) -> (Vec2, Vec2) {
    if norm2(&u1) > norm2(&u2) {
        std::mem::swap(&mut u1, &mut u2);
    }
    loop {
        let n1 = norm2(&u1);
        let d = dot(&u1, &u2);
        // nearest integer to d / n1
        let t: BigInt = (&d * 2i32 + &n1).div_floor(&(&n1 * 2i32));
        u2 = (&u2.0 - &t * &u1.0, &u2.1 - &t * &u1.1);
        if norm2(&u2) >= n1 {
            return (u1, u2);
        }
        std::mem::swap(&mut u1, &mut u2);
    }
}

/// All nonzero lattice points `x u1 + y u2` with squared Euclidean norm at
/// most `r2`. The y-range comes from the Gram determinant; per `y` the
/// x-window is solved from the quadratic inequality and every candidate is
/// re-checked, so the enumeration is exact.
pub(crate) fn enumerate_ball(u1: &Vec2, u2: &Vec2, r2: &BigInt) -> Vec<Vec2> {
    let n1 = norm2(u1);
    let n2 = norm2(u2);
    let d = dot(u1, u2);
    let gram_det = &n1 * &n2 - &d * &d;
    debug_assert!(gram_det.is_positive(), "basis must be non-degenerate");
    let y_max: BigInt = ((r2 * &n1) / &gram_det).sqrt() + 1i32;
    let mut out = Vec::new();
    let mut y = -y_max.clone();
    while y <= y_max {
        // n1 x^2 + 2 d y x + (n2 y^2 - r2) <= 0
        let b = &d * &y * 2i32;
        let c = &n2 * &y * &y - r2;
        let disc: BigInt = &b * &b - &n1 * &c * 4i32;
        if !disc.is_negative() {
            let root = disc.sqrt();
            let two_a = &n1 * 2i32;
            let x_lo: BigInt = (-&b - &root).div_floor(&two_a) - 1i32;
            let x_hi: BigInt = (-&b + &root).div_floor(&two_a) + 1i32;
            let mut x = x_lo;
            while x <= x_hi {
                if !(x.is_zero() && y.is_zero()) {
                    let v = (&x * &u1.0 + &y * &u2.0, &x * &u1.1 + &y * &u2.1);
                    if norm2(&v) <= *r2 {
                        out.push(v);
                    }
                }
                x += 1;
            }
        }
        y += 1;
    }
    out
}

enum LevelSearch {
    Found { alpha: ExactRational, height: BigUint, dist_exp: u64 },
    /// Candidates whose mismatch lies past the examined precision.
    Unresolved(Vec<(ExactRational, BigUint)>),
    Empty,
}

fn search_level(
    xi_mod: &BigInt,
    p_pow: &BigInt,
    p: u64,
    cap: &BigUint,
    cap_sq: &BigInt,
    digits: &[Symbol],
) -> LevelSearch {
    let (u1, u2) = gauss_reduce((BigInt::one(), xi_mod.clone()), (BigInt::zero(), p_pow.clone()));
    let pts = enumerate_ball(&u1, &u2, cap_sq);
    let mut best: Option<(ExactRational, BigUint, u64)> = None;
    let mut unresolved: Vec<(ExactRational, BigUint)> = Vec::new();
    for (b, a) in pts {
        // p | b breaks the "v(xi - a/b) >= level" guarantee, and its reduced
        // fraction reappears from a p-coprime vector at its true level
        if b.is_zero() || int_valuation(&b, p) != Some(0) {
            continue;
        }
        let alpha = ExactRational::new(a, b).expect("b nonzero");
        let height = alpha.height();
        if &height > cap {
            continue;
        }
        match locate_mismatch(&alpha, digits, p) {
            Some(m) => {
                // heights below 2 carry no quality information
                if height < BigUint::from(2u32) {
                    continue;
                }
                let better = match &best {
                    None => true,
                    Some((balpha, bheight, bm)) => {
                        // quality order: m/log H vs bm/log bH
                        match cmp_pow(bheight, m, &height, *bm) {
                            std::cmp::Ordering::Greater => true,
                            std::cmp::Ordering::Equal => {
                                (&height, alpha.numer().magnitude())
                                    < (bheight, balpha.numer().magnitude())
                            }
                            std::cmp::Ordering::Less => false,
                        }
                    }
                };
                if better {
                    best = Some((alpha, height, m));
                }
            }
            None => unresolved.push((alpha, height)),
        }
    }
    if !unresolved.is_empty() {
        LevelSearch::Unresolved(unresolved)
    } else {
        match best {
            Some((alpha, height, dist_exp)) => LevelSearch::Found { alpha, height, dist_exp },
            None => LevelSearch::Empty,
        }
    }
}

/// First index where the digits of `alpha` differ from `digits`; `None` when
/// they agree through the whole slice. Streams the expansion, so located
/// mismatches cost `O(m)`.
fn locate_mismatch(alpha: &ExactRational, digits: &[Symbol], p: u64) -> Option<u64> {
    let mut expansion = RationalDigits::new(alpha, p).ok()?;
    digits.iter().position(|&d| d != expansion.next_digit()).map(|m| m as u64)
}

/// Upper bound on lattice points examined per level; levels whose height
/// ball is denser than this are skipped (their worthwhile candidates belong
/// to deeper levels too, where the ball is sparse enough to sweep).
const BALL_BUDGET: u64 = 200_000;

/// For each precision level `j <= max_level`, searches the planar lattice
/// `{(b, a) : a = b * xi mod p^j}` for the approximant `a/b` of maximal
/// quality among heights `<= height_cap`. The basis `(1, xi mod p^j)`,
/// `(0, p^j)` is Gauss-reduced and the whole height ball is enumerated, so
/// the per-level optimum is exact whenever the level is searched at all.
/// Records are deduplicated across levels.
///
/// Candidates whose digits agree with `xi` past every examined precision
/// (`xi` may simply equal a short rational) are reported with a
/// [`Distance::AtLeast`] bound instead of being invented.
pub fn best_rational_approximations(
    xi: &mut PadicDigits,
    max_level: u32,
    height_cap: &BigUint,
) -> Result<Vec<ApproximationRecord>> {
    if max_level == 0 || height_cap.is_zero() {
        return Err(Error::invalid("need max_level >= 1 and a positive height cap"));
    }
    let p = xi.p;
    let pb = BigInt::from(p);
    let cap_sq = BigInt::from(height_cap * height_cap) * 2i32;

    // xi mod p^j for every level
    let mut truncations = Vec::with_capacity(max_level as usize);
    {
        let digits = xi.digits_prefix(max_level as usize)?;
        let mut acc = BigInt::zero();
        let mut pw = BigInt::one();
        for &d in digits.iter().take(max_level as usize) {
            acc += BigInt::from(d) * &pw;
            pw *= &pb;
            truncations.push((acc.clone(), pw.clone()));
        }
    }

    let precision_limit = 4096.max(64 * max_level as usize);
    let mut precision = (max_level as usize + 32).next_power_of_two();
    let levels: Vec<u32> = (1..=max_level).collect();
    loop {
        let digits = xi.digits_prefix(precision)?;
        let outcomes: Vec<LevelSearch> = par::map_collect(&levels, |&j| {
            let (xi_j, p_j) = &truncations[(j - 1) as usize];
            // skip levels whose ball would blow the enumeration budget
            if (&cap_sq * 4i32) > p_j * BigInt::from(BALL_BUDGET) {
                return LevelSearch::Empty;
            }
            search_level(xi_j, p_j, p, height_cap, &cap_sq, &digits)
        });
        let needs_more = outcomes.iter().any(|o| matches!(o, LevelSearch::Unresolved(_)));
        if needs_more && precision < precision_limit {
            precision = (precision * 2).min(precision_limit);
            continue;
        }
        let mut seen: BTreeSet<(BigInt, BigInt)> = BTreeSet::new();
        let mut records = Vec::new();
        for (j, outcome) in levels.iter().zip(outcomes) {
            let record = match outcome {
                LevelSearch::Found { alpha, height, dist_exp } => ApproximationRecord {
                    level: *j,
                    alpha,
                    height,
                    distance: Distance::Exact(dist_exp),
                    nonzero_certified: true,
                },
                LevelSearch::Unresolved(mut cands) => {
                    // everything here matches xi through `precision` digits;
                    // report the smallest-height one with the bound it earned
                    cands.sort_by(|(a1, h1), (a2, h2)| {
                        (h1, a1.numer().magnitude()).cmp(&(h2, a2.numer().magnitude()))
                    });
                    let (alpha, height) = cands.remove(0);
                    ApproximationRecord {
                        level: *j,
                        alpha,
                        height,
                        distance: Distance::AtLeast(precision as u64),
                        nonzero_certified: xi.nonperiodic_certified,
                    }
                }
                LevelSearch::Empty => continue,
            };
            if seen.insert((record.alpha.numer().clone(), record.alpha.denom().clone())) {
                records.push(record);
            }
        }
        return Ok(records);
    }
}

// --- the degree-1 sandwich check -----------------------------------------------

/// Positive constants of the sandwich hypotheses; `c3` bounds the heights
/// (`H(alpha_j) <= c3 * beta_j`).
#[derive(Clone, Debug)]
pub struct SandwichParams {
    pub c0: BigRational,
    pub c1: BigRational,
    pub c2: BigRational,
    pub c3: BigRational,
    pub theta: BigRational,
    pub rho: BigRational,
    pub delta: BigRational,
}

/// One data point: `beta_j`, the height of `alpha_j`, and the exact distance
/// `|xi - alpha_j|_p = p^-dist_exp`.
#[derive(Clone, Debug)]
pub struct SandwichPoint {
    pub beta: BigUint,
    pub height: BigUint,
    pub dist_exp: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SandwichInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

/// Ordering of `lhs` vs `base^exp` for positive rational `lhs`, integer
/// `base >= 1`, non-negative rational `exp`, by cross-raising to integer
/// exponents.
fn cmp_rat_pow(lhs: &BigRational, base: &BigUint, exp: &BigRational) -> Result<std::cmp::Ordering> {
    if !lhs.is_positive() {
        return Err(Error::invalid("comparison needs a positive left-hand side"));
    }
    if exp.is_negative() {
        return Err(Error::invalid("negative exponents are not used here"));
    }
    let en = exp.numer().to_u64().ok_or_else(|| Error::invalid("exponent too large"))?;
    let ed = exp.denom().to_u64().ok_or_else(|| Error::invalid("exponent too large"))?;
    let lhs_pow_num = Pow::pow(lhs.numer().magnitude(), ed);
    let lhs_pow_den = Pow::pow(lhs.denom().magnitude(), ed);
    let rhs = Pow::pow(base, en) * lhs_pow_den;
    Ok(lhs_pow_num.cmp(&rhs))
}

/// Verifies the sandwich hypotheses exactly on the supplied data and, when
/// they all hold, emits the implied two-sided estimate
/// `delta <= w1 <= (1 + rho) * theta / delta - 1`. A failing hypothesis is
/// rejected with the index and condition that broke.
pub fn w1_sandwich_check(
    p: u64,
    points: &[SandwichPoint],
    params: &SandwichParams,
) -> Result<SandwichInterval> {
    use std::cmp::Ordering::*;
    if points.len() < 2 {
        return Err(Error::invalid("need at least two data points"));
    }
    for (name, v) in [
        ("c0", &params.c0),
        ("c1", &params.c1),
        ("c2", &params.c2),
        ("c3", &params.c3),
        ("theta", &params.theta),
        ("rho", &params.rho),
        ("delta", &params.delta),
    ] {
        if !v.is_positive() {
            return Err(Error::invalid(format!("parameter {name} must be positive")));
        }
    }
    let one = BigRational::one();
    let one_plus_rho = &one + &params.rho;
    let one_plus_delta = &one + &params.delta;
    for (idx, pt) in points.iter().enumerate() {
        if pt.beta.is_zero() {
            return Err(Error::HypothesisViolation { index: idx, condition: "beta_j >= 1".into() });
        }
        // c1 / beta^(1+rho) <= p^-m  <=>  c1 * p^m <= beta^(1+rho)
        let c1_pm = &params.c1 * power_of_p(p, pt.dist_exp);
        if cmp_rat_pow(&c1_pm, &pt.beta, &one_plus_rho)? == Greater {
            return Err(Error::HypothesisViolation {
                index: idx,
                condition: "c1 / beta_j^(1+rho) <= |xi - alpha_j|_p".into(),
            });
        }
        // p^-m <= c2 / beta^(1+delta)  <=>  beta^(1+delta) <= c2 * p^m
        let c2_pm = &params.c2 * power_of_p(p, pt.dist_exp);
        if cmp_rat_pow(&c2_pm, &pt.beta, &one_plus_delta)? == Less {
            return Err(Error::HypothesisViolation {
                index: idx,
                condition: "|xi - alpha_j|_p <= c2 / beta_j^(1+delta)".into(),
            });
        }
        let h = BigRational::from(BigInt::from(pt.height.clone()));
        let c3b = &params.c3 * BigRational::from(BigInt::from(pt.beta.clone()));
        if h > c3b {
            return Err(Error::HypothesisViolation {
                index: idx,
                condition: "H(alpha_j) <= c3 * beta_j".into(),
            });
        }
    }
    for (idx, pair) in points.windows(2).enumerate() {
        if pair[0].beta >= pair[1].beta {
            return Err(Error::HypothesisViolation {
                index: idx + 1,
                condition: "beta_j < beta_{j+1}".into(),
            });
        }
        let lhs = BigRational::from(BigInt::from(pair[1].beta.clone())) / &params.c0;
        if cmp_rat_pow(&lhs, &pair[0].beta, &params.theta)? == Greater {
            return Err(Error::HypothesisViolation {
                index: idx + 1,
                condition: "beta_{j+1} <= c0 * beta_j^theta".into(),
            });
        }
    }
    let hi = &one_plus_rho * &params.theta / &params.delta - &one;
    Ok(SandwichInterval { lo: params.delta.clone(), hi })
}
