//! Sturmian sequences `s_n = floor((n+1)theta + rho) - floor(n theta + rho)`
//! (and the ceiling variant), Beatty indicator sequences, and the exact
//! identity relating the two families.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadratic::{QuadraticIrrational, Slope};
use crate::words::{FiniteWord, Symbol};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Floor,
    Ceiling,
}

/// Slope in (0,1), exact rational intercept, floor/ceiling variant, and a
/// two-letter coding with distinct images.
#[derive(Clone, Debug)]
pub struct SturmianParams {
    pub slope: Slope,
    pub rho: BigRational,
    pub variant: Variant,
    pub coding: [Symbol; 2],
}

impl SturmianParams {
    pub fn new(slope: Slope, rho: BigRational, variant: Variant, coding: [Symbol; 2]) -> Result<Self> {
        if !slope.within(&BigRational::zero(), &BigRational::one()) {
            return Err(Error::invalid("Sturmian slope must satisfy 0 < theta < 1"));
        }
        if coding[0] == coding[1] {
            return Err(Error::invalid("Sturmian coding must have tau(0) != tau(1)"));
        }
        Ok(SturmianParams { slope, rho, variant, coding })
    }

    pub fn output_alphabet(&self) -> u32 {
        self.coding[0].max(self.coding[1]) + 1
    }
}

/// Indexed from n = 1. Floors are cached so prefix generation evaluates each
/// floor once.
#[derive(Clone, Debug)]
pub struct SturmianStream {
    params: SturmianParams,
    // floors[i] = rounding of ((i+1)*theta + rho), i >= 0, under the variant
    floors: Vec<BigInt>,
}

impl SturmianStream {
    pub fn new(params: SturmianParams) -> Self {
        SturmianStream { params, floors: Vec::new() }
    }

    pub fn params(&self) -> &SturmianParams {
        &self.params
    }

    fn rounded(&self, n: u64) -> Result<BigInt> {
        let n = BigInt::from(n);
        match self.params.variant {
            Variant::Floor => self.params.slope.floor_linear(&n, &self.params.rho),
            Variant::Ceiling => self.params.slope.ceil_linear(&n, &self.params.rho),
        }
    }

    fn ensure_floors(&mut self, upto_n: u64) -> Result<()> {
        while (self.floors.len() as u64) < upto_n {
            let n = self.floors.len() as u64 + 1;
            let f = self.rounded(n)?;
            self.floors.push(f);
        }
        Ok(())
    }

    /// Raw symbol `s_n` in {0, 1}, before the coding. `n >= 1`.
    pub fn raw_symbol(&mut self, n: u64) -> Result<Symbol> {
        if n == 0 {
            return Err(Error::invalid("Sturmian sequences are indexed from 1"));
        }
        self.ensure_floors(n + 1)?;
        let diff = &self.floors[n as usize] - &self.floors[(n - 1) as usize];
        if diff.is_zero() {
            Ok(0)
        } else if diff.is_one() {
            Ok(1)
        } else {
            unreachable!("0 < theta < 1 forces consecutive floors to differ by 0 or 1")
        }
    }

    pub fn symbol_at(&mut self, n: u64) -> Result<Symbol> {
        let raw = self.raw_symbol(n)?;
        Ok(self.params.coding[raw as usize])
    }

    /// Coded prefix `a_1 ... a_len`.
    pub fn prefix(&mut self, len: usize) -> Result<FiniteWord> {
        let mut symbols = Vec::with_capacity(len);
        for n in 1..=len as u64 {
            symbols.push(self.symbol_at(n)?);
        }
        FiniteWord::new(symbols, self.params.output_alphabet())
    }

    /// Telescoping sum of the raw symbols: `sum_{n=1..N} s_n`.
    pub fn raw_prefix_sum(&mut self, n: u64) -> Result<BigInt> {
        if n == 0 {
            return Ok(BigInt::zero());
        }
        self.ensure_floors(n + 1)?;
        Ok(&self.floors[n as usize] - &self.floors[0])
    }
}

/// Beatty indicator: `t_n = 1` iff `n` is hit by the rounding of
/// `k*theta + rho` for some integer `k`. Requires `theta > 1` so the hits are
/// strictly increasing in `k`.
#[derive(Clone, Debug)]
pub struct IndicatorParams {
    pub slope: Slope,
    pub rho: BigRational,
    pub variant: Variant,
}

impl IndicatorParams {
    pub fn new(slope: Slope, rho: BigRational, variant: Variant) -> Result<Self> {
        if !slope.gt_one() {
            return Err(Error::invalid("indicator sequences need theta > 1"));
        }
        Ok(IndicatorParams { slope, rho, variant })
    }
}

#[derive(Clone, Debug)]
pub struct IndicatorStream {
    params: IndicatorParams,
    horizon: u64,
    hits: Vec<bool>, // hits[n-1] for n in 1..=horizon
}

impl IndicatorStream {
    pub fn new(params: IndicatorParams) -> Self {
        IndicatorStream { params, horizon: 0, hits: Vec::new() }
    }

    pub fn params(&self) -> &IndicatorParams {
        &self.params
    }

    fn rounded(&self, k: &BigInt) -> Result<BigInt> {
        match self.params.variant {
            Variant::Floor => self.params.slope.floor_linear(k, &self.params.rho),
            Variant::Ceiling => self.params.slope.ceil_linear(k, &self.params.rho),
        }
    }

    fn ensure(&mut self, upto: u64) -> Result<()> {
        if upto <= self.horizon {
            return Ok(());
        }
        let n_max = BigInt::from(upto);
        let mut hits = vec![false; upto as usize];
        // v(k) is increasing in k, so the relevant k form one integer
        // interval; start safely below it and walk up.
        let (_, hi) = self.params.slope.rational_bounds();
        let start = ((BigRational::one() - &self.params.rho) / hi).floor().to_integer()
            - BigInt::from(3);
        let mut k = start;
        loop {
            let v = self.rounded(&k)?;
            if v > n_max {
                break;
            }
            if v >= BigInt::one() {
                let idx = u64::try_from(&v).expect("1 <= v <= upto") as usize;
                hits[idx - 1] = true;
            }
            k += 1;
        }
        self.hits = hits;
        self.horizon = upto;
        Ok(())
    }

    pub fn symbol_at(&mut self, n: u64) -> Result<Symbol> {
        if n == 0 {
            return Err(Error::invalid("indicator sequences are indexed from 1"));
        }
        self.ensure(n.next_power_of_two().max(64))?;
        Ok(self.hits[(n - 1) as usize] as Symbol)
    }

    pub fn prefix(&mut self, len: usize) -> Result<FiniteWord> {
        self.ensure(len as u64)?;
        let symbols: Vec<Symbol> = self.hits[..len].iter().map(|&b| b as Symbol).collect();
        FiniteWord::new(symbols, 2)
    }
}

/// Both indicator sequences `(t, t')` of the same `(theta, rho)`.
pub fn indicator_pair(slope: Slope, rho: BigRational) -> Result<(IndicatorStream, IndicatorStream)> {
    let t = IndicatorStream::new(IndicatorParams::new(slope.clone(), rho.clone(), Variant::Floor)?);
    let t_prime = IndicatorStream::new(IndicatorParams::new(slope, rho, Variant::Ceiling)?);
    Ok((t, t_prime))
}

/// Outcome of [`verify_st_identity`], with the first failing index when the
/// check does not hold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StVerification {
    pub holds: bool,
    pub first_failure: Option<(u64, &'static str)>,
}

/// Checks, exactly and term by term, that the indicator sequences of
/// `(theta, rho)` with `theta > 1` are the Sturmian sequences of slope
/// `1/theta`:
///
/// * `t_n = s'_{n}` with slope `1/theta` and intercept `-rho/theta`,
/// * `t'_n = s_{n}` with slope `1/theta` and intercept `-(rho+1)/theta`.
///
/// Both sides are evaluated by exact quadratic-integer arithmetic; since
/// `-rho/theta = -rho * (1/theta)`, every term is a rounding of a rational
/// multiple of `1/theta` and stays inside the same quadratic field.
pub fn verify_st_identity(
    theta: &QuadraticIrrational,
    rho: &BigRational,
    terms: u64,
) -> Result<StVerification> {
    if theta.cmp_rational(&BigRational::one()) != std::cmp::Ordering::Greater {
        return Err(Error::invalid("the identity needs theta > 1"));
    }
    let slope = Slope::Quadratic(theta.clone());
    let (mut t, mut t_prime) = indicator_pair(slope, rho.clone())?;
    let t_word = t.prefix(terms as usize)?;
    let tp_word = t_prime.prefix(terms as usize)?;

    let theta_star = theta.recip()?;
    // rounding of q * (1/theta) for rational q, with the rational fast path
    let floor_scaled = |q: &BigRational| -> BigInt {
        if q.is_zero() {
            BigInt::zero()
        } else {
            theta_star.affine(q, &BigRational::zero()).expect("nonzero scale").floor()
        }
    };
    let ceil_scaled = |q: &BigRational| -> BigInt {
        if q.is_zero() {
            BigInt::zero()
        } else {
            theta_star.affine(q, &BigRational::zero()).expect("nonzero scale").ceil()
        }
    };

    for n in 1..=terms {
        let nr = BigRational::from(BigInt::from(n));
        // s'_{n, 1/theta, -rho/theta} = ceil((n+1-rho)/theta) - ceil((n-rho)/theta)
        let s_prime = ceil_scaled(&(&nr + BigRational::one() - rho)) - ceil_scaled(&(&nr - rho));
        let lhs = t_word[(n - 1) as usize];
        if BigInt::from(lhs) != s_prime {
            return Ok(StVerification { holds: false, first_failure: Some((n, "floor-indicator")) });
        }
        // s_{n, 1/theta, -(rho+1)/theta} = floor((n-rho)/theta) - floor((n-1-rho)/theta)
        let s = floor_scaled(&(&nr - rho)) - floor_scaled(&(&nr - BigRational::one() - rho));
        let lhs = tp_word[(n - 1) as usize];
        if BigInt::from(lhs) != s {
            return Ok(StVerification { holds: false, first_failure: Some((n, "ceiling-indicator")) });
        }
    }
    Ok(StVerification { holds: true, first_failure: None })
}

/// Slope `(sqrt(5) - 1) / 2` with zero intercept and identity coding: the
/// golden-ratio Sturmian word.
pub fn golden_sturmian_params() -> SturmianParams {
    SturmianParams::new(
        Slope::Quadratic(QuadraticIrrational::new(-1, 1, 2, 5).unwrap()),
        BigRational::zero(),
        Variant::Floor,
        [0, 1],
    )
    .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadratic::CfPrefixSlope;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn golden_prefix_matches_reference() {
        let mut s = SturmianStream::new(golden_sturmian_params());
        assert_eq!(s.prefix(10).unwrap().to_string(), "1011010110");
    }

    #[test]
    fn raw_symbols_are_binary_and_telescope() {
        let slopes: Vec<(QuadraticIrrational, BigRational)> = vec![
            (QuadraticIrrational::new(-1, 1, 2, 5).unwrap(), rat(0, 1)),
            (QuadraticIrrational::new(-1, 1, 1, 2).unwrap(), rat(1, 3)),
            (QuadraticIrrational::new(-2, 1, 1, 5).unwrap(), rat(-2, 5)),
        ];
        for (theta, rho) in slopes {
            let params = SturmianParams::new(
                Slope::Quadratic(theta),
                rho,
                Variant::Floor,
                [0, 1],
            )
            .unwrap();
            let mut s = SturmianStream::new(params);
            let mut total = BigInt::zero();
            for n in 1..=500u64 {
                let raw = s.raw_symbol(n).unwrap();
                assert!(raw <= 1);
                total += raw;
            }
            assert_eq!(total, s.raw_prefix_sum(500).unwrap());
        }
    }

    #[test]
    fn floor_and_ceiling_variants_agree_off_integers() {
        // with irrational theta and rho = 1/7, n*theta + rho never hits an
        // integer, so the two variants generate the same word
        let theta = QuadraticIrrational::new(0, 1, 3, 3).unwrap(); // sqrt(3)/3
        let mk = |variant| {
            SturmianStream::new(
                SturmianParams::new(Slope::Quadratic(theta.clone()), rat(1, 7), variant, [0, 1])
                    .unwrap(),
            )
        };
        let mut f = mk(Variant::Floor);
        let mut c = mk(Variant::Ceiling);
        assert_eq!(f.prefix(400).unwrap(), c.prefix(400).unwrap());
    }

    #[test]
    fn sturmian_rejects_bad_params() {
        let theta = QuadraticIrrational::new(1, 1, 1, 2).unwrap(); // 1 + sqrt2 > 1
        assert!(SturmianParams::new(Slope::Quadratic(theta), rat(0, 1), Variant::Floor, [0, 1])
            .is_err());
        let ok = QuadraticIrrational::new(-1, 1, 2, 5).unwrap();
        assert!(SturmianParams::new(Slope::Quadratic(ok), rat(0, 1), Variant::Floor, [1, 1])
            .is_err());
    }

    #[test]
    fn golden_beatty_indicator() {
        // floor(k*phi) for phi = (1+sqrt5)/2: 1, 3, 4, 6, 8, 9, 11, ...
        let phi = QuadraticIrrational::new(1, 1, 2, 5).unwrap();
        let (mut t, _) = indicator_pair(Slope::Quadratic(phi), rat(0, 1)).unwrap();
        let word = t.prefix(12).unwrap();
        assert_eq!(word.to_string(), "101101011011");
    }

    #[test]
    fn indicator_ones_count() {
        // a prefix of length N contains floor((N - rho)/theta) + O(1) ones
        let theta = QuadraticIrrational::new(1, 1, 1, 2).unwrap(); // 1 + sqrt2
        let rho = rat(1, 2);
        let (mut t, _) = indicator_pair(Slope::Quadratic(theta.clone()), rho.clone()).unwrap();
        let n = 2000u64;
        let word = t.prefix(n as usize).unwrap();
        let ones = word.symbols().iter().filter(|&&s| s == 1).count() as i64;
        let expected = theta
            .recip()
            .unwrap()
            .affine(&BigRational::from(BigInt::from(n)), &BigRational::zero())
            .unwrap()
            .floor();
        let diff = (BigInt::from(ones) - expected).magnitude().clone();
        assert!(diff <= 2u32.into(), "ones count off by {diff}");
    }

    #[test]
    fn indicator_rejects_small_theta() {
        let theta = QuadraticIrrational::new(-1, 1, 2, 5).unwrap(); // < 1
        assert!(IndicatorParams::new(Slope::Quadratic(theta), rat(0, 1), Variant::Floor).is_err());
    }

    #[test]
    fn st_identity_golden_case() {
        let phi = QuadraticIrrational::new(1, 1, 2, 5).unwrap();
        let v = verify_st_identity(&phi, &rat(0, 1), 1000).unwrap();
        assert!(v.holds, "failed at {:?}", v.first_failure);
    }

    #[test]
    fn st_identity_shifted_cases() {
        let cases = [
            (QuadraticIrrational::new(1, 1, 1, 2).unwrap(), rat(1, 2)),
            (QuadraticIrrational::new(0, 1, 1, 5).unwrap(), rat(-3, 4)),
            (QuadraticIrrational::new(7, -1, 3, 3).unwrap(), rat(2, 1)), // (7 - sqrt3)/3 ~ 1.756
            (QuadraticIrrational::new(3, 2, 2, 7).unwrap(), rat(-5, 6)),
        ];
        for (theta, rho) in cases {
            let v = verify_st_identity(&theta, &rho, 1000).unwrap();
            assert!(v.holds, "theta = {theta:?}, rho = {rho}, failure {:?}", v.first_failure);
        }
    }

    #[test]
    fn sturmian_cf_prefix_slope_works_within_horizon() {
        let slope = Slope::CfPrefix(CfPrefixSlope::new(vec![0, 1, 10, 100, 1000]).unwrap());
        let params = SturmianParams::new(slope, rat(0, 1), Variant::Floor, [0, 1]).unwrap();
        let mut s = SturmianStream::new(params);
        let p = s.prefix(2000).unwrap();
        assert_eq!(p.len(), 2000);
        // near-periodic with period 11 on this stretch: check a few samples
        let w = p.symbols();
        let agree = (11..1000).filter(|&i| w[i] == w[i - 11]).count();
        assert!(agree > 970, "period-11 structure missing: {agree}");
    }
}
