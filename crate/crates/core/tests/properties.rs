//! Property tests for the algebraic invariants that hold for every input.

use num_bigint::BigInt;
use num_rational::Rational64;
use proptest::prelude::*;

use padic_words::padic::{
    liouville_check, padic_abs, periodic_value, rational_digit_expansion, ExactRational,
};
use padic_words::words::{fractional_power, fractional_power_len, occurrences, FiniteWord};

fn word_strategy(max_len: usize, alphabet: u32) -> impl Strategy<Value = FiniteWord> {
    prop::collection::vec(0..alphabet, 0..=max_len)
        .prop_map(move |symbols| FiniteWord::new(symbols, alphabet).unwrap())
}

fn nonempty_word(max_len: usize, alphabet: u32) -> impl Strategy<Value = FiniteWord> {
    prop::collection::vec(0..alphabet, 1..=max_len)
        .prop_map(move |symbols| FiniteWord::new(symbols, alphabet).unwrap())
}

proptest! {
    // W^(k + w) = W^k ++ W^w for integer k
    #[test]
    fn fractional_power_splits_at_integers(
        word in nonempty_word(12, 4),
        k in 0i64..5,
        num in 0i64..40,
        den in 1i64..8,
    ) {
        let w2 = Rational64::new(num, den);
        let lhs = fractional_power(&word, Rational64::new(k, 1) + w2).unwrap();
        let rhs = fractional_power(&word, Rational64::new(k, 1))
            .unwrap()
            .concat(&fractional_power(&word, w2).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    // |W^w| is non-decreasing in w
    #[test]
    fn fractional_power_len_monotone(
        len in 1usize..20,
        n1 in 0i64..50,
        n2 in 0i64..50,
        den in 1i64..9,
    ) {
        let (lo, hi) = (n1.min(n2), n1.max(n2));
        let a = fractional_power_len(len, Rational64::new(lo, den)).unwrap();
        let b = fractional_power_len(len, Rational64::new(hi, den)).unwrap();
        prop_assert!(a <= b);
    }

    // factor search agrees with the quadratic scan
    #[test]
    fn occurrences_match_naive(
        text in word_strategy(200, 4),
        pattern in nonempty_word(5, 4),
    ) {
        let fast = occurrences(&pattern, &text).unwrap();
        let p = pattern.symbols();
        let t = text.symbols();
        let naive: Vec<usize> = (0..=t.len().saturating_sub(p.len()))
            .filter(|&i| t.len() >= p.len() && &t[i..i + p.len()] == p)
            .collect();
        prop_assert_eq!(fast, naive);
    }

    // digit expansion of a periodic-tail rational reproduces U V V V ...
    #[test]
    fn periodic_value_digits_roundtrip(
        p_idx in 0usize..4,
        head_digits in prop::collection::vec(0u32..7, 0..5),
        block_digits in prop::collection::vec(0u32..7, 1..5),
    ) {
        let p = [2u64, 3, 5, 7][p_idx];
        let head: Vec<u32> = head_digits.into_iter().map(|d| d % p as u32).collect();
        let block: Vec<u32> = block_digits.into_iter().map(|d| d % p as u32).collect();
        let head = FiniteWord::new(head, p as u32).unwrap();
        let block = FiniteWord::new(block, p as u32).unwrap();
        let alpha = periodic_value(&head, &block, p).unwrap();
        let digits = rational_digit_expansion(&alpha, p, head.len() + 3 * block.len()).unwrap();
        for (i, &d) in digits.iter().enumerate() {
            let want = if i < head.len() {
                head[i]
            } else {
                block[(i - head.len()) % block.len()]
            };
            prop_assert_eq!(d, want);
        }
    }

    // ultrametric inequality, with equality at distinct absolute values
    #[test]
    fn ultrametric_rule(
        p_idx in 0usize..3,
        an in -500i64..500, ad in 1i64..200,
        bn in -500i64..500, bd in 1i64..200,
    ) {
        let p = [2u64, 3, 5][p_idx];
        let a = ExactRational::new(BigInt::from(an), BigInt::from(ad)).unwrap();
        let b = ExactRational::new(BigInt::from(bn), BigInt::from(bd)).unwrap();
        let sum = ExactRational::from_big_rational(a.as_big_rational() + b.as_big_rational());
        let aa = padic_abs(&a, p).as_big_rational(p);
        let ab = padic_abs(&b, p).as_big_rational(p);
        let asum = padic_abs(&sum, p).as_big_rational(p);
        prop_assert!(asum <= aa.clone().max(ab.clone()));
        if aa != ab {
            prop_assert_eq!(asum, aa.max(ab));
        }
    }

    // degree-1 lower bound never violated
    #[test]
    fn liouville_bound_holds(
        p_idx in 0usize..3,
        an in -2000i64..2000, ad in 1i64..900,
        bn in -2000i64..2000, bd in 1i64..900,
    ) {
        let p = [2u64, 3, 5][p_idx];
        let a = ExactRational::new(BigInt::from(an), BigInt::from(ad)).unwrap();
        let b = ExactRational::new(BigInt::from(bn), BigInt::from(bd)).unwrap();
        prop_assume!(a != b);
        prop_assert!(liouville_check(&a, &b, p).unwrap());
    }

    // the exponent-quality order agrees with direct evaluation on small data:
    // (m1, h1) vs (m2, h2) compare as h2^m1 vs h1^m2
    #[test]
    fn quality_order_matches_direct_powers(
        m1 in 0u64..40, h1 in 2u64..60,
        m2 in 0u64..40, h2 in 2u64..60,
    ) {
        use num_bigint::BigUint;
        use padic_words::padic::Quality;
        let q1 = Quality::new(m1, BigUint::from(h1)).unwrap();
        let q2 = Quality::new(m2, BigUint::from(h2)).unwrap();
        let direct = num_traits::Pow::pow(&BigUint::from(h2), m1)
            .cmp(&num_traits::Pow::pow(&BigUint::from(h1), m2));
        prop_assert_eq!(q1.cmp(&q2), direct);
    }
}
