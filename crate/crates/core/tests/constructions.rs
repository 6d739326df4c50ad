use critexp::explore::min_exponent_search;
use critexp::kappa::kappa2_upper_bound;
use critexp::word::thue_morse_position;
use critexp::{
    build_cr, build_near_zero, build_with_tm_prefix, critical_exponent, extend_word, make_schedule, thue_morse_prefix,
    BigRational, ExponentValue, FiniteWord, Real, SearchConfig, Target,
};
use num::BigInt;
use proptest::prelude::*;

fn rational(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

fn binary(len: std::ops::Range<usize>) -> impl Strategy<Value = FiniteWord> {
    proptest::collection::vec(0u8..2, len).prop_map(|d| FiniteWord::binary(d).unwrap())
}

fn tau_subword() -> impl Strategy<Value = FiniteWord> {
    (0usize..200, 1usize..12).prop_map(|(start, len)| thue_morse_prefix(start + len).delete_prefix(start))
}

fn prefixes_within(point: &critexp::ConstructedPoint, depth: usize) -> bool {
    point.certify(depth).unwrap().never_exceeds
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn cr_prefixes_stay_below(p in 9i64..40, q in 1i64..10) {
        let alpha = rational(p, q);
        prop_assume!(alpha > rational(2, 1) && alpha <= rational(4, 1));
        let point = build_cr(&make_schedule(&alpha, 4).unwrap()).unwrap();
        let cert = point.certify(768).unwrap();
        prop_assert!(cert.strictly_below);
        let prefix = point.prefix(768);
        prop_assert_eq!(prefix.longest_run_of(0), 2);
        prop_assert!(prefix.longest_run_of(1) <= 2);
    }

    #[test]
    fn tm_prefix_points_start_with_the_word(p in tau_subword(), num in 4i64..20, den in 1i64..5) {
        let alpha = rational(num, den);
        prop_assume!(alpha >= rational(2, 1));
        let point = build_with_tm_prefix(&p, &Target::rational(alpha)).unwrap();
        prop_assert_eq!(point.prefix(p.len()), p);
        prop_assert!(prefixes_within(&point, 512));
    }

    #[test]
    fn extended_words_start_with_the_word(w in binary(3..10), extra in 0i64..8, den in 1i64..4) {
        let alpha = rational(w.len() as i64 * den + extra, den);
        let point = extend_word(&w, &Target::rational(alpha)).unwrap();
        prop_assert_eq!(point.prefix(w.len()), w.clone());
        prop_assert!(prefixes_within(&point, 512));
        let e = critical_exponent(&point.prefix(512)).0;
        prop_assert!(e >= critical_exponent(&w).0);
    }

    #[test]
    fn near_zero_points_are_small(n in 1u32..4, num in 1i64..10) {
        let y = rational(num, 10 << n);
        let point = build_near_zero(n, &Real::rational(y)).unwrap();
        let (_, hi) = point.bracket(512);
        prop_assert!(hi <= BigRational::new(BigInt::from(1), BigInt::from(1) << (1usize << n)));
        prop_assert!(prefixes_within(&point, 512));
    }

    #[test]
    fn pruning_is_sound(w in binary(0..7), d in 1usize..7) {
        let pruned = min_exponent_search(&w, d, &SearchConfig::default()).unwrap();
        let full = min_exponent_search(&w, d, &SearchConfig::default().prune(false)).unwrap();
        prop_assert_eq!(&pruned.value, &full.value);
        prop_assert_eq!(&pruned.extension, &full.extension);
        let leaf = w.concat(&pruned.extension).unwrap();
        prop_assert_eq!(critical_exponent(&leaf).0, pruned.value);
    }

    #[test]
    fn kappa_bound_is_nonincreasing(p in 0i64..500, q in 1i64..500) {
        prop_assume!(p <= q);
        let x = rational(p, q);
        let mut prev = rational(1, 1);
        for depth in 1..40 {
            let b = kappa2_upper_bound(&x, depth).unwrap();
            prop_assert!(b <= prev);
            prev = b;
        }
    }
}

#[test]
fn every_tau_subword_admits_exponent_two() {
    for start in 0..64 {
        for len in 2..10 {
            let p = thue_morse_prefix(start + len).delete_prefix(start);
            let point = build_with_tm_prefix(&p, &Target::rational(rational(2, 1))).unwrap();
            assert_eq!(point.prefix(len), p);
            assert_eq!(critical_exponent(&point.prefix(1024)).0, ExponentValue::from_integer(2), "{p:?}");
        }
    }
}

#[test]
fn non_subwords_are_rejected() {
    for s in ["000", "111", "01010", "0011001100"] {
        let w: FiniteWord = s.parse().unwrap();
        assert!(thue_morse_position(&w).is_none());
        assert!(build_with_tm_prefix(&w, &Target::rational(rational(5, 2))).is_err());
    }
}

#[test]
fn infinite_targets_end_in_zeros() {
    let w: FiniteWord = "0110".parse().unwrap();
    let point = extend_word(&w, &Target::Infinite).unwrap();
    assert_eq!(point.prefix(4), w);
    assert!(point.prefix(200).delete_prefix(4).digits().iter().all(|&a| a == 0));
}
