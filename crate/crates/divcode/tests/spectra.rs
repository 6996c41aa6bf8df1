mod common;

use std::collections::BTreeSet;

use divcode::gf2core::orthogonal_complement;
use divcode::spectra::{
    a40_bounds, macwilliams_big, macwilliams_dual, power_moment_residuals, twelve_dim_length_window,
};
use divcode::{golden, BinaryCode, WeightEnumerator};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn random(seed: u64, n: usize, k: usize) -> BinaryCode {
    common::random_code(&mut ChaCha8Rng::seed_from_u64(seed), n, k)
}

#[test]
fn a40_bound_signs() {
    for n in 24..=66 {
        let (first, second) = a40_bounds(n).unwrap();
        assert_eq!(second.is_negative(), (54..=60).contains(&n), "second bound at n={n}");
        if n <= 53 || (61..=65).contains(&n) {
            assert!(first >= BigRational::one(), "first bound at n={n}");
        }
    }
    assert!(a40_bounds(23).is_err());
    assert!(a40_bounds(67).is_err());
}

#[test]
fn a40_bounds_at_a_sample_length() {
    // 205/2*n^2 - 6808n - n^3/2 + 147420 at n = 64
    let (first, _) = a40_bounds(64).unwrap();
    let expect = BigRational::from(BigInt::from(205 * 64 * 64)) / BigRational::from(BigInt::from(2))
        - BigRational::from(BigInt::from(6808 * 64 - 147420))
        - BigRational::from(BigInt::from(64 * 64 * 64)) / BigRational::from(BigInt::from(2));
    assert_eq!(first, expect);
}

#[test]
fn length_window() {
    assert_eq!(twelve_dim_length_window(), BTreeSet::from([63, 64, 65]));
}

#[test]
fn corpus_moments_vanish() {
    for e in golden::corpus() {
        let c = e.code.effective();
        let low = c.dual_low_terms(3).unwrap();
        let w = c.weight_enumerator();
        let r = power_moment_residuals(&w, c.n(), c.k(), low[1], low[2]);
        assert!(r.is_zero(), "{}: {r}", e.label);
    }
}

#[test]
fn wrong_dual_terms_leave_a_residual() {
    let c = golden::entry("opt-48-4-1").unwrap().code.effective();
    let low = c.dual_low_terms(3).unwrap();
    let r = power_moment_residuals(&c.weight_enumerator(), c.n(), c.k(), low[1] + 1, low[2]);
    assert!(!r.is_zero());
}

#[test]
fn non_enumerator_is_rejected() {
    // four words, but the dual count of weight 1 would be 1/2
    let w = WeightEnumerator::from_coeffs(vec![1, 3, 0]);
    assert!(macwilliams_dual(&w, 2, 2).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn double_transform_is_identity(seed in any::<u64>(), n in 2usize..=20, k in 1usize..=6) {
        let k = k.min(n);
        let c = random(seed, n, k);
        let w = c.weight_enumerator();
        let d = macwilliams_dual(&w, n, k).unwrap();
        let back = macwilliams_big(d.coeffs(), n, n - k).unwrap();
        let orig: Vec<BigInt> = (0..=n).map(|i| BigInt::from(w.get(i))).collect();
        prop_assert_eq!(back.coeffs(), &orig[..]);
    }

    #[test]
    fn transform_matches_the_real_dual(seed in any::<u64>(), n in 2usize..=16, k in 1usize..=6) {
        let k = k.min(n - 1);
        let c = random(seed, n, k);
        let basis = orthogonal_complement(n, c.rows());
        let mut counts = vec![0u64; n + 1];
        for m in 0u32..(1 << basis.len()) {
            let w = (0..basis.len()).filter(|&i| m >> i & 1 == 1).fold(0u128, |w, i| w ^ basis[i]);
            counts[w.count_ones() as usize] += 1;
        }
        let d = macwilliams_dual(&c.weight_enumerator(), n, k).unwrap();
        prop_assert!(d.is_nonnegative());
        prop_assert_eq!(d.to_enumerator().unwrap(), WeightEnumerator::from_coeffs(counts));
    }

    #[test]
    fn low_dual_terms_match_the_transform(seed in any::<u64>(), n in 4usize..=24, k in 1usize..=7) {
        let k = k.min(n - 1);
        let c = random(seed, n, k);
        let d = macwilliams_dual(&c.weight_enumerator(), n, k).unwrap();
        let low = c.dual_low_terms(4).unwrap();
        for j in 1..=4 {
            prop_assert_eq!(BigInt::from(low[j - 1]), d.get(j), "weight {}", j);
        }
    }

    #[test]
    fn moments_vanish_on_random_codes(seed in any::<u64>(), n in 2usize..=30, k in 1usize..=8) {
        let k = k.min(n);
        let c = random(seed, n, k).effective();
        let low = c.dual_low_terms(3).unwrap();
        let r = power_moment_residuals(&c.weight_enumerator(), c.n(), k, low[1], low[2]);
        prop_assert!(r.is_zero(), "{}", r);
    }
}
