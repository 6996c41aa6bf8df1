mod common;

use divcode::decompose::{hyperplanes, residual, subspace_restriction};
use divcode::golden;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn weight_forty_residuals_of_the_nodal_code() {
    let code = golden::entry("nodal-k12-3").unwrap().code;
    let mut seen = 0;
    for w in common::all_words(&code) {
        if w.count_ones() != 40 {
            continue;
        }
        let r = residual(&code, w).unwrap();
        let c = r.code.expect("nonempty residual");
        assert_eq!(r.length, 25);
        assert_eq!(r.dim, 11);
        assert_eq!(c.effective_length(), 25);
        assert_eq!(c.divisibility() % 4, 0);
        seen += 1;
    }
    assert_eq!(seen, code.weight_enumerator().get(40) as usize);
}

#[test]
fn sections_of_a_triply_even_four_dimensional_code() {
    let code = golden::entry("opt-48-4-1").unwrap().code;
    let hs = hyperplanes(4);
    assert_eq!(hs.len(), 15);
    for (h, basis) in hs {
        let s = subspace_restriction(&code, &basis, 1).unwrap().expect("nonempty section");
        // the complement of the hyperplane carries the codeword of functional h
        let w = code.columns().iter().filter(|&&c| (c & h).count_ones() % 2 == 1).count();
        assert_eq!(s.effective_length(), 48 - w);
        assert_eq!(s.divisibility() % 4, 0);
        assert_eq!(s.effective_length() % 4, 0);
    }
}

#[test]
fn dependent_basis_is_rejected() {
    let code = golden::entry("opt-48-4-1").unwrap().code;
    assert!(subspace_restriction(&code, &[1, 2, 3], 1).is_err());
    assert!(subspace_restriction(&code, &[1, 2], 1).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(80))]

    #[test]
    fn residual_dimensions_add_up(seed in any::<u64>(), n in 4usize..=16, k in 1usize..=5) {
        let k = k.min(n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let code = common::random_code(&mut rng, n, k);
        let words: Vec<u128> = common::all_words(&code).into_iter().filter(|&w| w != 0).collect();
        let w = words[rng.gen_range(0..words.len())];
        let r = residual(&code, w).unwrap();
        prop_assert_eq!(r.dim + r.complement_dim, k);
        prop_assert_eq!(r.length, code.effective_length() - w.count_ones() as usize);
        // complement_dim counts the codewords supported inside supp(w)
        let inside = common::all_words(&code).into_iter().filter(|&c| c & !w == 0).count();
        prop_assert_eq!(inside, 1usize << r.complement_dim);
        if let Some(c) = r.code {
            prop_assert_eq!(c.k(), r.dim);
            prop_assert_eq!(c.effective_length(), r.length);
        }
    }

    #[test]
    fn residuals_lose_one_factor_of_two(seed in any::<u64>()) {
        // the 8-divisible optimal codes: every residual of a word of weight below 2d is 4-divisible
        let entries: Vec<_> = golden::corpus().into_iter().filter(|e| e.label.starts_with("opt-") && e.k <= 6).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = &entries[rng.gen_range(0..entries.len())];
        for w in common::all_words(&e.code) {
            if w == 0 || w.count_ones() as usize >= 2 * e.dmin {
                continue;
            }
            let r = residual(&e.code, w).unwrap();
            prop_assert_eq!(r.dim, e.k - 1);
            if let Some(c) = r.code {
                prop_assert_eq!(c.divisibility() % 4, 0);
            }
        }
    }

    #[test]
    fn section_divisibility(seed in any::<u64>()) {
        let entries: Vec<_> = golden::corpus().into_iter().filter(|e| e.label.starts_with("opt-") && e.k <= 7).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = &entries[rng.gen_range(0..entries.len())];
        let k = e.k;
        let l = rng.gen_range(0..k.min(3));
        // a random basis of a codimension-l subspace
        let basis: Vec<u16> = loop {
            let b: Vec<u16> = (0..k - l).map(|_| rng.gen_range(1u16..(1 << k))).collect();
            if divcode::gf2core::rank(&b.iter().map(|&x| x as u128).collect::<Vec<_>>()) == k - l {
                break b;
            }
        };
        if let Some(s) = subspace_restriction(&e.code, &basis, l).unwrap() {
            prop_assert_eq!(s.divisibility() % (1u64 << (3 - l)), 0);
        }
    }
}
