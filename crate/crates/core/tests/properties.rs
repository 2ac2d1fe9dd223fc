mod common;

use flatrank::families::{complete_symmetric, ftilde_family, random_homogeneous};
use flatrank::flattening::{catalecticant_rank, macaulay_lower_bound, shifted_partials_dim};
use flatrank::koszul::{apriori_bound, koszul_rank};
use flatrank::RankEngine;
use num_bigint::{BigInt, BigUint};

#[test]
fn macaulay_bound_below_shifted_dims_of_full_rank_forms() {
    let eng = RankEngine::new(3, 2);
    for seed in 0..8 {
        for (n, d) in [(2, 3), (3, 3), (3, 4), (4, 3)] {
            let p = random_homogeneous(n, d, 50, seed).unwrap();
            let s = 1;
            if !catalecticant_rank(&p, s, &eng).unwrap().is_full() {
                continue;
            }
            for tau in 0..=2 {
                let dim = shifted_partials_dim(&p, s, tau, &eng).unwrap().dim;
                assert!(
                    BigUint::from(dim) >= macaulay_lower_bound(n, s, tau),
                    "n={n} d={d} seed={seed} tau={tau}"
                );
            }
        }
    }
}

#[test]
fn shifted_dims_grow_with_tau_for_permanents() {
    let eng = RankEngine::new(4, 2);
    for m in 2..=3 {
        let perm = flatrank::families::permanent(m).unwrap();
        let dims: Vec<usize> = (0..=2).map(|t| shifted_partials_dim(&perm, 1, t, &eng).unwrap().dim).collect();
        assert!(dims.windows(2).all(|w| w[0] <= w[1]), "m={m}: {dims:?}");
    }
}

#[test]
fn koszul_pattern_beyond_the_acceptance_range() {
    let eng = RankEngine::new(9, 2);
    for n in 3..=5 {
        for k in 1..=3 {
            let bound = apriori_bound(n, k, 1);
            let gap = |p| bound.clone() - BigInt::from(koszul_rank(&p, k, 1, &eng).unwrap().rank);
            let generic = gap(random_homogeneous(n, 2 * k + 1, 100, 77).unwrap());
            let expected = BigInt::from((n == 3 && k % 2 == 0) as i32);
            assert_eq!(generic, expected, "generic n={n} k={k}");
            let structured = BigInt::from((k % 2 == 0) as i32);
            assert_eq!(gap(complete_symmetric(n, 2 * k + 1).unwrap()), structured, "h n={n} k={k}");
            assert_eq!(gap(ftilde_family(n, k).unwrap()), structured, "ftilde n={n} k={k}");
        }
    }
}
