//! Randomized cross-validation of the sieves and counting primitives
//! against independent implementations: trial-division factorization,
//! brute-force counting, and `num-integer`'s gcd/roots.

use num_integer::{Integer, Roots};
use proptest::prelude::*;

use pntlab::arith::{divisors, euler_phi, factorize, gcd};
use pntlab::cache::SweepOptions;
use pntlab::identities::{mangoldt_from_mobius, split_mangoldt};
use pntlab::progression::{
    chebyshev_checkpoints, count_in_class_upto, count_multiples_in_class, crt_residue, psi_all,
    ProgressionClass,
};
use pntlab::sieve::{mangoldt_segment, mobius_segment, PrimeBasis};

/// mu(n) by trial division — no shared code with the segmented sieve.
fn mu_by_factorization(n: u64) -> i8 {
    if n == 1 {
        return 1;
    }
    let factors = factorize(n);
    if factors.iter().any(|&(_, e)| e > 1) {
        return 0;
    }
    if factors.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Lambda(n) by trial division.
fn lambda_by_factorization(n: u64) -> f64 {
    let factors = factorize(n);
    if factors.len() == 1 {
        (factors[0].0 as f64).ln()
    } else {
        0.0
    }
}

proptest! {
    #[test]
    fn mobius_segment_matches_trial_division(lo in 1u64..10_000_000, len in 1u64..512) {
        let hi = lo + len;
        let basis = PrimeBasis::for_window(hi);
        let table = mobius_segment(&basis, lo, hi);
        for n in lo..hi {
            prop_assert_eq!(table.mu(n), mu_by_factorization(n), "n = {}", n);
        }
    }

    #[test]
    fn mangoldt_segment_matches_trial_division(lo in 1u64..10_000_000, len in 1u64..512) {
        let hi = lo + len;
        let basis = PrimeBasis::for_window(hi);
        let table = mangoldt_segment(&basis, lo, hi);
        for n in lo..hi {
            let gap = (table.lambda(n) - lambda_by_factorization(n)).abs();
            prop_assert!(gap < 1e-12, "Lambda({}) off by {}", n, gap);
        }
    }

    #[test]
    fn gcd_agrees_with_num_integer(a in 0u64..u64::MAX, b in 0u64..u64::MAX) {
        prop_assert_eq!(gcd(a, b), a.gcd(&b));
    }

    #[test]
    fn std_isqrt_agrees_with_num_integer(n in 1u64..u64::MAX) {
        prop_assert_eq!(n.isqrt(), Roots::sqrt(&n));
    }

    #[test]
    fn divisor_sum_of_mobius_detects_one(n in 1u64..1_000_000) {
        let total: i64 = divisors(n)
            .into_iter()
            .map(|d| i64::from(mu_by_factorization(d)))
            .sum();
        prop_assert_eq!(total, i64::from(n == 1));
    }

    #[test]
    fn divisor_sum_of_mangoldt_is_log(n in 1u64..1_000_000) {
        let total: f64 = divisors(n).into_iter().map(lambda_by_factorization).sum();
        prop_assert!((total - (n as f64).ln()).abs() < 1e-9, "sum = {}", total);
    }

    #[test]
    fn inversion_and_split_agree_on_random_n(n in 1u64..2_000_000) {
        let direct = lambda_by_factorization(n);
        prop_assert!((mangoldt_from_mobius(n) - direct).abs() < 1e-9);
        prop_assert!((split_mangoldt(n).total() - direct).abs() < 1e-9);
    }

    #[test]
    fn class_count_matches_brute_force(limit in 1u64..4000, q in 1u64..50, c in 0u64..50) {
        prop_assume!(c < q);
        let brute = (1..=limit).filter(|n| n % q == c).count() as u64;
        prop_assert_eq!(count_in_class_upto(limit, q, c), brute);
    }

    #[test]
    fn multiple_count_matches_brute_force(
        x in 1u64..4000,
        d in 1u64..40,
        q in 1u64..40,
        a in 0u64..40,
    ) {
        prop_assume!(a < q && gcd(a, q) == 1);
        let cls = ProgressionClass::new(q, a).unwrap();
        let brute = (1..=x).filter(|n| n % d == 0 && n % q == a).count() as u64;
        prop_assert_eq!(count_multiples_in_class(x, d, &cls), brute);
    }

    #[test]
    fn crt_residue_is_the_least_solution(d in 1u64..500, q in 1u64..500, a in 0u64..500) {
        prop_assume!(a < q && gcd(a, q) == 1);
        prop_assume!(gcd(d, q) == 1);
        let cls = ProgressionClass::new(q, a).unwrap();
        let r = crt_residue(d, &cls).unwrap();
        prop_assert_eq!(r.modulus, u128::from(d) * u128::from(q));
        prop_assert!(r.b >= 1 && r.b <= r.modulus);
        // b solves both congruences, and nothing smaller does.
        let b = r.b as u64;
        prop_assert_eq!(b % d, 0);
        prop_assert_eq!(b % q, a);
        let first = (1..=b).find(|n| n % d == 0 && n % q == a).unwrap();
        prop_assert_eq!(first, b);
    }

    #[test]
    fn psi_conserved_over_random_modulus(x in 100u64..30_000, q in 1u64..16) {
        let opts = SweepOptions::default();
        let mut total = 0.0;
        for a in 0..q {
            let cls = ProgressionClass::any_residue(q, a).unwrap();
            total += chebyshev_checkpoints(&[x], &cls, &opts).unwrap()[0].psi;
        }
        let line = psi_all(x).unwrap();
        prop_assert!(
            (total - line).abs() <= 1e-9 * line.max(1.0),
            "sum over classes {} vs whole line {}",
            total,
            line
        );
    }

    #[test]
    fn totient_counts_coprime_residues(q in 1u64..5000) {
        let brute = (0..q).filter(|&a| gcd(a, q) == 1).count() as u64;
        prop_assert_eq!(euler_phi(q), brute);
    }
}
