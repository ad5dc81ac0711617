use num_bigint::BigUint;
use num_traits::One;
use proptest::prelude::*;

use pftl_core::arith::{decompose, factor, is_squarefree, rotate};
use pftl_core::primes::{dth_root_mod, for_each_prime_below, root_brute_force, root_via_generator};

fn is_dth_power_free(a: u64, d: u32) -> bool {
    (2..=a).take_while(|b| b.checked_pow(d).is_some_and(|v| v <= a)).all(|b| a % b.pow(d) != 0)
}

proptest! {
    #[test]
    fn decomposition_recomposes(a in 2u64..2_000_000, d in prop::sample::select(vec![3u32, 5, 7])) {
        prop_assume!(is_dth_power_free(a, d));
        let dec = decompose(&BigUint::from(a), d).unwrap();
        prop_assert_eq!(dec.radicand(), BigUint::from(a));
        for (i, p) in dec.parts().iter().enumerate() {
            prop_assert!(is_squarefree(p).unwrap());
            for q in &dec.parts()[i + 1..] {
                prop_assert!(num_integer::Integer::gcd(p, q).is_one());
            }
        }
    }

    #[test]
    fn rotation_matches_power_reduction(a in 2u64..5_000, k in 1i64..7) {
        let d = 7u32;
        prop_assume!(is_dth_power_free(a, d));
        let dec = decompose(&BigUint::from(a), d).unwrap();
        let rot = rotate(&dec, k).unwrap();
        // a^k with every exponent reduced mod d
        let mut expected = BigUint::one();
        for (p, e) in factor(&BigUint::from(a)).unwrap().factors() {
            expected *= num_traits::pow(p.clone(), (*e as usize * k as usize) % d as usize);
        }
        prop_assert_eq!(rot.radicand(), expected);
        let back = rotate(&rot, pftl_core::arith::inverse_mod(k, d as i64).unwrap()).unwrap();
        prop_assert_eq!(back, dec);
    }

    #[test]
    fn generator_roots_agree_with_search(a in 1u64..10_000, pi in 0usize..200, d in prop::sample::select(vec![3u32, 5, 7])) {
        let mut primes = Vec::new();
        for_each_prime_below(3_000, |p| if p % d as u64 != 1 { primes.push(p) });
        let p = primes[pi % primes.len()];
        let x = root_via_generator(a, d, p).expect("d is invertible mod p - 1");
        prop_assert_eq!(num_bigint::BigUint::from(x).modpow(&BigUint::from(d), &BigUint::from(p)), BigUint::from(a % p));
        prop_assert!(root_brute_force(a, d, p).is_some());
        prop_assert_eq!(dth_root_mod(a, d, p).is_some(), true);
    }
}

#[test]
fn power_divisible_radicands_are_rejected() {
    assert!(decompose(&BigUint::from(8u32), 3).is_err());
    assert!(decompose(&BigUint::from(2u32 * 81), 3).is_err());
    assert!(decompose(&BigUint::from(1u32), 3).is_err());
    assert!(decompose(&BigUint::from(6u32), 4).is_err());
}

#[test]
fn sieve_counts_primes() {
    let mut n = 0;
    let mut last = 0;
    for_each_prime_below(1_000_000, |p| {
        assert!(p > last);
        last = p;
        n += 1;
    });
    assert_eq!(n, 78_498);
}
