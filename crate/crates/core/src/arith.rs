//! Integer arithmetic: factorization, primality and the power-free decomposition
//! `a = A_1 * A_2^2 * ... * A_{d-1}^{d-1}` of a radicand.

use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_integer::{Integer, Roots};
use num_traits::{One, ToPrimitive, Zero};

use crate::{Error, Result};

/// Limits and knobs for [`factor_with`].
#[derive(Clone, Debug)]
pub struct FactorLimits {
    /// Inputs must satisfy `n < 2^cap_bits`. At most 128.
    pub cap_bits: u32,
    /// Trial division bound before switching to Pollard rho.
    pub trial_limit: u64,
    /// Seed for the rho polynomial constants; fixed so results are reproducible.
    pub seed: u64,
}

impl Default for FactorLimits {
    fn default() -> Self {
        FactorLimits { cap_bits: 128, trial_limit: 1_000_000, seed: 0x9e37_79b9_7f4a_7c15 }
    }
}

/// Complete prime factorization of a positive integer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    n: BigUint,
    factors: Vec<(BigUint, u32)>,
}

impl Factorization {
    pub fn n(&self) -> &BigUint {
        &self.n
    }

    /// `(prime, exponent)` pairs with strictly increasing primes.
    pub fn factors(&self) -> &[(BigUint, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = &BigUint> {
        self.factors.iter().map(|(p, _)| p)
    }

    /// `ord_p(n)`; zero when `p` does not divide `n`.
    pub fn ord(&self, p: &BigUint) -> u32 {
        self.factors.iter().find(|(q, _)| q == p).map_or(0, |(_, e)| *e)
    }

    pub fn recompose(&self) -> BigUint {
        self.factors.iter().fold(BigUint::one(), |acc, (p, e)| acc * num_traits::pow(p.clone(), *e as usize))
    }

    /// Factorization of the product `self.n * other.n`.
    pub fn merge(&self, other: &Factorization) -> Factorization {
        let mut factors = self.factors.clone();
        for (p, e) in &other.factors {
            match factors.binary_search_by(|(q, _)| q.cmp(p)) {
                Ok(i) => factors[i].1 += e,
                Err(i) => factors.insert(i, (p.clone(), *e)),
            }
        }
        Factorization { n: &self.n * &other.n, factors }
    }
}

/// Factors `n` with the default limits (cap `2^128`).
pub fn factor(n: &BigUint) -> Result<Factorization> {
    factor_with(n, &FactorLimits::default())
}

pub fn factor_with(n: &BigUint, limits: &FactorLimits) -> Result<Factorization> {
    let cap = limits.cap_bits.min(128);
    if n.is_zero() {
        return Err(Error::Domain("cannot factor 0".to_string()));
    }
    if n.bits() > cap as u64 {
        return Err(Error::Resource { what: "factorization input", requested: format!("{} bits", n.bits()), limit: format!("2^{cap}") });
    }
    let v = n.to_u128().expect("checked against a cap of at most 128 bits");
    let mut primes = Vec::new();
    factor_u128(v, limits, &mut primes);
    primes.sort_unstable();
    let mut factors: Vec<(BigUint, u32)> = Vec::new();
    for p in primes {
        match factors.last_mut() {
            Some((q, e)) if *q == BigUint::from(p) => *e += 1,
            _ => factors.push((BigUint::from(p), 1)),
        }
    }
    Ok(Factorization { n: n.clone(), factors })
}

fn factor_u128(mut n: u128, limits: &FactorLimits, out: &mut Vec<u128>) {
    if n <= 1 {
        return;
    }
    for p in [2u128, 3, 5] {
        while n % p == 0 {
            out.push(p);
            n /= p;
        }
    }
    // wheel 30 trial division, stopping at sqrt of the cofactor or the trial limit
    const STEPS: [u128; 8] = [4, 2, 4, 2, 4, 6, 2, 6];
    let limit = limits.trial_limit as u128;
    let mut p: u128 = 7;
    let mut i = 0;
    let mut checked_prime = false;
    while p <= limit && p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                out.push(p);
                n /= p;
            }
            checked_prime = false;
        } else if !checked_prime && n > limit * limit {
            // skip the remaining trial division when the cofactor is itself prime
            if is_prime_u128(n) {
                out.push(n);
                return;
            }
            checked_prime = true;
        }
        p += STEPS[i];
        i = (i + 1) % 8;
    }
    if n == 1 {
        return;
    }
    if p * p > n || is_prime_u128(n) {
        out.push(n);
        return;
    }
    let mut seed = limits.seed;
    split_rho(n, &mut seed, out);
}

fn split_rho(n: u128, seed: &mut u64, out: &mut Vec<u128>) {
    if n == 1 {
        return;
    }
    if is_prime_u128(n) {
        out.push(n);
        return;
    }
    let d = loop {
        // splitmix64 step for the polynomial constant and starting point
        *seed = seed.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = *seed;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^= z >> 31;
        let c = (z as u128) % (n - 1) + 1;
        let y0 = ((z.rotate_left(17)) as u128) % n;
        if let Some(d) = brent(n, c, y0) {
            break d;
        }
    };
    split_rho(d, seed, out);
    split_rho(n / d, seed, out);
}

/// Brent's variant of Pollard rho for `x -> x^2 + c`. Returns a proper divisor or `None`.
fn brent(n: u128, c: u128, y0: u128) -> Option<u128> {
    let f = |x: u128| add_mod(mul_mod(x, x, n), c, n);
    let m: u64 = 128;
    let mut y = y0;
    let mut r: u64 = 1;
    let mut q: u128 = 1;
    let mut g: u128 = 1;
    let mut x = y;
    let mut ys = y;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..m.min(r - k) {
                y = f(y);
                q = mul_mod(q, x.abs_diff(y), n);
            }
            g = gcd_u128(q, n);
            k += m;
        }
        r *= 2;
        if r > 1 << 40 {
            return None;
        }
    }
    if g == n {
        loop {
            ys = f(ys);
            g = gcd_u128(x.abs_diff(ys), n);
            if g > 1 {
                break;
            }
        }
    }
    if g == n {
        None
    } else {
        Some(g)
    }
}

fn gcd_u128(a: u128, b: u128) -> u128 {
    a.gcd(&b)
}

#[inline]
fn add_mod(a: u128, b: u128, m: u128) -> u128 {
    let (s, o) = a.overflowing_add(b);
    if o || s >= m {
        s.wrapping_sub(m)
    } else {
        s
    }
}

#[inline]
pub(crate) fn mul_mod(a: u128, b: u128, m: u128) -> u128 {
    if m <= u64::MAX as u128 {
        return (a % m) * (b % m) % m;
    }
    let mut r = 0u128;
    let mut a = a % m;
    let mut b = b % m;
    while b > 0 {
        if b & 1 == 1 {
            r = add_mod(r, a, m);
        }
        a = add_mod(a, a, m);
        b >>= 1;
    }
    r
}

pub(crate) fn pow_mod(mut b: u128, mut e: u128, m: u128) -> u128 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

fn strong_probable_prime(n: u128, base: u128) -> bool {
    let mut d = n - 1;
    let s = d.trailing_zeros();
    d >>= s;
    let mut x = pow_mod(base, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mul_mod(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

const SMALL_PRIMES: [u128; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

/// Deterministic primality test for 128-bit integers.
///
/// Below `3.3 * 10^24` Miller-Rabin with the first 13 prime bases is exact. Above
/// that bound the test is Baillie-PSW (base-2 Miller-Rabin plus a strong Lucas
/// test), which has no known counterexample.
pub fn is_prime_u128(n: u128) -> bool {
    if n < 2 {
        return false;
    }
    for p in SMALL_PRIMES {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    const MR_EXACT_BOUND: u128 = 3_317_044_064_679_887_385_961_981;
    if n < MR_EXACT_BOUND {
        return SMALL_PRIMES.iter().all(|&b| strong_probable_prime(n, b));
    }
    strong_probable_prime(n, 2) && strong_lucas(n)
}

pub fn is_prime_u64(n: u64) -> bool {
    is_prime_u128(n as u128)
}

/// Primality for arbitrary-size inputs that fit the 128-bit test.
pub fn is_prime(n: &BigUint) -> Result<bool> {
    match n.to_u128() {
        Some(v) => Ok(is_prime_u128(v)),
        None => Err(Error::Resource { what: "primality input", requested: format!("{} bits", n.bits()), limit: "2^128".to_string() }),
    }
}

fn jacobi(a: i128, n: u128) -> i32 {
    // n odd positive
    let mut a = a.rem_euclid(n as i128) as u128;
    let mut n = n;
    let mut t = 1;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
                t = -t;
            }
        }
        core::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

fn half_mod(x: u128, n: u128) -> u128 {
    if x % 2 == 0 {
        x / 2
    } else {
        // (x + n) / 2 without overflow, n odd
        x / 2 + n / 2 + 1
    }
}

fn sub_mod(a: u128, b: u128, m: u128) -> u128 {
    if a >= b {
        a - b
    } else {
        m - (b - a)
    }
}

/// Strong Lucas probable-prime test with Selfridge parameters.
fn strong_lucas(n: u128) -> bool {
    let r = n.sqrt();
    if r * r == n {
        return false;
    }
    let mut dd: i128 = 5;
    loop {
        let j = jacobi(dd, n);
        if j == -1 {
            break;
        }
        if j == 0 && dd.unsigned_abs() != n {
            return false;
        }
        dd = if dd > 0 { -(dd + 2) } else { -dd + 2 };
    }
    let to_mod = |v: i128| -> u128 { v.rem_euclid(n as i128) as u128 };
    let dm = to_mod(dd);
    let q = to_mod((1 - dd) / 4);
    let mut d = n + 1;
    let s = d.trailing_zeros();
    d >>= s;
    // binary Lucas chain for U_d, V_d with P = 1
    let mut u: u128 = 0;
    let mut v: u128 = 2;
    let mut qk: u128 = 1;
    for bit in (0..128 - d.leading_zeros()).rev() {
        // doubling
        u = mul_mod(u, v, n);
        v = sub_mod(mul_mod(v, v, n), add_mod(qk, qk, n), n);
        qk = mul_mod(qk, qk, n);
        if (d >> bit) & 1 == 1 {
            let nu = half_mod(add_mod(u, v, n), n);
            let nv = half_mod(add_mod(v, mul_mod(dm, u, n), n), n);
            u = nu;
            v = nv;
            qk = mul_mod(qk, q, n);
        }
    }
    if u == 0 || v == 0 {
        return true;
    }
    for _ in 1..s {
        v = sub_mod(mul_mod(v, v, n), add_mod(qk, qk, n), n);
        qk = mul_mod(qk, qk, n);
        if v == 0 {
            return true;
        }
    }
    false
}

pub fn is_squarefree(n: &BigUint) -> Result<bool> {
    Ok(factor(n)?.factors().iter().all(|(_, e)| *e == 1))
}

/// Whether `n` is a perfect `p`-th power (`n = m^p` for an integer `m`).
pub fn is_pth_power(n: &BigUint, p: u32) -> bool {
    if p <= 1 {
        return true;
    }
    let r = n.nth_root(p);
    num_traits::pow(r, p as usize) == *n
}

/// The decomposition `a = prod_{i=1}^{d-1} A_i^i` with squarefree, pairwise coprime `A_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PowerFreeDecomposition {
    d: u32,
    parts: Vec<BigUint>,
}

impl PowerFreeDecomposition {
    /// Builds a decomposition from explicit parts `A_1, ..., A_{d-1}`, checking every invariant.
    pub fn from_parts(d: u32, parts: Vec<BigUint>) -> Result<Self> {
        check_degree(d)?;
        if parts.len() != d as usize - 1 {
            return Err(Error::Domain(format!("expected {} parts, got {}", d - 1, parts.len())));
        }
        if parts.iter().any(|p| p.is_zero()) {
            return Err(Error::Domain("parts must be positive".to_string()));
        }
        if parts.iter().all(|p| p.is_one()) {
            return Err(Error::Domain("radicand must exceed 1".to_string()));
        }
        for (i, p) in parts.iter().enumerate() {
            if !is_squarefree(p)? {
                return Err(Error::Domain(format!("A_{} = {p} is not squarefree", i + 1)));
            }
            for q in &parts[i + 1..] {
                if !p.gcd(q).is_one() {
                    return Err(Error::Domain(format!("parts {p} and {q} are not coprime")));
                }
            }
        }
        Ok(PowerFreeDecomposition { d, parts })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    /// `A_1, ..., A_{d-1}` in order.
    pub fn parts(&self) -> &[BigUint] {
        &self.parts
    }

    /// `A_i` for `1 <= i <= d-1`.
    pub fn part(&self, i: u32) -> &BigUint {
        &self.parts[i as usize - 1]
    }

    pub fn radicand(&self) -> BigUint {
        self.parts.iter().enumerate().fold(BigUint::one(), |acc, (i, p)| acc * num_traits::pow(p.clone(), i + 1))
    }
}

pub(crate) fn check_degree(d: u32) -> Result<()> {
    if d < 3 || d % 2 == 0 {
        Err(Error::InvalidDegree(d))
    } else {
        Ok(())
    }
}

/// Power-free decomposition of a `d`-th-power-free radicand `a >= 2`.
pub fn decompose(a: &BigUint, d: u32) -> Result<PowerFreeDecomposition> {
    check_degree(d)?;
    if *a < BigUint::from(2u32) {
        return Err(Error::Domain(format!("radicand must be at least 2, got {a}")));
    }
    decompose_factored(&factor(a)?, d)
}

pub fn decompose_factored(fact: &Factorization, d: u32) -> Result<PowerFreeDecomposition> {
    check_degree(d)?;
    let mut parts = vec![BigUint::one(); d as usize - 1];
    for (p, e) in fact.factors() {
        if *e >= d {
            return Err(Error::NotPowerFree { prime: p.clone(), d });
        }
        parts[*e as usize - 1] *= p;
    }
    Ok(PowerFreeDecomposition { d, parts })
}

/// The decomposition of `phi_k(a)`: `a^k` with all `d`-th powers deleted.
///
/// Part `i` of the result is the original `A_j` with `j k = i (mod d)`.
pub fn rotate(dec: &PowerFreeDecomposition, k: i64) -> Result<PowerFreeDecomposition> {
    let d = dec.d as i64;
    let kk = k.rem_euclid(d);
    if kk.gcd(&d) != 1 {
        return Err(Error::Domain(format!("rotation {k} is not coprime to d = {d}")));
    }
    let mut parts = vec![BigUint::one(); dec.parts.len()];
    for (j, part) in dec.parts.iter().enumerate() {
        let i = ((j as i64 + 1) * kk).rem_euclid(d);
        parts[i as usize - 1] = part.clone();
    }
    Ok(PowerFreeDecomposition { d: dec.d, parts })
}

/// Inverse of `k` modulo `d`, when it exists.
pub fn inverse_mod(k: i64, d: i64) -> Option<i64> {
    let e = num_integer::Integer::extended_gcd(&k.rem_euclid(d), &d);
    (e.gcd == 1).then(|| e.x.rem_euclid(d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(n: u128) -> BigUint {
        BigUint::from(n)
    }

    fn fac(n: u128) -> Vec<(u128, u32)> {
        factor(&big(n)).unwrap().factors().iter().map(|(p, e)| (p.to_u128().unwrap(), *e)).collect()
    }

    /// Naive primality by trial division; the oracle for small inputs.
    fn naive_prime(n: u128) -> bool {
        n >= 2 && (2..).take_while(|i: &u128| i * i <= n).all(|i| n % i != 0)
    }

    #[test]
    fn factor_small_examples() {
        assert!(fac(1).is_empty());
        assert_eq!(fac(150), vec![(2, 1), (3, 1), (5, 2)]);
        assert_eq!(fac(2305843009213693951), vec![(2305843009213693951, 1)]);
    }

    #[test]
    fn mersenne_61_is_prime_by_two_routes() {
        let m = (1u128 << 61) - 1;
        assert!(is_prime_u128(m));
        // Lucas-Lehmer: s_0 = 4, s_{i+1} = s_i^2 - 2 mod M, M prime iff s_{p-2} = 0
        let mut s: u128 = 4;
        for _ in 0..59 {
            s = (mul_mod(s, s, m) + m - 2) % m;
        }
        assert_eq!(s, 0);
    }

    #[test]
    fn primality_matches_trial_division() {
        for n in 0..20_000u128 {
            assert_eq!(is_prime_u128(n), naive_prime(n), "n = {n}");
        }
    }

    #[test]
    fn large_semiprimes_and_primes() {
        // 2^89 - 1 and 2^107 - 1 are Mersenne primes, 2^127 - 1 too
        for e in [89u32, 107, 127] {
            assert!(is_prime_u128((1u128 << e) - 1));
        }
        // strong pseudoprime to bases 2..37: 3825123056546413051
        assert!(!is_prime_u128(3825123056546413051));
        let p = 1_000_000_007u128;
        let q = 998_244_353u128;
        assert_eq!(fac(p * q), vec![(q, 1), (p, 1)]);
        let r = 4_294_967_291u128; // largest prime below 2^32
        assert_eq!(fac(r * r * 6), vec![(2, 1), (3, 1), (r, 2)]);
        // product crossing 2^64 handled by the wide mul_mod
        let big_p = (1u128 << 61) - 1;
        assert_eq!(fac(big_p * 1_000_003), vec![(1_000_003, 1), (big_p, 1)]);
        assert_eq!(fac(big_p * 10_000_019), vec![(10_000_019, 1), (big_p, 1)]);
    }

    #[test]
    fn factor_rejects_inputs_above_cap() {
        let limits = FactorLimits { cap_bits: 16, ..Default::default() };
        match factor_with(&big(1 << 20), &limits) {
            Err(Error::Resource { limit, .. }) => assert_eq!(limit, "2^16"),
            other => panic!("unexpected {other:?}"),
        }
        let too_big = BigUint::one() << 130u32;
        assert!(matches!(factor(&too_big), Err(Error::Resource { .. })));
    }

    #[test]
    fn decompose_examples() {
        let dec = decompose(&big(150), 3).unwrap();
        assert_eq!(dec.parts(), &[big(6), big(5)]);
        match decompose(&big(8), 3) {
            Err(Error::NotPowerFree { prime, d }) => {
                assert_eq!(prime, big(2));
                assert_eq!(d, 3);
            }
            other => panic!("unexpected {other:?}"),
        }
        let dec = decompose(&big(2), 5).unwrap();
        assert_eq!(dec.parts(), &[big(2), big(1), big(1), big(1)]);
        assert!(matches!(decompose(&big(2), 4), Err(Error::InvalidDegree(4))));
        assert!(decompose(&big(1), 3).is_err());
    }

    /// Brute force `phi_k(a)`: raise to the k-th power and strip d-th powers prime by prime.
    fn phi_oracle(a: u128, d: u32, k: u32) -> u128 {
        let mut n = a.pow(k);
        let mut out = 1u128;
        let mut p = 2u128;
        while n > 1 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out *= p.pow(e % d);
            p += 1;
        }
        out
    }

    #[test]
    fn rotate_examples() {
        let dec = decompose(&big(12), 3).unwrap();
        assert_eq!(dec.parts(), &[big(3), big(2)]);
        let r = rotate(&dec, 2).unwrap();
        assert_eq!(r.parts(), &[big(2), big(3)]);
        assert_eq!(r.radicand(), big(phi_oracle(12, 3, 2)));
        assert_eq!(r.radicand(), big(18));

        assert_eq!(rotate(&dec, 1).unwrap(), dec);

        let dec = decompose(&big(18), 5).unwrap();
        let r = rotate(&dec, 3).unwrap();
        assert_eq!(r.part(3), &big(2));
        assert_eq!(r.part(1), &big(3));
        assert_eq!(r.radicand(), big(24));
        assert_eq!(r.radicand(), big(phi_oracle(18, 5, 3)));

        assert!(rotate(&decompose(&big(2), 9).unwrap(), 3).is_err());
    }

    #[test]
    fn small_predicates() {
        assert!(!is_squarefree(&big(12)).unwrap());
        assert!(is_squarefree(&big(30)).unwrap());
        assert!(is_pth_power(&big(27), 3));
        assert!(!is_pth_power(&big(12), 3));
        assert!(is_pth_power(&big(1), 5));
    }

    #[test]
    fn from_parts_validates() {
        assert!(PowerFreeDecomposition::from_parts(3, vec![big(6), big(5)]).is_ok());
        assert!(PowerFreeDecomposition::from_parts(3, vec![big(4), big(5)]).is_err());
        assert!(PowerFreeDecomposition::from_parts(3, vec![big(6), big(3)]).is_err());
        assert!(PowerFreeDecomposition::from_parts(3, vec![big(1), big(1)]).is_err());
        assert!(PowerFreeDecomposition::from_parts(5, vec![big(2)]).is_err());
    }

    fn power_free(a: u64, d: u32) -> bool {
        factor(&BigUint::from(a)).unwrap().factors().iter().all(|(_, e)| *e < d)
    }

    proptest! {
        #[test]
        fn decompose_round_trips(a in 2u64..200_000, d in prop::sample::select(vec![3u32, 5, 7, 9])) {
            prop_assume!(power_free(a, d));
            let dec = decompose(&BigUint::from(a), d).unwrap();
            prop_assert_eq!(dec.radicand(), BigUint::from(a));
            prop_assert!(PowerFreeDecomposition::from_parts(d, dec.parts().to_vec()).is_ok());
            for (i, p) in dec.parts().iter().enumerate() {
                for (q, e) in factor(p).unwrap().factors() {
                    prop_assert_eq!(*e, 1);
                    prop_assert_eq!(factor(&BigUint::from(a)).unwrap().ord(q), i as u32 + 1);
                }
            }
        }

        #[test]
        fn rotation_composes(a in 2u64..5_000, d in prop::sample::select(vec![3u32, 5, 7, 9]), k in 1i64..40, k2 in 1i64..40) {
            prop_assume!(power_free(a, d));
            let di = d as i64;
            prop_assume!(k.gcd(&di) == 1 && k2.gcd(&di) == 1);
            let dec = decompose(&BigUint::from(a), d).unwrap();
            let twice = rotate(&rotate(&dec, k).unwrap(), k2).unwrap();
            prop_assert_eq!(&twice, &rotate(&dec, (k * k2) % di).unwrap());
            let inv = inverse_mod(k, di).unwrap();
            prop_assert_eq!(&rotate(&rotate(&dec, k).unwrap(), inv).unwrap(), &dec);
            if a < 200 {
                prop_assert_eq!(rotate(&dec, k).unwrap().radicand(), BigUint::from(phi_oracle(a as u128, d, (k % di) as u32)));
            }
        }

        #[test]
        fn factor_is_multiplicative(m in 1u64..1_000_000_000, n in 1u64..1_000_000_000) {
            prop_assume!(m.gcd(&n) == 1);
            let fm = factor(&BigUint::from(m)).unwrap();
            let fn_ = factor(&BigUint::from(n)).unwrap();
            let fmn = factor(&(BigUint::from(m) * BigUint::from(n))).unwrap();
            prop_assert_eq!(fm.merge(&fn_), fmn);
        }

        #[test]
        fn factorization_invariants(n in 1u128..(1u128 << 70)) {
            let f = factor(&BigUint::from(n)).unwrap();
            prop_assert_eq!(f.recompose(), BigUint::from(n));
            let ps: Vec<_> = f.primes().cloned().collect();
            prop_assert!(ps.windows(2).all(|w| w[0] < w[1]));
            for p in ps {
                prop_assert!(is_prime(&p).unwrap());
            }
        }
    }
}
