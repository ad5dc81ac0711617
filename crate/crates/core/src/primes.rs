//! Small degree-one primes of a pure field.
//!
//! For a prime `p = 2 (mod d)` with `p` coprime to `d a` we have `gcd(d, p - 1) = 1`,
//! so `x -> x^d` permutes `F_p` and `x^d = a (mod p)` has exactly one solution `r`.
//! By Dedekind's criterion the ideal `(p, theta - r)` is then a prime of `K` of
//! norm `p` and residue degree 1, unramified over `p`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::arith;
use crate::interval::Fx;
use crate::purefield::PureField;
use crate::{Error, RealEnclosure, Result};

/// Largest norm bound accepted by the prime search.
pub const NORM_BOUND_LIMIT: u64 = 100_000_000_000;

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
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

/// Primes dividing `a` ramify; primes dividing `d` but not `a` may or may not.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RamifiedPrimes {
    pub ramified: Vec<BigUint>,
    pub flagged: Vec<BigUint>,
}

pub fn ramified_primes(field: &PureField) -> RamifiedPrimes {
    let ramified: Vec<BigUint> = field.factorization().primes().cloned().collect();
    let d_fact = arith::factor(&BigUint::from(field.d())).expect("small degree");
    let flagged = d_fact.primes().filter(|p| !ramified.contains(p)).cloned().collect();
    RamifiedPrimes { ramified, flagged }
}

/// A prime ideal `(p, theta - root)` of norm `p` and residue degree 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GoodPrime {
    pub p: u64,
    pub root: u64,
    /// `p = 2 (mod d)`
    pub residue_class_ok: bool,
    /// `p` does not divide `d a`
    pub unramified: bool,
}

impl GoodPrime {
    pub fn norm(&self) -> u64 {
        self.p
    }
}

/// The unique `x` in `[0, p)` with `x^d = a (mod p)` when `gcd(d, p - 1) = 1`:
/// `x = a^e` with `e d = 1 (mod p - 1)`.
pub fn dth_root_mod(a: u64, d: u32, p: u64) -> Option<u64> {
    let e = arith::inverse_mod(d as i64, (p - 1) as i64)?;
    Some(pow_mod(a % p, e as u64, p))
}

/// Smallest primitive root modulo the prime `p`.
pub fn primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let fact = arith::factor(&BigUint::from(p - 1)).expect("p - 1 fits the factoring cap");
    let qs: Vec<u64> = fact.primes().map(|q| q.to_u64().expect("small")).collect();
    (2..p).find(|&g| qs.iter().all(|&q| pow_mod(g, (p - 1) / q, p) != 1)).expect("a primitive root exists")
}

/// Discrete logarithm `t` with `g^t = y (mod p)` by baby-step giant-step.
pub fn discrete_log(g: u64, y: u64, p: u64) -> Option<u64> {
    let n = p - 1;
    let m = libm::ceil(libm::sqrt(n as f64)) as u64 + 1;
    let mut baby: Vec<(u64, u64)> = Vec::with_capacity(m as usize);
    let mut cur = 1u64;
    for j in 0..m {
        baby.push((cur, j));
        cur = mul_mod(cur, g, p);
    }
    baby.sort_unstable();
    // g^-m
    let step = pow_mod(g, n - m % n, p);
    let mut gamma = y % p;
    for i in 0..m {
        if let Ok(pos) = baby.binary_search_by(|probe| probe.0.cmp(&gamma)) {
            // smallest exponent for this value: search left neighbours
            let mut k = pos;
            while k > 0 && baby[k - 1].0 == gamma {
                k -= 1;
            }
            return Some((i * m + baby[k].1) % n);
        }
        gamma = mul_mod(gamma, step, p);
    }
    None
}

/// The root through a generator: write `a = g^t`, solve `s d = t (mod p - 1)` and take `g^s`.
pub fn root_via_generator(a: u64, d: u32, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    let g = primitive_root(p);
    let t = discrete_log(g, a, p)?;
    let inv = arith::inverse_mod(d as i64, (p - 1) as i64)? as u64;
    let s = ((t as u128 * inv as u128) % (p - 1) as u128) as u64;
    Some(pow_mod(g, s, p))
}

/// Smallest `x` in `[0, p)` with `x^d = a (mod p)`, by exhaustive search.
pub fn root_brute_force(a: u64, d: u32, p: u64) -> Option<u64> {
    let a = a % p;
    (0..p).find(|&x| pow_mod(x, d as u64, p) == a)
}

/// Calls `f` on every prime in `[2, bound)`, in increasing order, with a segmented sieve.
pub fn for_each_prime_below(bound: u64, mut f: impl FnMut(u64)) {
    if bound <= 2 {
        return;
    }
    let root = libm::sqrt(bound as f64) as u64 + 2;
    let mut small = vec![true; root as usize + 1];
    let mut base = Vec::new();
    for i in 2..=root as usize {
        if small[i] {
            base.push(i as u64);
            let mut j = i * i;
            while j <= root as usize {
                small[j] = false;
                j += i;
            }
        }
    }
    const SEG: u64 = 1 << 16;
    let mut lo = 2u64;
    let mut seg = vec![true; SEG as usize];
    while lo < bound {
        let hi = (lo + SEG).min(bound);
        seg.iter_mut().for_each(|x| *x = true);
        for &q in &base {
            if q * q >= hi {
                break;
            }
            let mut start = (lo.div_ceil(q) * q).max(q * q);
            while start < hi {
                seg[(start - lo) as usize] = false;
                start += q;
            }
        }
        for x in lo..hi {
            if seg[(x - lo) as usize] {
                f(x);
            }
        }
        lo = hi;
    }
}

fn check_bound(bound: u64) -> Result<()> {
    if bound > NORM_BOUND_LIMIT {
        return Err(Error::Resource { what: "prime norm bound", requested: format!("{bound}"), limit: format!("{NORM_BOUND_LIMIT}") });
    }
    Ok(())
}

/// Every prime `p < norm_bound` with `p = 2 (mod d)` and `p` coprime to `d a`, each with
/// its degree-one prime `(p, theta - root)`.
pub fn find_good_primes(field: &PureField, norm_bound: u64) -> Result<Vec<GoodPrime>> {
    if norm_bound < 2 {
        return Err(Error::Domain(format!("norm bound must be at least 2, got {norm_bound}")));
    }
    check_bound(norm_bound)?;
    let d = field.d();
    let a = field.a();
    let mut out = Vec::new();
    let mut failure = None;
    for_each_prime_below(norm_bound, |p| {
        if p % d as u64 != 2 % d as u64 || (d as u64) % p == 0 {
            return;
        }
        let a_mod = (a % p).to_u64().expect("reduced mod p");
        if a_mod == 0 {
            return;
        }
        match dth_root_mod(a_mod, d, p) {
            Some(r) if pow_mod(r, d as u64, p) == a_mod => {
                out.push(GoodPrime { p, root: r, residue_class_ok: true, unramified: true });
            }
            _ => failure = failure.or(Some(p)),
        }
    });
    if let Some(p) = failure {
        return Err(Error::Domain(format!("no verified {d}-th root of {a} modulo {p}")));
    }
    Ok(out)
}

/// Good primes counted below `D^delta`, compared with `D^(delta - epsilon)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoodPrimeReport {
    pub d: u32,
    pub a: BigUint,
    /// The discriminant value used (exact when known, else the lower bound).
    pub disc: BigUint,
    pub delta: BigRational,
    pub epsilon: BigRational,
    /// Primes are counted strictly below this integer.
    pub norm_bound: u64,
    pub count: u64,
    pub primes: Vec<GoodPrime>,
    /// `count / D^(delta - epsilon)`
    pub ratio: RealEnclosure,
}

/// Counts good primes of norm below `D^delta`, with `D` the exact discriminant or, when
/// that is unknown, its lower bound.
pub fn good_prime_count_report(field: &PureField, delta: &BigRational, epsilon: &BigRational) -> Result<GoodPrimeReport> {
    let disc = field.disc().exact().unwrap_or(field.disc().lower()).clone();
    good_prime_count_report_with(field, &disc, delta, epsilon)
}

/// [`good_prime_count_report`] with an explicit discriminant value.
pub fn good_prime_count_report_with(field: &PureField, disc: &BigUint, delta: &BigRational, epsilon: &BigRational) -> Result<GoodPrimeReport> {
    if !epsilon.is_positive() || epsilon >= delta {
        return Err(Error::Domain(format!("need 0 < epsilon < delta, got epsilon = {epsilon}, delta = {delta}")));
    }
    if disc.is_zero() {
        return Err(Error::Domain("discriminant must be positive".into()));
    }
    let norm_bound = power_bound(disc, delta)?;
    check_bound(norm_bound)?;
    let primes = find_good_primes(field, norm_bound.max(2))?;
    let count = primes.len() as u64;
    let denom = rational_power(disc, &(delta - epsilon), 128);
    let c = Fx::from_int(&BigInt::from(count), 128);
    let ratio = c.div(&denom).expect("positive power").to_enclosure();
    Ok(GoodPrimeReport {
        d: field.d(),
        a: field.a().clone(),
        disc: disc.clone(),
        delta: delta.clone(),
        epsilon: epsilon.clone(),
        norm_bound,
        count,
        primes,
        ratio,
    })
}

/// Smallest integer `B` such that `p < D^delta` iff `p < B`, for positive `delta = r/q`.
fn power_bound(disc: &BigUint, delta: &BigRational) -> Result<u64> {
    let r = delta.numer().to_u32().ok_or_else(|| Error::Domain("delta numerator too large".into()))?;
    let q = delta.denom().to_u32().ok_or_else(|| Error::Domain("delta denominator too large".into()))?;
    // p < D^(r/q)  <=>  p^q < D^r
    let target = num_traits::pow(disc.clone(), r as usize);
    let b = target.nth_root(q);
    let bound = if num_traits::pow(b.clone(), q as usize) == target { b } else { b + 1u32 };
    bound.to_u64().ok_or_else(|| Error::Resource { what: "prime norm bound", requested: format!("D^{delta}"), limit: format!("{NORM_BOUND_LIMIT}") })
}

/// `D^e` for a positive rational exponent, as an interval.
fn rational_power(disc: &BigUint, e: &BigRational, prec: u32) -> Fx {
    let r = e.numer().to_u32().expect("small exponent numerator");
    let q = e.denom().to_u32().expect("small exponent denominator");
    let n = BigInt::from(num_traits::pow(disc.clone(), r as usize));
    Fx::from_int(&n, prec).root(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(d: u32, a: u64) -> PureField {
        PureField::new(d, &BigUint::from(a)).unwrap()
    }

    fn big(v: &[u64]) -> Vec<BigUint> {
        v.iter().map(|&x| BigUint::from(x)).collect()
    }

    #[test]
    fn ramified_examples() {
        assert_eq!(ramified_primes(&field(3, 10)), RamifiedPrimes { ramified: big(&[2, 5]), flagged: big(&[3]) });
        assert_eq!(ramified_primes(&field(3, 2)), RamifiedPrimes { ramified: big(&[2]), flagged: big(&[3]) });
        assert_eq!(ramified_primes(&field(5, 6)), RamifiedPrimes { ramified: big(&[2, 3]), flagged: big(&[5]) });
        assert_eq!(ramified_primes(&field(3, 6)), RamifiedPrimes { ramified: big(&[2, 3]), flagged: vec![] });
    }

    #[test]
    fn good_prime_examples() {
        let g = find_good_primes(&field(3, 2), 12).unwrap();
        assert_eq!(g.iter().map(|x| (x.p, x.root)).collect::<Vec<_>>(), vec![(5, 3), (11, 7)]);
        // 2 = 2 (mod 5) and 2 does not divide 15, so p = 2 qualifies as well
        let g = find_good_primes(&field(5, 3), 20).unwrap();
        assert_eq!(g.iter().map(|x| x.p).collect::<Vec<_>>(), vec![2, 7, 17]);
        assert_eq!(pow_mod(g[1].root, 5, 7), 3);
        assert!(g.iter().all(|x| x.p % 5 == 2));
        assert!(find_good_primes(&field(3, 2), 1).is_err());
    }

    #[test]
    fn root_routes_agree_with_brute_force() {
        for d in [3u32, 5, 7, 9] {
            for_each_prime_below(400, |p| {
                if p % d as u64 != 2 || (d as u64) % p == 0 {
                    return;
                }
                for a in 1..p {
                    let direct = dth_root_mod(a, d, p).unwrap();
                    assert_eq!(Some(direct), root_brute_force(a, d, p));
                    assert_eq!(Some(direct), root_via_generator(a, d, p));
                }
            });
        }
    }

    #[test]
    fn sieve_matches_primality_test() {
        let mut v = Vec::new();
        for_each_prime_below(200_000, |p| v.push(p));
        let expected: Vec<u64> = (2..200_000).filter(|&n| arith::is_prime_u64(n)).collect();
        assert_eq!(v, expected);
    }

    #[test]
    fn count_report_examples() {
        let half = BigRational::new(1.into(), 2.into());
        let tenth = BigRational::new(1.into(), 10.into());
        let r = good_prime_count_report(&field(3, 2), &half, &tenth).unwrap();
        assert_eq!((r.count, r.norm_bound), (1, 11));
        assert_eq!(r.primes[0].p, 5);
        let r = good_prime_count_report_with(&field(3, 150), &BigUint::from(900u32), &half, &tenth).unwrap();
        assert_eq!(r.primes.iter().map(|x| x.p).collect::<Vec<_>>(), vec![11, 17, 23, 29]);
        // 4 / 900^(0.4)
        assert!((r.ratio.mid_f64() - 4.0 / libm::pow(900.0, 0.4)).abs() < 1e-12);
        assert!(good_prime_count_report(&field(3, 2), &BigRational::zero(), &tenth).is_err());
        assert!(good_prime_count_report(&field(3, 2), &half, &half).is_err());
    }
}
