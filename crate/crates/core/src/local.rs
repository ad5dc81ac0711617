//! Local structure of `K` at primes not dividing `d a`, used to cut the enumeration
//! into sublattices whose denominators are known exactly.
//!
//! For such a prime `p` the polynomial `x^d - a` is separable modulo `p`, and `p` does
//! not divide the index of `Z[theta]`. Each root `r` of `x^d = a (mod p)` gives a prime
//! `P = (p, theta - r)` of norm `p`, and `P^j = (p^j, theta - r_j)` where `r_j` lifts
//! `r` modulo `p^j`. The other primes above `p` have norm at least `p^2`. They are
//! handled together through the cofactor `R = (x^d - a) / prod (x - r)`: all of them
//! contain `gamma` to order `>= j` iff `gamma(x)` vanishes modulo `(p^j, R_j(x))`.
//!
//! For `x = gamma / q` with `p^k || q`, the `p`-part of the leading coefficient of the
//! minimal polynomial is `prod_P N(P)^max(0, k - v_P(gamma))`. A [`Pattern`] fixes
//! `min(k, v_P(gamma))` for every root prime and the minimum over the cofactor primes.
//! It yields a lower bound for the leading coefficient, and its elements are a
//! sublattice of `Z^d` minus a few smaller sublattices.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::primes::{discrete_log, pow_mod, primitive_root};

/// Roots of `x^d - a` modulo a prime `p` coprime to `d a`.
#[derive(Clone, Debug)]
pub(crate) struct PrimeSplit {
    pub roots: Vec<u64>,
    pub rest_degree: usize,
}

pub(crate) fn split_prime(d: u32, a: &BigUint, p: u64) -> PrimeSplit {
    let am = (a % p).to_u64().expect("reduced");
    let roots = if p == 2 {
        vec![1]
    } else {
        let g = primitive_root(p);
        let e = discrete_log(g, am, p).expect("a is a unit mod p");
        let n = p - 1;
        let m = (d as u64).gcd(&n);
        if e % m != 0 {
            Vec::new()
        } else {
            let (n1, d1) = (n / m, d as u64 / m);
            let y0 = if n1 == 1 { 0 } else { (e / m) as u128 * inverse(d1 as i128, n1 as i128) as u128 % n1 as u128 } as u64;
            let mut r: Vec<u64> = (0..m).map(|i| pow_mod(g, y0 + i * n1, p)).collect();
            r.sort_unstable();
            r
        }
    };
    debug_assert!(roots.iter().all(|&r| pow_mod(r, d as u64, p) == am));
    PrimeSplit { rest_degree: d as usize - roots.len(), roots }
}

fn inverse(x: i128, m: i128) -> i128 {
    let e = x.rem_euclid(m).extended_gcd(&m);
    debug_assert_eq!(e.gcd, 1);
    e.x.rem_euclid(m)
}

/// Linear congruences `row . c = 0 (mod modulus)` for every row.
#[derive(Clone, Debug)]
pub(crate) struct Congruence {
    pub rows: Vec<Vec<i64>>,
    pub modulus: i64,
}

impl Congruence {
    #[inline]
    pub fn holds(&self, c: &[i64]) -> bool {
        let m = self.modulus as i128;
        self.rows.iter().all(|row| row.iter().zip(c).map(|(&u, &x)| u as i128 * x as i128).sum::<i128>() % m == 0)
    }
}

/// One prime above `p` (a root), the group of all others (the cofactor), or the
/// single prime above a totally ramified `p`.
struct Component {
    /// `N(P)` exponent used in the lower bound: 1 for a root, the least possible
    /// residue degree for the cofactor group.
    weight: u32,
    /// At level `j` the bound contributes `p^(weight (base - j))`.
    base: u32,
    /// `levels[j - 1]`: membership in the `j`-th power.
    levels: Vec<Congruence>,
}

fn mulm(x: i128, y: i128, m: i128) -> i128 {
    (x * y).rem_euclid(m)
}

fn components(d: u32, a: &BigUint, p: u64, k: u32, split: &PrimeSplit) -> Vec<Component> {
    let du = d as usize;
    let mut comps: Vec<Component> = split.roots.iter().map(|_| Component { weight: 1, base: k, levels: Vec::new() }).collect();
    let rest_weight = if split.rest_degree <= 3 { split.rest_degree as u32 } else { 2 };
    if split.rest_degree > 0 {
        comps.push(Component { weight: rest_weight, base: k, levels: Vec::new() });
    }
    let am = |m: i128| (a % BigUint::from(m as u128)).to_i128().expect("reduced");
    for j in 1..=k {
        let m = (p as i128).pow(j);
        let a_m = am(m);
        let lifted: Vec<i128> = split.roots.iter().map(|&r| lift_root(r as i128, d, a_m, m)).collect();
        for (i, &r) in lifted.iter().enumerate() {
            let mut row = Vec::with_capacity(du);
            let mut pw = 1i128;
            for _ in 0..du {
                row.push(pw as i64);
                pw = mulm(pw, r, m);
            }
            comps[i].levels.push(Congruence { rows: vec![row], modulus: m as i64 });
        }
        if split.rest_degree > 0 {
            let rest = cofactor(d, a_m, &lifted, m);
            let f = rest.len() - 1;
            // x^k mod rest, for k = 0..d
            let mut rows = vec![vec![0i64; du]; f];
            let mut cur = vec![0i128; f];
            cur[0] = 1 % m;
            for kk in 0..du {
                for (mm, row) in rows.iter_mut().enumerate() {
                    row[kk] = cur[mm] as i64;
                }
                // cur *= x, reduce with the monic rest
                let top = cur[f - 1];
                for mm in (1..f).rev() {
                    cur[mm] = (cur[mm - 1] - mulm(top, rest[mm], m)).rem_euclid(m);
                }
                cur[0] = (-mulm(top, rest[0], m)).rem_euclid(m);
            }
            comps.last_mut().expect("cofactor").levels.push(Congruence { rows, modulus: m as i64 });
        }
    }
    comps
}

/// The prime above a totally ramified `p`, when its valuation can be read off the
/// coordinates directly.
///
/// Two cases are handled. If `v = v_p(a)` is prime to `d`, then `v_P(theta) = v`
/// and `v_P(sum c_k theta^k) = min_k (d v_p(c_k) + k v)` because the terms have
/// distinct valuations modulo `d`. If instead `(x + r)^d - a` is Eisenstein at `p`,
/// then `pi = theta - r` is a uniformizer and the same holds with `k v` replaced by
/// `k` and `c` by its coordinates in powers of `pi`. In both cases the `p`-part of
/// `T` is exactly `p^max(0, d k - v_P(c))`.
fn ramified_component(d: u32, a: &BigUint, p: u64, k: u32) -> Option<Component> {
    let du = d as usize;
    let pb = BigUint::from(p);
    let mut v = 0u32;
    let mut rest = a.clone();
    while (&rest % &pb).is_zero() {
        rest /= &pb;
        v += 1;
    }
    // shift[k][i]: coefficient of c_i in the k-th coordinate; steps[k]: valuation offset
    let (shift, steps): (Vec<Vec<BigInt>>, Vec<u32>) = if v > 0 {
        if num_integer::gcd(v, d) != 1 {
            return None;
        }
        let id = (0..du).map(|kk| (0..du).map(|i| BigInt::from((i == kk) as u8)).collect()).collect();
        (id, (0..d).map(|kk| kk * v).collect())
    } else {
        let p2 = p.checked_mul(p)?;
        let ai = BigInt::from(a.clone());
        let binom = |n: u32, r: u32| (0..r).fold(BigInt::from(1), |acc, i| acc * (n - i) / (i + 1));
        let r = (0..p2.min(1 << 20)).find(|&r| {
            let rb = BigInt::from(r);
            let c0 = rb.pow(d) - &ai;
            let pb = BigInt::from(p);
            let once = (&c0 % &pb).is_zero() && !(&c0 % (&pb * &pb)).is_zero();
            once && (1..d).all(|i| (binom(d, i) * rb.pow(d - i) % &pb).is_zero())
        })?;
        let rb = BigInt::from(r);
        let shift = (0..d).map(|kk| (0..d).map(|i| if i >= kk { binom(i, kk) * rb.pow(i - kk) } else { BigInt::zero() }).collect()).collect();
        (shift, (0..d).collect())
    };
    // canonical elements have a coordinate prime to p
    let top = (d * k).min(steps.iter().copied().max().unwrap_or(0));
    let mut levels = Vec::with_capacity(top as usize);
    for m in 1..=top {
        let exps: Vec<u32> = steps.iter().map(|&w| if m > w { (m - w).div_ceil(d) } else { 0 }).collect();
        let big_e = exps.iter().copied().max().unwrap_or(0);
        let modulus = BigInt::from(p).pow(big_e);
        let rows = (0..du)
            .filter(|&kk| exps[kk] > 0)
            .map(|kk| {
                let scale = BigInt::from(p).pow(big_e - exps[kk]);
                shift[kk].iter().map(|x| (x * &scale).mod_floor(&modulus).to_i64().expect("below q")).collect()
            })
            .collect();
        levels.push(Congruence { rows, modulus: modulus.to_i64().expect("below q") });
    }
    Some(Component { weight: 1, base: d * k, levels })
}

/// Newton iteration for `x^d = a` modulo `m = p^j`, starting from a simple root mod `p`.
fn lift_root(r: i128, d: u32, a: i128, m: i128) -> i128 {
    let mut x = r.rem_euclid(m);
    let pw = |b: i128, e: u32| (0..e).fold(1i128.rem_euclid(m), |acc, _| mulm(acc, b, m));
    for _ in 0..8 {
        let f = (pw(x, d) - a).rem_euclid(m);
        if f == 0 {
            break;
        }
        let df = mulm(d as i128, pw(x, d - 1), m);
        x = (x - mulm(f, inverse(df, m), m)).rem_euclid(m);
    }
    debug_assert_eq!((pw(x, d) - a).rem_euclid(m), 0);
    x
}

/// `(x^d - a) / prod (x - r)` modulo `m`, ascending coefficients, monic.
fn cofactor(d: u32, a: i128, roots: &[i128], m: i128) -> Vec<i128> {
    let mut f = vec![0i128; d as usize + 1];
    f[0] = (-a).rem_euclid(m);
    f[d as usize] = 1;
    for &r in roots {
        let n = f.len() - 1;
        let mut b = vec![0i128; n];
        b[n - 1] = f[n];
        for i in (1..n).rev() {
            b[i - 1] = (f[i] + mulm(r, b[i], m)).rem_euclid(m);
        }
        debug_assert_eq!((f[0] + mulm(r, b[0], m)).rem_euclid(m), 0);
        f = b;
    }
    f
}

/// A full-rank sublattice of `Z^d` in Hermite normal form: `basis[k]` has `basis[k][k] =
/// pivot[k] > 0` and zeros above `k`, and `0 <= basis[k][i] < pivot[i]` for `i < k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Lattice {
    pub pivot: Vec<i64>,
    pub basis: Vec<Vec<i64>>,
}

impl Lattice {
    pub fn full(d: usize) -> Self {
        Lattice { pivot: vec![1; d], basis: (0..d).map(|k| (0..d).map(|i| i64::from(i == k)).collect()).collect() }
    }

    /// `{ c : every congruence holds }`.
    pub fn from_congruences(d: usize, conds: &[&Congruence]) -> Self {
        let rows: Vec<(&Vec<i64>, i64)> = conds.iter().flat_map(|c| c.rows.iter().map(move |r| (r, c.modulus))).collect();
        if rows.is_empty() {
            return Self::full(d);
        }
        let nr = rows.len();
        let ncols = nr + d;
        // coordinate k sits in column nr + (d - 1 - k)
        let col_of = |k: usize| nr + d - 1 - k;
        let mut remaining: Vec<Vec<BigInt>> = Vec::with_capacity(d + nr);
        for i in 0..d {
            let mut v = vec![BigInt::zero(); ncols];
            for (r, (row, _)) in rows.iter().enumerate() {
                v[r] = BigInt::from(row[i]);
            }
            v[col_of(i)] = BigInt::from(1);
            remaining.push(v);
        }
        for (r, (_, m)) in rows.iter().enumerate() {
            let mut v = vec![BigInt::zero(); ncols];
            v[r] = BigInt::from(*m);
            remaining.push(v);
        }
        let mut found: Vec<(usize, Vec<BigInt>)> = Vec::new();
        for col in 0..ncols {
            loop {
                let nz: Vec<usize> = (0..remaining.len()).filter(|&i| !remaining[i][col].is_zero()).collect();
                if nz.is_empty() {
                    break;
                }
                let best = *nz.iter().min_by_key(|&&i| remaining[i][col].abs()).expect("nonempty");
                if nz.len() == 1 {
                    let mut row = remaining.swap_remove(best);
                    if row[col].is_negative() {
                        row.iter_mut().for_each(|x| *x = -&*x);
                    }
                    found.push((col, row));
                    break;
                }
                let pivot_row = remaining[best].clone();
                for &i in &nz {
                    if i != best {
                        let f = &remaining[i][col] / &pivot_row[col];
                        for (x, y) in remaining[i].iter_mut().zip(&pivot_row) {
                            *x -= &f * y;
                        }
                    }
                }
            }
        }
        let mut basis: Vec<Vec<BigInt>> = vec![Vec::new(); d];
        for (col, row) in found {
            if col >= nr {
                let k = nr + d - 1 - col;
                basis[k] = (0..d).map(|i| row[col_of(i)].clone()).collect();
            }
        }
        for k in 0..d {
            assert!(!basis[k].is_empty(), "congruence lattice has full rank");
            for i in (0..k).rev() {
                let f = basis[k][i].div_floor(&basis[i][i]);
                if !f.is_zero() {
                    let bi = basis[i].clone();
                    for (x, y) in basis[k].iter_mut().zip(&bi) {
                        *x -= &f * y;
                    }
                }
            }
        }
        let to64 = |x: &BigInt| x.to_i64().expect("lattice entries fit i64");
        Lattice { pivot: (0..d).map(|k| to64(&basis[k][k])).collect(), basis: basis.iter().map(|r| r.iter().map(to64).collect()).collect() }
    }

    #[cfg(test)]
    pub fn index(&self) -> u128 {
        self.pivot.iter().map(|&h| h as u128).product()
    }

    #[cfg(test)]
    pub fn contains(&self, c: &[i64]) -> bool {
        let mut c: Vec<i128> = c.iter().map(|&x| x as i128).collect();
        for k in (0..c.len()).rev() {
            let h = self.pivot[k] as i128;
            if c[k] % h != 0 {
                return false;
            }
            let n = c[k] / h;
            for i in 0..=k {
                c[i] -= n * self.basis[k][i] as i128;
            }
        }
        true
    }
}

/// The elements `gamma / q` whose local valuations at the primes `p | q`, `p` coprime to
/// `d a`, follow one fixed pattern.
#[derive(Clone, Debug)]
pub(crate) struct Pattern {
    /// Lower bound for the leading coefficient `T` of the minimal polynomial.
    pub t_lower: u128,
    pub lattice: Lattice,
    /// `gamma` must satisfy none of these.
    pub exclusions: Vec<Congruence>,
}

impl Pattern {
    pub fn admits(&self, c: &[i64]) -> bool {
        !self.exclusions.iter().any(|e| e.holds(c))
    }
}

/// Prime factorization of a small integer by trial division.
pub(crate) fn factor_small(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut k = 0;
            while n % p == 0 {
                n /= p;
                k += 1;
            }
            out.push((p, k));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Splittings of `x^d - a` modulo primes, computed on demand.
pub(crate) struct SplitCache {
    d: u32,
    a: BigUint,
    map: BTreeMap<u64, PrimeSplit>,
}

impl SplitCache {
    pub fn new(d: u32, a: &BigUint) -> Self {
        SplitCache { d, a: a.clone(), map: BTreeMap::new() }
    }

    fn get(&mut self, p: u64) -> &PrimeSplit {
        let (d, a) = (self.d, &self.a);
        self.map.entry(p).or_insert_with(|| split_prime(d, a, p))
    }
}

/// All patterns for denominator `q` whose bound `t_lower` stays below `x`. Without
/// `local`, a single pattern covering everything with `t_lower = ceil(q/s)`.
pub(crate) fn patterns(q: u64, s: u64, x: &BigRational, cache: &mut SplitCache, local: bool) -> Vec<Pattern> {
    let d = cache.d;
    let below = |t: u128| BigRational::from_integer(BigInt::from(t)) < *x;
    if !local {
        let t = q.div_ceil(s) as u128;
        return if below(t) { vec![Pattern { t_lower: t, lattice: Lattice::full(d as usize), exclusions: Vec::new() }] } else { Vec::new() };
    }
    let mut ram = 1u128;
    let mut groups: Vec<Group> = Vec::new();
    for (p, k) in factor_small(q) {
        let pk = (p as u128).pow(k);
        if d as u64 % p == 0 || (&cache.a % p).is_zero() {
            if let Some(comp) = ramified_component(d, &cache.a, p, k) {
                groups.push(Group { p, comps: vec![comp], needs_unit: false });
                continue;
            }
            let mut sp = 1u128;
            let mut s_rest = s;
            while s_rest % p == 0 && sp < pk {
                s_rest /= p;
                sp *= p as u128;
            }
            ram = ram.saturating_mul(pk.div_ceil(sp));
        } else {
            let split = cache.get(p).clone();
            groups.push(Group { p, comps: components(d, &cache.a, p, k, &split), needs_unit: true });
        }
    }
    let mut out = Vec::new();
    if !below(ram) {
        return out;
    }
    // (group, component) -> chosen level
    let mut choice: Vec<Vec<u32>> = groups.iter().map(|g| vec![0; g.comps.len()]).collect();
    assign(&groups, 0, 0, ram, &mut choice, &below, d as usize, &mut out);
    out
}

#[allow(clippy::too_many_arguments)]
/// The components above one prime of the denominator.
struct Group {
    p: u64,
    comps: Vec<Component>,
    /// Canonical form forces some component to level 0.
    needs_unit: bool,
}

#[allow(clippy::too_many_arguments)]
fn assign(groups: &[Group], g: usize, c: usize, t: u128, choice: &mut Vec<Vec<u32>>, below: &dyn Fn(u128) -> bool, d: usize, out: &mut Vec<Pattern>) {
    if g == groups.len() {
        let mut member = Vec::new();
        let mut exclusions = Vec::new();
        for (gi, group) in groups.iter().enumerate() {
            for (ci, comp) in group.comps.iter().enumerate() {
                let j = choice[gi][ci] as usize;
                if j >= 1 {
                    member.push(&comp.levels[j - 1]);
                }
                if j < comp.levels.len() {
                    exclusions.push(comp.levels[j].clone());
                }
            }
        }
        out.push(Pattern { t_lower: t, lattice: Lattice::from_congruences(d, &member), exclusions });
        return;
    }
    let group = &groups[g];
    if c == group.comps.len() {
        if group.needs_unit && choice[g].iter().all(|&j| j > 0) {
            return;
        }
        assign(groups, g + 1, 0, t, choice, below, d, out);
        return;
    }
    let comp = &group.comps[c];
    for j in 0..=comp.levels.len() as u32 {
        let e = comp.weight * comp.base.saturating_sub(j);
        let Some(f) = (group.p as u128).checked_pow(e) else { continue };
        let t2 = t.saturating_mul(f);
        if !below(t2) {
            continue;
        }
        choice[g][c] = j;
        assign(groups, g, c + 1, t2, choice, below, d, out);
    }
    choice[g][c] = 0;
}
