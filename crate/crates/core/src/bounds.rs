//! Lower bounds for the height of generators and the torsion exponent calculus.
//!
//! Everything here is explicit arithmetic in `D = D_K`, `d`, `ell` and the parts
//! `A_i` of the power-free decomposition. Implied constants of the asymptotic
//! statements are never instantiated; the only numeric constants are the `1/2` of
//! the discriminant lower bound and `C_d = d^-(2d-1)`.
//!
//! When only an interval `[D_lo, D_hi]` is known for `D`, every quantity is monotone in
//! `D` and is evaluated at both endpoints.

use alloc::format;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{rotate, PowerFreeDecomposition};
use crate::interval::Fx;
use crate::purefield::{DiscriminantInfo, PureField};
use crate::{Error, RealEnclosure, Result};

/// Working precision of the logarithms and roots used in this module.
pub const BOUNDS_PREC: u32 = 192;

/// Every field of degree at least 2 has `D_K >= 3`.
const MIN_DISC: u32 = 3;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn fx_of(n: &BigUint) -> Fx {
    Fx::from_int(&BigInt::from(n.clone()), BOUNDS_PREC)
}

fn ln_of(n: &BigUint) -> Fx {
    fx_of(n).ln().expect("positive argument")
}

fn ln_rat(r: &BigRational) -> Fx {
    Fx::from_ratio(r, BOUNDS_PREC).ln().expect("positive argument")
}

/// `D^(1/k)` over `[lo, hi]`, exact when both endpoints are perfect powers.
fn root_range(lo: &BigUint, hi: &BigUint, k: u32) -> RealEnclosure {
    let exact = |n: &BigUint| {
        let r = n.nth_root(k);
        (num_traits::pow(r.clone(), k as usize) == *n).then(|| BigRational::from_integer(r.into()))
    };
    let l = exact(lo).unwrap_or_else(|| fx_of(lo).root(k).lo_rat());
    let h = exact(hi).unwrap_or_else(|| fx_of(hi).root(k).hi_rat());
    RealEnclosure::new(l, h)
}

/// `(1/2) D^(1/(2(d-1)))`, a classical lower bound for the height of any generator.
pub fn silverman_lower(disc: &DiscriminantInfo, d: u32) -> RealEnclosure {
    let (lo, hi) = disc.range();
    silverman_lower_range(lo, hi, d)
}

/// [`silverman_lower`] for an explicit discriminant interval.
pub fn silverman_lower_range(lo: &BigUint, hi: &BigUint, d: u32) -> RealEnclosure {
    let r = root_range(lo, hi, 2 * (d - 1));
    let half = rat(1, 2);
    RealEnclosure::new(r.lo() * &half, r.hi() * &half)
}

/// `C_d = d^-(2d-1)`.
pub fn dubickas_constant(d: u32) -> BigRational {
    BigRational::new(BigInt::one(), num_traits::pow(BigInt::from(d), 2 * d as usize - 1))
}

/// `N_m = prod_i A_i^((i m) mod d)`, so that the `m`-product equals `N_m^(1/d)`.
pub fn m_product_power(dec: &PowerFreeDecomposition, m: u32) -> BigUint {
    let d = dec.d();
    dec.parts().iter().enumerate().fold(BigUint::one(), |acc, (idx, a)| acc * num_traits::pow(a.clone(), ((idx as u32 + 1) * m % d) as usize))
}

/// `prod_i A_i^(i m / d - floor(i m / d))` as an enclosure.
pub fn m_product(dec: &PowerFreeDecomposition, m: u32) -> RealEnclosure {
    let n = m_product_power(dec, m);
    root_range(&n, &n, dec.d())
}

/// The minimum of the `m`-products over `(d+1)/2 <= m <= d-1`, without `C_d`, and the
/// minimizing `m` (the smallest one on ties). Products are compared exactly through
/// their `d`-th powers.
pub fn min_product(dec: &PowerFreeDecomposition) -> (RealEnclosure, u32) {
    let d = dec.d();
    let (m, n) =
        (d.div_ceil(2)..d).map(|m| (m, m_product_power(dec, m))).reduce(|best, cur| if cur.1 < best.1 { cur } else { best }).expect("d >= 3");
    (root_range(&n, &n, d), m)
}

/// `C_d * min_product(dec)`: every generator `alpha` of `K` has `H_K(alpha)` above it.
pub fn dubickas_lower(dec: &PowerFreeDecomposition) -> RealEnclosure {
    let (v, _) = min_product(dec);
    let c = dubickas_constant(dec.d());
    RealEnclosure::new(v.lo() * &c, v.hi() * &c)
}

/// `log(x) / log(D)` for `x` enclosed by `ln_x` and `D` in `[lo, hi]`, `ln_x >= 0`.
fn log_ratio(ln_x: &Fx, lo: &BigUint, hi: &BigUint) -> RealEnclosure {
    let floor = BigUint::from(MIN_DISC);
    let lo = if *lo < floor { &floor } else { lo };
    let hi = if *hi < floor { &floor } else { hi };
    let (l_lo, l_hi) = (ln_of(lo), ln_of(hi));
    // ln_x >= 0: the ratio decreases in D
    let a = ln_x.div(&l_hi).expect("log D > 0");
    let b = ln_x.div(&l_lo).expect("log D > 0");
    RealEnclosure::new(a.lo_rat().min(b.lo_rat()), a.hi_rat().max(b.hi_rat()))
}

fn ln_min_product(dec: &PowerFreeDecomposition) -> Fx {
    let (_, m) = min_product(dec);
    ln_of(&m_product_power(dec, m)).div_int(&BigInt::from(dec.d()))
}

/// `gamma` with `C_d * min_product = D^gamma`, over the discriminant interval.
///
/// Fails with [`Error::Degenerate`] when `C_d * min_product <= 1`: the bound then says
/// nothing.
pub fn gamma_of(dec: &PowerFreeDecomposition, disc: &DiscriminantInfo) -> Result<RealEnclosure> {
    let (lo, hi) = disc.range();
    gamma_in_range(dec, lo, hi)
}

/// [`gamma_of`] for an explicit discriminant interval.
pub fn gamma_in_range(dec: &PowerFreeDecomposition, lo: &BigUint, hi: &BigUint) -> Result<RealEnclosure> {
    let d = dec.d();
    let (_, m) = min_product(dec);
    // C_d N^(1/d) > 1  <=>  N > d^(d(2d-1))
    let threshold = num_traits::pow(BigUint::from(d), (d * (2 * d - 1)) as usize);
    if m_product_power(dec, m) <= threshold {
        return Err(Error::Degenerate(format!("C_{d} times the minimum product is at most 1, so it carries no information")));
    }
    let ln_c = ln_of(&BigUint::from(d)).mul_int(&BigInt::from(2 * d - 1));
    let ln_a = ln_min_product(dec).sub(&ln_c);
    Ok(log_ratio(&ln_a, lo, hi))
}

/// `log(min_product) / log(D)`: the same exponent with `C_d` left in the implied constant.
pub fn gamma_bare(dec: &PowerFreeDecomposition, lo: &BigUint, hi: &BigUint) -> RealEnclosure {
    log_ratio(&ln_min_product(dec), lo, hi)
}

/// `1/2 - gamma / ell`, given an enclosure of `gamma`.
pub fn exponent_from_gamma(gamma: &RealEnclosure, ell: u32) -> RealEnclosure {
    let half = rat(1, 2);
    let l = BigRational::from_integer(BigInt::from(ell));
    RealEnclosure::new(&half - gamma.hi() / &l, &half - gamma.lo() / &l)
}

/// `f(ell, d) = 1 / (2 ell (d - 1))`, proven only for `ell >= d/2`.
///
/// Note that the argument establishing this value opens with the opposite inequality
/// `ell <= d/2`; we follow the hypothesis `ell >= d/2` of the statement itself.
pub fn f_value(ell: u32, d: u32) -> Result<BigRational> {
    if d < 2 {
        return Err(Error::Domain(format!("degree must exceed 1, got {d}")));
    }
    if 2 * ell < d {
        return Err(Error::OutOfRange(format!("f(ell, d) is only known for ell >= d/2, got ell = {ell}, d = {d}")));
    }
    Ok(BigRational::new(BigInt::one(), BigInt::from(2 * ell as u64 * (d as u64 - 1))))
}

/// `eta^(-1/ell)`: up to an absolute constant, a lower bound for `M_{K,ell}`.
pub fn mkl_lower(eta: &RealEnclosure, ell: u32) -> Result<RealEnclosure> {
    if !eta.lo().is_positive() {
        return Err(Error::Domain("eta must be positive".into()));
    }
    if ell == 0 {
        return Err(Error::Domain("ell must be positive".into()));
    }
    let inv_root = |x: &BigRational| -> Fx {
        let one = Fx::from_i64(1, BOUNDS_PREC);
        one.div(&Fx::from_ratio(x, BOUNDS_PREC).root(ell)).expect("positive")
    };
    let exact = |x: &BigRational| -> Option<BigRational> {
        let (n, d) = (x.numer().magnitude(), x.denom().magnitude());
        let (rn, rd) = (n.nth_root(ell), d.nth_root(ell));
        (num_traits::pow(rn.clone(), ell as usize) == *n && num_traits::pow(rd.clone(), ell as usize) == *d)
            .then(|| BigRational::new(rd.into(), rn.into()))
    };
    let lo = exact(eta.hi()).unwrap_or_else(|| inv_root(eta.hi()).lo_rat());
    let hi = exact(eta.lo()).unwrap_or_else(|| inv_root(eta.lo()).hi_rat());
    Ok(RealEnclosure::new(lo, hi))
}

/// Logarithms of both sides of the two equivalent closed forms for `a = A_1 A_2^2`,
/// with `D = (A_1 A_2)^(d-1)`:
///
/// ```text
/// D^(1/2 - (d+1)/(2d(d-1)ell)) * A_2^((d-1)/(2d ell))
/// D^(1/2 - 1/(2(d-1)ell)) * (A_2^(d-2) / A_1)^(1/(2d ell))
/// ```
///
/// Both are `D^(1/2) * (a^((d+1)/(2d)) / A_2)^(-1/ell)`. The exponent of `D` in the
/// first form has a factor `d` in its denominator; without it the forms differ.
pub fn equivalent_forms_logs(d: u32, ell: u32, a1: &BigUint, a2: &BigUint) -> (RealEnclosure, RealEnclosure) {
    let (d_i, l_i) = (d as i64, ell as i64);
    let disc = num_traits::pow(a1 * a2, d as usize - 1);
    let ln_d = ln_of(&disc);
    let (ln_a1, ln_a2) = (ln_of(a1), ln_of(a2));
    let scale = |x: &Fx, r: BigRational| x.mul(&Fx::from_ratio(&r, BOUNDS_PREC));
    let first = scale(&ln_d, rat(1, 2) - rat(d_i + 1, 2 * d_i * (d_i - 1) * l_i)).add(&scale(&ln_a2, rat(d_i - 1, 2 * d_i * l_i)));
    let ratio = ln_a2.mul_int(&BigInt::from(d_i - 2)).sub(&ln_a1);
    let second = scale(&ln_d, rat(1, 2) - rat(1, 2 * (d_i - 1) * l_i)).add(&scale(&ratio, rat(1, 2 * d_i * l_i)));
    (first.to_enclosure(), second.to_enclosure())
}

/// Checks that the two closed forms of [`equivalent_forms_logs`] agree to enclosure overlap.
pub fn equivalent_forms_check(d: u32, ell: u32, a1: &BigUint, a2: &BigUint) -> bool {
    let (x, y) = equivalent_forms_logs(d, ell, a1, a2);
    x.overlaps(&y)
}

/// Upper bound for `|log(first) - log(second)|`.
pub fn equivalent_forms_gap(d: u32, ell: u32, a1: &BigUint, a2: &BigUint) -> BigRational {
    let (x, y) = equivalent_forms_logs(d, ell, a1, a2);
    (x.hi() - y.lo()).abs().max((y.hi() - x.lo()).abs())
}

/// A factor `A_index^exponent` multiplying a power of `D` in a torsion bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AFactor {
    pub label: &'static str,
    pub index: u32,
    pub base: BigUint,
    pub exponent: BigRational,
}

/// Exponents `e` of the bounds `#Cl_K[ell] << D^(e + eps)` that apply to a pure field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionExponentReport {
    pub d: u32,
    pub a: BigUint,
    pub ell: u32,
    /// The discriminant interval the enclosures were evaluated on.
    pub disc_range: (BigUint, BigUint),
    /// `1/2 - 1/(2 ell (d-1))`, conditional on many small split primes.
    pub exponent_ev: RealEnclosure,
    /// `1/2 - 1/(4 ell)` for pure cubic fields.
    pub exponent_hb: Option<RealEnclosure>,
    /// `1/2 - 1/(2 (d-1) ell)`, unconditional for pure fields of odd degree.
    pub exponent_silhb: RealEnclosure,
    /// `1/2 - 1/(3 ell)` for pure cubic fields, times `A_2^(1/(3 ell))`.
    pub exponent_hbd: Option<RealEnclosure>,
    /// The bound with the `A_2` factor folded into the power of `D`, after swapping
    /// `A_1` and `A_2` if that makes `A_2` smaller.
    pub exponent_hbd_effective: Option<RealEnclosure>,
    /// `1/2 - gamma_bare / ell`.
    pub exponent_gb: RealEnclosure,
    pub a_factor_exponents: Vec<AFactor>,
    /// `log(C_d * min_product) / log D`, or `None` when `C_d * min_product <= 1`.
    pub gamma: Option<RealEnclosure>,
    /// `log(min_product) / log D`.
    pub gamma_bare: RealEnclosure,
    pub min_product: RealEnclosure,
    pub argmin_m: u32,
    pub epsilon_note: &'static str,
}

impl TorsionExponentReport {
    /// `(label, exponent)` for every bound that applies, in a fixed order.
    pub fn entries(&self) -> Vec<(&'static str, &RealEnclosure)> {
        let mut v = alloc::vec![("EV", &self.exponent_ev)];
        if let Some(e) = &self.exponent_hb {
            v.push(("HB", e));
        }
        v.push(("SilHB", &self.exponent_silhb));
        if let Some(e) = &self.exponent_hbd {
            v.push(("HBD", e));
        }
        v.push(("GB", &self.exponent_gb));
        v
    }
}

pub const EPSILON_NOTE: &str =
    "every exponent holds up to +epsilon for any epsilon > 0; implied constants depend on d, ell and epsilon and are not computed";

/// All torsion exponents that apply to `field` at `ell`.
pub fn torsion_exponents(field: &PureField, ell: u32) -> Result<TorsionExponentReport> {
    if ell == 0 {
        return Err(Error::Domain("ell must be positive".into()));
    }
    let d = field.d();
    let dec = field.decomposition();
    let (lo, hi) = field.disc().range();
    let (d_i, l_i) = (d as i64, ell as i64);
    let point = |r: BigRational| RealEnclosure::exact(r);
    let ev = rat(1, 2) - rat(1, 2 * l_i * (d_i - 1));
    let cubic = d == 3;
    let (min_prod, argmin_m) = min_product(dec);
    let gamma_bare = gamma_bare(dec, lo, hi);
    let exponent_gb = exponent_from_gamma(&gamma_bare, ell);
    let gamma = gamma_in_range(dec, lo, hi).ok();

    let mut a_factor_exponents = Vec::new();
    let (mut exponent_hbd, mut exponent_hbd_effective) = (None, None);
    if cubic {
        let base = rat(1, 2) - rat(1, 3 * l_i);
        let factor = rat(1, 3 * l_i);
        exponent_hbd = Some(point(base.clone()));
        a_factor_exponents.push(AFactor { label: "HBD", index: 2, base: dec.part(2).clone(), exponent: factor.clone() });
        // rotating by k = 2 swaps A_1 and A_2
        let swapped = rotate(dec, 2)?;
        let a2 = dec.part(2).min(swapped.part(2)).clone();
        let folded = log_ratio(&ln_of(&a2), lo, hi);
        exponent_hbd_effective = Some(RealEnclosure::new(&base + folded.lo() * &factor, &base + folded.hi() * &factor));
    }

    Ok(TorsionExponentReport {
        d,
        a: field.a().clone(),
        ell,
        disc_range: (lo.clone(), hi.clone()),
        exponent_ev: point(ev.clone()),
        exponent_hb: cubic.then(|| point(rat(1, 2) - rat(1, 4 * l_i))),
        exponent_silhb: point(ev),
        exponent_hbd,
        exponent_hbd_effective,
        exponent_gb,
        a_factor_exponents,
        gamma,
        gamma_bare,
        min_product: min_prod,
        argmin_m,
        epsilon_note: EPSILON_NOTE,
    })
}

/// `1/2 - 1/(2(d-1)ell) - 1/(2d(d-1)ell)`: the exponent for squarefree radicands as `a`
/// grows.
pub fn squarefree_gb_closed_form(d: u32, ell: u32) -> BigRational {
    let (d, l) = (d as i64, ell as i64);
    rat(1, 2) - rat(1, 2 * (d - 1) * l) - rat(1, 2 * d * (d - 1) * l)
}

/// `ln` of a positive rational as an enclosure (used by drivers for ratio reports).
pub fn ln_enclosure(x: &BigRational) -> Result<RealEnclosure> {
    if !x.is_positive() {
        return Err(Error::Domain("logarithm of a non-positive number".into()));
    }
    if x.is_one() {
        return Ok(RealEnclosure::exact(BigRational::zero()));
    }
    Ok(ln_rat(x).to_enclosure())
}

/// `log(x) / (ell * log(D))` over a discriminant interval.
pub fn log_ratio_range(x: &BigUint, ell: u32, lo: &BigUint, hi: &BigUint) -> RealEnclosure {
    let r = log_ratio(&ln_of(x), lo, hi);
    let l = BigRational::from_integer(BigInt::from(ell));
    RealEnclosure::new(r.lo() / &l, r.hi() / &l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::decompose;

    fn u(n: u64) -> BigUint {
        BigUint::from(n)
    }

    fn field(d: u32, a: u64) -> PureField {
        PureField::new(d, &u(a)).unwrap()
    }

    fn close(e: &RealEnclosure, x: f64, tol: f64) -> bool {
        e.lo_f64() - tol <= x && x <= e.hi_f64() + tol
    }

    #[test]
    fn silverman_examples() {
        let s = silverman_lower_range(&u(108), &u(108), 3);
        assert!(close(&s, 0.5 * libm::pow(108.0, 0.25), 1e-15) && s.width_f64() < 1e-40);
        let s = silverman_lower_range(&u(900), &u(972000), 3);
        assert!((s.lo_f64() - 0.5 * libm::pow(900.0, 0.25)).abs() < 1e-12);
        assert!((s.hi_f64() - 0.5 * libm::pow(972000.0, 0.25)).abs() < 1e-12);
        let s = silverman_lower_range(&u(50000), &u(50000), 5);
        assert!(close(&s, 1.933_486_993_246_412, 1e-12));
        // exact value for perfect powers: 0.5 * 16^(1/4) = 1
        assert_eq!(silverman_lower_range(&u(16), &u(16), 3), RealEnclosure::exact(BigRational::one()));
    }

    #[test]
    fn min_product_examples() {
        let (v, m) = min_product(&decompose(&u(2), 3).unwrap());
        assert_eq!(m, 2);
        assert!(close(&v, libm::pow(2.0, 2.0 / 3.0), 1e-15));
        let (v, m) = min_product(&decompose(&u(9), 3).unwrap());
        assert_eq!(m, 2);
        assert!(close(&v, libm::cbrt(3.0), 1e-15));
        for d in [3u32, 5, 7, 9] {
            let (v, m) = min_product(&decompose(&u(30), d).unwrap());
            assert_eq!(m, d.div_ceil(2));
            assert!(close(&v, libm::pow(30.0, (d + 1) as f64 / (2 * d) as f64), 1e-12));
        }
    }

    #[test]
    fn dubickas_examples() {
        let v = dubickas_lower(&decompose(&u(2), 3).unwrap());
        assert!(close(&v, libm::pow(2.0, 2.0 / 3.0) / 243.0, 1e-17));
        let v = dubickas_lower(&decompose(&u(150), 3).unwrap());
        assert!(close(&v, libm::pow(6.0, 2.0 / 3.0) * libm::cbrt(5.0) / 243.0, 1e-15));
        let v = dubickas_lower(&decompose(&u(2), 5).unwrap());
        assert!(close(&v, libm::pow(2.0, 0.6) / 1953125.0, 1e-18));
    }

    #[test]
    fn gamma_examples() {
        let k = field(3, 2);
        assert!(matches!(gamma_of(k.decomposition(), k.disc()), Err(Error::Degenerate(_))));
        // squarefree a = 10^6 + 3 (= 1000003, prime), D = 27 a^2
        let a = u(1_000_003);
        let dec = decompose(&a, 3).unwrap();
        let disc = &a * &a * 27u32;
        let g = gamma_bare(&dec, &disc, &disc);
        let expected = (2.0 / 3.0) * libm::log(1_000_003.0) / libm::log(27.0 * 1_000_003.0f64 * 1_000_003.0);
        assert!(close(&g, expected, 1e-14));
        let asymptotic = &a * &a;
        assert!(close(&gamma_bare(&dec, &asymptotic, &asymptotic), 1.0 / 3.0, 1e-14));
        let g = gamma_in_range(&dec, &disc, &disc).unwrap();
        assert!(g.hi_f64() < expected);
    }

    #[test]
    fn f_value_examples() {
        assert_eq!(f_value(2, 3).unwrap(), rat(1, 8));
        assert_eq!(f_value(3, 3).unwrap(), rat(1, 12));
        assert!(matches!(f_value(1, 3), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn mkl_examples() {
        let two = RealEnclosure::exact(rat(2, 1));
        assert!(close(&mkl_lower(&two, 2).unwrap(), core::f64::consts::FRAC_1_SQRT_2, 1e-15));
        assert_eq!(mkl_lower(&RealEnclosure::exact(rat(1, 1)), 5).unwrap(), RealEnclosure::exact(rat(1, 1)));
        assert_eq!(mkl_lower(&RealEnclosure::exact(rat(8, 1)), 3).unwrap(), RealEnclosure::exact(rat(1, 2)));
        assert!(close(&mkl_lower(&RealEnclosure::exact(rat(6, 1)), 3).unwrap(), libm::pow(6.0, -1.0 / 3.0), 1e-15));
        assert!(mkl_lower(&RealEnclosure::exact(rat(0, 1)), 3).is_err());
    }

    #[test]
    fn equivalent_forms_examples() {
        for (d, l, a1, a2) in [(3, 2, 7, 3), (5, 3, 11, 2), (3, 1, 5, 1)] {
            assert!(equivalent_forms_check(d, l, &u(a1), &u(a2)));
            assert!(equivalent_forms_gap(d, l, &u(a1), &u(a2)) < rat(1, 1_000_000_000_000));
        }
    }

    #[test]
    fn equivalent_forms_need_the_factor_d() {
        // with exponent (d+1)/(2(d-1)ell) on D the two forms differ
        let (d, l, a1, a2) = (3i64, 2i64, 7.0f64, 3.0f64);
        let ln_d = ((d - 1) as f64) * libm::log(a1 * a2);
        let literal = (0.5 - (d + 1) as f64 / (2 * (d - 1) * l) as f64) * ln_d + (d - 1) as f64 / (2 * d * l) as f64 * libm::log(a2);
        let (_, second) = equivalent_forms_logs(3, 2, &u(7), &u(3));
        assert!((literal - second.mid_f64()).abs() > 0.1);
    }

    #[test]
    fn torsion_examples() {
        let r = torsion_exponents(&field(3, 2), 1).unwrap();
        assert_eq!(r.exponent_hbd, Some(RealEnclosure::exact(rat(1, 6))));
        let r = torsion_exponents(&field(3, 2), 3).unwrap();
        assert_eq!(r.exponent_silhb, RealEnclosure::exact(rat(1, 2) - rat(1, 12)));
        assert_eq!(r.exponent_hbd, Some(RealEnclosure::exact(rat(1, 2) - rat(1, 9))));
        assert_eq!(r.a_factor_exponents[0].exponent, rat(1, 9));
        assert_eq!(r.exponent_hb, Some(RealEnclosure::exact(rat(1, 2) - rat(1, 12))));
        assert!(r.gamma.is_none());
        let r5 = torsion_exponents(&field(5, 2), 3).unwrap();
        assert!(r5.exponent_hbd.is_none() && r5.exponent_hb.is_none());
        assert_eq!(r5.entries().len(), 3);
        assert!(torsion_exponents(&field(3, 2), 0).is_err());
        // squarefull a = 4: A_1 = 1, A_2 = 2, swap makes the A_2 factor trivial
        let r = torsion_exponents(&field(3, 4), 2).unwrap();
        assert_eq!(r.exponent_hbd_effective, Some(RealEnclosure::exact(rat(1, 2) - rat(1, 6))));
    }

    #[test]
    fn closed_form_for_squarefree_radicands() {
        assert_eq!(squarefree_gb_closed_form(5, 3), rat(1, 2) - rat(1, 24) - rat(1, 120));
        let a = u(1_000_003);
        for d in [3u32, 5, 7] {
            let dec = decompose(&a, d).unwrap();
            let disc = num_traits::pow(a.clone(), d as usize - 1);
            for ell in 1..=6 {
                let e = exponent_from_gamma(&gamma_bare(&dec, &disc, &disc), ell);
                let target = squarefree_gb_closed_form(d, ell);
                assert!(close(&e, crate::interval::Fx::from_ratio(&target, 64).mid_f64(), 1e-12));
            }
        }
    }
}
