//! Fixed-point interval arithmetic with outward rounding.
//!
//! An [`Fx`] stores two integers `lo`, `hi` and a precision `p`; it represents the
//! real interval `[lo / 2^p, hi / 2^p]`. Every operation rounds the lower endpoint
//! down and the upper endpoint up, so the true value of any expression built from
//! exact inputs is always contained in the result. [`CFx`] is the rectangular
//! complex counterpart.
//!
//! Operands of a binary operation must share the same precision.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::height::RealEnclosure;

#[inline]
fn floor_shr(x: &BigInt, n: u32) -> BigInt {
    x >> n
}

#[inline]
fn ceil_shr(x: &BigInt, n: u32) -> BigInt {
    -((-x) >> n)
}

fn ceil_div(n: &BigInt, d: &BigInt) -> BigInt {
    -((-n).div_floor(d))
}

/// `floor(n^(1/k))` for `n >= 0`, and whether the root is exact.
fn iroot(n: &BigInt, k: u32) -> (BigInt, bool) {
    debug_assert!(!n.is_negative());
    let r = n.nth_root(k);
    let exact = num_traits::pow(r.clone(), k as usize) == *n;
    (r, exact)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fx {
    lo: BigInt,
    hi: BigInt,
    prec: u32,
}

impl Fx {
    pub fn from_bounds(lo: BigInt, hi: BigInt, prec: u32) -> Self {
        debug_assert!(lo <= hi);
        Fx { lo, hi, prec }
    }

    pub fn from_int(n: &BigInt, prec: u32) -> Self {
        let v = n << prec;
        Fx { lo: v.clone(), hi: v, prec }
    }

    pub fn from_i64(n: i64, prec: u32) -> Self {
        Self::from_int(&BigInt::from(n), prec)
    }

    pub fn from_ratio(r: &BigRational, prec: u32) -> Self {
        let n = r.numer() << prec;
        let d = r.denom();
        Fx { lo: n.div_floor(d), hi: ceil_div(&n, d), prec }
    }

    /// Smallest interval containing both rational endpoints.
    pub fn from_enclosure(e: &RealEnclosure, prec: u32) -> Self {
        let lo = Self::from_ratio(e.lo(), prec).lo;
        let hi = Self::from_ratio(e.hi(), prec).hi;
        Fx { lo, hi, prec }
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn lo_raw(&self) -> &BigInt {
        &self.lo
    }

    pub fn hi_raw(&self) -> &BigInt {
        &self.hi
    }

    pub fn lo_rat(&self) -> BigRational {
        BigRational::new(self.lo.clone(), BigInt::one() << self.prec)
    }

    pub fn hi_rat(&self) -> BigRational {
        BigRational::new(self.hi.clone(), BigInt::one() << self.prec)
    }

    pub fn to_enclosure(&self) -> RealEnclosure {
        RealEnclosure::new(self.lo_rat(), self.hi_rat())
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    /// Width in units of `2^-prec`.
    pub fn width_raw(&self) -> BigInt {
        &self.hi - &self.lo
    }

    pub fn mid_f64(&self) -> f64 {
        let s = &self.lo + &self.hi;
        ratio_to_f64(&s, self.prec + 1)
    }

    pub fn hi_f64(&self) -> f64 {
        ratio_to_f64(&self.hi, self.prec)
    }

    pub fn lo_f64(&self) -> f64 {
        ratio_to_f64(&self.lo, self.prec)
    }

    pub fn hull(&self, o: &Fx) -> Fx {
        debug_assert_eq!(self.prec, o.prec);
        Fx { lo: self.lo.clone().min(o.lo.clone()), hi: self.hi.clone().max(o.hi.clone()), prec: self.prec }
    }

    /// Adds `[-r, r]` where `r` is given in units of `2^-prec`.
    pub fn widen(&self, r: &BigInt) -> Fx {
        Fx { lo: &self.lo - r, hi: &self.hi + r, prec: self.prec }
    }

    pub fn add(&self, o: &Fx) -> Fx {
        debug_assert_eq!(self.prec, o.prec);
        Fx { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi, prec: self.prec }
    }

    pub fn sub(&self, o: &Fx) -> Fx {
        debug_assert_eq!(self.prec, o.prec);
        Fx { lo: &self.lo - &o.hi, hi: &self.hi - &o.lo, prec: self.prec }
    }

    pub fn neg(&self) -> Fx {
        Fx { lo: -&self.hi, hi: -&self.lo, prec: self.prec }
    }

    pub fn abs(&self) -> Fx {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            self.neg()
        } else {
            let m = (-&self.lo).max(self.hi.clone());
            Fx { lo: BigInt::zero(), hi: m, prec: self.prec }
        }
    }

    pub fn mul(&self, o: &Fx) -> Fx {
        debug_assert_eq!(self.prec, o.prec);
        let (lo, hi) = if self.is_point() && o.is_point() {
            let p = &self.lo * &o.lo;
            (p.clone(), p)
        } else {
            let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
            let mut lo = c[0].clone();
            let mut hi = c[0].clone();
            for v in &c[1..] {
                if *v < lo {
                    lo = v.clone();
                }
                if *v > hi {
                    hi = v.clone();
                }
            }
            (lo, hi)
        };
        Fx { lo: floor_shr(&lo, self.prec), hi: ceil_shr(&hi, self.prec), prec: self.prec }
    }

    pub fn sqr(&self) -> Fx {
        let a = self.abs();
        let lo = &a.lo * &a.lo;
        let hi = &a.hi * &a.hi;
        Fx { lo: floor_shr(&lo, self.prec), hi: ceil_shr(&hi, self.prec), prec: self.prec }
    }

    /// Exact scaling by an integer.
    pub fn mul_int(&self, k: &BigInt) -> Fx {
        let a = &self.lo * k;
        let b = &self.hi * k;
        if k.is_negative() {
            Fx { lo: b, hi: a, prec: self.prec }
        } else {
            Fx { lo: a, hi: b, prec: self.prec }
        }
    }

    /// Division by a positive integer.
    pub fn div_int(&self, k: &BigInt) -> Fx {
        debug_assert!(k.is_positive());
        Fx { lo: self.lo.div_floor(k), hi: ceil_div(&self.hi, k), prec: self.prec }
    }

    /// Division; `None` when the divisor contains zero.
    pub fn div(&self, o: &Fx) -> Option<Fx> {
        debug_assert_eq!(self.prec, o.prec);
        if o.contains_zero() {
            return None;
        }
        let p = self.prec;
        let cands = [(&self.lo, &o.lo), (&self.lo, &o.hi), (&self.hi, &o.lo), (&self.hi, &o.hi)];
        let mut lo: Option<BigInt> = None;
        let mut hi: Option<BigInt> = None;
        for (n, d) in cands {
            let num = n << p;
            let f = num.div_floor(d);
            let c = ceil_div(&num, d);
            lo = Some(match lo {
                Some(l) if l <= f => l,
                _ => f,
            });
            hi = Some(match hi {
                Some(h) if h >= c => h,
                _ => c,
            });
        }
        Some(Fx { lo: lo.unwrap(), hi: hi.unwrap(), prec: p })
    }

    pub fn pow(&self, k: u32) -> Fx {
        let mut acc = Fx::from_i64(1, self.prec);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Square root of the non-negative part of the interval.
    pub fn sqrt(&self) -> Fx {
        self.root(2)
    }

    /// `k`-th root of the non-negative part of the interval.
    pub fn root(&self, k: u32) -> Fx {
        debug_assert!(k >= 1);
        let p = self.prec;
        let shift = p * (k - 1);
        let lo = if self.lo.is_positive() { iroot(&(&self.lo << shift), k).0 } else { BigInt::zero() };
        let hi = if self.hi.is_positive() {
            let (r, exact) = iroot(&(&self.hi << shift), k);
            if exact {
                r
            } else {
                r + 1
            }
        } else {
            BigInt::zero()
        };
        Fx { lo, hi, prec: p }
    }

    /// `max(1, x)` applied to both endpoints.
    pub fn max_one(&self) -> Fx {
        let one = BigInt::one() << self.prec;
        Fx { lo: self.lo.clone().max(one.clone()), hi: self.hi.clone().max(one), prec: self.prec }
    }

    pub fn min_with(&self, o: &Fx) -> Fx {
        Fx { lo: self.lo.clone().min(o.lo.clone()), hi: self.hi.clone().min(o.hi.clone()), prec: self.prec }
    }

    pub fn max_with(&self, o: &Fx) -> Fx {
        Fx { lo: self.lo.clone().max(o.lo.clone()), hi: self.hi.clone().max(o.hi.clone()), prec: self.prec }
    }

    /// Natural logarithm; `None` unless the interval is strictly positive.
    pub fn ln(&self) -> Option<Fx> {
        if !self.is_positive() {
            return None;
        }
        let lo = ln_point(&self.lo, self.prec).lo;
        let hi = ln_point(&self.hi, self.prec).hi;
        Some(Fx { lo, hi, prec: self.prec })
    }

    /// `pi` enclosed at the given precision.
    pub fn pi(prec: u32) -> Fx {
        // pi = 16 atan(1/5) - 4 atan(1/239)
        let a = atan_inv(5, prec).mul_int(&BigInt::from(16));
        let b = atan_inv(239, prec).mul_int(&BigInt::from(4));
        a.sub(&b)
    }

    /// `(cos x, sin x)` for `x = 2 pi num / den`.
    pub fn cos_sin_turn(num: i64, den: i64, prec: u32) -> (Fx, Fx) {
        debug_assert!(den > 0);
        let mut r = num.rem_euclid(den);
        // reduce to (-den/2, den/2]
        if 2 * r > den {
            r -= den;
        }
        if r == 0 {
            return (Fx::from_i64(1, prec), Fx::from_i64(0, prec));
        }
        if 2 * r == den {
            return (Fx::from_i64(-1, prec), Fx::from_i64(0, prec));
        }
        if 4 * r == den {
            return (Fx::from_i64(0, prec), Fx::from_i64(1, prec));
        }
        if 4 * r == -den {
            return (Fx::from_i64(0, prec), Fx::from_i64(-1, prec));
        }
        let g = 8;
        let wp = prec + g;
        let x = Fx::pi(wp).mul_int(&BigInt::from(2 * r)).div_int(&BigInt::from(den));
        let (c, s) = cos_sin_series(&x);
        (c.round_to(prec), s.round_to(prec))
    }

    /// Outward rounding to a different (usually smaller) precision.
    pub fn round_to(&self, prec: u32) -> Fx {
        use core::cmp::Ordering::*;
        match prec.cmp(&self.prec) {
            Equal => self.clone(),
            Less => {
                let s = self.prec - prec;
                Fx { lo: floor_shr(&self.lo, s), hi: ceil_shr(&self.hi, s), prec }
            }
            Greater => {
                let s = prec - self.prec;
                Fx { lo: &self.lo << s, hi: &self.hi << s, prec }
            }
        }
    }
}

fn ratio_to_f64(n: &BigInt, shift: u32) -> f64 {
    // keep 64 significant bits
    let bits = n.bits() as i64;
    let drop = (bits - 64).max(0) as u32;
    let m = (n >> drop).to_f64().unwrap_or(f64::NAN);
    m * libm::exp2(drop as f64 - shift as f64)
}

/// Enclosure of `atan(1/n)` for an integer `n >= 2`.
fn atan_inv(n: i64, prec: u32) -> Fx {
    let wp = prec + 16;
    let n_big = BigInt::from(n);
    let n2 = &n_big * &n_big;
    let mut sum = Fx::from_i64(0, wp);
    // power = n^(2i+1)
    let mut power = n_big.clone();
    let one = BigRational::one();
    let mut i: i64 = 0;
    loop {
        let den = &power * BigInt::from(2 * i + 1);
        let term = Fx::from_ratio(&(&one / BigRational::from_integer(den.clone())), wp);
        sum = if i % 2 == 0 { sum.add(&term) } else { sum.sub(&term) };
        // alternating series with decreasing terms: the tail is bounded by the next term
        let next = &power * &n2 * BigInt::from(2 * i + 3);
        if next.bits() as u32 > wp + 2 {
            let tail = Fx::from_ratio(&(&one / BigRational::from_integer(next)), wp);
            sum = sum.widen(&tail.hi);
            break;
        }
        power *= &n2;
        i += 1;
    }
    sum.round_to(prec)
}

/// Taylor series for `cos` and `sin` with a rigorous tail bound. Intended for `|x| <= 4`.
fn cos_sin_series(x: &Fx) -> (Fx, Fx) {
    let p = x.prec;
    let mut cos = Fx::from_i64(1, p);
    let mut sin = Fx::from_i64(0, p);
    let mut term = Fx::from_i64(1, p);
    let mut k: i64 = 1;
    loop {
        term = term.mul(x).div_int(&BigInt::from(k));
        match k % 4 {
            1 => sin = sin.add(&term),
            2 => cos = cos.sub(&term),
            3 => sin = sin.sub(&term),
            _ => cos = cos.add(&term),
        }
        // for k >= 7 > 2|x| every further term at least halves, so the tail is at most |term|
        let mag = term.abs().hi;
        if k >= 7 && mag.bits() <= 1 {
            let tail = mag + 1;
            return (cos.widen(&tail), sin.widen(&tail));
        }
        k += 1;
    }
}

/// `ln(n / 2^prec)` for an integer `n > 0`.
fn ln_point(n: &BigInt, prec: u32) -> Fx {
    let wp = prec + 16;
    // n / 2^prec = 2^k * m with m in [1, 2)
    let k = n.bits() as i64 - 1 - prec as i64;
    let m_num = n.clone();
    let m_den_shift = (prec as i64 + k) as i128;
    let (m_num, m_den) =
        if m_den_shift >= 0 { (m_num, BigInt::one() << (m_den_shift as u32)) } else { (m_num << ((-m_den_shift) as u32), BigInt::one()) };
    // z = (m - 1) / (m + 1) in [0, 1/3)
    let z = BigRational::new(&m_num - &m_den, &m_num + &m_den);
    let ln_m = atanh_series(&z, wp).mul_int(&BigInt::from(2));
    let ln2 = atanh_series(&BigRational::new(BigInt::one(), BigInt::from(3)), wp).mul_int(&BigInt::from(2));
    ln_m.add(&ln2.mul_int(&BigInt::from(k))).round_to(prec)
}

/// `atanh(z)` for rational `0 <= z <= 1/3`.
fn atanh_series(z: &BigRational, wp: u32) -> Fx {
    if z.is_zero() {
        return Fx::from_i64(0, wp);
    }
    let zf = Fx::from_ratio(z, wp);
    let z2 = zf.sqr();
    let mut sum = Fx::from_i64(0, wp);
    let mut power = zf;
    let mut i: i64 = 0;
    loop {
        sum = sum.add(&power.div_int(&BigInt::from(2 * i + 1)));
        power = power.mul(&z2);
        // tail <= z^(2i+3) / (1 - z^2) <= 2 z^(2i+3)
        if power.hi.bits() <= 2 {
            let r = &power.hi * 2 + 2;
            return Fx { lo: sum.lo, hi: sum.hi + r, prec: wp };
        }
        i += 1;
    }
}

/// Rectangular complex interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CFx {
    pub re: Fx,
    pub im: Fx,
}

impl CFx {
    pub fn new(re: Fx, im: Fx) -> Self {
        CFx { re, im }
    }

    pub fn real(re: Fx) -> Self {
        let p = re.prec;
        CFx { re, im: Fx::from_i64(0, p) }
    }

    pub fn zero(prec: u32) -> Self {
        CFx { re: Fx::from_i64(0, prec), im: Fx::from_i64(0, prec) }
    }

    pub fn add(&self, o: &CFx) -> CFx {
        CFx { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }

    pub fn sub(&self, o: &CFx) -> CFx {
        CFx { re: self.re.sub(&o.re), im: self.im.sub(&o.im) }
    }

    pub fn mul(&self, o: &CFx) -> CFx {
        let re = self.re.mul(&o.re).sub(&self.im.mul(&o.im));
        let im = self.re.mul(&o.im).add(&self.im.mul(&o.re));
        CFx { re, im }
    }

    pub fn mul_int(&self, k: &BigInt) -> CFx {
        CFx { re: self.re.mul_int(k), im: self.im.mul_int(k) }
    }

    pub fn div_int(&self, k: &BigInt) -> CFx {
        CFx { re: self.re.div_int(k), im: self.im.div_int(k) }
    }

    pub fn norm_sqr(&self) -> Fx {
        self.re.sqr().add(&self.im.sqr())
    }

    pub fn modulus(&self) -> Fx {
        self.norm_sqr().sqrt()
    }

    pub fn round_to(&self, prec: u32) -> CFx {
        CFx { re: self.re.round_to(prec), im: self.im.round_to(prec) }
    }
}

/// Evaluates an integer polynomial (ascending coefficients) at a complex interval.
pub fn horner(coeffs: &[BigInt], z: &CFx) -> CFx {
    let p = z.re.prec;
    let mut acc = CFx::zero(p);
    for c in coeffs.iter().rev() {
        acc = acc.mul(z).add(&CFx::real(Fx::from_int(c, p)));
    }
    acc
}

/// Product of `max(1, x_i)` over a list of non-negative intervals.
pub fn product_max_one(xs: &[Fx], prec: u32) -> Fx {
    xs.iter().fold(Fx::from_i64(1, prec), |acc, x| acc.mul(&x.max_one()))
}

/// Enclosures of `zeta^k = exp(2 pi i k / d)` for `k = 0..d`.
pub fn roots_of_unity(d: u32, prec: u32) -> Vec<CFx> {
    (0..d as i64)
        .map(|k| {
            let (c, s) = Fx::cos_sin_turn(k, d as i64, prec);
            CFx::new(c, s)
        })
        .collect()
}
