//! Certified isolation of the complex roots of a squarefree integer polynomial.
//!
//! Approximations come from Aberth's simultaneous iteration, first in `f64` and then
//! in fixed point at the working precision. They are certified a posteriori: with the
//! Weierstrass corrections `W_i = f(z_i) / (a_n prod_{j != i} (z_i - z_j))`, every
//! root of `f` lies in a disk `|z - z_i| <= n |W_i|`, and a connected union of `k`
//! such disks holds exactly `k` roots. We only accept pairwise disjoint disks, so each
//! disk holds exactly one root.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{FromPrimitive, Signed, ToPrimitive, Zero};

use crate::interval::{horner, CFx, Fx};

/// Disk around `center` of radius `radius` (raw units of `2^-prec`) holding one root.
#[derive(Clone, Debug)]
pub(crate) struct RootDisk {
    pub center: CFx,
    pub radius: BigInt,
}

impl RootDisk {
    /// Enclosure of the modulus of the root inside the disk.
    pub fn modulus(&self) -> Fx {
        let m = self.center.modulus().widen(&self.radius);
        let p = m.prec();
        let lo = m.lo_raw().clone().max(BigInt::zero());
        Fx::from_bounds(lo, m.hi_raw().clone(), p)
    }
}

type C64 = (f64, f64);

fn cmul(a: C64, b: C64) -> C64 {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

fn cdiv(a: C64, b: C64) -> C64 {
    let n = b.0 * b.0 + b.1 * b.1;
    ((a.0 * b.0 + a.1 * b.1) / n, (a.1 * b.0 - a.0 * b.1) / n)
}

fn eval_f64(c: &[f64], z: C64) -> (C64, C64) {
    let mut p = (0.0, 0.0);
    let mut dp = (0.0, 0.0);
    for &a in c.iter().rev() {
        dp = cmul(dp, z);
        dp.0 += p.0;
        dp.1 += p.1;
        p = cmul(p, z);
        p.0 += a;
    }
    (p, dp)
}

fn aberth_f64(coeffs: &[BigInt]) -> Vec<C64> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n].to_f64().unwrap_or(f64::MAX);
    let c: Vec<f64> = coeffs.iter().map(|x| x.to_f64().unwrap_or(f64::MAX) / lead).collect();
    let c0 = c[0].abs();
    let radius = if c0 > 0.0 { libm::pow(c0, 1.0 / n as f64) } else { 1.0 };
    let radius = if radius.is_finite() && radius > 0.0 { radius } else { 1.0 };
    let mut z: Vec<C64> = (0..n)
        .map(|k| {
            let t = 2.0 * core::f64::consts::PI * k as f64 / n as f64 + 0.4;
            (radius * libm::cos(t), radius * libm::sin(t))
        })
        .collect();
    for _ in 0..500 {
        let mut worst: f64 = 0.0;
        for i in 0..n {
            let (p, dp) = eval_f64(&c, z[i]);
            if p == (0.0, 0.0) {
                continue;
            }
            let ratio = cdiv(p, dp);
            let mut s = (0.0, 0.0);
            for j in 0..n {
                if j != i {
                    let inv = cdiv((1.0, 0.0), (z[i].0 - z[j].0, z[i].1 - z[j].1));
                    s.0 += inv.0;
                    s.1 += inv.1;
                }
            }
            let rs = cmul(ratio, s);
            let w = cdiv(ratio, (1.0 - rs.0, -rs.1));
            if !(w.0.is_finite() && w.1.is_finite()) {
                continue;
            }
            z[i].0 -= w.0;
            z[i].1 -= w.1;
            let scale = libm::hypot(z[i].0, z[i].1).max(1.0);
            worst = worst.max(libm::hypot(w.0, w.1) / scale);
        }
        if worst < 1e-15 {
            break;
        }
    }
    z
}

fn f64_to_fixed(x: f64, prec: u32) -> BigInt {
    if !x.is_finite() || x == 0.0 {
        return BigInt::zero();
    }
    let (m, e) = libm::frexp(x);
    let mi = BigInt::from_f64(libm::ldexp(m, 53)).unwrap_or_default();
    let shift = prec as i64 + e as i64 - 53;
    if shift >= 0 {
        mi << shift as u32
    } else {
        mi >> (-shift) as u32
    }
}

/// Approximate complex fixed-point number at scale `2^prec`.
#[derive(Clone, Debug)]
struct Cx {
    re: BigInt,
    im: BigInt,
}

struct Fixed {
    prec: u32,
}

impl Fixed {
    fn mul(&self, a: &Cx, b: &Cx) -> Cx {
        Cx { re: (&a.re * &b.re - &a.im * &b.im) >> self.prec, im: (&a.re * &b.im + &a.im * &b.re) >> self.prec }
    }

    fn div(&self, a: &Cx, b: &Cx) -> Option<Cx> {
        let n = &b.re * &b.re + &b.im * &b.im;
        if n.is_zero() {
            return None;
        }
        let re = ((&a.re * &b.re + &a.im * &b.im) << self.prec) / &n;
        let im = ((&a.im * &b.re - &a.re * &b.im) << self.prec) / &n;
        Some(Cx { re, im })
    }

    fn eval(&self, c: &[BigInt], z: &Cx) -> (Cx, Cx) {
        let mut p = Cx { re: BigInt::zero(), im: BigInt::zero() };
        let mut dp = p.clone();
        for a in c.iter().rev() {
            dp = self.mul(&dp, z);
            dp.re += &p.re;
            dp.im += &p.im;
            p = self.mul(&p, z);
            p.re += a << self.prec;
        }
        (p, dp)
    }

    /// Aberth iteration until the corrections drop below `2^(8 - prec)` in absolute size.
    fn aberth(&self, c: &[BigInt], z: &mut [Cx], max_iter: usize) {
        let n = z.len();
        let one = Cx { re: BigInt::from(1) << self.prec, im: BigInt::zero() };
        let tol = BigInt::from(1) << 8u32;
        for _ in 0..max_iter {
            let mut done = true;
            for i in 0..n {
                let (p, dp) = self.eval(c, &z[i]);
                if p.re.is_zero() && p.im.is_zero() {
                    continue;
                }
                let Some(ratio) = self.div(&p, &dp) else { continue };
                let mut s = Cx { re: BigInt::zero(), im: BigInt::zero() };
                for j in 0..n {
                    if j == i {
                        continue;
                    }
                    let diff = Cx { re: &z[i].re - &z[j].re, im: &z[i].im - &z[j].im };
                    if let Some(inv) = self.div(&one, &diff) {
                        s.re += inv.re;
                        s.im += inv.im;
                    }
                }
                let rs = self.mul(&ratio, &s);
                let den = Cx { re: &one.re - &rs.re, im: -rs.im };
                let Some(w) = self.div(&ratio, &den) else { continue };
                if w.re.abs() > tol || w.im.abs() > tol {
                    done = false;
                }
                z[i].re -= &w.re;
                z[i].im -= &w.im;
            }
            if done {
                break;
            }
        }
    }
}

/// Isolates all roots of the squarefree polynomial `coeffs` (ascending, degree >= 1) at
/// working precision `prec`. Returns `None` when the disks do not separate at this
/// precision; the caller retries with more bits.
pub(crate) fn isolate(coeffs: &[BigInt], prec: u32) -> Option<Vec<RootDisk>> {
    let n = coeffs.len() - 1;
    debug_assert!(n >= 1 && !coeffs[n].is_zero());
    let seeds = aberth_f64(coeffs);
    let fx = Fixed { prec };
    let mut z: Vec<Cx> = seeds.iter().map(|&(re, im)| Cx { re: f64_to_fixed(re, prec), im: f64_to_fixed(im, prec) }).collect();
    fx.aberth(coeffs, &mut z, 60 + 2 * prec as usize);
    certify(coeffs, &z, prec)
}

fn certify(coeffs: &[BigInt], z: &[Cx], prec: u32) -> Option<Vec<RootDisk>> {
    let n = z.len();
    let centers: Vec<CFx> =
        z.iter().map(|c| CFx::new(Fx::from_bounds(c.re.clone(), c.re.clone(), prec), Fx::from_bounds(c.im.clone(), c.im.clone(), prec))).collect();
    let lead = Fx::from_int(&coeffs[n], prec);
    let lead_sq = lead.sqr();
    let n_big = BigInt::from(n);
    let mut disks = Vec::with_capacity(n);
    for i in 0..n {
        let val = horner(coeffs, &centers[i]).norm_sqr();
        let mut den = lead_sq.clone();
        for j in 0..n {
            if j != i {
                den = den.mul(&centers[i].sub(&centers[j]).norm_sqr());
            }
        }
        let w_sq = val.div(&den)?;
        // radius = n |W_i|, rounded up
        let r = w_sq.sqrt().hi_raw() * &n_big + 1;
        disks.push(RootDisk { center: centers[i].clone(), radius: r });
    }
    // pairwise disjointness: |z_i - z_j| > r_i + r_j
    let mut sums = vec![];
    for i in 0..n {
        for j in i + 1..n {
            let dist_sq = centers[i].sub(&centers[j]).norm_sqr();
            let rr = &disks[i].radius + &disks[j].radius;
            let rr_sq = Fx::from_bounds(rr.clone(), rr, prec).sqr();
            sums.push(dist_sq.lo_raw() > rr_sq.hi_raw());
        }
    }
    sums.into_iter().all(|ok| ok).then_some(disks)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(c: &[i64]) -> Vec<BigInt> {
        c.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn isolates_cube_roots_of_two() {
        let disks = isolate(&big(&[-2, 0, 0, 1]), 128).unwrap();
        assert_eq!(disks.len(), 3);
        let cbrt2 = libm::cbrt(2.0);
        for d in &disks {
            let m = d.modulus();
            assert!(m.lo_f64() <= cbrt2 + 1e-15 && cbrt2 - 1e-15 <= m.hi_f64());
            assert!(m.hi_f64() - m.lo_f64() < 1e-30);
        }
    }

    #[test]
    fn isolates_close_and_real_roots() {
        // (x - 1)(1000x - 1001)(x + 3)
        let disks = isolate(&big(&[3003, -5002, 999, 1000]), 160).unwrap();
        let mut re: Vec<f64> = disks.iter().map(|d| d.center.re.mid_f64()).collect();
        re.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((re[0] + 3.0).abs() < 1e-20);
        assert!((re[1] - 1.0).abs() < 1e-20);
        assert!((re[2] - 1.001).abs() < 1e-15);
    }

    #[test]
    fn handles_root_at_zero_and_high_degree() {
        let disks = isolate(&big(&[0, -1, 0, 1]), 96).unwrap();
        assert_eq!(disks.len(), 3);
        // x^15 - 7
        let mut c = vec![BigInt::zero(); 16];
        c[0] = BigInt::from(-7);
        c[15] = BigInt::from(1);
        let disks = isolate(&c, 128).unwrap();
        let r = libm::pow(7.0, 1.0 / 15.0);
        for d in disks {
            assert!((d.modulus().mid_f64() - r).abs() < 1e-14);
        }
    }
}
