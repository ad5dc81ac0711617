//! Univariate polynomials with integer and rational coefficients.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Polynomial with integer coefficients `a_0 + a_1 x + ... + a_n x^n`, `a_n != 0`.
///
/// Minimal polynomials are kept in canonical form: content 1 and a positive
/// leading coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    /// Trailing zero coefficients are dropped; returns `None` for the zero polynomial.
    pub fn new(mut coeffs: Vec<BigInt>) -> Option<Self> {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        (!coeffs.is_empty()).then_some(IntPolynomial { coeffs })
    }

    pub fn from_i64s(coeffs: &[i64]) -> Option<Self> {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Clears denominators of a rational polynomial and makes the result canonical.
    pub fn from_rational(coeffs: &[BigRational]) -> Option<Self> {
        let l = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints = coeffs.iter().map(|c| (c * BigRational::from_integer(l.clone())).to_integer()).collect();
        Self::new(ints).map(|p| p.canonical())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> &BigInt {
        self.coeffs.last().expect("nonzero polynomial")
    }

    pub fn constant(&self) -> &BigInt {
        &self.coeffs[0]
    }

    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divides by the content and fixes the sign of the leading coefficient.
    pub fn canonical(&self) -> Self {
        let mut g = self.content();
        if self.leading().is_negative() {
            g = -g;
        }
        IntPolynomial { coeffs: self.coeffs.iter().map(|c| c / &g).collect() }
    }

    pub fn is_canonical(&self) -> bool {
        self.leading().is_positive() && self.content().is_one()
    }

    pub fn mul(&self, o: &IntPolynomial) -> IntPolynomial {
        let mut out = vec![BigInt::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial { coeffs: out }
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + BigRational::from_integer(c.clone()))
    }

    pub(crate) fn to_qpoly(&self) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|c| BigRational::from_integer(c.clone())).collect())
    }

    /// Squarefree decomposition `self = c * prod g_i^i` with primitive, positive-leading `g_i`.
    ///
    /// Returns `(c, [(g_i, i)])`; factors of degree 0 are omitted.
    pub fn squarefree_decomposition(&self) -> (BigInt, Vec<(IntPolynomial, u32)>) {
        let mut factors = Vec::new();
        if self.degree() > 0 {
            for (q, m) in self.to_qpoly().yun() {
                if q.degree().unwrap_or(0) > 0 {
                    let p = IntPolynomial::from_rational(&q.coeffs).expect("nonzero factor");
                    factors.push((p, m));
                }
            }
        }
        let prod = factors.iter().fold(IntPolynomial { coeffs: vec![BigInt::one()] }, |acc, (g, m)| (0..*m).fold(acc, |acc, _| acc.mul(g)));
        // the primitive factors multiply to a primitive polynomial (Gauss), so the unit is exact
        let c = self.leading() / prod.leading();
        (c, factors)
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            let unit = mag.is_one() && i > 0;
            if !unit {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "{}x", if unit { "" } else { "*" })?,
                _ => write!(f, "{}x^{i}", if unit { "" } else { "*" })?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// Dense polynomial over the rationals; the zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct QPoly {
    pub(crate) coeffs: Vec<BigRational>,
}

impl QPoly {
    pub(crate) fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub(crate) fn one() -> Self {
        QPoly { coeffs: vec![BigRational::one()] }
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub(crate) fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn lead(&self) -> &BigRational {
        self.coeffs.last().expect("nonzero")
    }

    pub(crate) fn monic(&self) -> QPoly {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.lead().clone();
        QPoly { coeffs: self.coeffs.iter().map(|c| c / &l).collect() }
    }

    pub(crate) fn sub(&self, o: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let z = BigRational::zero();
        QPoly::new((0..n).map(|i| self.coeffs.get(i).unwrap_or(&z) - o.coeffs.get(i).unwrap_or(&z)).collect())
    }

    pub(crate) fn mul(&self, o: &QPoly) -> QPoly {
        if self.is_zero() || o.is_zero() {
            return QPoly { coeffs: Vec::new() };
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::new(out)
    }

    pub(crate) fn derivative(&self) -> QPoly {
        QPoly::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * BigRational::from_integer(BigInt::from(i))).collect())
    }

    pub(crate) fn div_rem(&self, o: &QPoly) -> (QPoly, QPoly) {
        let od = o.degree().expect("division by zero polynomial");
        let mut r = self.coeffs.clone();
        let Some(sd) = self.degree() else {
            return (QPoly { coeffs: Vec::new() }, QPoly { coeffs: Vec::new() });
        };
        if sd < od {
            return (QPoly { coeffs: Vec::new() }, self.clone());
        }
        let mut q = vec![BigRational::zero(); sd - od + 1];
        let lead = o.lead();
        for i in (0..=sd - od).rev() {
            let c = &r[i + od] / lead;
            if !c.is_zero() {
                for (j, oc) in o.coeffs.iter().enumerate() {
                    r[i + j] -= &c * oc;
                }
            }
            q[i] = c;
        }
        (QPoly::new(q), QPoly::new(r))
    }

    pub(crate) fn gcd(&self, o: &QPoly) -> QPoly {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended Euclid: returns `(g, s)` with `s * self = g (mod m)` and `g` monic.
    pub(crate) fn inverse_mod(&self, m: &QPoly) -> (QPoly, QPoly) {
        let (mut r0, mut r1) = (m.clone(), self.div_rem(m).1);
        let (mut s0, mut s1) = (QPoly { coeffs: Vec::new() }, QPoly::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s = s0.sub(&q.mul(&s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        if r0.is_zero() {
            return (r0, s0);
        }
        let l = r0.lead().clone();
        let scale = |p: &QPoly| QPoly::new(p.coeffs.iter().map(|c| c / &l).collect());
        (scale(&r0), scale(&s0))
    }

    /// Yun's squarefree factorization of a nonconstant polynomial: monic `(a_i, i)`.
    pub(crate) fn yun(&self) -> Vec<(QPoly, u32)> {
        let f = self.monic();
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.div_rem(&a0).0;
        let mut c = df.div_rem(&a0).0;
        let mut d = c.sub(&b.derivative());
        let mut out = Vec::new();
        let mut i = 1;
        while b.degree().unwrap_or(0) > 0 {
            let a = b.gcd(&d);
            b = b.div_rem(&a).0;
            c = d.div_rem(&a).0;
            d = c.sub(&b.derivative());
            out.push((a, i));
            i += 1;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn ip(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64s(c).unwrap()
    }

    #[test]
    fn display_and_canonical() {
        assert_eq!(ip(&[-2, 0, 0, 1]).to_string(), "x^3 - 2");
        assert_eq!(ip(&[-3, 2]).to_string(), "2*x - 3");
        assert_eq!(ip(&[4, -2, 0, -6]).canonical(), ip(&[-2, 1, 0, 3]));
        assert!(IntPolynomial::from_i64s(&[0, 0]).is_none());
    }

    #[test]
    fn squarefree_decomposition_recovers_multiplicities() {
        // 3 (x - 1)^2 (x^3 - 2)
        let f = ip(&[1, -1]).mul(&ip(&[1, -1])).mul(&ip(&[-2, 0, 0, 1])).mul(&ip(&[3]));
        let (c, parts) = f.squarefree_decomposition();
        assert_eq!(c, BigInt::from(3));
        assert_eq!(parts, vec![(ip(&[-2, 0, 0, 1]), 1), (ip(&[-1, 1]), 2)]);
        let (c, parts) = ip(&[-5, 0, 2]).squarefree_decomposition();
        assert_eq!((c, parts), (BigInt::one(), vec![(ip(&[-5, 0, 2]), 1)]));
    }

    #[test]
    fn modular_inverse_over_q() {
        // (1 + x) * s = 1 mod x^3 - 2
        let m = ip(&[-2, 0, 0, 1]).to_qpoly();
        let a = ip(&[1, 1]).to_qpoly();
        let (g, s) = a.inverse_mod(&m);
        assert_eq!(g, QPoly::one());
        let prod = a.mul(&s).div_rem(&m).1;
        assert_eq!(prod, QPoly::one());
    }
}
