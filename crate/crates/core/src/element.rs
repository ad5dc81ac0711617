//! Exact arithmetic in `K = Q[t]/(t^d - a)` in the power basis `1, t, ..., t^(d-1)`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::interval::{roots_of_unity, CFx, Fx};
use crate::poly::{IntPolynomial, QPoly};
use crate::purefield::PureField;
use crate::{Error, RealEnclosure, Result};

/// An element `(c_0 + c_1 t + ... + c_{d-1} t^(d-1)) / q` in canonical form:
/// `q >= 1` and `gcd(c_0, ..., c_{d-1}, q) = 1`.
#[derive(Clone, Debug)]
pub struct FieldElement {
    field: Arc<PureField>,
    num: Vec<BigInt>,
    den: BigInt,
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.num == other.num && self.den == other.den
    }
}

impl Eq for FieldElement {}

impl FieldElement {
    pub fn new(field: Arc<PureField>, num: Vec<BigInt>, den: BigInt) -> Result<Self> {
        if num.len() != field.d() as usize {
            return Err(Error::Domain(format!("expected {} coordinates, got {}", field.d(), num.len())));
        }
        if den.is_zero() {
            return Err(Error::Domain("zero denominator".to_string()));
        }
        Ok(Self::normalized(field, num, den))
    }

    fn normalized(field: Arc<PureField>, mut num: Vec<BigInt>, mut den: BigInt) -> Self {
        let mut g = num.iter().fold(den.clone(), |g, c| g.gcd(c));
        if den.is_negative() {
            g = -g;
        }
        if !g.is_one() {
            for c in num.iter_mut() {
                *c = &*c / &g;
            }
            den = &den / &g;
        }
        FieldElement { field, num, den }
    }

    pub fn from_rational(field: Arc<PureField>, r: &BigRational) -> Self {
        let mut num = vec![BigInt::zero(); field.d() as usize];
        num[0] = r.numer().clone();
        Self::normalized(field, num, r.denom().clone())
    }

    pub fn from_integer(field: Arc<PureField>, n: i64) -> Self {
        Self::from_rational(field, &BigRational::from_integer(BigInt::from(n)))
    }

    /// The generator `theta = a^(1/d)`.
    pub fn theta(field: Arc<PureField>) -> Self {
        Self::monomial(field, 1, BigInt::one(), BigInt::one())
    }

    /// `(c / q) * theta^k` for `0 <= k < d`.
    pub fn monomial(field: Arc<PureField>, k: usize, c: BigInt, q: BigInt) -> Self {
        let mut num = vec![BigInt::zero(); field.d() as usize];
        num[k] = c;
        Self::normalized(field, num, q)
    }

    pub fn field(&self) -> &Arc<PureField> {
        &self.field
    }

    /// The integer coordinates `c_0, ..., c_{d-1}`.
    pub fn numerators(&self) -> &[BigInt] {
        &self.num
    }

    /// The denominator `q >= 1`.
    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn coefficient(&self, k: usize) -> BigRational {
        BigRational::new(self.num[k].clone(), self.den.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.num[1..].iter().all(Zero::is_zero)
    }

    /// Index of the highest nonzero coordinate (the `m` of `b_0 + ... + b_m theta^m`).
    pub fn top_index(&self) -> Option<usize> {
        self.num.iter().rposition(|c| !c.is_zero())
    }

    fn check_same(&self, o: &FieldElement) -> Result<()> {
        if Arc::ptr_eq(&self.field, &o.field) || self.field == o.field {
            Ok(())
        } else {
            Err(Error::MixedFields)
        }
    }

    pub fn add(&self, o: &FieldElement) -> Result<FieldElement> {
        self.check_same(o)?;
        let num = self.num.iter().zip(&o.num).map(|(x, y)| x * &o.den + y * &self.den).collect();
        Ok(Self::normalized(self.field.clone(), num, &self.den * &o.den))
    }

    pub fn neg(&self) -> FieldElement {
        FieldElement { field: self.field.clone(), num: self.num.iter().map(|c| -c).collect(), den: self.den.clone() }
    }

    pub fn sub(&self, o: &FieldElement) -> Result<FieldElement> {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &FieldElement) -> Result<FieldElement> {
        self.check_same(o)?;
        let d = self.num.len();
        let a = BigInt::from(self.field.a().clone());
        let mut prod = vec![BigInt::zero(); 2 * d - 1];
        for (i, x) in self.num.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in o.num.iter().enumerate() {
                prod[i + j] += x * y;
            }
        }
        // theta^(d + k) = a theta^k
        for k in (d..2 * d - 1).rev() {
            let hi = core::mem::take(&mut prod[k]);
            prod[k - d] += hi * &a;
        }
        prod.truncate(d);
        Ok(Self::normalized(self.field.clone(), prod, &self.den * &o.den))
    }

    /// Multiplication by a rational scalar.
    pub fn scale(&self, r: &BigRational) -> FieldElement {
        let num = self.num.iter().map(|c| c * r.numer()).collect();
        Self::normalized(self.field.clone(), num, &self.den * r.denom())
    }

    pub fn pow(&self, e: u32) -> FieldElement {
        let mut acc = Self::from_integer(self.field.clone(), 1);
        for _ in 0..e {
            acc = acc.mul(self).expect("same field");
        }
        acc
    }

    /// Multiplicative inverse, by extended Euclid against `t^d - a` over `Q`.
    pub fn invert(&self) -> Result<FieldElement> {
        if self.is_zero() {
            return Err(Error::Domain("zero has no inverse".to_string()));
        }
        let (g, s) = self.as_qpoly().inverse_mod(&modulus_poly(&self.field));
        debug_assert!(g.degree() == Some(0), "x^d - a irreducible");
        let mut coords = vec![BigRational::zero(); self.num.len()];
        for (i, c) in s.coeffs.into_iter().enumerate() {
            coords[i] = c;
        }
        Ok(Self::from_rational_coords(self.field.clone(), &coords))
    }

    pub fn from_rational_coords(field: Arc<PureField>, coords: &[BigRational]) -> FieldElement {
        let l = coords.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = coords.iter().map(|c| (c * BigRational::from_integer(l.clone())).to_integer()).collect();
        Self::normalized(field, num, l)
    }

    fn as_qpoly(&self) -> QPoly {
        QPoly::new((0..self.num.len()).map(|k| self.coefficient(k)).collect())
    }

    /// Canonical minimal polynomial over `Z` (content 1, positive leading coefficient `T`).
    ///
    /// Found as the first linear dependency among `1, x, x^2, ...` in the power basis.
    pub fn minimal_polynomial(&self) -> IntPolynomial {
        let d = self.num.len();
        // rows in echelon form: (pivot, vector, combination of powers)
        let mut basis: Vec<(usize, Vec<BigRational>, Vec<BigRational>)> = Vec::new();
        let mut power = Self::from_integer(self.field.clone(), 1);
        for j in 0..=d {
            let mut v: Vec<BigRational> = (0..d).map(|k| power.coefficient(k)).collect();
            let mut combo = vec![BigRational::zero(); d + 1];
            combo[j] = BigRational::one();
            for (piv, row, comb) in &basis {
                if v[*piv].is_zero() {
                    continue;
                }
                let f = &v[*piv] / &row[*piv];
                for (x, r) in v.iter_mut().zip(row) {
                    *x -= &f * r;
                }
                for (x, r) in combo.iter_mut().zip(comb) {
                    *x -= &f * r;
                }
            }
            match v.iter().position(|x| !x.is_zero()) {
                None => {
                    return IntPolynomial::from_rational(&combo[..=j]).expect("dependency is nonzero");
                }
                Some(piv) => basis.push((piv, v, combo)),
            }
            power = power.mul(self).expect("same field");
        }
        unreachable!("d + 1 vectors in a d-dimensional space are dependent")
    }

    /// Primitivity from the coordinate support: `x` generates `K` iff its support fits
    /// no subfield pattern `{0, s, 2s, ...}` (including `Q` itself, `s = d`).
    pub fn is_primitive_by_support(&self) -> bool {
        let d = self.field.d();
        (1..d).filter(|e| d % e == 0).all(|e| {
            let step = d / e;
            !self.num.iter().enumerate().all(|(k, c)| c.is_zero() || k as u32 % step == 0)
        })
    }

    /// Primitivity from the degree of the minimal polynomial.
    pub fn is_primitive_by_degree(&self) -> bool {
        self.minimal_polynomial().degree() == self.num.len()
    }

    /// Whether `Q(x) = K`. Both criteria are evaluated and must agree.
    pub fn is_primitive(&self) -> bool {
        let by_support = self.is_primitive_by_support();
        debug_assert_eq!(by_support, self.is_primitive_by_degree(), "primitivity criteria disagree for {self}");
        by_support
    }

    /// Enclosures of the `d` conjugates `sum_k b_k theta^k zeta^(jk)`, `j = 0..d`.
    /// Conjugate 0 is the real embedding.
    pub fn conjugate_enclosures(&self, prec: u32) -> Vec<ComplexEnclosure> {
        let prec = prec.max(32);
        let table = ConjugateTable::new(&self.field, prec + 16);
        table.conjugates(&self.num, &self.den).iter().map(|z| ComplexEnclosure { re: z.re.to_enclosure(), im: z.im.to_enclosure() }).collect()
    }

    /// Parses the text form, e.g. `(1 + 2*t - t^2)/3`, `t`, `-5/2`.
    pub fn parse(field: Arc<PureField>, s: &str) -> Result<FieldElement> {
        parse_element(field, s)
    }
}

fn modulus_poly(field: &PureField) -> QPoly {
    let d = field.d() as usize;
    let mut c = vec![BigRational::zero(); d + 1];
    c[0] = -BigRational::from_integer(BigInt::from(field.a().clone()));
    c[d] = BigRational::one();
    QPoly::new(c)
}

/// Precomputed enclosures of `theta^k zeta^(jk)` for all embeddings `j` and powers `k`.
#[derive(Clone, Debug)]
pub struct ConjugateTable {
    prec: u32,
    rows: Vec<Vec<CFx>>,
}

impl ConjugateTable {
    pub fn new(field: &PureField, prec: u32) -> Self {
        let d = field.d() as usize;
        let theta = field.theta_fx(prec);
        let zeta = roots_of_unity(d as u32, prec);
        let mut powers = Vec::with_capacity(d);
        let mut p = Fx::from_i64(1, prec);
        for _ in 0..d {
            powers.push(p.clone());
            p = p.mul(&theta);
        }
        let rows =
            (0..d).map(|j| (0..d).map(|k| CFx::new(powers[k].mul(&zeta[(j * k) % d].re), powers[k].mul(&zeta[(j * k) % d].im))).collect()).collect();
        ConjugateTable { prec, rows }
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    /// Conjugates of `(sum c_k theta^k) / q`.
    pub fn conjugates(&self, num: &[BigInt], den: &BigInt) -> Vec<CFx> {
        self.rows
            .iter()
            .map(|row| {
                let mut acc = CFx::zero(self.prec);
                for (c, e) in num.iter().zip(row) {
                    if !c.is_zero() {
                        acc = acc.add(&e.mul_int(c));
                    }
                }
                acc.div_int(den)
            })
            .collect()
    }
}

/// A rectangle in the complex plane certified to contain a conjugate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexEnclosure {
    pub re: RealEnclosure,
    pub im: RealEnclosure,
}

impl ComplexEnclosure {
    /// Enclosure of the modulus.
    pub fn modulus(&self, prec: u32) -> RealEnclosure {
        let z = CFx::new(Fx::from_enclosure(&self.re, prec), Fx::from_enclosure(&self.im, prec));
        z.modulus().to_enclosure()
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut body = String::new();
        let mut terms = 0;
        for (k, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            terms += 1;
            let mag = c.abs();
            if body.is_empty() {
                if c.is_negative() {
                    body.push('-');
                }
            } else {
                body.push_str(if c.is_negative() { " - " } else { " + " });
            }
            match (k, mag.is_one()) {
                (0, _) => body.push_str(&mag.to_string()),
                (_, true) => {}
                (_, false) => {
                    body.push_str(&mag.to_string());
                    body.push('*');
                }
            }
            match k {
                0 => {}
                1 => body.push('t'),
                _ => body.push_str(&format!("t^{k}")),
            }
        }
        if body.is_empty() {
            body.push('0');
        }
        if self.den.is_one() {
            f.write_str(&body)
        } else if terms == 1 {
            write!(f, "{body}/{}", self.den)
        } else {
            write!(f, "({body})/{}", self.den)
        }
    }
}

fn parse_int(s: &str) -> Result<BigInt> {
    s.parse::<BigInt>().map_err(|_| Error::Parse(format!("invalid integer {s:?}")))
}

fn parse_element(field: Arc<PureField>, s: &str) -> Result<FieldElement> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::Parse("empty element".to_string()));
    }
    let (body, den) = match s.rfind('/') {
        Some(i) => (&s[..i], parse_int(&s[i + 1..])?),
        None => (&s[..], BigInt::one()),
    };
    let body = body.strip_prefix('(').and_then(|b| b.strip_suffix(')')).unwrap_or(body);
    if body.is_empty() {
        return Err(Error::Parse("empty numerator".to_string()));
    }
    let d = field.d() as usize;
    let a = BigInt::from(field.a().clone());
    let mut num = vec![BigInt::zero(); d];
    // split into signed terms
    let mut terms: Vec<(bool, &str)> = Vec::new();
    let mut start = 0;
    let bytes = body.as_bytes();
    let mut negative = false;
    for i in 0..=bytes.len() {
        let boundary = i == bytes.len() || ((bytes[i] == b'+' || bytes[i] == b'-') && i > 0 && bytes[i - 1] != b'^');
        if boundary {
            if i > start || i == bytes.len() {
                terms.push((negative, &body[start..i]));
            }
            if i < bytes.len() {
                negative = bytes[i] == b'-';
                start = i + 1;
            }
        } else if i == 0 && (bytes[0] == b'-' || bytes[0] == b'+') {
            negative = bytes[0] == b'-';
            start = 1;
        }
    }
    for (neg, term) in terms {
        if term.is_empty() {
            return Err(Error::Parse(format!("empty term in {s:?}")));
        }
        let (coef, power) = match term.find('t') {
            None => (parse_int(term)?, 0usize),
            Some(i) => {
                let c = term[..i].trim_end_matches('*');
                let c = if c.is_empty() { BigInt::one() } else { parse_int(c)? };
                let rest = &term[i + 1..];
                let p = if rest.is_empty() {
                    1
                } else {
                    rest.strip_prefix('^').and_then(|e| e.parse::<usize>().ok()).ok_or_else(|| Error::Parse(format!("invalid power in {term:?}")))?
                };
                (c, p)
            }
        };
        let coef = if neg { -coef } else { coef };
        // t^(q d + r) = a^q t^r
        let reduced = coef * num_traits::pow(a.clone(), power / d);
        num[power % d] += reduced;
    }
    FieldElement::new(field, num, den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    fn k(d: u32, a: u64) -> Arc<PureField> {
        Arc::new(PureField::new(d, &BigUint::from(a)).unwrap())
    }

    fn el(f: &Arc<PureField>, s: &str) -> FieldElement {
        FieldElement::parse(f.clone(), s).unwrap()
    }

    fn poly(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64s(c).unwrap()
    }

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn ring_examples() {
        let f = k(3, 2);
        let t = FieldElement::theta(f.clone());
        assert_eq!(t.mul(&t.pow(2)).unwrap(), FieldElement::from_integer(f.clone(), 2));
        let zero = FieldElement::from_integer(f.clone(), 0);
        assert_eq!(t.add(&zero).unwrap(), t);
        let half_t = el(&f, "t/2");
        assert_eq!(half_t.mul(&FieldElement::from_integer(f.clone(), 2)).unwrap(), t);
        let g = k(3, 3);
        assert!(matches!(t.add(&FieldElement::theta(g)), Err(Error::MixedFields)));
    }

    #[test]
    fn canonical_form() {
        let f = k(3, 2);
        let x = FieldElement::new(f.clone(), vec![4.into(), (-6).into(), 2.into()], (-8).into()).unwrap();
        assert_eq!(x.numerators(), &[BigInt::from(-2), 3.into(), (-1).into()]);
        assert_eq!(x.denominator(), &BigInt::from(4));
        assert!(FieldElement::new(f.clone(), vec![1.into()], 1.into()).is_err());
        assert!(FieldElement::new(f, vec![1.into(), 0.into(), 0.into()], 0.into()).is_err());
    }

    #[test]
    fn inversion_examples() {
        let f = k(3, 2);
        let t = FieldElement::theta(f.clone());
        assert_eq!(t.invert().unwrap(), el(&f, "t^2/2"));
        let one = FieldElement::from_integer(f.clone(), 1);
        assert_eq!(one.invert().unwrap(), one);
        let x = el(&f, "1 + t");
        let y = x.invert().unwrap();
        assert_eq!(x.mul(&y).unwrap(), one);
        // (1 + t)^-1 = (1 - t + t^2) / 3 since (1 + t)(1 - t + t^2) = 1 + t^3 = 3
        assert_eq!(y, el(&f, "(1 - t + t^2)/3"));
        assert!(FieldElement::from_integer(f, 0).invert().is_err());
    }

    /// Oracle for minimal polynomials: evaluate the candidate at x inside K.
    fn evaluates_to_zero(x: &FieldElement, p: &IntPolynomial) -> bool {
        let mut acc = FieldElement::from_integer(x.field().clone(), 0);
        for c in p.coeffs().iter().rev() {
            acc = acc.mul(x).unwrap().add(&FieldElement::from_rational(x.field().clone(), &BigRational::from_integer(c.clone()))).unwrap();
        }
        acc.is_zero()
    }

    #[test]
    fn minimal_polynomial_examples() {
        let f = k(3, 2);
        assert_eq!(FieldElement::theta(f.clone()).minimal_polynomial(), poly(&[-2, 0, 0, 1]));
        assert_eq!(FieldElement::from_rational(f.clone(), &r(3, 2)).minimal_polynomial(), poly(&[-3, 2]));
        let x = el(&f, "t^2/2");
        let m = x.minimal_polynomial();
        assert_eq!(m, poly(&[-1, 0, 0, 2]));
        assert!(evaluates_to_zero(&x, &m));
        assert_eq!(el(&f, "1 + t").minimal_polynomial(), poly(&[-3, 3, -3, 1]));
        // cubic subfield of Q(2^(1/9))
        let g = k(9, 2);
        let y = el(&g, "1 + t^3 + 2*t^6");
        assert_eq!(y.minimal_polynomial().degree(), 3);
        assert!(evaluates_to_zero(&y, &y.minimal_polynomial()));
    }

    #[test]
    fn primitivity_examples() {
        let f = k(3, 2);
        assert!(FieldElement::theta(f.clone()).is_primitive());
        assert!(!FieldElement::from_rational(f, &r(5, 3)).is_primitive());
        let g = k(9, 2);
        let y = el(&g, "1 + t^3 - t^6");
        assert!(!y.is_primitive_by_support());
        assert!(!y.is_primitive_by_degree());
        assert!(el(&g, "t^3 + t").is_primitive());
        let h = k(15, 3);
        assert!(!el(&h, "t^5 + t^10").is_primitive());
        assert!(!el(&h, "t^3 + t^12").is_primitive());
        assert!(el(&h, "t^3 + t^5").is_primitive());
    }

    #[test]
    fn conjugate_examples() {
        let f = k(3, 2);
        let cbrt2 = libm::cbrt(2.0);
        for z in FieldElement::theta(f.clone()).conjugate_enclosures(64) {
            let m = z.modulus(96);
            assert!(m.lo_f64() <= cbrt2 + 1e-15 && cbrt2 - 1e-15 <= m.hi_f64());
            assert!(m.width_f64() < 1e-15);
        }
        for z in FieldElement::from_integer(f.clone(), 7).conjugate_enclosures(64) {
            assert!(z.re.contains(&BigRational::from_integer(7.into())));
            assert!(z.im.contains(&BigRational::zero()));
        }
        let c = el(&f, "1 + t").conjugate_enclosures(64);
        assert!((c[0].re.mid_f64() - (1.0 + cbrt2)).abs() < 1e-15);
        assert!((c[0].re.mid_f64() - 2.2599).abs() < 1e-4);
        // complex pair conjugated
        assert!((c[1].im.mid_f64() + c[2].im.mid_f64()).abs() < 1e-15);
    }

    #[test]
    fn text_round_trip_examples() {
        let f = k(5, 3);
        for s in ["t", "(1 + 2*t - t^4)/3", "-5/2", "0", "(-t^2 + 7*t^3)/11", "-3*t^2/4"] {
            assert_eq!(el(&f, s).to_string(), s);
        }
        assert_eq!(el(&f, "t^5"), FieldElement::from_integer(f.clone(), 3));
        assert_eq!(el(&f, "( 2t + 4 ) / 6"), el(&f, "(2 + t)/3"));
        assert!(FieldElement::parse(f.clone(), "t^").is_err());
        assert!(FieldElement::parse(f.clone(), "1/0").is_err());
        assert!(FieldElement::parse(f, "x").is_err());
    }
}
