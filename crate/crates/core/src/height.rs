//! Certified Mahler measures and relative Weil heights.
//!
//! For `x` in `K` of degree `d` whose minimal polynomial `T x^e + ... + a_0` has degree
//! `e`, the relative height is
//!
//! ```text
//! H_K(x) = M(minpoly)^(d/e) = T^(d/e) * prod_{j=1..d} max(1, |x_j|)
//! ```
//!
//! where `x_j` runs over the `d` embeddings of `x`. When every `|x_j| > 1` the value is
//! exactly `|a_0|^(d/e)`, and when every `|x_j| < 1` it is exactly `T^(d/e)`; both
//! shortcuts make the result an exact rational.

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use crate::element::{ConjugateTable, FieldElement};
use crate::interval::{product_max_one, CFx, Fx};
use crate::poly::IntPolynomial;
use crate::purefield::PureField;
use crate::roots::isolate;
use crate::{Error, Result};

/// A closed rational interval `[lo, hi]` certified to contain a real number.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RealEnclosure {
    lo: BigRational,
    hi: BigRational,
}

impl RealEnclosure {
    /// # Panics
    /// If `lo > hi`.
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        assert!(lo <= hi, "empty enclosure");
        RealEnclosure { lo, hi }
    }

    pub fn exact(v: BigRational) -> Self {
        RealEnclosure { lo: v.clone(), hi: v }
    }

    pub fn from_integer(n: BigInt) -> Self {
        Self::exact(BigRational::from_integer(n))
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    /// The value when the enclosure is a single point.
    pub fn exact_value(&self) -> Option<&BigRational> {
        self.is_exact().then_some(&self.lo)
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn overlaps(&self, o: &RealEnclosure) -> bool {
        self.lo <= o.hi && o.lo <= self.hi
    }

    /// Whether `o` lies inside `self`.
    pub fn encloses(&self, o: &RealEnclosure) -> bool {
        self.lo <= o.lo && o.hi <= self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> BigRational {
        (&self.lo + &self.hi) / BigRational::from_integer(BigInt::from(2))
    }

    pub fn lo_f64(&self) -> f64 {
        self.lo.to_f64().unwrap_or(f64::NAN)
    }

    pub fn hi_f64(&self) -> f64 {
        self.hi.to_f64().unwrap_or(f64::NAN)
    }

    pub fn mid_f64(&self) -> f64 {
        self.mid().to_f64().unwrap_or(f64::NAN)
    }

    pub fn width_f64(&self) -> f64 {
        self.width().to_f64().unwrap_or(f64::NAN)
    }

    /// Interval product; both operands must be non-negative.
    pub fn mul_nonneg(&self, o: &RealEnclosure) -> RealEnclosure {
        debug_assert!(!self.lo.is_negative() && !o.lo.is_negative());
        RealEnclosure { lo: &self.lo * &o.lo, hi: &self.hi * &o.hi }
    }

    pub fn compare(&self, x: &BigRational) -> HeightOrdering {
        height_compare(self, x)
    }

    /// Whether the relative width is at most `2^-bits`, i.e. `hi - lo <= 2^-bits * |mid|`.
    pub fn meets_relative_width(&self, bits: u32) -> bool {
        let scale = BigRational::from_integer(BigInt::one() << bits);
        self.width() * scale <= self.mid().abs()
    }
}

impl fmt::Display for RealEnclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_exact() {
            write!(f, "{}", self.lo)
        } else {
            write!(f, "[{:.15e}, {:.15e}]", self.lo_f64(), self.hi_f64())
        }
    }
}

/// Outcome of comparing an enclosed value with a rational threshold.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HeightOrdering {
    Less,
    Greater,
    Undecided,
}

/// `Less` iff `h.hi < x`, `Greater` iff `h.lo > x`, `Undecided` otherwise.
pub fn height_compare(h: &RealEnclosure, x: &BigRational) -> HeightOrdering {
    if &h.hi < x {
        HeightOrdering::Less
    } else if &h.lo > x {
        HeightOrdering::Greater
    } else {
        HeightOrdering::Undecided
    }
}

/// Decides the strict inequality `value < x`: `Some(true)` when `hi < x`, `Some(false)`
/// when `lo >= x`, `None` when the enclosure straddles `x`.
///
/// Unlike [`height_compare`], an exact value equal to `x` is decided (as not below).
pub fn is_below(h: &RealEnclosure, x: &BigRational) -> Option<bool> {
    if &h.hi < x {
        Some(true)
    } else if &h.lo >= x {
        Some(false)
    } else {
        None
    }
}

/// Largest working precision the refinement loops reach when started at `prec`.
pub fn precision_ceiling(prec: u32) -> u32 {
    prec.saturating_mul(4).saturating_add(64)
}

/// `sqrt(sum a_i^2)` rounded up, an upper bound for `M(f)` (Landau's inequality).
fn landau_enclosure(f: &IntPolynomial) -> RealEnclosure {
    let sum: BigInt = f.coeffs().iter().map(|c| c * c).sum();
    let r = num_integer::Roots::sqrt(&sum);
    let hi = if &r * &r == sum { r } else { r + 1 };
    let lo = f.leading().abs().max(f.constant().abs());
    RealEnclosure::new(BigRational::from_integer(lo), BigRational::from_integer(hi))
}

enum Measure {
    Exact(BigRational),
    Approx(Fx),
}

impl Measure {
    fn into_fx(self, prec: u32) -> Fx {
        match self {
            Measure::Exact(r) => Fx::from_ratio(&r, prec),
            Measure::Approx(f) => f.round_to(prec),
        }
    }
}

/// Measure of a squarefree polynomial from certified root disks.
fn squarefree_measure(g: &IntPolynomial, prec: u32) -> Option<Measure> {
    let c = g.coeffs();
    let lead = c[c.len() - 1].abs();
    if g.degree() == 1 {
        return Some(Measure::Exact(BigRational::from_integer(lead.max(c[0].abs()))));
    }
    let disks = isolate(c, prec)?;
    let one = BigInt::one() << prec;
    let moduli: Vec<Fx> = disks.iter().map(|d| d.modulus()).collect();
    if moduli.iter().all(|m| m.lo_raw() > &one) {
        return Some(Measure::Exact(BigRational::from_integer(c[0].abs())));
    }
    if moduli.iter().all(|m| m.hi_raw() < &one) {
        return Some(Measure::Exact(BigRational::from_integer(lead)));
    }
    Some(Measure::Approx(product_max_one(&moduli, prec).mul(&Fx::from_int(&lead, prec))))
}

fn measure_at(f: &IntPolynomial, prec: u32) -> Option<RealEnclosure> {
    let (unit, parts) = f.squarefree_decomposition();
    let mut exact = BigRational::from_integer(unit.abs());
    let mut approx: Option<Fx> = None;
    for (g, m) in parts {
        match squarefree_measure(&g, prec)? {
            Measure::Exact(r) => exact *= num_traits::pow(r, m as usize),
            a => {
                let v = a.into_fx(prec).pow(m);
                approx = Some(match approx {
                    None => v,
                    Some(acc) => acc.mul(&v),
                });
            }
        }
    }
    Some(match approx {
        None => RealEnclosure::exact(exact),
        Some(a) => a.mul(&Fx::from_ratio(&exact, prec)).to_enclosure(),
    })
}

/// Mahler measure `|a_n| prod max(1, |root_j|)` of an integer polynomial of degree >= 1.
///
/// The result is exact whenever every root of each squarefree factor lies strictly on
/// one side of the unit circle; otherwise its relative width is at most
/// `2^(-prec/4)`. Working precision is doubled until that holds, up to `4 prec + 64`
/// bits, after which a [`Error::Refinement`] carries the best enclosure found.
pub fn mahler_measure(f: &IntPolynomial, prec: u32) -> Result<RealEnclosure> {
    if f.degree() == 0 {
        return Err(Error::Domain("Mahler measure needs a polynomial of degree at least 1".into()));
    }
    let target = prec / 4;
    let ceiling = precision_ceiling(prec);
    let mut best = landau_enclosure(f);
    let mut wp = prec.max(32) + 32;
    loop {
        if let Some(e) = measure_at(f, wp) {
            if e.is_exact() || e.meets_relative_width(target) {
                return Ok(e);
            }
            if e.width() < best.width() {
                best = e;
            }
        }
        if wp >= ceiling {
            return Err(Error::Refinement { best: Box::new(best), bits: wp });
        }
        wp = (wp * 2).min(ceiling);
    }
}

/// Caches conjugate tables of one field across precisions, so repeated height
/// evaluations (as in enumeration) do not recompute `theta^k zeta^(jk)`.
#[derive(Clone, Debug)]
pub struct HeightContext<'f> {
    field: &'f PureField,
    tables: Vec<ConjugateTable>,
}

/// A height value together with the exponent data that produced it.
struct HeightData<'a> {
    num: &'a [BigInt],
    den: &'a BigInt,
    lead: &'a BigInt,
    constant: &'a BigInt,
    /// `d / e`
    r: u32,
}

impl<'f> HeightContext<'f> {
    pub fn new(field: &'f PureField) -> Self {
        HeightContext { field, tables: Vec::new() }
    }

    fn table(&mut self, prec: u32) -> &ConjugateTable {
        let pos = match self.tables.iter().position(|t| t.prec() == prec) {
            Some(p) => p,
            None => {
                self.tables.push(ConjugateTable::new(self.field, prec));
                self.tables.len() - 1
            }
        };
        &self.tables[pos]
    }

    fn at_precision(&mut self, h: &HeightData<'_>, prec: u32) -> RealEnclosure {
        let conj: Vec<CFx> = self.table(prec).conjugates(h.num, h.den);
        let one = BigInt::one() << prec;
        let moduli: Vec<Fx> = conj.iter().map(CFx::modulus).collect();
        if moduli.iter().all(|m| m.lo_raw() > &one) {
            return RealEnclosure::from_integer(num_traits::pow(h.constant.abs(), h.r as usize));
        }
        if moduli.iter().all(|m| m.hi_raw() < &one) {
            return RealEnclosure::from_integer(num_traits::pow(h.lead.clone(), h.r as usize));
        }
        let lead_r = Fx::from_int(&num_traits::pow(h.lead.clone(), h.r as usize), prec);
        product_max_one(&moduli, prec).mul(&lead_r).to_enclosure()
    }

    /// `H_K(x)` with relative width at most `2^(-prec/4)` unless exact.
    pub fn weil_height(&mut self, x: &FieldElement, prec: u32) -> Result<RealEnclosure> {
        self.check_field(x)?;
        if let Some(e) = rational_height(x) {
            return Ok(e);
        }
        let m = x.minimal_polynomial();
        let h = self.data(x, &m);
        let target = prec / 4;
        let ceiling = precision_ceiling(prec);
        let mut wp = prec.max(32) + 16;
        loop {
            let e = self.at_precision(&h, wp);
            if e.is_exact() || e.meets_relative_width(target) {
                return Ok(e);
            }
            if wp >= ceiling {
                return Err(Error::Refinement { best: Box::new(e), bits: wp });
            }
            wp = (wp * 2).min(ceiling);
        }
    }

    /// Decides `H_K(x) < bound`, refining from `prec` up to `ceiling` bits.
    /// Returns the decision (`None` if still straddling at the ceiling) and the last enclosure.
    pub fn below(
        &mut self,
        x: &FieldElement,
        minpoly: &IntPolynomial,
        bound: &BigRational,
        prec: u32,
        ceiling: u32,
    ) -> Result<(Option<bool>, RealEnclosure)> {
        self.check_field(x)?;
        if let Some(e) = rational_height(x) {
            return Ok((is_below(&e, bound), e));
        }
        let h = self.data(x, minpoly);
        let mut wp = prec.max(32);
        loop {
            let e = self.at_precision(&h, wp);
            let decision = is_below(&e, bound);
            if decision.is_some() || wp >= ceiling {
                return Ok((decision, e));
            }
            wp = (wp * 2).min(ceiling.max(wp));
        }
    }

    fn data<'a>(&self, x: &'a FieldElement, m: &'a IntPolynomial) -> HeightData<'a> {
        HeightData { num: x.numerators(), den: x.denominator(), lead: m.leading(), constant: m.constant(), r: self.field.d() / m.degree() as u32 }
    }

    fn check_field(&self, x: &FieldElement) -> Result<()> {
        if **x.field() == *self.field {
            Ok(())
        } else {
            Err(Error::MixedFields)
        }
    }
}

/// `max(|b_1|, b_0)^d` for a rational element `b_1 / b_0`.
fn rational_height(x: &FieldElement) -> Option<RealEnclosure> {
    if !x.is_rational() {
        return None;
    }
    let b = x.numerators()[0].abs().max(x.denominator().clone());
    Some(RealEnclosure::from_integer(num_traits::pow(b, x.field().d() as usize)))
}

/// The relative Weil height `H_K(x)`.
///
/// Exact when all conjugates lie on one side of the unit circle, else of relative
/// width at most `2^(-prec/4)`.
pub fn weil_height(x: &FieldElement, prec: u32) -> Result<RealEnclosure> {
    HeightContext::new(x.field()).weil_height(x, prec)
}

/// `H_K(x)` through the minimal polynomial: `M(minpoly)^(d/e)`.
///
/// Slower than [`weil_height`]; kept as an independent route for cross-checks.
pub fn weil_height_via_minpoly(x: &FieldElement, prec: u32) -> Result<RealEnclosure> {
    if let Some(e) = rational_height(x) {
        return Ok(e);
    }
    let m = x.minimal_polynomial();
    let r = x.field().d() / m.degree() as u32;
    let e = mahler_measure(&m, prec)?;
    let pow = |v: &BigRational| num_traits::pow(v.clone(), r as usize);
    Ok(RealEnclosure::new(pow(e.lo()), pow(e.hi())))
}

/// Compares two enclosures by their certified order, if it is determined.
pub fn certified_cmp(a: &RealEnclosure, b: &RealEnclosure) -> Option<Ordering> {
    if a.hi < b.lo {
        Some(Ordering::Less)
    } else if a.lo > b.hi {
        Some(Ordering::Greater)
    } else if a.is_exact() && b.is_exact() {
        Some(Ordering::Equal)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::sync::Arc;
    use num_bigint::BigUint;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn ip(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64s(c).unwrap()
    }

    fn field(d: u32, a: u64) -> Arc<PureField> {
        Arc::new(PureField::new(d, &BigUint::from(a)).unwrap())
    }

    #[test]
    fn compare_examples() {
        let e = RealEnclosure::new(q(19, 10), q(21, 10));
        assert_eq!(height_compare(&e, &q(3, 1)), HeightOrdering::Less);
        assert_eq!(height_compare(&e, &q(2, 1)), HeightOrdering::Undecided);
        assert_eq!(height_compare(&RealEnclosure::new(q(35, 10), q(36, 10)), &q(3, 1)), HeightOrdering::Greater);
        let two = RealEnclosure::exact(q(2, 1));
        assert_eq!(height_compare(&two, &q(2, 1)), HeightOrdering::Undecided);
        assert_eq!(is_below(&two, &q(2, 1)), Some(false));
        assert_eq!(is_below(&e, &q(2, 1)), None);
        assert_eq!(two.to_string(), "2");
    }

    #[test]
    fn mahler_examples() {
        assert_eq!(mahler_measure(&ip(&[-2, 0, 0, 1]), 128).unwrap(), RealEnclosure::exact(q(2, 1)));
        assert_eq!(mahler_measure(&ip(&[-1, 2]), 128).unwrap(), RealEnclosure::exact(q(2, 1)));
        assert_eq!(mahler_measure(&ip(&[-3, 3, -3, 1]), 128).unwrap(), RealEnclosure::exact(q(3, 1)));
        assert_eq!(mahler_measure(&ip(&[-1, 0, 0, 2]), 128).unwrap(), RealEnclosure::exact(q(2, 1)));
        assert!(mahler_measure(&ip(&[5]), 128).is_err());
    }

    #[test]
    fn mahler_mixed_roots_and_repeated_factors() {
        // x^3 - x - 1: Lehmer-type smallest Pisot number 1.3247179572447460...
        let m = mahler_measure(&ip(&[-1, -1, 0, 1]), 128).unwrap();
        assert!((m.mid_f64() - 1.324_717_957_244_746).abs() < 1e-15);
        assert!(m.meets_relative_width(32));
        // 3 (x^3 - 2)^2 (2x - 1)
        let f = ip(&[-2, 0, 0, 1]).mul(&ip(&[-2, 0, 0, 1])).mul(&ip(&[-1, 2])).mul(&ip(&[3]));
        assert_eq!(mahler_measure(&f, 128).unwrap(), RealEnclosure::exact(q(24, 1)));
        // cyclotomic factor: roots on the unit circle
        let m = mahler_measure(&ip(&[1, 1, 1]), 128).unwrap();
        assert!(m.contains(&q(1, 1)));
        assert!(m.meets_relative_width(32));
    }

    #[test]
    fn weil_height_examples() {
        let k = field(3, 2);
        let three_halves = FieldElement::from_rational(k.clone(), &q(3, 2));
        assert_eq!(weil_height(&three_halves, 128).unwrap(), RealEnclosure::exact(q(27, 1)));
        assert_eq!(weil_height(&FieldElement::theta(k.clone()), 128).unwrap(), RealEnclosure::exact(q(2, 1)));
        let k150 = field(3, 150);
        let x = FieldElement::parse(k150.clone(), "t/5").unwrap();
        assert_eq!(weil_height(&x, 128).unwrap(), RealEnclosure::exact(q(6, 1)));
        assert_eq!(weil_height(&FieldElement::from_integer(k, 0), 128).unwrap(), RealEnclosure::exact(q(1, 1)));
    }

    #[test]
    fn conjugate_and_minpoly_routes_agree() {
        let k = field(3, 2);
        for s in ["1 + t", "(1 - t + t^2)/3", "(2 + t^2)/5", "t - t^2", "(3 - 2*t + t^2)/7"] {
            let x = FieldElement::parse(k.clone(), s).unwrap();
            let a = weil_height(&x, 128).unwrap();
            let b = weil_height_via_minpoly(&x, 128).unwrap();
            assert!(a.overlaps(&b), "{s}: {a} vs {b}");
        }
        let k9 = field(9, 2);
        let y = FieldElement::parse(k9, "1 + t^3").unwrap();
        let a = weil_height(&y, 128).unwrap();
        let b = weil_height_via_minpoly(&y, 128).unwrap();
        assert!(a.overlaps(&b), "{a} vs {b}");
    }

    #[test]
    fn below_decides_ties_exactly() {
        let k = field(3, 2);
        let t = FieldElement::theta(k.clone());
        let mut ctx = HeightContext::new(&k);
        let m = t.minimal_polynomial();
        assert_eq!(ctx.below(&t, &m, &q(2, 1), 64, 256).unwrap().0, Some(false));
        assert_eq!(ctx.below(&t, &m, &q(201, 100), 64, 256).unwrap().0, Some(true));
    }
}
