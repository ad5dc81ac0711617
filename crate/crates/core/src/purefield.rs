//! Field descriptors for `K = Q(theta)`, `theta^d = a`, with `d` odd.

use alloc::format;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{self, Factorization, PowerFreeDecomposition};
use crate::interval::Fx;
use crate::{Error, RealEnclosure, Result, DEFAULT_PREC_BITS};

/// Discriminant data: the two-sided bound `lower <= D_K <= upper`, the exact value when
/// known, and `|disc(x^d - a)| = d^d a^(d-1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscriminantInfo {
    lower: BigUint,
    upper: BigUint,
    exact: Option<BigUint>,
    poly_disc_modulus: BigUint,
}

impl DiscriminantInfo {
    /// `(prod_{gcd(k,d)=1} A_k)^(d-1)`.
    pub fn lower(&self) -> &BigUint {
        &self.lower
    }

    /// Unconditional upper bound; `D_K` divides the polynomial discriminant.
    pub fn upper(&self) -> &BigUint {
        &self.upper
    }

    pub fn exact(&self) -> Option<&BigUint> {
        self.exact.as_ref()
    }

    pub fn poly_disc_modulus(&self) -> &BigUint {
        &self.poly_disc_modulus
    }

    /// Tightest known interval for `D_K`.
    pub fn range(&self) -> (&BigUint, &BigUint) {
        match &self.exact {
            Some(e) => (e, e),
            None => (&self.lower, &self.upper),
        }
    }
}

/// The support `{0, step, 2 step, ...}` of the subfield `Q(theta^step)` of degree `degree`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubfieldPattern {
    pub degree: u32,
    pub step: u32,
}

impl SubfieldPattern {
    pub fn support(&self) -> Vec<u32> {
        (0..self.degree).map(|i| i * self.step).collect()
    }

    /// Whether every nonzero coordinate index is a multiple of `step`.
    pub fn contains_support<T: Zero>(&self, coords: &[T]) -> bool {
        coords.iter().enumerate().all(|(k, c)| c.is_zero() || k as u32 % self.step == 0)
    }
}

/// A pure field `Q(a^(1/d))` of odd degree `d >= 3` with `x^d - a` irreducible.
#[derive(Clone, Debug)]
pub struct PureField {
    d: u32,
    a: BigUint,
    factorization: Factorization,
    dec: PowerFreeDecomposition,
    disc: DiscriminantInfo,
    theta: RealEnclosure,
}

impl PartialEq for PureField {
    fn eq(&self, other: &Self) -> bool {
        self.d == other.d && self.a == other.a
    }
}

impl Eq for PureField {}

/// Builds `Q(a^(1/d))`, rejecting radicands with `d`-th power divisors and reducible `x^d - a`.
pub fn new_field(d: u32, a: &BigUint) -> Result<PureField> {
    PureField::new(d, a)
}

impl PureField {
    pub fn new(d: u32, a: &BigUint) -> Result<Self> {
        arith::check_degree(d)?;
        if *a < BigUint::from(2u32) {
            return Err(Error::Domain(format!("radicand must be at least 2, got {a}")));
        }
        let factorization = arith::factor(a)?;
        let dec = arith::decompose_factored(&factorization, d)?;
        // Capelli: for odd d, x^d - a is irreducible iff a is not a p-th power for a prime p | d
        for (p, _) in arith::factor(&BigUint::from(d))?.factors() {
            let p = u32::try_from(p).expect("prime divisor of a u32");
            if factorization.factors().iter().all(|(_, e)| e % p == 0) {
                return Err(Error::Reducible { d, a: a.clone(), p });
            }
        }
        let disc = discriminant_info(d, a, &dec);
        let theta = root_enclosure(a, d, DEFAULT_PREC_BITS).to_enclosure();
        Ok(PureField { d, a: a.clone(), factorization, dec, disc, theta })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn a(&self) -> &BigUint {
        &self.a
    }

    pub fn factorization(&self) -> &Factorization {
        &self.factorization
    }

    pub fn decomposition(&self) -> &PowerFreeDecomposition {
        &self.dec
    }

    pub fn disc(&self) -> &DiscriminantInfo {
        &self.disc
    }

    /// Enclosure of the real root `theta = a^(1/d)` at the default precision.
    pub fn theta(&self) -> &RealEnclosure {
        &self.theta
    }

    /// `theta` as a fixed-point interval at any precision.
    pub fn theta_fx(&self, prec: u32) -> Fx {
        root_enclosure(&self.a, self.d, prec)
    }

    /// Largest `s` with `s^2 | d^d a^(d-1) / D`, `D` the exact discriminant or its lower bound.
    ///
    /// The index `[O_K : Z[theta]]` divides this number, so `s * O_K` lies in `Z[theta]`.
    pub fn index_bound(&self) -> BigUint {
        let d_k = self.disc.exact.as_ref().unwrap_or(&self.disc.lower);
        let (mut q, r) = self.disc.poly_disc_modulus.div_rem(d_k);
        debug_assert!(r.is_zero());
        let mut s = BigUint::one();
        let primes = arith::factor(&BigUint::from(self.d)).expect("small degree").merge(&self.factorization);
        for p in primes.primes() {
            let mut e = 0u32;
            while (&q % p).is_zero() {
                q /= p;
                e += 1;
            }
            s *= num_traits::pow(p.clone(), (e / 2) as usize);
        }
        debug_assert!(q.is_one());
        s
    }

    pub fn subfields(&self) -> Vec<SubfieldPattern> {
        subfield_degrees(self)
    }
}

/// `floor` and `ceil` of `a^(1/d)` at the given precision.
pub(crate) fn root_enclosure(a: &BigUint, d: u32, prec: u32) -> Fx {
    Fx::from_int(&BigInt::from(a.clone()), prec).root(d)
}

fn discriminant_info(d: u32, a: &BigUint, dec: &PowerFreeDecomposition) -> DiscriminantInfo {
    let dd = BigUint::from(d);
    let coprime_prod = dec.parts().iter().enumerate().filter(|(i, _)| (*i as u32 + 1).gcd(&d) == 1).fold(BigUint::one(), |acc, (_, p)| acc * p);
    let lower = num_traits::pow(coprime_prod, d as usize - 1);
    let poly_disc_modulus = num_traits::pow(dd, d as usize) * num_traits::pow(a.clone(), d as usize - 1);
    let exact = (d == 3).then(|| cubic_discriminant(dec));
    DiscriminantInfo { lower, upper: poly_disc_modulus.clone(), exact, poly_disc_modulus }
}

fn cubic_discriminant(dec: &PowerFreeDecomposition) -> BigUint {
    let (a1, a2) = (dec.part(1), dec.part(2));
    let nine = BigUint::from(9u32);
    let base = num_traits::pow(a1 * a2, 2);
    if (a1 * a1) % &nine == (a2 * a2) % &nine {
        base * 3u32
    } else {
        base * 27u32
    }
}

/// The discriminant bounds of the field.
pub fn disc_bounds(field: &PureField) -> DiscriminantInfo {
    field.disc.clone()
}

/// `D_K` of a pure cubic field `Q((A_1 A_2^2)^(1/3))`: `3 (A_1 A_2)^2` when
/// `A_1^2 = A_2^2 (mod 9)`, otherwise `27 (A_1 A_2)^2`.
pub fn disc_exact_cubic(field: &PureField) -> Result<BigUint> {
    if field.d != 3 {
        return Err(Error::UnsupportedDegree { supported: 3, got: field.d });
    }
    Ok(cubic_discriminant(&field.dec))
}

/// The proper subfields `Q(theta^(d/e))`, one per divisor `1 < e < d`.
pub fn subfield_degrees(field: &PureField) -> Vec<SubfieldPattern> {
    let d = field.d;
    (2..d).filter(|e| d % e == 0).map(|e| SubfieldPattern { degree: e, step: d / e }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use num_bigint::BigUint;

    fn field(d: u32, a: u64) -> Result<PureField> {
        PureField::new(d, &BigUint::from(a))
    }

    fn b(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn construction_examples() {
        let k = field(3, 2).unwrap();
        assert_eq!(k.d(), 3);
        assert!(matches!(field(9, 8), Err(Error::Reducible { p: 3, .. })));
        assert!(matches!(field(3, 8), Err(Error::NotPowerFree { .. })));
        assert!(matches!(field(4, 3), Err(Error::InvalidDegree(4))));
        assert!(matches!(field(15, 32), Err(Error::Reducible { p: 5, .. })));
        let k = field(3, 150).unwrap();
        assert_eq!(k.decomposition().parts(), &[b(6), b(5)]);
        // theta enclosure brackets the root
        let t = k.theta();
        let lo3 = t.lo() * t.lo() * t.lo();
        let hi3 = t.hi() * t.hi() * t.hi();
        let a = num_rational::BigRational::from_integer(150.into());
        assert!(lo3 <= a && a <= hi3);
    }

    #[test]
    fn discriminant_bounds_examples() {
        let info = disc_bounds(&field(3, 2).unwrap());
        assert_eq!(info.lower(), &b(4));
        assert_eq!(info.poly_disc_modulus(), &b(108));
        assert_eq!(disc_bounds(&field(3, 150).unwrap()).lower(), &b(900));
        let info = disc_bounds(&field(5, 2).unwrap());
        assert_eq!(info.lower(), &b(16));
        assert_eq!(info.poly_disc_modulus(), &b(50000));
        assert_eq!(info.exact(), None);
        // d = 9: only A_k with gcd(k, 9) = 1 enter the lower bound
        let info = disc_bounds(&field(9, 2 * 27 * 25).unwrap());
        assert_eq!(info.lower(), &num_traits::pow(b(2 * 5), 8));
    }

    #[test]
    fn cubic_discriminant_examples() {
        assert_eq!(disc_exact_cubic(&field(3, 2).unwrap()).unwrap(), b(108));
        assert_eq!(disc_exact_cubic(&field(3, 10).unwrap()).unwrap(), b(300));
        assert_eq!(disc_exact_cubic(&field(3, 6).unwrap()).unwrap(), b(972));
        assert!(matches!(disc_exact_cubic(&field(5, 2).unwrap()), Err(Error::UnsupportedDegree { supported: 3, got: 5 })));
    }

    #[test]
    fn index_bound_examples() {
        assert_eq!(field(3, 2).unwrap().index_bound(), b(1));
        assert_eq!(field(3, 10).unwrap().index_bound(), b(3));
        assert_eq!(field(3, 150).unwrap().index_bound(), b(5));
        // d = 5, a = 2: 50000 / 16 = 3125 = 5^5
        assert_eq!(field(5, 2).unwrap().index_bound(), b(25));
    }

    #[test]
    fn subfield_patterns() {
        assert!(subfield_degrees(&field(3, 2).unwrap()).is_empty());
        let s = subfield_degrees(&field(9, 2).unwrap());
        assert_eq!(s, vec![SubfieldPattern { degree: 3, step: 3 }]);
        assert_eq!(s[0].support(), vec![0, 3, 6]);
        let s = subfield_degrees(&field(15, 2).unwrap());
        assert_eq!(s.len(), 2);
        assert_eq!(s[0].support(), vec![0, 5, 10]);
        assert_eq!(s[1].support(), vec![0, 3, 6, 9, 12]);
    }

    #[test]
    fn cubic_invariants_over_range() {
        for a in 2u64..400 {
            let Ok(k) = field(3, a) else { continue };
            let info = disc_bounds(&k);
            let exact = disc_exact_cubic(&k).unwrap();
            assert!((&exact % info.lower()).is_zero(), "a = {a}");
            assert!((info.poly_disc_modulus() % &exact).is_zero());
            let ratio = info.poly_disc_modulus() / &exact;
            let s = ratio.sqrt();
            assert_eq!(&s * &s, ratio, "index^2 for a = {a}");
            // rotation by k = 2 gives the same field and discriminant
            let rot = arith::rotate(k.decomposition(), 2).unwrap();
            let k2 = PureField::new(3, &rot.radicand()).unwrap();
            assert_eq!(disc_exact_cubic(&k2).unwrap(), exact);
        }
    }
}
