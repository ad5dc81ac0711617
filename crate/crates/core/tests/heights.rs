use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use proptest::prelude::*;

use pftl_core::element::FieldElement;
use pftl_core::enumerate::{count_primitive, min_generator, EnumerationOptions, MinGenerator};
use pftl_core::height::{mahler_measure, weil_height, weil_height_via_minpoly};
use pftl_core::poly::IntPolynomial;
use pftl_core::purefield::{disc_exact_cubic, PureField};

const PREC: u32 = 160;

fn field(d: u32, a: u64) -> Arc<PureField> {
    Arc::new(PureField::new(d, &BigUint::from(a)).unwrap())
}

fn element(k: &Arc<PureField>, num: &[i64], den: i64) -> FieldElement {
    FieldElement::new(k.clone(), num.iter().map(|&c| BigInt::from(c)).collect(), BigInt::from(den)).unwrap()
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn arb_element(k: Arc<PureField>) -> impl Strategy<Value = FieldElement> {
    let d = k.d() as usize;
    (prop::collection::vec(-6i64..=6, d), 1i64..=5)
        .prop_filter("nonzero", |(c, _)| c.iter().any(|&x| x != 0))
        .prop_map(move |(c, q)| element(&k, &c, q))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn inverse_and_negation_keep_height(x in arb_element(field(3, 10))) {
        let h = weil_height(&x, PREC).unwrap();
        prop_assert!(h.overlaps(&weil_height(&x.neg(), PREC).unwrap()));
        prop_assert!(h.overlaps(&weil_height(&x.invert().unwrap(), PREC).unwrap()));
        let one = x.mul(&x.invert().unwrap()).unwrap();
        prop_assert_eq!(one, FieldElement::from_integer(x.field().clone(), 1));
    }

    #[test]
    fn height_is_submultiplicative(x in arb_element(field(5, 12)), y in arb_element(field(5, 12))) {
        let hx = weil_height(&x, PREC).unwrap();
        let hy = weil_height(&y, PREC).unwrap();
        let hxy = weil_height(&x.mul(&y).unwrap(), PREC).unwrap();
        prop_assert!(hxy.lo() <= &(hx.hi() * hy.hi()));
    }

    #[test]
    fn minimal_polynomial_vanishes(x in arb_element(field(3, 6))) {
        let f = x.minimal_polynomial();
        prop_assert!(f.is_canonical());
        // evaluate f at x inside the field
        let mut acc = FieldElement::from_integer(x.field().clone(), 0);
        for c in f.coeffs().iter().rev() {
            acc = acc.mul(&x).unwrap().add(&FieldElement::from_rational(x.field().clone(), &BigRational::from_integer(c.clone()))).unwrap();
        }
        prop_assert!(acc.is_zero());
        prop_assert!(weil_height(&x, PREC).unwrap().overlaps(&weil_height_via_minpoly(&x, PREC).unwrap()));
    }
}

#[test]
fn known_heights_are_exact_rationals_when_they_should_be() {
    let k = field(3, 2);
    let h = weil_height(&FieldElement::theta(k.clone()), PREC).unwrap();
    assert!(h.contains(&rat(2, 1)));
    let m = mahler_measure(&IntPolynomial::from_i64s(&[-1, 0, 0, 2]).unwrap(), PREC).unwrap();
    assert!(m.contains(&rat(2, 1)));
    // t/5 in Q(150^(1/3)) has minimal polynomial 5x^3 - 6
    let k = field(3, 150);
    let x = FieldElement::parse(k.clone(), "t/5").unwrap();
    assert_eq!(x.minimal_polynomial(), IntPolynomial::from_i64s(&[-6, 0, 0, 5]).unwrap());
    assert!(weil_height(&x, PREC).unwrap().contains(&rat(6, 1)));
}

#[test]
fn smallest_generator_of_q_cuberoot_150() {
    let k = field(3, 150);
    assert_eq!(disc_exact_cubic(&k).unwrap(), BigUint::from(24_300u32));
    let opts = EnumerationOptions::default();
    match min_generator(&k, &rat(151, 1), &opts).unwrap() {
        MinGenerator::Found { eta, witness, .. } => {
            assert!(eta.contains(&rat(6, 1)) && eta.hi() < &rat(61, 10));
            assert_eq!(weil_height(&witness.element, PREC).unwrap().mid_f64().round(), 6.0);
        }
        other => panic!("expected a generator, got {other:?}"),
    }
}

#[test]
fn enumeration_is_closed_under_negation_and_finds_theta() {
    let k = field(3, 12);
    let out = count_primitive(&k, &rat(13, 1), &EnumerationOptions::default()).unwrap();
    assert!(out.ambiguous.is_empty());
    assert_eq!(out.count as usize, out.witnesses.len());
    assert_eq!(out.count % 2, 0);
    let found: std::collections::BTreeSet<String> = out.witnesses.iter().map(|w| w.element.to_string()).collect();
    for w in &out.witnesses {
        assert!(found.contains(&w.element.neg().to_string()));
        assert!(w.element.is_primitive());
        assert!(w.height.hi() < &rat(13, 1));
    }
    assert!(found.contains("t"));
}
