use num_rational::BigRational;

use super::*;
use crate::dvr::rat;

#[test]
fn half_discriminant_examples() {
    assert_eq!(TernaryForm::from_ints([1, 1, 1, 0, 0, 0]).half_discriminant(), rat(4));
    assert_eq!(TernaryForm::from_ints([1, 1, -9, 0, 0, 0]).half_discriminant(), rat(-36));
    assert_eq!(TernaryForm::from_ints([0, 1, 1, 1, 0, 0]).half_discriminant(), rat(0));
}

#[test]
fn multiplication_examples() {
    let alg = TernaryForm::from_ints([1, 1, 1, 0, 0, 0]).algebra_over_q();
    let (i, j, k) = (alg.basis(1), alg.basis(2), alg.basis(3));
    assert_eq!(alg.mul(&i, &i), C0Element::from_ints([-1, 0, 0, 0]));
    assert_eq!(alg.mul(&i, &j), C0Element::from_ints([0, 0, 0, -1]));
    assert_eq!(alg.mul(&j, &i), C0Element::from_ints([0, 0, 0, 1]));
    assert_eq!(alg.mul(&k, &k), C0Element::from_ints([-1, 0, 0, 0]));
}

#[test]
fn norm_trace_conj_examples() {
    let alg = TernaryForm::from_ints([1, 1, 1, 0, 0, 0]).algebra_over_q();
    let x = C0Element::from_ints([2, 3, 0, 0]);
    assert_eq!(alg.norm(&x), rat(13));
    assert_eq!(alg.trace(&x), rat(4));
    let one = alg.one();
    assert_eq!(alg.norm(&one), rat(1));
    assert_eq!(alg.trace(&one), rat(2));
    assert_eq!(alg.conj(&one), one);
    let i = alg.basis(1);
    let char_poly = alg.add(&alg.mul(&i, &i), &alg.scalar(&alg.norm(&i)));
    assert!(alg.is_zero(&char_poly));
}

#[test]
fn nilpotent_examples() {
    let alg = TernaryForm::from_ints([1, 1, -9, 0, 0, 0]).algebra_over_q();
    assert!(alg.is_nilpotent(&alg.zero()));
    assert!(alg.is_nilpotent(&C0Element::from_ints([0, 0, 1, -3])));
    assert!(!alg.is_nilpotent(&alg.one()));
}

#[test]
fn form_json_roundtrip() {
    let f = TernaryForm::new([rat(1), rat(-1), BigRational::new(1.into(), 2.into()), rat(0), rat(3), rat(0)]);
    let s = serde_json::to_string(&f).unwrap();
    assert_eq!(s, r#"{"a":"1","b":"-1","c":"1/2","u":"0","v":"3","w":"0"}"#);
    let back: TernaryForm = serde_json::from_str(&s).unwrap();
    assert_eq!(back, f);
    assert_eq!(f.to_string(), "(1,-1,1/2,0,3,0)");
}

#[test]
fn element_display() {
    assert_eq!(C0Element::from_ints([0, 0, 1, -3]).to_string(), "j - 3k");
    assert_eq!(C0Element::from_ints([9, 0, 1, -3]).to_string(), "9 + j - 3k");
    assert_eq!(C0Element::from_ints([0, 0, 0, 0]).to_string(), "0");
}

mod props {
    use proptest::prelude::*;

    use super::super::*;

    fn coeffs() -> impl Strategy<Value = [i64; 6]> {
        prop::array::uniform6(-6i64..=6)
    }

    fn elem() -> impl Strategy<Value = [i64; 4]> {
        prop::array::uniform4(-9i64..=9)
    }

    proptest! {
        #[test]
        fn rational_identities(c in coeffs(), x in elem(), y in elem(), z in elem()) {
            let alg = TernaryForm::from_ints(c).algebra_over_q();
            let (x, y, z) = (C0Element::from_ints(x), C0Element::from_ints(y), C0Element::from_ints(z));
            prop_assert_eq!(alg.mul(&alg.mul(&x, &y), &z), alg.mul(&x, &alg.mul(&y, &z)));
            prop_assert_eq!(alg.conj(&alg.mul(&x, &y)), alg.mul(&alg.conj(&y), &alg.conj(&x)));
            prop_assert_eq!(alg.conj(&alg.conj(&x)), x.clone());
            prop_assert_eq!(alg.norm(&alg.mul(&x, &y)), alg.norm(&x) * alg.norm(&y));
            prop_assert_eq!(alg.mul(&x, &alg.conj(&x)), alg.scalar(&alg.norm(&x)));
            prop_assert_eq!(alg.mul(&alg.conj(&x), &x), alg.scalar(&alg.norm(&x)));
            let sum = alg.add(&x, &y);
            prop_assert_eq!(alg.norm(&sum) - alg.norm(&x) - alg.norm(&y), alg.bilinear(&x, &y));
        }

        #[test]
        fn residue_identities(c in coeffs(), x in elem(), y in elem(), p in prop::sample::select(vec![2u64, 3, 5])) {
            let alg = TernaryForm::from_ints(c).algebra_mod(ZModPk::new(p, 1).unwrap()).unwrap();
            let (x, y) = (alg.element(x), alg.element(y));
            let r = alg.ring();
            prop_assert_eq!(alg.norm(&alg.mul(&x, &y)), r.mul(&alg.norm(&x), &alg.norm(&y)));
            let cp = alg.add(
                &alg.sub(&alg.mul(&x, &x), &alg.scale(&alg.trace(&x), &x)),
                &alg.scalar(&alg.norm(&x)),
            );
            prop_assert!(alg.is_zero(&cp));
            prop_assert_eq!(alg.is_nilpotent(&x), alg.is_zero(&alg.mul(&x, &x)));
        }
    }
}
