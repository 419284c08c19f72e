//! 2x2 matrices over `Q`, the carrier for Eichler-order elements.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::dvr::{format_rational, rat, RationalString};

/// `[[a, b], [c, d]]`, with `b` the literal (1,2) entry.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat2 {
    pub a: BigRational,
    pub b: BigRational,
    pub c: BigRational,
    pub d: BigRational,
}

impl Mat2 {
    pub fn new(a: BigRational, b: BigRational, c: BigRational, d: BigRational) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Self {
        Mat2::new(rat(a), rat(b), rat(c), rat(d))
    }

    pub fn from_bigints(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Self {
        Mat2::new(
            BigRational::from_integer(a),
            BigRational::from_integer(b),
            BigRational::from_integer(c),
            BigRational::from_integer(d),
        )
    }

    pub fn identity() -> Self {
        Mat2::from_ints(1, 0, 0, 1)
    }

    pub fn zero() -> Self {
        Mat2::from_ints(0, 0, 0, 0)
    }

    pub fn diag(a: BigRational, d: BigRational) -> Self {
        Mat2::new(a, BigRational::zero(), BigRational::zero(), d)
    }

    pub fn scalar(x: BigRational) -> Self {
        Mat2::diag(x.clone(), x)
    }

    pub fn det(&self) -> BigRational {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn trace(&self) -> BigRational {
        &self.a + &self.d
    }

    /// `[[d, -b], [-c, a]]`; `A * adj(A) = det(A) * I`.
    pub fn adj(&self) -> Mat2 {
        Mat2::new(
            self.d.clone(),
            -self.b.clone(),
            -self.c.clone(),
            self.a.clone(),
        )
    }

    pub fn scale(&self, x: &BigRational) -> Mat2 {
        Mat2::new(&self.a * x, &self.b * x, &self.c * x, &self.d * x)
    }

    pub fn inverse(&self) -> Option<Mat2> {
        let det = self.det();
        if det.is_zero() {
            return None;
        }
        Some(self.adj().scale(&det.recip()))
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_one() && self.b.is_zero() && self.c.is_zero() && self.d.is_one()
    }

    pub fn entries(&self) -> [&BigRational; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }
}

impl<'a> Mul<&'a Mat2> for &'a Mat2 {
    type Output = Mat2;
    fn mul(self, o: &'a Mat2) -> Mat2 {
        Mat2::new(
            &self.a * &o.a + &self.b * &o.c,
            &self.a * &o.b + &self.b * &o.d,
            &self.c * &o.a + &self.d * &o.c,
            &self.c * &o.b + &self.d * &o.d,
        )
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, o: Mat2) -> Mat2 {
        &self * &o
    }
}

impl<'a> Add<&'a Mat2> for &'a Mat2 {
    type Output = Mat2;
    fn add(self, o: &'a Mat2) -> Mat2 {
        Mat2::new(&self.a + &o.a, &self.b + &o.b, &self.c + &o.c, &self.d + &o.d)
    }
}

impl<'a> Sub<&'a Mat2> for &'a Mat2 {
    type Output = Mat2;
    fn sub(self, o: &'a Mat2) -> Mat2 {
        Mat2::new(&self.a - &o.a, &self.b - &o.b, &self.c - &o.c, &self.d - &o.d)
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        Mat2::new(-self.a, -self.b, -self.c, -self.d)
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            format_rational(&self.a),
            format_rational(&self.b),
            format_rational(&self.c),
            format_rational(&self.d)
        )
    }
}

// JSON form: [["a","b"],["c","d"]].
impl Serialize for Mat2 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows = [
            [RationalString(self.a.clone()), RationalString(self.b.clone())],
            [RationalString(self.c.clone()), RationalString(self.d.clone())],
        ];
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Mat2 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let [[a, b], [c, dd]] = <[[RationalString; 2]; 2]>::deserialize(d)?;
        Ok(Mat2::new(a.0, b.0, c.0, dd.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dvr::ratio;
    use proptest::prelude::*;

    #[test]
    fn adjugate_and_norm() {
        let m = Mat2::from_ints(3, 9, 1, 6);
        assert_eq!(m.det(), rat(9));
        assert_eq!(m.trace(), rat(9));
        assert_eq!(m.adj(), Mat2::from_ints(6, -9, -1, 3));
        assert_eq!(Mat2::from_ints(3, 9, 3, 18).det(), rat(27));
        let id = Mat2::identity();
        assert_eq!((id.det(), id.trace(), id.adj()), (rat(1), rat(2), id));
    }

    #[test]
    fn json_roundtrip() {
        let m = Mat2::new(ratio(1, 2), rat(9), rat(-3), ratio(-7, 4));
        let js = serde_json::to_string(&m).unwrap();
        assert_eq!(js, r#"[["1/2","9"],["-3","-7/4"]]"#);
        let back: Mat2 = serde_json::from_str(&js).unwrap();
        assert_eq!(back, m);
    }

    fn mat() -> impl Strategy<Value = Mat2> {
        prop::array::uniform4((-40i64..40, 1i64..9))
            .prop_map(|e| Mat2::new(ratio(e[0].0, e[0].1), ratio(e[1].0, e[1].1), ratio(e[2].0, e[2].1), ratio(e[3].0, e[3].1)))
    }

    proptest! {
        #[test]
        fn adjugate_identity(m in mat()) {
            prop_assert_eq!(&m * &m.adj(), Mat2::scalar(m.det()));
            prop_assert_eq!(&m.adj() * &m, Mat2::scalar(m.det()));
        }

        #[test]
        fn det_is_multiplicative(x in mat(), y in mat()) {
            prop_assert_eq!((&x * &y).det(), x.det() * y.det());
            prop_assert_eq!((&x * &y).adj(), &y.adj() * &x.adj());
        }
    }
}
