//! The Eichler order `R = [[D, pi^n D], [D, D]]` of level `n` in `M_2(Q)`.
//!
//! Matrices keep the literal (1,2) entry; the coefficient usually written `b`
//! with `b_raw = b * pi^n` is recovered by [`EichlerOrder::b_coefficient`].

mod atoms;
mod monoid;

pub use atoms::{AtomClass, CanonicalAtom, CanonicalRightAssociate};

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::dvr::{Dvr, DvrError, Valuation};
use crate::mat2::Mat2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EichlerError {
    #[error("level {0} is hereditary; factorization routines need level >= 2")]
    Hereditary(u32),
    #[error("{0} is not an element of the order")]
    NotMember(Mat2),
    #[error("{0} is a zero divisor")]
    NotCancellative(Mat2),
    #[error("{0} is a unit")]
    Unit(Mat2),
    #[error("{0} is not a unit")]
    NotUnit(Mat2),
    #[error("{0} is not an atom")]
    NotAtom(Mat2),
    #[error("{0} does not lie in the valuation ring or is not a non-unit")]
    BadScalar(String),
    #[error("atom search at norm valuation {0} exceeds the enumeration limit")]
    TooManyAtoms(u32),
    #[error(transparent)]
    Dvr(#[from] DvrError),
}

/// Unit factors `E = L * Delta * U` of an element of `R^x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitDecomposition {
    pub lower: Mat2,
    pub diagonal: Mat2,
    pub upper: Mat2,
}

/// `matrix = left * source * right` with `left`, `right` units.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecialAssociate {
    pub left: Mat2,
    pub matrix: Mat2,
    pub right: Mat2,
}

pub struct EichlerOrder {
    dvr: Dvr,
    level: u32,
    pi_n: BigRational,
    atom_cache: Mutex<BTreeMap<u32, Arc<Vec<atoms::AtomEntry>>>>,
}

impl Clone for EichlerOrder {
    fn clone(&self) -> Self {
        EichlerOrder::with_dvr(self.dvr.clone(), self.level)
    }
}

impl std::fmt::Debug for EichlerOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("EichlerOrder")
            .field("p", &self.dvr.prime())
            .field("level", &self.level)
            .finish()
    }
}

impl EichlerOrder {
    pub fn new(p: u64, level: u32) -> Result<Self, EichlerError> {
        Ok(EichlerOrder::with_dvr(Dvr::new(p)?, level))
    }

    pub fn with_dvr(dvr: Dvr, level: u32) -> Self {
        let pi_n = dvr.pi_pow(level as i64);
        EichlerOrder {
            dvr,
            level,
            pi_n,
            atom_cache: Mutex::new(BTreeMap::new()),
        }
    }

    pub fn dvr(&self) -> &Dvr {
        &self.dvr
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn prime(&self) -> u64 {
        self.dvr.prime()
    }

    pub fn pi_n(&self) -> &BigRational {
        &self.pi_n
    }

    pub fn pi(&self) -> BigRational {
        self.dvr.pi_pow(1)
    }

    pub(crate) fn require_non_hereditary(&self) -> Result<(), EichlerError> {
        if self.level < 2 {
            Err(EichlerError::Hereditary(self.level))
        } else {
            Ok(())
        }
    }

    pub fn v(&self, x: &BigRational) -> Valuation {
        self.dvr.valuation(x)
    }

    /// `b` with `b_raw = b * pi^n`.
    pub fn b_coefficient(&self, m: &Mat2) -> BigRational {
        &m.b / &self.pi_n
    }

    pub fn contains(&self, m: &Mat2) -> bool {
        self.dvr.contains(&m.a)
            && self.dvr.contains(&m.c)
            && self.dvr.contains(&m.d)
            && self.v(&m.b).at_least(self.level as i64)
    }

    fn require_member(&self, m: &Mat2) -> Result<(), EichlerError> {
        if self.contains(m) {
            Ok(())
        } else {
            Err(EichlerError::NotMember(m.clone()))
        }
    }

    /// Reduced norm, reduced trace and conjugate.
    pub fn nr_tr_adj(&self, m: &Mat2) -> (BigRational, BigRational, Mat2) {
        (m.det(), m.trace(), m.adj())
    }

    pub fn norm_valuation(&self, m: &Mat2) -> Valuation {
        self.v(&m.det())
    }

    pub fn is_unit(&self, m: &Mat2) -> Result<bool, EichlerError> {
        self.require_member(m)?;
        Ok(self.v(&m.a) == Valuation::Finite(0) && self.v(&m.d) == Valuation::Finite(0))
    }

    pub fn is_cancellative(&self, m: &Mat2) -> Result<bool, EichlerError> {
        self.require_member(m)?;
        Ok(!m.det().is_zero())
    }

    pub fn in_jacobson(&self, m: &Mat2) -> Result<bool, EichlerError> {
        self.require_member(m)?;
        Ok(self.v(&m.a).at_least(1) && self.v(&m.d).at_least(1))
    }

    /// Checks the common preconditions of the factorization routines.
    pub(crate) fn require_cancellative_non_unit(&self, m: &Mat2) -> Result<(), EichlerError> {
        self.require_non_hereditary()?;
        if !self.is_cancellative(m)? {
            return Err(EichlerError::NotCancellative(m.clone()));
        }
        if self.is_unit(m)? {
            return Err(EichlerError::Unit(m.clone()));
        }
        Ok(())
    }

    /// Atom test: `v(nr) = 1`, or `v(b) = v(c) = 0` with `v(a), v(d) > 0`.
    pub fn is_atom(&self, m: &Mat2) -> Result<bool, EichlerError> {
        self.require_cancellative_non_unit(m)?;
        if self.norm_valuation(m) == Valuation::Finite(1) {
            return Ok(true);
        }
        let zero = Valuation::Finite(0);
        Ok(self.v(&self.b_coefficient(m)) == zero
            && self.v(&m.c) == zero
            && self.v(&m.a).at_least(1)
            && self.v(&m.d).at_least(1))
    }

    pub fn unit_decompose(&self, e: &Mat2) -> Result<UnitDecomposition, EichlerError> {
        if !self.is_unit(e)? {
            return Err(EichlerError::NotUnit(e.clone()));
        }
        let a_inv = e.a.recip();
        let zero = BigRational::zero();
        let one = BigRational::one();
        let lower = Mat2::new(one.clone(), zero.clone(), &e.c * &a_inv, one.clone());
        let diagonal = Mat2::diag(e.a.clone(), &e.d - &e.c * &a_inv * &e.b);
        let upper = Mat2::new(one.clone(), &a_inv * &e.b, zero, one);
        Ok(UnitDecomposition {
            lower,
            diagonal,
            upper,
        })
    }

    /// Row and column reductions to an associate whose corner valuations satisfy
    /// `v(c) <= min(v(a), v(d)) <= v(b) + n <= min(v(a), v(d)) + n <= v(c) + 2n`.
    pub fn special_associate(&self, m: &Mat2) -> Result<SpecialAssociate, EichlerError> {
        self.require_member(m)?;
        if !self.is_cancellative(m)? {
            return Err(EichlerError::NotCancellative(m.clone()));
        }
        let n = self.level as i64;
        let zero = BigRational::zero();
        let one = BigRational::one();
        // Elementary units of R.
        let add_col2_to_col1 = Mat2::new(one.clone(), zero.clone(), one.clone(), one.clone());
        let add_row1_to_row2 = add_col2_to_col1.clone();
        let add_pin_row2_to_row1 = Mat2::new(one.clone(), self.pi_n.clone(), zero.clone(), one.clone());
        let add_pin_col1_to_col2 = add_pin_row2_to_row1.clone();

        let mut left = Mat2::identity();
        let mut a = m.clone();
        let mut right = Mat2::identity();
        let v = |x: &BigRational| self.v(x);

        if v(&a.a) > v(&a.b) {
            a = &a * &add_col2_to_col1;
            right = &right * &add_col2_to_col1;
        }
        if v(&a.d) > v(&a.b) {
            a = &add_row1_to_row2 * &a;
            left = &add_row1_to_row2 * &left;
        }

        let corner_min = v(&a.a).min(v(&a.d));
        if v(&a.c) > corner_min {
            if v(&a.a) <= v(&a.d) {
                a = &add_row1_to_row2 * &a;
                left = &add_row1_to_row2 * &left;
            } else {
                a = &a * &add_col2_to_col1;
                right = &right * &add_col2_to_col1;
            }
        }

        if v(&a.a) > v(&a.c).shift(n) {
            a = &add_pin_row2_to_row1 * &a;
            left = &add_pin_row2_to_row1 * &left;
        }
        if v(&a.d) > v(&a.c).shift(n) {
            a = &a * &add_pin_col1_to_col2;
            right = &right * &add_pin_col1_to_col2;
        }

        let corner_min = v(&a.a).min(v(&a.d));
        if v(&a.b) > corner_min.shift(n) {
            if v(&a.a) <= v(&a.d) {
                a = &a * &add_pin_col1_to_col2;
                right = &right * &add_pin_col1_to_col2;
            } else {
                a = &add_pin_row2_to_row1 * &a;
                left = &add_pin_row2_to_row1 * &left;
            }
        }

        Ok(SpecialAssociate {
            left,
            matrix: a,
            right,
        })
    }

    /// Whether the corner valuations of `m` satisfy the special-associate chain.
    pub fn satisfies_special_chain(&self, m: &Mat2) -> bool {
        let n = self.level as i64;
        let vc = self.v(&m.c);
        let corner_min = self.v(&m.a).min(self.v(&m.d));
        let v12 = self.v(&m.b);
        vc <= corner_min
            && corner_min <= v12
            && v12 <= corner_min.shift(n)
            && corner_min.shift(n) <= vc.shift(2 * n)
    }

    /// An atom with determinant exactly `a`, for any non-zero non-unit `a` in `D`.
    pub fn long_atom(&self, a: &BigRational) -> Result<Mat2, EichlerError> {
        self.require_non_hereditary()?;
        if !self.dvr.contains(a) {
            return Err(EichlerError::BadScalar(crate::dvr::format_rational(a)));
        }
        match self.v(a) {
            Valuation::Finite(1) => Ok(Mat2::diag(a.clone(), BigRational::one())),
            Valuation::Finite(s) if s > 1 => {
                let pi = self.pi();
                let corner = a / &pi + self.dvr.pi_pow(self.level as i64 - 1);
                Ok(Mat2::new(corner, self.pi_n.clone(), BigRational::one(), pi))
            }
            _ => Err(EichlerError::BadScalar(crate::dvr::format_rational(a))),
        }
    }

    /// `u^{-1} x` when it lies in `R`.
    pub fn exact_left_divide(&self, u: &Mat2, x: &Mat2) -> Option<Mat2> {
        let q = u.inverse()? * x.clone();
        self.contains(&q).then_some(q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dvr::{rat, ratio};
    use proptest::prelude::*;

    fn r32() -> EichlerOrder {
        EichlerOrder::new(3, 2).unwrap()
    }

    #[test]
    fn membership() {
        let r = r32();
        assert!(r.contains(&Mat2::from_ints(1, 9, 1, 1)));
        assert!(!r.contains(&Mat2::from_ints(1, 3, 1, 1)));
        assert!(!r.contains(&Mat2::new(ratio(1, 3), rat(0), rat(0), rat(1))));
        assert!(r.contains(&Mat2::new(ratio(1, 2), rat(0), rat(5), ratio(4, 7))));
    }

    #[test]
    fn units_and_cancellative() {
        let r = r32();
        assert!(r.is_unit(&Mat2::identity()).unwrap());
        assert!(r.is_unit(&Mat2::from_ints(2, 9, 1, 1)).unwrap());
        assert!(!r.is_unit(&Mat2::from_ints(3, 0, 0, 1)).unwrap());
        assert!(r.is_unit(&Mat2::from_ints(1, 3, 1, 1)).is_err());
        assert!(!r.is_cancellative(&Mat2::from_ints(3, 9, 1, 3)).unwrap());
        assert!(r.is_cancellative(&Mat2::from_ints(3, 9, 1, 6)).unwrap());
        assert!(!r.is_cancellative(&Mat2::zero()).unwrap());
    }

    #[test]
    fn atoms_by_valuation_pattern() {
        let r = r32();
        assert!(r.is_atom(&Mat2::from_ints(3, 0, 0, 1)).unwrap());
        assert!(r.is_atom(&Mat2::from_ints(3, 9, 1, 6)).unwrap());
        assert!(!r.is_atom(&Mat2::from_ints(3, 0, 0, 3)).unwrap());
        assert!(matches!(r.is_atom(&Mat2::identity()), Err(EichlerError::Unit(_))));
        assert!(matches!(
            r.is_atom(&Mat2::from_ints(3, 9, 1, 3)),
            Err(EichlerError::NotCancellative(_))
        ));
        let hereditary = EichlerOrder::new(3, 1).unwrap();
        assert_eq!(
            hereditary.is_atom(&Mat2::from_ints(3, 0, 0, 1)),
            Err(EichlerError::Hereditary(1))
        );
    }

    #[test]
    fn diag_pi_is_a_product_of_two_non_units() {
        let r = r32();
        let x = Mat2::from_ints(3, 0, 0, 1);
        let y = Mat2::from_ints(1, 0, 0, 3);
        assert_eq!(&x * &y, Mat2::from_ints(3, 0, 0, 3));
        assert!(!r.is_unit(&x).unwrap() && !r.is_unit(&y).unwrap());
    }

    #[test]
    fn jacobson_membership() {
        let r = r32();
        assert!(r.in_jacobson(&Mat2::from_ints(3, 9, 1, 6)).unwrap());
        assert!(!r.in_jacobson(&Mat2::from_ints(1, 9, 1, 18)).unwrap());
        assert!(r.in_jacobson(&Mat2::from_ints(3, 0, 0, 3)).unwrap());
    }

    #[test]
    fn unit_decomposition_examples() {
        let r = r32();
        let id = r.unit_decompose(&Mat2::identity()).unwrap();
        assert_eq!(id.lower, Mat2::identity());
        assert_eq!(id.diagonal, Mat2::identity());
        assert_eq!(id.upper, Mat2::identity());

        let e = Mat2::from_ints(2, 9, 1, 1);
        let dec = r.unit_decompose(&e).unwrap();
        assert_eq!(dec.lower, Mat2::new(rat(1), rat(0), ratio(1, 2), rat(1)));
        assert_eq!(dec.diagonal, Mat2::diag(rat(2), ratio(-7, 2)));
        assert_eq!(dec.upper, Mat2::new(rat(1), ratio(9, 2), rat(0), rat(1)));

        let l = Mat2::from_ints(1, 0, 5, 1);
        let dec = r.unit_decompose(&l).unwrap();
        assert_eq!((dec.lower, dec.diagonal, dec.upper), (l, Mat2::identity(), Mat2::identity()));
        assert!(r.unit_decompose(&Mat2::from_ints(3, 0, 0, 1)).is_err());
    }

    #[test]
    fn special_associate_of_diagonal() {
        let r = r32();
        let m = Mat2::from_ints(27, 0, 0, 1);
        let s = r.special_associate(&m).unwrap();
        assert!(r.satisfies_special_chain(&s.matrix));
        assert_eq!(r.norm_valuation(&s.matrix), Valuation::Finite(3));
        assert_eq!(s.matrix, &(&s.left * &m) * &s.right);
        assert_eq!(s.matrix, Mat2::from_ints(36, 9, 1, 1));

        let already = Mat2::from_ints(3, 9, 1, 6);
        assert!(r.satisfies_special_chain(&already));
        assert_eq!(r.special_associate(&already).unwrap().matrix, already);
    }

    #[test]
    fn long_atoms_have_prescribed_determinant() {
        for (p, n) in [(2u64, 2u32), (3, 2), (3, 3), (5, 4)] {
            let r = EichlerOrder::new(p, n).unwrap();
            for s in 1..=8i64 {
                for unit in [1i64, 2, 7] {
                    if unit % p as i64 == 0 {
                        continue;
                    }
                    let a = rat(unit) * r.dvr().pi_pow(s);
                    let u = r.long_atom(&a).unwrap();
                    assert!(r.contains(&u));
                    assert_eq!(u.det(), a);
                    assert!(r.is_atom(&u).unwrap(), "p={p} n={n} s={s}");
                }
            }
        }
    }

    fn member(p: i64, n: u32) -> impl Strategy<Value = Mat2> {
        let pn = p.pow(n);
        (-30i64..30, -30i64..30, -30i64..30, -30i64..30, 1i64..5).prop_map(move |(a, b, c, d, den)| {
            let den = if den % p == 0 { den + 1 } else { den };
            Mat2::new(ratio(a, den), rat(b * pn), rat(c), ratio(d, den))
        })
    }

    fn unit(p: i64, n: u32) -> impl Strategy<Value = Mat2> {
        member(p, n).prop_map(move |m| {
            let bump = |x: BigRational| {
                if Dvr::new(p as u64).unwrap().valuation(&x).at_least(1) {
                    x + rat(1)
                } else {
                    x
                }
            };
            Mat2::new(bump(m.a), m.b, m.c, bump(m.d))
        })
    }

    proptest! {
        #[test]
        fn corner_valuations_add_below_level(x in member(3, 3), y in member(3, 3), z in member(3, 3)) {
            let r = EichlerOrder::new(3, 3).unwrap();
            prop_assume!(!x.det().is_zero() && !y.det().is_zero() && !z.det().is_zero());
            let prod = &(&x * &y) * &z;
            let n = Valuation::Finite(3);
            if r.v(&prod.a) < n {
                prop_assert_eq!(r.v(&prod.a), r.v(&x.a).add(r.v(&y.a)).add(r.v(&z.a)));
            }
            if r.v(&prod.d) < n {
                prop_assert_eq!(r.v(&prod.d), r.v(&x.d).add(r.v(&y.d)).add(r.v(&z.d)));
            }
        }

        #[test]
        fn associates_keep_small_corners(x in member(2, 3), e in unit(2, 3), f in unit(2, 3)) {
            let r = EichlerOrder::new(2, 3).unwrap();
            prop_assume!(!x.det().is_zero());
            let y = &(&e * &x) * &f;
            let n = Valuation::Finite(3);
            if r.v(&x.a) < n {
                prop_assert_eq!(r.v(&y.a), r.v(&x.a));
            }
            if r.v(&x.d) < n {
                prop_assert_eq!(r.v(&y.d), r.v(&x.d));
            }
        }

        #[test]
        fn unit_decomposition_multiplies_back(e in unit(3, 2)) {
            let r = r32();
            let dec = r.unit_decompose(&e).unwrap();
            prop_assert_eq!(&(&dec.lower * &dec.diagonal) * &dec.upper, e);
            prop_assert!(r.is_unit(&dec.lower).unwrap() && r.is_unit(&dec.upper).unwrap());
            prop_assert!(r.is_unit(&dec.diagonal).unwrap());
            prop_assert!(dec.diagonal.b.is_zero() && dec.diagonal.c.is_zero());
        }

        #[test]
        fn unit_iff_unit_norm(x in member(3, 2)) {
            let r = r32();
            let unit = r.is_unit(&x).unwrap();
            prop_assert_eq!(unit, r.norm_valuation(&x) == Valuation::Finite(0));
            if unit {
                prop_assert!(r.contains(&x.inverse().unwrap()));
            }
        }

        #[test]
        fn special_associate_chain_holds(x in member(3, 2)) {
            let r = r32();
            prop_assume!(!x.det().is_zero());
            let s = r.special_associate(&x).unwrap();
            prop_assert!(r.satisfies_special_chain(&s.matrix), "{}", s.matrix);
            prop_assert_eq!(&(&s.left * &x) * &s.right, s.matrix.clone());
            prop_assert!(r.is_unit(&s.left).unwrap() && r.is_unit(&s.right).unwrap());
        }
    }
}
