//! Exact arithmetic in the local ring `D = Z_(p)` and its fraction field `K = Q`.
//!
//! Elements of `K` are plain [`BigRational`]s; an element lies in `D` when its
//! reduced denominator is coprime to `p`. The uniformizer is `p` itself.
//!
//! Every invariant computed here over `Z_(p)` coincides with the one over the
//! completion `Z_p`, because the inclusion of the non-zero-divisor monoids is a
//! transfer homomorphism. No completions are modelled in code.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DvrError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} does not lie in the valuation ring")]
    NotInRing(String),
    #[error("cannot parse rational {0:?}")]
    Parse(String),
}

/// The valuation of an element of `K`; zero has valuation [`Valuation::Infinite`].
///
/// The derived order places every finite value below `Infinite`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinite)
    }

    /// Shift by an integer; infinity absorbs.
    pub fn shift(self, by: i64) -> Valuation {
        match self {
            Valuation::Finite(v) => Valuation::Finite(v + by),
            Valuation::Infinite => Valuation::Infinite,
        }
    }

    /// Sum of two valuations (the valuation of a product).
    pub fn add(self, other: Valuation) -> Valuation {
        match (self, other) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }

    /// `self >= bound` for a finite bound.
    pub fn at_least(self, bound: i64) -> bool {
        self >= Valuation::Finite(bound)
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

/// An element of the canonical residue system `R(m) = {0, ..., p^m - 1}` of `D / p^m D`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ResidueClass {
    pub modulus_exponent: u32,
    pub representative: BigInt,
}

/// `D = Z_(p)`, localized at a fixed prime `p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Dvr {
    p: u64,
    p_big: BigInt,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Dvr {
    pub fn new(p: u64) -> Result<Self, DvrError> {
        if !is_prime(p) {
            return Err(DvrError::NotPrime(p));
        }
        Ok(Dvr {
            p,
            p_big: BigInt::from(p),
        })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn prime_big(&self) -> &BigInt {
        &self.p_big
    }

    /// `p^e` as an integer, `e >= 0`.
    pub fn p_pow_int(&self, e: u32) -> BigInt {
        num_traits::pow(self.p_big.clone(), e as usize)
    }

    /// `pi^e` in `K`; negative exponents allowed.
    pub fn pi_pow(&self, e: i64) -> BigRational {
        let magnitude = self.p_pow_int(e.unsigned_abs() as u32);
        if e >= 0 {
            BigRational::from_integer(magnitude)
        } else {
            BigRational::new(BigInt::one(), magnitude)
        }
    }

    /// Exponent of `p` in a non-zero integer.
    fn int_valuation(&self, n: &BigInt) -> i64 {
        debug_assert!(!n.is_zero());
        let mut n = n.abs();
        let mut v = 0;
        loop {
            let (q, r) = n.div_rem(&self.p_big);
            if !r.is_zero() {
                return v;
            }
            n = q;
            v += 1;
        }
    }

    pub fn valuation(&self, x: &BigRational) -> Valuation {
        if x.is_zero() {
            return Valuation::Infinite;
        }
        Valuation::Finite(self.int_valuation(x.numer()) - self.int_valuation(x.denom()))
    }

    pub fn valuation_of_int(&self, n: &BigInt) -> Valuation {
        if n.is_zero() {
            Valuation::Infinite
        } else {
            Valuation::Finite(self.int_valuation(n))
        }
    }

    /// Membership in `D`: the reduced denominator is prime to `p`.
    pub fn contains(&self, x: &BigRational) -> bool {
        !x.denom().is_multiple_of(&self.p_big)
    }

    pub fn is_unit(&self, x: &BigRational) -> Result<bool, DvrError> {
        if !self.contains(x) {
            return Err(DvrError::NotInRing(format_rational(x)));
        }
        Ok(self.valuation(x) == Valuation::Finite(0))
    }

    pub fn div(&self, x: &BigRational, y: &BigRational) -> Result<BigRational, DvrError> {
        if y.is_zero() {
            return Err(DvrError::DivisionByZero);
        }
        Ok(x / y)
    }

    /// `x / pi^v(x)`, the unit part of a non-zero element.
    pub fn unit_part(&self, x: &BigRational) -> BigRational {
        match self.valuation(x) {
            Valuation::Finite(v) => x * self.pi_pow(-v),
            Valuation::Infinite => BigRational::zero(),
        }
    }

    /// The representative in `R(m)` of `x mod pi^m D`.
    pub fn residue(&self, x: &BigRational, m: u32) -> Result<ResidueClass, DvrError> {
        if !self.contains(x) {
            return Err(DvrError::NotInRing(format_rational(x)));
        }
        let modulus = self.p_pow_int(m);
        let representative = if modulus.is_one() {
            BigInt::zero()
        } else {
            let inv = mod_inverse(x.denom(), &modulus)
                .expect("denominator is a unit modulo p^m");
            (x.numer() * inv).mod_floor(&modulus)
        };
        Ok(ResidueClass {
            modulus_exponent: m,
            representative,
        })
    }

    /// `residue(x, m)` lifted back to `K` as an integer.
    pub fn reduce(&self, x: &BigRational, m: u32) -> Result<BigRational, DvrError> {
        Ok(BigRational::from_integer(self.residue(x, m)?.representative))
    }

    /// Residue of `x` modulo `p^m` as a machine word, when `p^m` fits.
    pub fn residue_u64(&self, x: &BigRational, modulus: u64) -> Option<u64> {
        let m = BigInt::from(modulus);
        let inv = mod_inverse(x.denom(), &m)?;
        (x.numer() * inv).mod_floor(&m).to_u64()
    }

    /// The units of `D` in `R(m)`, in increasing order.
    pub fn unit_residues(&self, m: u32) -> Vec<BigInt> {
        let modulus = self.p_pow_int(m);
        let mut out = Vec::new();
        let mut r = BigInt::zero();
        while r < modulus {
            if !r.is_multiple_of(&self.p_big) {
                out.push(r.clone());
            }
            r += 1;
        }
        out
    }

    /// All of `R(m)` in increasing order.
    pub fn residues(&self, m: u32) -> Vec<BigInt> {
        let modulus = self.p_pow_int(m);
        let mut out = Vec::new();
        let mut r = BigInt::zero();
        while r < modulus {
            out.push(r.clone());
            r += 1;
        }
        out
    }
}

/// Inverse of `a` modulo `m` via the extended Euclidean algorithm.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    if m.is_one() {
        return Some(BigInt::zero());
    }
    let ext = a.mod_floor(m).extended_gcd(m);
    if !ext.gcd.is_one() {
        return None;
    }
    Some(ext.x.mod_floor(m))
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `"num/den"`, with `"/den"` omitted when the denominator is 1.
pub fn format_rational(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational, DvrError> {
    let s = s.trim();
    let err = || DvrError::Parse(s.to_string());
    match s.split_once('/') {
        None => BigInt::from_str(s)
            .map(BigRational::from_integer)
            .map_err(|_| err()),
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| err())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| err())?;
            if d.is_zero() {
                return Err(err());
            }
            Ok(BigRational::new(n, d))
        }
    }
}

/// Serde adapter for rationals as `"num/den"` strings.
pub mod rational_string {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// Newtype for places that need a rational with string serde outside a struct field.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RationalString(#[serde(with = "rational_string")] pub BigRational);

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn d3() -> Dvr {
        Dvr::new(3).unwrap()
    }

    #[test]
    fn rejects_non_primes() {
        assert_eq!(Dvr::new(4), Err(DvrError::NotPrime(4)));
        assert_eq!(Dvr::new(1), Err(DvrError::NotPrime(1)));
        assert!(Dvr::new(2).is_ok());
    }

    #[test]
    fn ring_ops() {
        let d = d3();
        assert_eq!(ratio(1, 2) + ratio(1, 2), rat(1));
        let prod = rat(12) * ratio(5, 7);
        assert_eq!(prod, ratio(60, 7));
        assert!(d.contains(&prod));
        let q = d.div(&rat(1), &rat(3)).unwrap();
        assert_eq!(q, ratio(1, 3));
        assert!(!d.contains(&q));
        assert_eq!(d.div(&rat(1), &rat(0)), Err(DvrError::DivisionByZero));
    }

    #[test]
    fn valuations() {
        let d = d3();
        assert_eq!(d.valuation(&rat(12)), Valuation::Finite(1));
        assert_eq!(d.valuation(&ratio(5, 7)), Valuation::Finite(0));
        assert_eq!(d.valuation(&rat(0)), Valuation::Infinite);
        assert_eq!(d.valuation(&ratio(2, 9)), Valuation::Finite(-2));
    }

    #[test]
    fn units() {
        let d = d3();
        assert_eq!(d.is_unit(&ratio(5, 7)), Ok(true));
        assert_eq!(d.is_unit(&rat(3)), Ok(false));
        assert_eq!(d.is_unit(&rat(0)), Ok(false));
        assert!(d.is_unit(&ratio(1, 3)).is_err());
    }

    #[test]
    fn residues() {
        let d = d3();
        assert_eq!(d.residue(&rat(7), 1).unwrap().representative, BigInt::from(1));
        // 2 * 5 = 10 = 1 mod 9
        assert_eq!(d.residue(&ratio(1, 2), 2).unwrap().representative, BigInt::from(5));
        assert_eq!(d.residue(&ratio(-4, 5), 0).unwrap().representative, BigInt::zero());
        assert_eq!(d.residue(&rat(-1), 2).unwrap().representative, BigInt::from(8));
        assert!(d.residue(&ratio(1, 3), 1).is_err());
        assert_eq!(d.unit_residues(2).len(), 6);
    }

    #[test]
    fn rational_strings() {
        assert_eq!(format_rational(&ratio(-6, 4)), "-3/2");
        assert_eq!(format_rational(&rat(9)), "9");
        assert_eq!(parse_rational("-3/2").unwrap(), ratio(-3, 2));
        assert_eq!(parse_rational(" 12 ").unwrap(), rat(12));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    fn small_rational() -> impl Strategy<Value = BigRational> {
        (-500i64..500, 1i64..60).prop_map(|(n, d)| ratio(n, d))
    }

    fn in_d(p: u64) -> impl Strategy<Value = BigRational> {
        (-500i64..500, 1i64..60).prop_map(move |(n, d)| {
            let d = if d % p as i64 == 0 { d + 1 } else { d };
            ratio(n, d)
        })
    }

    proptest! {
        #[test]
        fn valuation_is_additive(x in small_rational(), y in small_rational()) {
            let d = Dvr::new(3).unwrap();
            prop_assume!(!x.is_zero() && !y.is_zero());
            prop_assert_eq!(d.valuation(&(&x * &y)), d.valuation(&x).add(d.valuation(&y)));
        }

        #[test]
        fn ultrametric(x in small_rational(), y in small_rational()) {
            let d = Dvr::new(2).unwrap();
            let (vx, vy) = (d.valuation(&x), d.valuation(&y));
            let vs = d.valuation(&(&x + &y));
            prop_assert!(vs >= vx.min(vy));
            if vx != vy {
                prop_assert_eq!(vs, vx.min(vy));
            }
        }

        #[test]
        fn residue_is_a_ring_map(x in in_d(3), y in in_d(3), m in 0u32..4) {
            let d = Dvr::new(3).unwrap();
            let modulus = d.p_pow_int(m);
            let rx = d.residue(&x, m).unwrap().representative;
            let ry = d.residue(&y, m).unwrap().representative;
            let rs = d.residue(&(&x + &y), m).unwrap().representative;
            let rp = d.residue(&(&x * &y), m).unwrap().representative;
            prop_assert_eq!(rs, (&rx + &ry).mod_floor(&modulus));
            prop_assert_eq!(rp, (&rx * &ry).mod_floor(&modulus));
        }

        #[test]
        fn unit_iff_invertible_in_d(x in in_d(5)) {
            let d = Dvr::new(5).unwrap();
            let invertible = !x.is_zero() && d.contains(&x.recip());
            prop_assert_eq!(d.is_unit(&x).unwrap(), invertible);
        }
    }
}
