//! Coefficient rings for the even Clifford algebra: `Q` and `Z / p^k`.

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::dvr::mod_inverse;

pub trait CoeffRing: Clone + Debug {
    type E: Clone + PartialEq + Eq + Hash + Debug;

    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn add(&self, x: &Self::E, y: &Self::E) -> Self::E;
    fn mul(&self, x: &Self::E, y: &Self::E) -> Self::E;
    fn neg(&self, x: &Self::E) -> Self::E;
    fn from_i64(&self, n: i64) -> Self::E;

    fn sub(&self, x: &Self::E, y: &Self::E) -> Self::E {
        self.add(x, &self.neg(y))
    }

    fn is_zero(&self, x: &Self::E) -> bool {
        *x == self.zero()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Rationals;

impl CoeffRing for Rationals {
    type E = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::from_integer(1.into())
    }
    fn add(&self, x: &BigRational, y: &BigRational) -> BigRational {
        x + y
    }
    fn mul(&self, x: &BigRational, y: &BigRational) -> BigRational {
        x * y
    }
    fn neg(&self, x: &BigRational) -> BigRational {
        -x
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }
}

/// `Z / p^k`, elements stored as canonical residues in `[0, p^k)`.
///
/// The modulus is kept below `2^31` so products fit in a `u64`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ZModPk {
    p: u64,
    k: u32,
    modulus: u64,
}

impl ZModPk {
    pub fn new(p: u64, k: u32) -> Option<Self> {
        let modulus = p.checked_pow(k)?;
        (modulus < (1 << 31) && k >= 1).then_some(ZModPk { p, k, modulus })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn exponent(&self) -> u32 {
        self.k
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Reduction of an element of `Z_(p)`; `None` when `p` divides the denominator.
    pub fn reduce(&self, x: &BigRational) -> Option<u64> {
        let m = BigInt::from(self.modulus);
        let inv = mod_inverse(x.denom(), &m)?;
        let r = (x.numer() * inv) % &m;
        let r = if r < BigInt::zero() { r + &m } else { r };
        r.to_u64()
    }

    /// `p`-adic valuation of a residue, capped at `k` for zero.
    pub fn valuation(&self, x: u64) -> u32 {
        if x == 0 {
            return self.k;
        }
        let mut x = x;
        let mut v = 0;
        while x % self.p == 0 {
            x /= self.p;
            v += 1;
        }
        v
    }

    pub fn inverse(&self, x: u64) -> Option<u64> {
        let inv = mod_inverse(&BigInt::from(x), &BigInt::from(self.modulus))?;
        inv.to_u64()
    }

    pub fn pow_p(&self, e: u32) -> u64 {
        if e >= self.k {
            0
        } else {
            self.p.pow(e)
        }
    }
}

impl CoeffRing for ZModPk {
    type E = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.modulus
    }
    fn add(&self, x: &u64, y: &u64) -> u64 {
        (x + y) % self.modulus
    }
    fn mul(&self, x: &u64, y: &u64) -> u64 {
        (x * y) % self.modulus
    }
    fn neg(&self, x: &u64) -> u64 {
        (self.modulus - x % self.modulus) % self.modulus
    }
    fn from_i64(&self, n: i64) -> u64 {
        n.rem_euclid(self.modulus as i64) as u64
    }
}
