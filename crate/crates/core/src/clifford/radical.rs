//! The residue algebra `A = C_0(M / pi M, q)` over `F_p`: radical by exhaustive search,
//! radical powers, the quotient `A / J(A)`, and the table of normalized shapes.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::ring::{CoeffRing, ZModPk};
use super::{C0Algebra, C0Element, CliffordError, TernaryForm};

type Vec4 = [u64; 4];

/// Largest prime handled by exhaustive enumeration of `F_p^4`.
pub const MAX_EXHAUSTIVE_PRIME: u64 = 7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResidueQuotient {
    /// `M_2(F_p)`; every quaternion algebra over a finite field splits.
    Quaternion,
    /// `F_p x F_p`.
    Split,
    /// `F_{p^degree}`.
    Field { degree: u32 },
}

impl ResidueQuotient {
    pub fn dimension(&self) -> usize {
        match self {
            ResidueQuotient::Quaternion => 4,
            ResidueQuotient::Split => 2,
            ResidueQuotient::Field { degree } => *degree as usize,
        }
    }

    pub fn is_field(&self) -> bool {
        matches!(self, ResidueQuotient::Field { .. })
    }
}

impl fmt::Display for ResidueQuotient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ResidueQuotient::Quaternion => f.write_str("quaternion algebra M2(k)"),
            ResidueQuotient::Split => f.write_str("k x k"),
            ResidueQuotient::Field { degree: 1 } => f.write_str("field k"),
            ResidueQuotient::Field { degree } => write!(f, "field extension of degree {degree}"),
        }
    }
}

/// Row-reduced basis of the `F_p`-span of `vs`.
pub fn span_basis(ring: &ZModPk, vs: &[Vec4]) -> Vec<Vec4> {
    let mut basis: Vec<(usize, Vec4)> = Vec::new();
    for v in vs {
        let mut v = v.map(|t| t % ring.modulus());
        for (col, b) in &basis {
            let q = v[*col];
            if q != 0 {
                v = std::array::from_fn(|s| ring.sub(&v[s], &ring.mul(&q, &b[s])));
            }
        }
        if let Some(col) = v.iter().position(|&t| t != 0) {
            let inv = ring.inverse(v[col]).expect("F_p is a field");
            let v = v.map(|t| ring.mul(&t, &inv));
            for (_, b) in basis.iter_mut() {
                let q = b[col];
                if q != 0 {
                    *b = std::array::from_fn(|s| ring.sub(&b[s], &ring.mul(&q, &v[s])));
                }
            }
            basis.push((col, v));
        }
    }
    basis.sort_by_key(|(c, _)| *c);
    basis.into_iter().map(|(_, b)| b).collect()
}

fn in_span(ring: &ZModPk, basis: &[Vec4], x: &Vec4) -> bool {
    let mut with = basis.to_vec();
    with.push(*x);
    span_basis(ring, &with).len() == basis.len()
}

fn all_vectors(p: u64) -> impl Iterator<Item = Vec4> {
    (0..p.pow(4)).map(move |n| [n % p, (n / p) % p, (n / (p * p)) % p, n / (p * p * p)])
}

/// `C_0` of a form over `F_p`, with its radical and radical powers.
#[derive(Debug, Clone)]
pub struct ResidueAlgebra {
    algebra: C0Algebra<ZModPk>,
    radical: Vec<Vec4>,
    /// `powers[m]` is a basis of `J^{m+1}`, ending with the first zero power.
    powers: Vec<Vec<Vec4>>,
    quotient: ResidueQuotient,
}

impl ResidueAlgebra {
    pub fn new(form: &TernaryForm, p: u64) -> Result<Self, CliffordError> {
        let ring = ZModPk::new(p, 1).ok_or(CliffordError::PrimeTooLarge(p))?;
        Self::from_algebra(form.algebra_mod(ring)?)
    }

    /// `J(A) = {x in A^perp : nr(x) = 0}` where `A^perp` is the radical of
    /// `B(x, y) = tr(x conj(y))`, checked afterwards to be a nilpotent two-sided ideal.
    pub fn from_algebra(algebra: C0Algebra<ZModPk>) -> Result<Self, CliffordError> {
        let ring = *algebra.ring();
        let p = ring.modulus();
        if ring.exponent() != 1 || p > MAX_EXHAUSTIVE_PRIME {
            return Err(CliffordError::PrimeTooLarge(p));
        }
        let gram: Vec<Vec<u64>> = (0..4)
            .map(|s| (0..4).map(|t| algebra.bilinear(&algebra.basis(s), &algebra.basis(t))).collect())
            .collect();
        let members: Vec<Vec4> = all_vectors(p)
            .filter(|x| {
                (0..4).all(|t| (0..4).fold(0, |acc, s| ring.add(&acc, &ring.mul(&x[s], &gram[s][t]))) == 0)
            })
            .filter(|x| algebra.norm(&C0Element::new(*x)) == 0)
            .collect();
        let radical = span_basis(&ring, &members);
        if (members.len() as u64) != p.pow(radical.len() as u32) {
            return Err(CliffordError::Invalid("radical candidate is not a subspace".into()));
        }
        let in_rad = |x: &Vec4| in_span(&ring, &radical, x);
        for g in &radical {
            let g = C0Element::new(*g);
            for s in 0..4 {
                let e = algebra.basis(s);
                if !in_rad(&algebra.mul(&e, &g).x) || !in_rad(&algebra.mul(&g, &e).x) {
                    return Err(CliffordError::Invalid("radical candidate is not an ideal".into()));
                }
            }
        }
        let mut powers = vec![radical.clone()];
        while !powers.last().unwrap().is_empty() {
            let last = powers.last().unwrap();
            let prods: Vec<Vec4> = last
                .iter()
                .flat_map(|x| {
                    radical
                        .iter()
                        .map(|y| algebra.mul(&C0Element::new(*x), &C0Element::new(*y)).x)
                        .collect::<Vec<_>>()
                })
                .collect();
            let next = span_basis(&ring, &prods);
            if next.len() >= last.len() {
                return Err(CliffordError::Invalid("radical is not nilpotent".into()));
            }
            powers.push(next);
        }
        let quotient = match 4 - radical.len() {
            4 => ResidueQuotient::Quaternion,
            1 => ResidueQuotient::Field { degree: 1 },
            2 => {
                if has_nontrivial_idempotent(&algebra, &radical) {
                    ResidueQuotient::Split
                } else {
                    ResidueQuotient::Field { degree: 2 }
                }
            }
            d => {
                return Err(CliffordError::Invalid(format!("quotient of dimension {d}")));
            }
        };
        Ok(ResidueAlgebra {
            algebra,
            radical,
            powers,
            quotient,
        })
    }

    pub fn algebra(&self) -> &C0Algebra<ZModPk> {
        &self.algebra
    }

    pub fn prime(&self) -> u64 {
        self.algebra.ring().prime()
    }

    pub fn radical(&self) -> &[Vec4] {
        &self.radical
    }

    /// Basis of `J^m` for `m >= 1`; empty once the power vanishes.
    pub fn radical_power(&self, m: usize) -> &[Vec4] {
        assert!(m >= 1);
        self.powers.get(m - 1).map(|v| v.as_slice()).unwrap_or(&[])
    }

    /// Minimal `N` with `J^N = 0`.
    pub fn nilpotency_index(&self) -> usize {
        self.powers.iter().position(|b| b.is_empty()).unwrap_or(self.powers.len()) + 1
    }

    pub fn quotient(&self) -> ResidueQuotient {
        self.quotient
    }

    pub fn quotient_dimension(&self) -> usize {
        4 - self.radical.len()
    }

    pub fn in_radical(&self, x: &Vec4) -> bool {
        in_span(self.algebra.ring(), &self.radical, x)
    }

    pub fn in_radical_power(&self, m: usize, x: &Vec4) -> bool {
        in_span(self.algebra.ring(), self.radical_power(m), x)
    }
}

/// `e` with `e^2 - e` in `J`, `e` and `1 - e` outside `J`.
fn has_nontrivial_idempotent(alg: &C0Algebra<ZModPk>, radical: &[Vec4]) -> bool {
    let ring = *alg.ring();
    let one = alg.one();
    all_vectors(ring.modulus()).any(|x| {
        let e = C0Element::new(x);
        let e2 = alg.mul(&e, &e);
        in_span(&ring, radical, &alg.sub(&e2, &e).x)
            && !in_span(&ring, radical, &x)
            && !in_span(&ring, radical, &alg.sub(&one, &e).x)
    })
}

/// The normalized residue shapes of `q = ax^2 + by^2 + cz^2 + uyz + vxz + wxy` mod `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ResidueCase {
    /// Diagonal, `abc != 0`, `p` odd.
    #[serde(rename = "1a")]
    DiagonalOdd,
    /// Diagonal, `abc != 0`, `p = 2`.
    #[serde(rename = "1b-i")]
    DiagonalEven,
    /// `(a, b, 0)` with `ab != 0`, `p` odd.
    #[serde(rename = "2a")]
    RankTwoOdd,
    /// `(a, b, 0)` with `ab != 0`, `p = 2`.
    #[serde(rename = "2b-i")]
    RankTwoEven,
    /// `(a, 0, 0)`.
    #[serde(rename = "3")]
    RankOne,
    /// `p = 2`, `u != 0`, `v = w = 0`, `a != 0`.
    #[serde(rename = "4")]
    MixedNondegenerate,
    /// `p = 2`, `u != 0`, `v = w = 0`, `a = 0`.
    #[serde(rename = "5")]
    MixedDegenerate,
}

impl ResidueCase {
    pub const ALL: [ResidueCase; 7] = [
        ResidueCase::DiagonalOdd,
        ResidueCase::DiagonalEven,
        ResidueCase::RankTwoOdd,
        ResidueCase::RankTwoEven,
        ResidueCase::RankOne,
        ResidueCase::MixedNondegenerate,
        ResidueCase::MixedDegenerate,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            ResidueCase::DiagonalOdd => "1a",
            ResidueCase::DiagonalEven => "1b-i",
            ResidueCase::RankTwoOdd => "2a",
            ResidueCase::RankTwoEven => "2b-i",
            ResidueCase::RankOne => "3",
            ResidueCase::MixedNondegenerate => "4",
            ResidueCase::MixedDegenerate => "5",
        }
    }

    /// Whether the shape can occur over `F_p`.
    pub fn occurs_for(&self, p: u64) -> bool {
        match self {
            ResidueCase::DiagonalOdd | ResidueCase::RankTwoOdd => p != 2,
            ResidueCase::RankOne => true,
            _ => p == 2,
        }
    }

    /// The shape of reduced coefficients `[a, b, c, u, v, w]`, if normalized.
    pub fn detect(p: u64, r: &[u64; 6]) -> Result<ResidueCase, CliffordError> {
        let [a, b, c, u, v, w] = *r;
        let even = p == 2;
        if u == 0 && v == 0 && w == 0 {
            return match (a != 0, b != 0, c != 0) {
                (true, true, true) if even => Ok(ResidueCase::DiagonalEven),
                (true, true, true) => Ok(ResidueCase::DiagonalOdd),
                (true, true, false) if even => Ok(ResidueCase::RankTwoEven),
                (true, true, false) => Ok(ResidueCase::RankTwoOdd),
                (_, false, false) => Ok(ResidueCase::RankOne),
                _ => Err(CliffordError::NormalizeFirst),
            };
        }
        if even && u != 0 && v == 0 && w == 0 {
            return Ok(if a != 0 {
                ResidueCase::MixedNondegenerate
            } else {
                ResidueCase::MixedDegenerate
            });
        }
        Err(CliffordError::NormalizeFirst)
    }
}

impl fmt::Display for ResidueCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// The radical data a normalized shape predicts, as spanning vectors over `F_p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResiduePrediction {
    pub radical: Vec<Vec4>,
    pub radical_squared: Vec<Vec4>,
    pub radical_cubed: Vec<Vec4>,
    pub nilpotency_index: usize,
    pub quotient: ResidueQuotient,
}

fn is_square_mod(p: u64, x: u64) -> bool {
    (0..p).any(|y| (y * y) % p == x % p)
}

fn predict(case: ResidueCase, p: u64, r: &[u64; 6]) -> ResiduePrediction {
    let [a, b, c, u, _, _] = *r;
    let zero = Vec::new;
    let (radical, radical_squared, quotient) = match case {
        ResidueCase::DiagonalOdd | ResidueCase::MixedNondegenerate => (zero(), zero(), ResidueQuotient::Quaternion),
        // Over F_2 every nonzero coefficient is 1, so y0 = z0 = 1.
        ResidueCase::DiagonalEven => (
            vec![[1, 1, 0, 0], [1, 0, 1, 0], [1, 0, 0, 1]],
            vec![[1, 1, 1, 1]],
            ResidueQuotient::Field { degree: 1 },
        ),
        ResidueCase::RankTwoOdd => {
            let neg_ab = (p - (a * b) % p) % p;
            let quotient = if is_square_mod(p, neg_ab) {
                ResidueQuotient::Split
            } else {
                ResidueQuotient::Field { degree: 2 }
            };
            (vec![[0, 1, 0, 0], [0, 0, 1, 0]], zero(), quotient)
        }
        ResidueCase::RankTwoEven => (
            vec![[0, 1, 0, 0], [0, 0, 1, 0], [1, 0, 0, 1]],
            vec![[0, 1, 1, 0]],
            ResidueQuotient::Field { degree: 1 },
        ),
        ResidueCase::RankOne => (
            vec![[0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]],
            if a != 0 { vec![[0, 1, 0, 0]] } else { zero() },
            ResidueQuotient::Field { degree: 1 },
        ),
        ResidueCase::MixedDegenerate => {
            // Split iff bc = y^2 + uy has a root in F_2.
            let bc = (b * c) % 2;
            let split = (0..2).any(|y| (y * y + u * y) % 2 == bc);
            let quotient = if split {
                ResidueQuotient::Split
            } else {
                ResidueQuotient::Field { degree: 2 }
            };
            (vec![[0, 0, 1, 0], [0, 0, 0, 1]], zero(), quotient)
        }
    };
    let nilpotency_index = if radical.is_empty() {
        1
    } else if radical_squared.is_empty() {
        2
    } else {
        3
    };
    ResiduePrediction {
        radical,
        radical_squared,
        radical_cubed: Vec::new(),
        nilpotency_index,
        quotient,
    }
}

/// A normalized shape, its predicted radical, and the exhaustive computation.
#[derive(Debug, Clone)]
pub struct ResidueClassification {
    pub case: ResidueCase,
    pub prediction: ResiduePrediction,
    pub computed: ResidueAlgebra,
}

impl ResidueClassification {
    /// Whether the predicted `J`, `J^2`, `J^3`, `N` and `A / J` match the computation.
    pub fn agrees(&self) -> bool {
        let ring = *self.computed.algebra().ring();
        let same = |pred: &[Vec4], m: usize| span_basis(&ring, pred) == self.computed.radical_power(m);
        same(&self.prediction.radical, 1)
            && same(&self.prediction.radical_squared, 2)
            && same(&self.prediction.radical_cubed, 3)
            && self.prediction.nilpotency_index == self.computed.nilpotency_index()
            && self.prediction.quotient == self.computed.quotient()
    }
}

pub fn classify_residue(form: &TernaryForm, p: u64) -> Result<ResidueClassification, CliffordError> {
    let ring = ZModPk::new(p, 1).ok_or(CliffordError::PrimeTooLarge(p))?;
    let reduced = form.reduce(&ring)?;
    let case = ResidueCase::detect(p, &reduced)?;
    let computed = ResidueAlgebra::new(form, p)?;
    Ok(ResidueClassification {
        case,
        prediction: predict(case, p, &reduced),
        computed,
    })
}
