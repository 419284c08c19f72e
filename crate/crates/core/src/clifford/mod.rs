//! Even Clifford algebras `C_0(M, q)` of ternary quadratic forms.
//!
//! For `q(x, y, z) = ax^2 + by^2 + cz^2 + uyz + vxz + wxy` the algebra has basis
//! `1, i = e2 e3, j = e3 e1, k = e1 e2` with
//!
//! ```text
//! i^2 = ui - bc    jk = a(u - i)    kj = -vw + ai + wj + vk
//! j^2 = vj - ac    ki = b(v - j)    ik = -uw + wi + bj + uk
//! k^2 = wk - ab    ij = c(w - k)    ji = -uv + vi + uj + ck
//! ```
//!
//! and standard involution `conj(i) = u - i`, `conj(j) = v - j`, `conj(k) = w - k`.

pub mod local;
pub mod radical;
pub mod ring;
pub mod zpk;

pub use local::{LocalAtomStatus, LocalOrder, OrderPredicates};
pub use radical::{ResidueAlgebra, ResidueCase, ResidueClassification, ResidueQuotient};
pub use ring::{CoeffRing, Rationals, ZModPk};
pub use zpk::{IdealModPi2, Submodule};

use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dvr::{format_rational, rat, rational_string, Dvr};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliffordError {
    #[error("the form is degenerate (half-discriminant 0)")]
    Degenerate,
    #[error("coefficients must lie in Z_(p)")]
    NotIntegral,
    #[error("residue form is not in a normalized shape; normalize first")]
    NormalizeFirst,
    #[error("exhaustive residue search needs p <= 7, got {0}")]
    PrimeTooLarge(u64),
    #[error("the order is not local")]
    NotLocal,
    #[error("the form must have v = w = 0 for the isotropic search")]
    UnsupportedShape,
    #[error("no isotropic vector found within the search bound")]
    IsotropicNotFound,
    #[error("element is a unit")]
    Unit,
    #[error("element is a zero divisor")]
    ZeroDivisor,
    #[error("element is not in the order")]
    NotInOrder,
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Dvr(#[from] crate::dvr::DvrError),
}

/// `q(x, y, z) = ax^2 + by^2 + cz^2 + uyz + vxz + wxy`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TernaryForm {
    #[serde(with = "rational_string")]
    pub a: BigRational,
    #[serde(with = "rational_string")]
    pub b: BigRational,
    #[serde(with = "rational_string")]
    pub c: BigRational,
    #[serde(with = "rational_string")]
    pub u: BigRational,
    #[serde(with = "rational_string")]
    pub v: BigRational,
    #[serde(with = "rational_string")]
    pub w: BigRational,
}

impl TernaryForm {
    pub fn new(coeffs: [BigRational; 6]) -> Self {
        let [a, b, c, u, v, w] = coeffs;
        TernaryForm { a, b, c, u, v, w }
    }

    pub fn from_ints(c: [i64; 6]) -> Self {
        TernaryForm::new(c.map(rat))
    }

    pub fn coefficients(&self) -> [BigRational; 6] {
        [
            self.a.clone(),
            self.b.clone(),
            self.c.clone(),
            self.u.clone(),
            self.v.clone(),
            self.w.clone(),
        ]
    }

    /// `d'(q) = 4abc + uvw - au^2 - bv^2 - cw^2`.
    pub fn half_discriminant(&self) -> BigRational {
        let (a, b, c, u, v, w) = (&self.a, &self.b, &self.c, &self.u, &self.v, &self.w);
        rat(4) * a * b * c + u * v * w - a * u * u - b * v * v - c * w * w
    }

    pub fn is_nondegenerate(&self) -> bool {
        !self.half_discriminant().is_zero()
    }

    pub fn is_integral(&self, dvr: &Dvr) -> bool {
        self.coefficients().iter().all(|x| dvr.contains(x))
    }

    /// The coefficients reduced into `Z / p^k`.
    pub fn reduce(&self, ring: &ZModPk) -> Result<[u64; 6], CliffordError> {
        let mut out = [0u64; 6];
        for (o, x) in out.iter_mut().zip(self.coefficients().iter()) {
            *o = ring.reduce(x).ok_or(CliffordError::NotIntegral)?;
        }
        Ok(out)
    }

    pub fn value(&self, x: &BigRational, y: &BigRational, z: &BigRational) -> BigRational {
        &self.a * x * x + &self.b * y * y + &self.c * z * z + &self.u * y * z + &self.v * x * z + &self.w * x * y
    }
}

impl fmt::Display for TernaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coefficients().iter().map(format_rational).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Coordinates on the basis `1, i, j, k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct C0Element<E> {
    pub x: [E; 4],
}

impl<E> C0Element<E> {
    pub fn new(x: [E; 4]) -> Self {
        C0Element { x }
    }
}

impl C0Element<BigRational> {
    pub fn from_ints(x: [i64; 4]) -> Self {
        C0Element::new(x.map(rat))
    }
}

impl fmt::Display for C0Element<BigRational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (coef, name) in self.x.iter().zip(["", "i", "j", "k"]) {
            if coef.is_zero() {
                continue;
            }
            let s = format_rational(coef);
            terms.push(match (name, s.as_str()) {
                ("", _) => s,
                (_, "1") => name.to_string(),
                (_, "-1") => format!("-{name}"),
                _ => format!("{s}{name}"),
            });
        }
        if terms.is_empty() {
            return f.write_str("0");
        }
        let mut out = terms[0].clone();
        for t in &terms[1..] {
            match t.strip_prefix('-') {
                Some(rest) => out.push_str(&format!(" - {rest}")),
                None => out.push_str(&format!(" + {t}")),
            }
        }
        f.write_str(&out)
    }
}

/// `C_0(M, q)` over a coefficient ring, via its structure constants.
#[derive(Debug, Clone)]
pub struct C0Algebra<R: CoeffRing> {
    ring: R,
    coeffs: [R::E; 6],
    /// `e_s * e_t = sum_l table[s][t][l] e_l` on the basis `1, i, j, k`.
    table: Vec<Vec<[R::E; 4]>>,
}

impl<R: CoeffRing> C0Algebra<R> {
    /// `coeffs = [a, b, c, u, v, w]`.
    pub fn new(ring: R, coeffs: [R::E; 6]) -> Self {
        let [a, b, c, u, v, w] = coeffs.clone();
        let r = &ring;
        let z = r.zero();
        let o = r.one();
        let m = |x: &R::E, y: &R::E| r.mul(x, y);
        let n = |x: &R::E| r.neg(x);
        let unit = |s: usize| {
            let mut e = [z.clone(), z.clone(), z.clone(), z.clone()];
            e[s] = o.clone();
            e
        };
        let mut table = vec![vec![[z.clone(), z.clone(), z.clone(), z.clone()]; 4]; 4];
        for s in 0..4 {
            table[0][s] = unit(s);
            table[s][0] = unit(s);
        }
        // i^2, j^2, k^2
        table[1][1] = [n(&m(&b, &c)), u.clone(), z.clone(), z.clone()];
        table[2][2] = [n(&m(&a, &c)), z.clone(), v.clone(), z.clone()];
        table[3][3] = [n(&m(&a, &b)), z.clone(), z.clone(), w.clone()];
        // jk, ki, ij
        table[2][3] = [m(&a, &u), n(&a), z.clone(), z.clone()];
        table[3][1] = [m(&b, &v), z.clone(), n(&b), z.clone()];
        table[1][2] = [m(&c, &w), z.clone(), z.clone(), n(&c)];
        // kj, ik, ji
        table[3][2] = [n(&m(&v, &w)), a.clone(), w.clone(), v.clone()];
        table[1][3] = [n(&m(&u, &w)), w.clone(), b.clone(), u.clone()];
        table[2][1] = [n(&m(&u, &v)), v.clone(), u.clone(), c.clone()];
        C0Algebra {
            ring,
            coeffs,
            table,
        }
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn coeffs(&self) -> &[R::E; 6] {
        &self.coeffs
    }

    pub fn zero(&self) -> C0Element<R::E> {
        let z = self.ring.zero();
        C0Element::new([z.clone(), z.clone(), z.clone(), z])
    }

    pub fn one(&self) -> C0Element<R::E> {
        self.basis(0)
    }

    pub fn basis(&self, s: usize) -> C0Element<R::E> {
        let mut e = self.zero();
        e.x[s] = self.ring.one();
        e
    }

    pub fn scalar(&self, t: &R::E) -> C0Element<R::E> {
        let mut e = self.zero();
        e.x[0] = t.clone();
        e
    }

    pub fn element(&self, x: [i64; 4]) -> C0Element<R::E> {
        C0Element::new(x.map(|t| self.ring.from_i64(t)))
    }

    pub fn add(&self, x: &C0Element<R::E>, y: &C0Element<R::E>) -> C0Element<R::E> {
        C0Element::new(std::array::from_fn(|s| self.ring.add(&x.x[s], &y.x[s])))
    }

    pub fn sub(&self, x: &C0Element<R::E>, y: &C0Element<R::E>) -> C0Element<R::E> {
        C0Element::new(std::array::from_fn(|s| self.ring.sub(&x.x[s], &y.x[s])))
    }

    pub fn scale(&self, t: &R::E, x: &C0Element<R::E>) -> C0Element<R::E> {
        C0Element::new(std::array::from_fn(|s| self.ring.mul(t, &x.x[s])))
    }

    pub fn is_zero(&self, x: &C0Element<R::E>) -> bool {
        x.x.iter().all(|t| self.ring.is_zero(t))
    }

    pub fn mul(&self, x: &C0Element<R::E>, y: &C0Element<R::E>) -> C0Element<R::E> {
        let r = &self.ring;
        let mut out = self.zero();
        for s in 0..4 {
            if r.is_zero(&x.x[s]) {
                continue;
            }
            for t in 0..4 {
                if r.is_zero(&y.x[t]) {
                    continue;
                }
                let st = r.mul(&x.x[s], &y.x[t]);
                for l in 0..4 {
                    let c = &self.table[s][t][l];
                    if !r.is_zero(c) {
                        out.x[l] = r.add(&out.x[l], &r.mul(&st, c));
                    }
                }
            }
        }
        out
    }

    /// `tr(x) = 2x0 + u x1 + v x2 + w x3`.
    pub fn trace(&self, x: &C0Element<R::E>) -> R::E {
        let r = &self.ring;
        let [_, _, _, u, v, w] = &self.coeffs;
        let two_x0 = r.add(&x.x[0], &x.x[0]);
        r.add(
            &r.add(&two_x0, &r.mul(u, &x.x[1])),
            &r.add(&r.mul(v, &x.x[2]), &r.mul(w, &x.x[3])),
        )
    }

    /// `nr(x0 + x1 i + x2 j + x3 k)` by the closed formula.
    pub fn norm(&self, x: &C0Element<R::E>) -> R::E {
        let r = &self.ring;
        let [a, b, c, u, v, w] = &self.coeffs;
        let [x0, x1, x2, x3] = &x.x;
        let m = |p: &R::E, q: &R::E| r.mul(p, q);
        let terms = [
            m(x0, x0),
            m(&m(b, c), &m(x1, x1)),
            m(&m(a, c), &m(x2, x2)),
            m(&m(a, b), &m(x3, x3)),
            m(u, &m(x0, x1)),
            m(v, &m(x0, x2)),
            m(w, &m(x0, x3)),
            m(&r.sub(&m(u, v), &m(c, w)), &m(x1, x2)),
            m(&r.sub(&m(u, w), &m(b, v)), &m(x1, x3)),
            m(&r.sub(&m(v, w), &m(a, u)), &m(x2, x3)),
        ];
        terms.iter().fold(r.zero(), |acc, t| r.add(&acc, t))
    }

    /// `conj(x) = tr(x) - x`.
    pub fn conj(&self, x: &C0Element<R::E>) -> C0Element<R::E> {
        self.sub(&self.scalar(&self.trace(x)), x)
    }

    /// `B(x, y) = tr(x conj(y))`.
    pub fn bilinear(&self, x: &C0Element<R::E>, y: &C0Element<R::E>) -> R::E {
        self.trace(&self.mul(x, &self.conj(y)))
    }

    /// Nilpotent iff `nr(x) = tr(x) = 0` (over a domain).
    pub fn is_nilpotent(&self, x: &C0Element<R::E>) -> bool {
        self.ring.is_zero(&self.norm(x)) && self.ring.is_zero(&self.trace(x))
    }
}

impl TernaryForm {
    pub fn algebra_over_q(&self) -> C0Algebra<Rationals> {
        C0Algebra::new(Rationals, self.coefficients())
    }

    pub fn algebra_mod(&self, ring: ZModPk) -> Result<C0Algebra<ZModPk>, CliffordError> {
        let coeffs = self.reduce(&ring)?;
        Ok(C0Algebra::new(ring, coeffs))
    }
}

#[cfg(test)]
mod tests;
