//! Submodules of `(Z / p^k)^4` in Howell form, and radical images in `R / pi^2 R`.

use super::ring::{CoeffRing, ZModPk};
use super::{C0Algebra, C0Element};

type Vec4 = [u64; 4];

/// A submodule of `(Z / p^k)^4`.
///
/// Rows are in Howell form: row `i` has its first nonzero entry `p^{v_i}` in column
/// `pivots[i]`, the pivot columns increase, entries above a pivot are reduced
/// below `p^{v_i}`, and every module element vanishing in the first `c` columns is a
/// combination of the rows whose pivot is at least `c`. The form is unique, so
/// equality of submodules is equality of rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Submodule {
    ring: ZModPk,
    rows: Vec<Vec4>,
    pivots: Vec<usize>,
}

impl Submodule {
    pub fn span(ring: ZModPk, gens: &[Vec4]) -> Self {
        let r = &ring;
        let mut pending: Vec<Vec4> = gens.iter().map(|g| g.map(|x| x % r.modulus())).collect();
        let mut rows: Vec<Vec4> = Vec::new();
        let mut pivots = Vec::new();
        for col in 0..4 {
            pending.retain(|g| g.iter().any(|&x| x != 0));
            let best = pending
                .iter()
                .enumerate()
                .filter(|(_, g)| g[col] != 0)
                .min_by_key(|(_, g)| r.valuation(g[col]))
                .map(|(i, _)| i);
            let Some(best) = best else { continue };
            let mut piv = pending.swap_remove(best);
            let v = r.valuation(piv[col]);
            let pv = r.pow_p(v);
            let unit = r.inverse(piv[col] / pv).expect("unit part is invertible");
            piv = piv.map(|x| r.mul(&x, &unit));
            for g in pending.iter_mut() {
                let q = g[col] / pv;
                if q != 0 {
                    *g = sub_scaled(r, g, &piv, q);
                }
            }
            if v > 0 {
                let annihilated = piv.map(|x| r.mul(&x, &r.pow_p(r.exponent() - v)));
                pending.push(annihilated);
            }
            rows.push(piv);
            pivots.push(col);
        }
        for i in 0..rows.len() {
            let (col, pv) = (pivots[i], rows[i][pivots[i]]);
            for j in 0..i {
                let q = rows[j][col] / pv;
                if q != 0 {
                    rows[j] = sub_scaled(r, &rows[j], &rows[i], q);
                }
            }
        }
        Submodule { ring, rows, pivots }
    }

    pub fn ring(&self) -> &ZModPk {
        &self.ring
    }

    pub fn rows(&self) -> &[Vec4] {
        &self.rows
    }

    pub fn contains(&self, x: &Vec4) -> bool {
        let r = &self.ring;
        let mut x = x.map(|t| t % r.modulus());
        for (row, &col) in self.rows.iter().zip(&self.pivots) {
            let pv = row[col];
            if x[col] == 0 {
                continue;
            }
            if r.valuation(x[col]) < r.valuation(pv) {
                return false;
            }
            x = sub_scaled(r, &x, row, x[col] / pv);
        }
        x.iter().all(|&t| t == 0)
    }

    /// Number of elements, as an exponent of `p`.
    pub fn log_size(&self) -> u32 {
        self.rows
            .iter()
            .zip(&self.pivots)
            .map(|(row, &c)| self.ring.exponent() - self.ring.valuation(row[c]))
            .sum()
    }

    pub fn contains_module(&self, other: &Submodule) -> bool {
        other.rows.iter().all(|g| self.contains(g))
    }
}

fn sub_scaled(r: &ZModPk, x: &Vec4, y: &Vec4, q: u64) -> Vec4 {
    std::array::from_fn(|s| r.sub(&x[s], &r.mul(&q, &y[s])))
}

/// The image of a two-sided ideal of `R = C_0(M, q)` in `R / pi^2 R`.
#[derive(Debug, Clone)]
pub struct IdealModPi2 {
    module: Submodule,
}

impl IdealModPi2 {
    /// `J(R) mod pi^2`, from a basis of `J(R / pi R)`.
    ///
    /// `J(R)` is the preimage of `J(R / pi R)` because `pi R` lies in `J(R)`, so its
    /// image mod `pi^2` is spanned by lifts of the residue basis together with `pi R`.
    pub fn radical(alg: &C0Algebra<ZModPk>, residue_basis: &[Vec4]) -> Self {
        let ring = *alg.ring();
        let p = ring.prime();
        let mut gens: Vec<Vec4> = residue_basis.to_vec();
        for s in 0..4 {
            let mut e = [0; 4];
            e[s] = p;
            gens.push(e);
        }
        IdealModPi2 {
            module: Submodule::span(ring, &gens),
        }
    }

    /// The product ideal `I * I'`, spanned by products of generators.
    ///
    /// For `I = J(R)` this is `J(R)^2`, which contains `pi^2 R` since `pi` lies in `J(R)`;
    /// hence `J(R)^2` is also the preimage of its image mod `pi^2`.
    pub fn product(alg: &C0Algebra<ZModPk>, x: &IdealModPi2, y: &IdealModPi2) -> Self {
        let mut gens = Vec::new();
        for g in x.module.rows() {
            for h in y.module.rows() {
                gens.push(alg.mul(&C0Element::new(*g), &C0Element::new(*h)).x);
            }
        }
        IdealModPi2 {
            module: Submodule::span(*alg.ring(), &gens),
        }
    }

    pub fn module(&self) -> &Submodule {
        &self.module
    }

    pub fn contains(&self, x: &Vec4) -> bool {
        self.module.contains(x)
    }

    /// Closure under left and right multiplication by `1, i, j, k`.
    pub fn is_two_sided(&self, alg: &C0Algebra<ZModPk>) -> bool {
        self.module.rows().iter().all(|g| {
            let g = C0Element::new(*g);
            (0..4).all(|s| {
                let e = alg.basis(s);
                self.contains(&alg.mul(&e, &g).x) && self.contains(&alg.mul(&g, &e).x)
            })
        })
    }
}
