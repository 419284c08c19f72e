//! Canonical right-associates of atoms, their enumeration and the left-divisor search.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{EichlerError, EichlerOrder};
use crate::dvr::Valuation;
use crate::mat2::Mat2;

/// Above this many atoms of a single norm valuation the search is refused.
const MAX_ATOMS_PER_NORM_VALUATION: usize = 2_000_000;

/// The eight families of canonical right-associates, with their parameters.
///
/// Residue parameters are representatives in `R(e) = {0, ..., p^e - 1}`. The
/// derived order (family first, then parameters) is the canonical atom order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AtomClass {
    /// `[[pi, lambda pi^n], [0, 1]]`.
    UpperPi { lambda: BigInt },
    /// `[[1, 0], [lambda, pi]]`.
    LowerPi { lambda: BigInt },
    /// `[[eps pi^m, pi^n], [1, delta pi^m2]]` with `m + m2 < n`.
    Short { m: u32, m2: u32, eps: BigInt, delta: BigInt },
    /// Same shape with `m + m2 > n`, both below `n`.
    Wide { m: u32, m2: u32, eps: BigInt, delta: BigInt },
    /// `[[eps pi^m, pi^n], [1, 0]]`.
    LowerZero { m: u32, eps: BigInt },
    /// `[[0, pi^n], [1, delta pi^m2]]`.
    UpperZero { m2: u32, delta: BigInt },
    /// `[[0, pi^n], [1, 0]]`.
    Antidiagonal,
    /// `[[eps pi^m, pi^n], [1, (1/eps + pi^k delta) pi^m2]]` with `m + m2 = n`.
    Long { m: u32, m2: u32, k: u32, eps: BigInt, delta: BigInt },
}

impl AtomClass {
    /// Family number 1 to 8.
    pub fn family(&self) -> u8 {
        match self {
            AtomClass::UpperPi { .. } => 1,
            AtomClass::LowerPi { .. } => 2,
            AtomClass::Short { .. } => 3,
            AtomClass::Wide { .. } => 4,
            AtomClass::LowerZero { .. } => 5,
            AtomClass::UpperZero { .. } => 6,
            AtomClass::Antidiagonal => 7,
            AtomClass::Long { .. } => 8,
        }
    }

    pub fn label(&self) -> &'static str {
        match self.family() {
            1 => "I-upper",
            2 => "I-lower",
            3 => "II-3",
            4 => "II-4",
            5 => "II-5",
            6 => "II-6",
            7 => "II-7",
            _ => "II-8",
        }
    }

    /// Named parameters, in declaration order.
    pub fn parameters(&self) -> Vec<(&'static str, BigInt)> {
        let b = |x: u32| BigInt::from(x);
        match self {
            AtomClass::UpperPi { lambda } | AtomClass::LowerPi { lambda } => {
                vec![("lambda", lambda.clone())]
            }
            AtomClass::Short { m, m2, eps, delta } | AtomClass::Wide { m, m2, eps, delta } => vec![
                ("m", b(*m)),
                ("m2", b(*m2)),
                ("eps", eps.clone()),
                ("delta", delta.clone()),
            ],
            AtomClass::LowerZero { m, eps } => vec![("m", b(*m)), ("eps", eps.clone())],
            AtomClass::UpperZero { m2, delta } => vec![("m2", b(*m2)), ("delta", delta.clone())],
            AtomClass::Antidiagonal => vec![],
            AtomClass::Long {
                m,
                m2,
                k,
                eps,
                delta,
            } => vec![
                ("m", b(*m)),
                ("m2", b(*m2)),
                ("k", b(*k)),
                ("eps", eps.clone()),
                ("delta", delta.clone()),
            ],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CanonicalAtom {
    pub class: AtomClass,
    pub matrix: Mat2,
    pub norm_valuation: u32,
}

/// `atom = representative.matrix * unit`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalRightAssociate {
    pub representative: CanonicalAtom,
    pub unit: Mat2,
}

/// A canonical atom with its adjugate reduced modulo `p^(t + n)`, `t` the norm valuation.
#[derive(Debug, Clone)]
pub(crate) struct AtomEntry {
    pub atom: CanonicalAtom,
    /// `None` when `p^(t + n)` does not fit the machine-word prefilter.
    pub adj_mod: Option<[u64; 4]>,
}

fn int(x: &BigInt) -> BigRational {
    BigRational::from_integer(x.clone())
}

impl EichlerOrder {
    /// The matrix of a canonical representative.
    pub fn atom_matrix(&self, class: &AtomClass) -> Mat2 {
        let pi_pow = |e: u32| self.dvr.pi_pow(e as i64);
        let one = BigRational::one();
        let zero = BigRational::zero();
        let pin = self.pi_n.clone();
        match class {
            AtomClass::UpperPi { lambda } => Mat2::new(pi_pow(1), int(lambda) * &pin, zero, one),
            AtomClass::LowerPi { lambda } => Mat2::new(one, zero, int(lambda), pi_pow(1)),
            AtomClass::Short { m, m2, eps, delta } | AtomClass::Wide { m, m2, eps, delta } => {
                Mat2::new(int(eps) * pi_pow(*m), pin, one, int(delta) * pi_pow(*m2))
            }
            AtomClass::LowerZero { m, eps } => Mat2::new(int(eps) * pi_pow(*m), pin, one, zero),
            AtomClass::UpperZero { m2, delta } => Mat2::new(zero, pin, one, int(delta) * pi_pow(*m2)),
            AtomClass::Antidiagonal => Mat2::new(zero.clone(), pin, one, zero),
            AtomClass::Long {
                m,
                m2,
                k,
                eps,
                delta,
            } => {
                let corner = (int(eps).recip() + pi_pow(*k) * int(delta)) * pi_pow(*m2);
                Mat2::new(int(eps) * pi_pow(*m), pin, one, corner)
            }
        }
    }

    fn canonical_atom(&self, class: AtomClass) -> CanonicalAtom {
        let matrix = self.atom_matrix(&class);
        let norm_valuation = self
            .norm_valuation(&matrix)
            .finite()
            .expect("canonical atoms are cancellative") as u32;
        CanonicalAtom {
            class,
            matrix,
            norm_valuation,
        }
    }

    fn residue_int(&self, x: &BigRational, m: u32) -> BigInt {
        self.dvr
            .residue(x, m)
            .expect("argument lies in D")
            .representative
    }

    /// The unique canonical atom `V` with `u = V * E` for a unit `E`.
    pub fn canonical_right_associate(
        &self,
        u: &Mat2,
    ) -> Result<CanonicalRightAssociate, EichlerError> {
        if !self.is_atom(u)? {
            return Err(EichlerError::NotAtom(u.clone()));
        }
        let class = self.classify_atom(u);
        let representative = self.canonical_atom(class);
        let unit = representative
            .matrix
            .inverse()
            .expect("atoms are invertible in M_2(Q)")
            * u.clone();
        debug_assert!(self.is_unit(&unit).unwrap_or(false));
        Ok(CanonicalRightAssociate {
            representative,
            unit,
        })
    }

    fn classify_atom(&self, u: &Mat2) -> AtomClass {
        let n = self.level;
        let va = self.v(&u.a);
        if self.norm_valuation(u) == Valuation::Finite(1) {
            return if va == Valuation::Finite(1) {
                let lambda = self.residue_int(&(self.b_coefficient(u) / &u.d), 1);
                AtomClass::UpperPi { lambda }
            } else {
                let lambda = self.residue_int(&(&u.c / &u.a), 1);
                AtomClass::LowerPi { lambda }
            };
        }

        // Scale the columns so that c = 1 and b_raw = pi^n.
        let a1 = &u.a / &u.c;
        let d1 = &u.d / &self.b_coefficient(u);
        let det_val = self.norm_valuation(u).finite().expect("cancellative") as u32;
        let m = self.v(&a1);
        let m2 = self.v(&d1);
        let unit_part = |x: &BigRational, e: i64| x / self.dvr.pi_pow(e);
        let below_n = |x: Valuation| x < Valuation::Finite(n as i64);
        match (m.finite(), m2.finite()) {
            (Some(mf), Some(m2f)) if mf + m2f < n as i64 => {
                let (mf, m2f) = (mf as u32, m2f as u32);
                AtomClass::Short {
                    m: mf,
                    m2: m2f,
                    eps: self.residue_int(&unit_part(&a1, mf as i64), m2f),
                    delta: self.residue_int(&unit_part(&d1, m2f as i64), mf),
                }
            }
            (Some(mf), Some(m2f)) if mf + m2f == n as i64 => {
                let (mf, m2f) = (mf as u32, m2f as u32);
                let k = det_val - n;
                let eps = self.residue_int(&unit_part(&a1, mf as i64), m2f + k);
                let delta0 = (unit_part(&d1, m2f as i64) - int(&eps).recip())
                    / self.dvr.pi_pow(k as i64);
                AtomClass::Long {
                    m: mf,
                    m2: m2f,
                    k,
                    eps,
                    delta: self.residue_int(&delta0, mf),
                }
            }
            _ => match (below_n(m), below_n(m2)) {
                (true, true) => {
                    let (mf, m2f) = (m.finite().unwrap() as u32, m2.finite().unwrap() as u32);
                    AtomClass::Wide {
                        m: mf,
                        m2: m2f,
                        eps: self.residue_int(&unit_part(&a1, mf as i64), n - mf),
                        delta: self.residue_int(&unit_part(&d1, m2f as i64), n - m2f),
                    }
                }
                (true, false) => {
                    let mf = m.finite().unwrap() as u32;
                    AtomClass::LowerZero {
                        m: mf,
                        eps: self.residue_int(&unit_part(&a1, mf as i64), n - mf),
                    }
                }
                (false, true) => {
                    let m2f = m2.finite().unwrap() as u32;
                    AtomClass::UpperZero {
                        m2: m2f,
                        delta: self.residue_int(&unit_part(&d1, m2f as i64), n - m2f),
                    }
                }
                (false, false) => AtomClass::Antidiagonal,
            },
        }
    }

    fn atoms_of_norm_valuation(&self, t: u32) -> Result<Vec<CanonicalAtom>, EichlerError> {
        self.require_non_hereditary()?;
        let n = self.level;
        let units = |e: u32| self.dvr.unit_residues(e);
        let count_estimate = (self.prime() as f64).powi(t as i32) * (n as f64 + 1.0);
        if count_estimate > MAX_ATOMS_PER_NORM_VALUATION as f64 {
            return Err(EichlerError::TooManyAtoms(t));
        }
        let mut out = Vec::new();
        if t == 1 {
            for lambda in self.dvr.residues(1) {
                out.push(AtomClass::UpperPi {
                    lambda: lambda.clone(),
                });
                out.push(AtomClass::LowerPi { lambda });
            }
        }
        if t >= 2 && t < n {
            for m in 1..t {
                let m2 = t - m;
                for eps in units(m2) {
                    for delta in units(m) {
                        out.push(AtomClass::Short {
                            m,
                            m2,
                            eps: eps.clone(),
                            delta,
                        });
                    }
                }
            }
        }
        if t == n {
            for m in 1..n {
                for m2 in 1..n {
                    if m + m2 <= n {
                        continue;
                    }
                    for eps in units(n - m) {
                        for delta in units(n - m2) {
                            out.push(AtomClass::Wide {
                                m,
                                m2,
                                eps: eps.clone(),
                                delta,
                            });
                        }
                    }
                }
            }
            for m in 1..n {
                for eps in units(n - m) {
                    out.push(AtomClass::LowerZero { m, eps });
                }
                for delta in units(n - m) {
                    out.push(AtomClass::UpperZero { m2: m, delta });
                }
            }
            out.push(AtomClass::Antidiagonal);
        }
        if t >= n {
            let k = t - n;
            let p = self.dvr.prime_big();
            for m in 1..n {
                let m2 = n - m;
                for eps in units(m2 + k) {
                    for delta in units(m) {
                        // With k = 0 the corner unit 1/eps + delta must stay a unit.
                        if k == 0 && ((&eps * &delta) + 1u32).is_multiple_of(p) {
                            continue;
                        }
                        out.push(AtomClass::Long {
                            m,
                            m2,
                            k,
                            eps: eps.clone(),
                            delta,
                        });
                    }
                }
            }
        }
        out.sort();
        Ok(out.into_iter().map(|c| self.canonical_atom(c)).collect())
    }

    /// All canonical atoms with `v(nr) <= max_norm_val`, in canonical order.
    pub fn enumerate_atoms(&self, max_norm_val: u32) -> Result<Vec<CanonicalAtom>, EichlerError> {
        let mut out = Vec::new();
        for t in 1..=max_norm_val {
            out.extend(self.atom_entries(t)?.iter().map(|e| e.atom.clone()));
        }
        out.sort_by(|x, y| x.class.cmp(&y.class));
        Ok(out)
    }

    fn prefilter_modulus(&self, t: u32) -> Option<u64> {
        self.prime()
            .checked_pow(t + self.level)
            .filter(|&m| m < (1u64 << 62))
    }

    pub(crate) fn atom_entries(&self, t: u32) -> Result<Arc<Vec<AtomEntry>>, EichlerError> {
        if let Some(hit) = self.atom_cache.lock().unwrap().get(&t) {
            return Ok(hit.clone());
        }
        let modulus = self.prefilter_modulus(t);
        let entries: Vec<AtomEntry> = self
            .atoms_of_norm_valuation(t)?
            .into_iter()
            .map(|atom| {
                let adj_mod = modulus.and_then(|md| {
                    let adj = atom.matrix.adj();
                    let r = |x: &BigRational| self.dvr.residue_u64(x, md);
                    Some([r(&adj.a)?, r(&adj.b)?, r(&adj.c)?, r(&adj.d)?])
                });
                AtomEntry { atom, adj_mod }
            })
            .collect();
        let entries = Arc::new(entries);
        self.atom_cache
            .lock()
            .unwrap()
            .insert(t, entries.clone());
        Ok(entries)
    }

    /// All canonical atoms `V` dividing `x` on the left, with cofactors `V^{-1} x`.
    pub fn left_divisor_atoms(&self, x: &Mat2) -> Result<Vec<(CanonicalAtom, Mat2)>, EichlerError> {
        self.require_cancellative_non_unit(x)?;
        let total = self
            .norm_valuation(x)
            .finite()
            .expect("cancellative") as u32;
        let mut out = Vec::new();
        for t in 1..=total {
            let entries = self.atom_entries(t)?;
            let modulus = self.prefilter_modulus(t);
            let x_mod = modulus.and_then(|md| {
                let r = |y: &BigRational| self.dvr.residue_u64(y, md);
                Some([r(&x.a)?, r(&x.b)?, r(&x.c)?, r(&x.d)?])
            });
            let pt = self.prime().pow(t.min(40)) as u128;
            for entry in entries.iter() {
                if let (Some(md), Some(adj), Some(xm)) = (modulus, entry.adj_mod, x_mod) {
                    if !prefilter_divides(adj, xm, md as u128, pt) {
                        continue;
                    }
                }
                let nr = entry.atom.matrix.det();
                let cof = (&entry.atom.matrix.adj() * x).scale(&nr.recip());
                if self.contains(&cof) {
                    out.push((entry.atom.clone(), cof));
                }
            }
        }
        out.sort_by(|a, b| a.0.class.cmp(&b.0.class));
        Ok(out)
    }

    /// Whether `u` and `v` generate the same principal right ideal.
    pub fn right_associated(&self, u: &Mat2, v: &Mat2) -> bool {
        match u.inverse() {
            Some(inv) => {
                let e = inv * v.clone();
                self.contains(&e) && self.is_unit(&e).unwrap_or(false)
            }
            None => false,
        }
    }
}

/// `adj(V) * X` is divisible by `nr(V)` inside `R`: the (1,1), (2,1), (2,2)
/// entries vanish modulo `p^t` and the (1,2) entry modulo `p^(t+n)`.
fn prefilter_divides(adj: [u64; 4], x: [u64; 4], modulus: u128, pt: u128) -> bool {
    let [va, vb, vc, vd] = adj.map(|e| e as u128);
    let [xa, xb, xc, xd] = x.map(|e| e as u128);
    let m = modulus;
    let p11 = (va * xa % m + vb * xc % m) % m;
    let p21 = (vc * xa % m + vd * xc % m) % m;
    let p22 = (vc * xb % m + vd * xd % m) % m;
    let p12 = (va * xb % m + vb * xd % m) % m;
    p11 % pt == 0 && p21 % pt == 0 && p22 % pt == 0 && p12 == 0
}
