//! Orders `R = C_0(M, q)` over `Z_(p)`: order predicates, isotropic vectors,
//! nilpotent radical elements and the atoms `pi^k + z`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::radical::{ResidueAlgebra, ResidueQuotient};
use super::ring::{Rationals, ZModPk};
use super::zpk::IdealModPi2;
use super::{C0Algebra, C0Element, CliffordError, TernaryForm};
use crate::dvr::Dvr;

pub const DEFAULT_ISOTROPY_BOUND: u32 = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderPredicates {
    pub dim_residue: usize,
    pub is_local: bool,
    pub is_maximal_hint: bool,
    pub is_eichler_hint: bool,
}

impl OrderPredicates {
    pub fn from_quotient(q: ResidueQuotient) -> Self {
        OrderPredicates {
            dim_residue: q.dimension(),
            is_local: q.is_field(),
            is_maximal_hint: q == ResidueQuotient::Quaternion,
            is_eichler_hint: q == ResidueQuotient::Split,
        }
    }
}

pub fn order_predicates(form: &TernaryForm, p: u64) -> Result<OrderPredicates, CliffordError> {
    if !form.is_nondegenerate() {
        return Err(CliffordError::Degenerate);
    }
    Ok(OrderPredicates::from_quotient(ResidueAlgebra::new(form, p)?.quotient()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LocalAtomStatus {
    Atom,
    NotAtom,
    /// In `J^2` without an exhibited factorization into two radical elements.
    Undetermined,
}

fn bigint_sqrt_exact(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Square root in `Q`, if there is one.
fn rational_sqrt(x: &BigRational) -> Option<BigRational> {
    Some(BigRational::new(bigint_sqrt_exact(x.numer())?, bigint_sqrt_exact(x.denom())?))
}

/// Scales a rational vector to a primitive integer vector.
fn primitive(v: [BigRational; 3]) -> [BigInt; 3] {
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: [BigInt; 3] = std::array::from_fn(|s| (&v[s] * BigRational::from_integer(l.clone())).to_integer());
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.map(|x| x / &g)
}

/// Rational solutions `(z0, z2, z3)` of `z0^2 + a(b z3^2 + c z2^2 + u z2 z3) = 0`
/// with `(z2, z3) != 0`, scaled to primitive integers with `p` not dividing both `z2, z3`.
///
/// Solutions with `z0 = 0` come first; they are the roots of the binary form
/// `c z2^2 + u z2 z3 + b z3^2`. Then `(z2, z3)` runs over integer pairs of height up
/// to `p^bound`, with `z2 >= 0`, ordered by height, then `|z3|`, positive `z3` first.
pub fn isotropic_candidates(
    form: &TernaryForm,
    p: u64,
    bound: u32,
) -> Result<impl Iterator<Item = [BigInt; 3]>, CliffordError> {
    if !form.v.is_zero() || !form.w.is_zero() {
        return Err(CliffordError::UnsupportedShape);
    }
    if !form.is_nondegenerate() {
        return Err(CliffordError::Degenerate);
    }
    let dvr = Dvr::new(p)?;
    let (a, b, c, u) = (form.a.clone(), form.b.clone(), form.c.clone(), form.u.clone());
    let zero = BigRational::zero();
    let admissible = move |z: &[BigInt; 3]| {
        let z2 = BigRational::from_integer(z[1].clone());
        let z3 = BigRational::from_integer(z[2].clone());
        !dvr.valuation(&z2).at_least(1) || !dvr.valuation(&z3).at_least(1)
    };

    let mut first: Vec<[BigInt; 3]> = Vec::new();
    if c.is_zero() {
        first.push([BigInt::zero(), BigInt::one(), BigInt::zero()]);
    } else if let Some(s) = rational_sqrt(&(&u * &u - BigRational::from_integer(4.into()) * &b * &c)) {
        let two_c = BigRational::from_integer(2.into()) * &c;
        for root in [(-&u + &s) / &two_c, (-&u - &s) / &two_c] {
            let mut z = primitive([zero.clone(), root, BigRational::one()]);
            if z[1].is_negative() || (z[1].is_zero() && z[2].is_negative()) {
                z = z.map(|t| -t);
            }
            if !first.contains(&z) {
                first.push(z);
            }
        }
        first.sort_by(|x, y| {
            let hx = x[1].abs().max(x[2].abs());
            let hy = y[1].abs().max(y[2].abs());
            hx.cmp(&hy).then(x[2].abs().cmp(&y[2].abs())).then(y[2].cmp(&x[2]))
        });
    }

    let height = (p as i64).checked_pow(bound).unwrap_or(i64::MAX);
    let general = (1..=height).flat_map(|h| {
        let mut pairs: Vec<(i64, i64)> = (0..=h)
            .flat_map(|z2| (-h..=h).map(move |z3| (z2, z3)))
            .filter(|&(z2, z3)| z2.max(z3.abs()) == h && !(z2 == 0 && z3 < 0) && z2.gcd(&z3) == 1)
            .collect();
        pairs.sort_by_key(|&(z2, z3)| (z3.abs(), z3 < 0, z2));
        pairs
    });
    let (a2, b2, c2, u2) = (a.clone(), b, c, u);
    let general = general.filter_map(move |(z2, z3)| {
        let (r2, r3) = (BigRational::from_integer(z2.into()), BigRational::from_integer(z3.into()));
        let t = -&a2 * (&b2 * &r3 * &r3 + &c2 * &r2 * &r2 + &u2 * &r2 * &r3);
        let z0 = rational_sqrt(&t)?;
        Some(primitive([z0, r2, r3]))
    });
    Ok(first.into_iter().chain(general).filter(admissible))
}

/// The first isotropic candidate, if any lies within the search bound.
pub fn find_isotropic(form: &TernaryForm, p: u64, bound: u32) -> Result<Option<[BigInt; 3]>, CliffordError> {
    Ok(isotropic_candidates(form, p, bound)?.next())
}

/// A nondegenerate integral form over `Z_(p)` with its order data.
#[derive(Debug, Clone)]
pub struct LocalOrder {
    form: TernaryForm,
    dvr: Dvr,
    rational: C0Algebra<Rationals>,
    mod_p2: C0Algebra<ZModPk>,
    residue: ResidueAlgebra,
    radical: IdealModPi2,
    radical_squared: IdealModPi2,
}

impl LocalOrder {
    pub fn new(form: &TernaryForm, p: u64) -> Result<Self, CliffordError> {
        if !form.is_nondegenerate() {
            return Err(CliffordError::Degenerate);
        }
        let dvr = Dvr::new(p)?;
        if !form.is_integral(&dvr) {
            return Err(CliffordError::NotIntegral);
        }
        let residue = ResidueAlgebra::new(form, p)?;
        let ring = ZModPk::new(p, 2).ok_or(CliffordError::PrimeTooLarge(p))?;
        let mod_p2 = form.algebra_mod(ring)?;
        let radical = IdealModPi2::radical(&mod_p2, residue.radical());
        let radical_squared = IdealModPi2::product(&mod_p2, &radical, &radical);
        Ok(LocalOrder {
            form: form.clone(),
            dvr,
            rational: form.algebra_over_q(),
            mod_p2,
            residue,
            radical,
            radical_squared,
        })
    }

    pub fn form(&self) -> &TernaryForm {
        &self.form
    }

    pub fn dvr(&self) -> &Dvr {
        &self.dvr
    }

    pub fn algebra(&self) -> &C0Algebra<Rationals> {
        &self.rational
    }

    pub fn residue(&self) -> &ResidueAlgebra {
        &self.residue
    }

    pub fn radical_mod_pi2(&self) -> &IdealModPi2 {
        &self.radical
    }

    pub fn radical_squared_mod_pi2(&self) -> &IdealModPi2 {
        &self.radical_squared
    }

    pub fn algebra_mod_pi2(&self) -> &C0Algebra<ZModPk> {
        &self.mod_p2
    }

    pub fn predicates(&self) -> OrderPredicates {
        OrderPredicates::from_quotient(self.residue.quotient())
    }

    pub fn is_local(&self) -> bool {
        self.predicates().is_local
    }

    pub fn contains(&self, x: &C0Element<BigRational>) -> bool {
        x.x.iter().all(|t| self.dvr.contains(t))
    }

    fn reduce(&self, ring: &ZModPk, x: &C0Element<BigRational>) -> Result<[u64; 4], CliffordError> {
        let mut out = [0; 4];
        for (o, t) in out.iter_mut().zip(&x.x) {
            *o = ring.reduce(t).ok_or(CliffordError::NotInOrder)?;
        }
        Ok(out)
    }

    pub fn reduce_mod_pi(&self, x: &C0Element<BigRational>) -> Result<[u64; 4], CliffordError> {
        self.reduce(self.residue.algebra().ring(), x)
    }

    pub fn reduce_mod_pi2(&self, x: &C0Element<BigRational>) -> Result<[u64; 4], CliffordError> {
        self.reduce(self.mod_p2.ring(), x)
    }

    pub fn in_radical(&self, x: &C0Element<BigRational>) -> Result<bool, CliffordError> {
        Ok(self.residue.in_radical(&self.reduce_mod_pi(x)?))
    }

    pub fn in_radical_squared(&self, x: &C0Element<BigRational>) -> Result<bool, CliffordError> {
        Ok(self.radical_squared.contains(&self.reduce_mod_pi2(x)?))
    }

    /// Atom test on a local order through membership in `J` and `J^2` mod `pi^2`.
    ///
    /// Elements of `J \ J^2` are atoms. An element of `J^2` is reported as a non-atom
    /// only when a factorization `s * t` with `s, t` in `J` is found, trying `s = pi`
    /// and then every `s` with coordinates in `[-p, p]`.
    pub fn is_atom_local(&self, x: &C0Element<BigRational>) -> Result<LocalAtomStatus, CliffordError> {
        if !self.is_local() {
            return Err(CliffordError::NotLocal);
        }
        if !self.contains(x) {
            return Err(CliffordError::NotInOrder);
        }
        if self.rational.norm(x).is_zero() {
            return Err(CliffordError::ZeroDivisor);
        }
        if !self.in_radical(x)? {
            return Err(CliffordError::Unit);
        }
        if !self.in_radical_squared(x)? {
            return Ok(LocalAtomStatus::Atom);
        }
        let pi = self.dvr.prime_big();
        let cofactor_in_radical = |t: &C0Element<BigRational>| self.contains(t) && self.in_radical(t).unwrap_or(false);
        let inv_pi = BigRational::new(BigInt::one(), pi.clone());
        if cofactor_in_radical(&self.rational.scale(&inv_pi, x)) {
            return Ok(LocalAtomStatus::NotAtom);
        }
        let p = self.dvr.prime() as i64;
        let side = (2 * p + 1) as usize;
        for n in 0..side.pow(4) {
            let coords: [i64; 4] = std::array::from_fn(|s| (n / side.pow(s as u32) % side) as i64 - p);
            let s = C0Element::from_ints(coords);
            let ns = self.rational.norm(&s);
            if ns.is_zero() || !self.in_radical(&s)? {
                continue;
            }
            let t = self.rational.scale(&ns.recip(), &self.rational.mul(&self.rational.conj(&s), x));
            if cofactor_in_radical(&t) {
                return Ok(LocalAtomStatus::NotAtom);
            }
        }
        Ok(LocalAtomStatus::Undetermined)
    }

    /// `z = z0 + z2 j - z3 k` with `nr(z) = 0`, `z` in `J \ J^2`, from the isotropic candidates.
    pub fn find_nilpotent_in_radical(&self, bound: u32) -> Result<C0Element<BigRational>, CliffordError> {
        if !self.is_local() {
            return Err(CliffordError::NotLocal);
        }
        for [z0, z2, z3] in isotropic_candidates(&self.form, self.dvr.prime(), bound)? {
            let z = C0Element::new([
                BigRational::from_integer(z0),
                BigRational::zero(),
                BigRational::from_integer(z2),
                BigRational::from_integer(-z3),
            ]);
            debug_assert!(self.rational.norm(&z).is_zero());
            if self.in_radical(&z)? && !self.in_radical_squared(&z)? {
                return Ok(z);
            }
        }
        Err(CliffordError::IsotropicNotFound)
    }

    /// `pi^k + z`.
    pub fn long_atom_family(&self, z: &C0Element<BigRational>, k: u32) -> Result<C0Element<BigRational>, CliffordError> {
        if k < 2 {
            return Err(CliffordError::Invalid(format!("exponent must be at least 2, got {k}")));
        }
        let mut x = z.clone();
        x.x[0] += self.dvr.pi_pow(k as i64);
        Ok(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dvr::rat;

    fn form(c: [i64; 6]) -> TernaryForm {
        TernaryForm::from_ints(c)
    }

    fn ints(v: [i64; 3]) -> [BigInt; 3] {
        v.map(BigInt::from)
    }

    #[test]
    fn isotropic_examples() {
        assert_eq!(find_isotropic(&form([1, 1, -9, 0, 0, 0]), 3, 6).unwrap(), Some(ints([0, 1, 3])));
        assert_eq!(find_isotropic(&form([1, 1, 1, 0, 0, 0]), 3, 3).unwrap(), None);
        assert_eq!(find_isotropic(&form([1, -1, 3, 0, 0, 0]), 3, 3).unwrap(), Some(ints([1, 0, 1])));
        assert_eq!(find_isotropic(&form([1, -1, 5, 0, 0, 0]), 2, 3).unwrap(), Some(ints([1, 0, 1])));
        assert_eq!(
            find_isotropic(&form([1, 1, 1, 1, 1, 0]), 3, 3).unwrap_err(),
            CliffordError::UnsupportedShape
        );
    }

    #[test]
    fn isotropic_candidates_solve_the_equation() {
        let f = form([2, 3, -5, 1, 0, 0]);
        for [z0, z2, z3] in isotropic_candidates(&f, 3, 2).unwrap().take(20) {
            let (z0, z2, z3) = (BigRational::from(z0), BigRational::from(z2), BigRational::from(z3));
            let val = &z0 * &z0 + &f.a * (&f.b * &z3 * &z3 + &f.c * &z2 * &z2 + &f.u * &z2 * &z3);
            assert!(val.is_zero());
        }
    }

    #[test]
    fn predicates_examples() {
        let p = order_predicates(&form([1, 1, 1, 0, 0, 0]), 3).unwrap();
        assert_eq!(p.dim_residue, 4);
        assert!(p.is_maximal_hint && !p.is_local);
        let p = order_predicates(&form([1, 1, -9, 0, 0, 0]), 3).unwrap();
        assert!(p.is_local && [1, 2].contains(&p.dim_residue));
        let p = order_predicates(&form([1, 3, 9, 0, 0, 0]), 3).unwrap();
        assert_eq!(p.dim_residue, 1);
        assert!(p.is_local);
        assert_eq!(order_predicates(&form([1, 1, 0, 0, 0, 0]), 3), Err(CliffordError::Degenerate));
    }

    #[test]
    fn nilpotent_and_long_atoms() {
        let r = LocalOrder::new(&form([1, 1, -9, 0, 0, 0]), 3).unwrap();
        let z = r.find_nilpotent_in_radical(DEFAULT_ISOTROPY_BOUND).unwrap();
        assert_eq!(z, C0Element::from_ints([0, 0, 1, -3]));
        assert!(r.algebra().is_nilpotent(&z));
        assert!(r.algebra().is_zero(&r.algebra().mul(&z, &z)));
        assert!(r.radical_mod_pi2().is_two_sided(r.algebra_mod_pi2()));
        assert!(r.radical_squared_mod_pi2().is_two_sided(r.algebra_mod_pi2()));
        assert!(r.radical_mod_pi2().module().contains_module(r.radical_squared_mod_pi2().module()));
        for k in 2..=5u32 {
            let x = r.long_atom_family(&z, k).unwrap();
            let nr = r.algebra().norm(&x);
            assert_eq!(nr, r.dvr().pi_pow(2 * k as i64));
            assert_eq!(r.is_atom_local(&x).unwrap(), LocalAtomStatus::Atom);
        }
        let x = r.long_atom_family(&z, 2).unwrap();
        let px = r.algebra().scale(&rat(3), &x);
        assert_eq!(r.is_atom_local(&px).unwrap(), LocalAtomStatus::NotAtom);
        assert_eq!(r.is_atom_local(&C0Element::from_ints([1, 0, 0, 0])), Err(CliffordError::Unit));
        assert_eq!(r.is_atom_local(&z), Err(CliffordError::ZeroDivisor));
    }

    #[test]
    fn non_local_orders_rejected() {
        let r = LocalOrder::new(&form([1, 1, 1, 0, 0, 0]), 3).unwrap();
        assert_eq!(r.find_nilpotent_in_radical(3), Err(CliffordError::NotLocal));
        assert_eq!(
            r.is_atom_local(&C0Element::from_ints([3, 0, 0, 0])),
            Err(CliffordError::NotLocal)
        );
    }
}
