//! Rigid factorizations over an abstract atomic monoid.
//!
//! A rigid factorization is stored in canonical form: every atom except the
//! last is the canonical right-associate representative of its class, and the
//! last atom absorbs the accumulated unit. Two factorizations are congruent
//! under unit shifting exactly when their canonical forms coincide.

mod distance;
mod elasticity;

pub use distance::{
    catenary_degree, max_distance_gap, reversed_conjugate, rigid_distance, rigid_distance_within, DistanceTable,
    RigidDistance,
};
pub use elasticity::{elasticity_formulas, scan_atom_norm_valuations, Elasticity, ElasticityFormulas};

use std::collections::{BTreeSet, HashMap};
use std::fmt::Debug;
use std::hash::Hash;
use std::sync::Arc;

use num_rational::BigRational;
use thiserror::Error;

pub const DEFAULT_MAX_COUNT: usize = 1_000_000;

/// The operations the factorization machinery needs from a monoid `H`.
pub trait MonoidProvider {
    type Elem: Clone + Eq + Ord + Hash + Debug;
    type Error: std::error::Error + Clone;

    fn one(&self) -> Self::Elem;
    fn is_unit(&self, x: &Self::Elem) -> Result<bool, Self::Error>;
    fn is_cancellative(&self, x: &Self::Elem) -> Result<bool, Self::Error>;
    fn multiply(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    /// `u^{-1} x` when it lies in the monoid.
    fn exact_left_divide(&self, u: &Self::Elem, x: &Self::Elem) -> Option<Self::Elem>;
    /// Canonical atoms dividing `x` on the left, each with its cofactor.
    fn left_divisor_atoms(&self, x: &Self::Elem) -> Result<Vec<(Self::Elem, Self::Elem)>, Self::Error>;
    /// `(V, E)` with `u = V * E`, `V` canonical and `E` a unit.
    fn canonical_right_associate(&self, u: &Self::Elem) -> Result<(Self::Elem, Self::Elem), Self::Error>;
    /// An anti-automorphism of the monoid; used to read factorizations backwards.
    fn involution(&self, x: &Self::Elem) -> Self::Elem;
    /// Norm valuations of the atoms up to `max`.
    fn atom_norm_valuations(&self, max: u32) -> Result<Vec<u32>, Self::Error>;
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FactorError<E: std::error::Error> {
    #[error(transparent)]
    Provider(E),
    #[error("element is a zero divisor")]
    NotCancellative,
    #[error("more than {0} factorizations")]
    Overflow(usize),
    #[error("factorizations belong to different elements")]
    ProductMismatch,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl<E: std::error::Error> From<E> for FactorError<E> {
    fn from(e: E) -> Self {
        FactorError::Provider(e)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RigidFactorization<E> {
    pub leading_unit: E,
    pub atoms: Vec<E>,
}

impl<E: Clone> RigidFactorization<E> {
    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }
}

/// The product `leading_unit * atoms[0] * ... * atoms[k-1]`.
pub fn product<P: MonoidProvider>(p: &P, z: &RigidFactorization<P::Elem>) -> P::Elem {
    z.atoms
        .iter()
        .fold(z.leading_unit.clone(), |acc, u| p.multiply(&acc, u))
}

/// Canonical form of `unit * atoms[0] * ... * atoms[k-1]`.
pub fn canonicalize<P: MonoidProvider>(
    p: &P,
    unit: &P::Elem,
    atoms: &[P::Elem],
) -> Result<RigidFactorization<P::Elem>, P::Error> {
    let Some((last, init)) = atoms.split_last() else {
        return Ok(RigidFactorization {
            leading_unit: unit.clone(),
            atoms: Vec::new(),
        });
    };
    let mut carry = unit.clone();
    let mut out = Vec::with_capacity(atoms.len());
    for u in init {
        let (v, e) = p.canonical_right_associate(&p.multiply(&carry, u))?;
        out.push(v);
        carry = e;
    }
    out.push(p.multiply(&carry, last));
    Ok(RigidFactorization {
        leading_unit: p.one(),
        atoms: out,
    })
}

/// Concatenation `x * y` in the monoid of rigid factorizations, canonicalized.
pub fn concat<P: MonoidProvider>(
    p: &P,
    x: &RigidFactorization<P::Elem>,
    y: &RigidFactorization<P::Elem>,
) -> Result<RigidFactorization<P::Elem>, P::Error> {
    let mut atoms = x.atoms.clone();
    if let Some(last) = atoms.last_mut() {
        *last = p.multiply(last, &y.leading_unit);
        atoms.extend(y.atoms.iter().cloned());
        canonicalize(p, &x.leading_unit, &atoms)
    } else {
        let unit = p.multiply(&x.leading_unit, &y.leading_unit);
        canonicalize(p, &unit, &y.atoms)
    }
}

type Listing<E> = Arc<Vec<Vec<E>>>;

/// Memoized search for `Z*(a)` and `L(a)` over one provider.
pub struct Factorizer<'p, P: MonoidProvider> {
    provider: &'p P,
    max_count: usize,
    listings: HashMap<P::Elem, Listing<P::Elem>>,
    lengths: HashMap<P::Elem, Arc<BTreeSet<usize>>>,
    divisors: HashMap<P::Elem, Arc<Vec<(P::Elem, P::Elem)>>>,
}

impl<'p, P: MonoidProvider> Factorizer<'p, P> {
    pub fn new(provider: &'p P) -> Self {
        Factorizer::with_max_count(provider, DEFAULT_MAX_COUNT)
    }

    pub fn with_max_count(provider: &'p P, max_count: usize) -> Self {
        Factorizer {
            provider,
            max_count,
            listings: HashMap::new(),
            lengths: HashMap::new(),
            divisors: HashMap::new(),
        }
    }

    pub fn provider(&self) -> &'p P {
        self.provider
    }

    fn divisors(&mut self, x: &P::Elem) -> Result<Arc<Vec<(P::Elem, P::Elem)>>, P::Error> {
        if let Some(hit) = self.divisors.get(x) {
            return Ok(hit.clone());
        }
        let d = Arc::new(self.provider.left_divisor_atoms(x)?);
        self.divisors.insert(x.clone(), d.clone());
        Ok(d)
    }

    /// `x` is an atom iff some (equivalently every) left-divisor atom has a unit cofactor.
    fn is_atom_via_divisors(&mut self, x: &P::Elem) -> Result<bool, P::Error> {
        let divs = self.divisors(x)?;
        for (_, c) in divs.iter() {
            if self.provider.is_unit(c)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn check(&self, a: &P::Elem) -> Result<(), FactorError<P::Error>> {
        if !self.provider.is_cancellative(a)? {
            return Err(FactorError::NotCancellative);
        }
        Ok(())
    }

    /// All canonical rigid factorizations of `a`, sorted by length then atoms.
    pub fn factorizations(
        &mut self,
        a: &P::Elem,
    ) -> Result<Vec<RigidFactorization<P::Elem>>, FactorError<P::Error>> {
        self.check(a)?;
        if self.provider.is_unit(a)? {
            return Ok(vec![RigidFactorization {
                leading_unit: a.clone(),
                atoms: Vec::new(),
            }]);
        }
        let listing = self.listing(a)?;
        let mut out: Vec<_> = listing
            .iter()
            .map(|atoms| RigidFactorization {
                leading_unit: self.provider.one(),
                atoms: atoms.clone(),
            })
            .collect();
        out.sort_by(|x, y| x.atoms.len().cmp(&y.atoms.len()).then_with(|| x.atoms.cmp(&y.atoms)));
        Ok(out)
    }

    fn listing(&mut self, a: &P::Elem) -> Result<Listing<P::Elem>, FactorError<P::Error>> {
        if let Some(hit) = self.listings.get(a) {
            return Ok(hit.clone());
        }
        let listing = if self.is_atom_via_divisors(a)? {
            vec![vec![a.clone()]]
        } else {
            let divs = self.divisors(a)?;
            let mut acc = Vec::new();
            for (v, c) in divs.iter() {
                for tail in self.listing(c)?.iter() {
                    if acc.len() >= self.max_count {
                        return Err(FactorError::Overflow(self.max_count));
                    }
                    let mut f = Vec::with_capacity(tail.len() + 1);
                    f.push(v.clone());
                    f.extend(tail.iter().cloned());
                    acc.push(f);
                }
            }
            acc
        };
        let listing = Arc::new(listing);
        self.listings.insert(a.clone(), listing.clone());
        Ok(listing)
    }

    /// `L(a)` by dynamic programming over left divisors, without listing factorizations.
    pub fn lengths(&mut self, a: &P::Elem) -> Result<BTreeSet<usize>, FactorError<P::Error>> {
        self.check(a)?;
        Ok((*self.lengths_inner(a)?).clone())
    }

    fn lengths_inner(&mut self, a: &P::Elem) -> Result<Arc<BTreeSet<usize>>, FactorError<P::Error>> {
        if let Some(hit) = self.lengths.get(a) {
            return Ok(hit.clone());
        }
        let set = if self.provider.is_unit(a)? {
            BTreeSet::from([0])
        } else if self.is_atom_via_divisors(a)? {
            BTreeSet::from([1])
        } else {
            let divs = self.divisors(a)?;
            let mut set = BTreeSet::new();
            for (_, c) in divs.iter() {
                set.extend(self.lengths_inner(c)?.iter().map(|l| l + 1));
            }
            set
        };
        let set = Arc::new(set);
        self.lengths.insert(a.clone(), set.clone());
        Ok(set)
    }

    /// Whether `a` is an atom, decided by the divisor search alone.
    pub fn is_atom_by_search(&mut self, a: &P::Elem) -> Result<bool, FactorError<P::Error>> {
        self.check(a)?;
        if self.provider.is_unit(a)? {
            return Ok(false);
        }
        Ok(self.is_atom_via_divisors(a)?)
    }

    pub fn length_profile(&mut self, a: &P::Elem) -> Result<LengthProfile, FactorError<P::Error>> {
        let zs = self.factorizations(a)?;
        Ok(LengthProfile::from_factorizations(self.provider, &zs)?)
    }
}

/// `L(a)`, `Delta(a)`, `rho(a)`, catenary degree and `|Z*(a)|`.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct LengthProfile {
    pub lengths: BTreeSet<usize>,
    pub delta: BTreeSet<usize>,
    pub elasticity: Elasticity,
    pub catenary: usize,
    pub count: usize,
}

pub fn delta_set(lengths: &BTreeSet<usize>) -> BTreeSet<usize> {
    let v: Vec<usize> = lengths.iter().copied().collect();
    v.windows(2).map(|w| w[1] - w[0]).collect()
}

/// `max L / min L`; units have elasticity 1.
pub fn elasticity_of(lengths: &BTreeSet<usize>) -> Elasticity {
    match (lengths.first(), lengths.last()) {
        (Some(&lo), Some(&hi)) if lo > 0 => Elasticity::Finite(BigRational::new(hi.into(), lo.into())),
        _ => Elasticity::Finite(BigRational::from_integer(1.into())),
    }
}

impl LengthProfile {
    pub fn from_factorizations<P: MonoidProvider>(
        p: &P,
        zs: &[RigidFactorization<P::Elem>],
    ) -> Result<Self, FactorError<P::Error>> {
        let lengths: BTreeSet<usize> = zs.iter().map(|z| z.len()).collect();
        let catenary = catenary_degree(p, zs)?;
        Ok(LengthProfile {
            delta: delta_set(&lengths),
            elasticity: elasticity_of(&lengths),
            lengths,
            catenary,
            count: zs.len(),
        })
    }
}
