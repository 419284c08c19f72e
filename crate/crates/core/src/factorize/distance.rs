//! The rigid distance and catenary degrees.
//!
//! A replacement step turns `x * y * w` into `x * y' * w` at cost `max(|y|, |y'|)`.
//! The single-step cost `r(z, z')` is the cheapest such step, found from the longest
//! common prefix (read off canonical forms) and the longest common suffix (common
//! prefix of the canonical forms of the reversed conjugates). A single step does
//! not satisfy the triangle inequality, so the rigid distance `d(z, z')` is the
//! least total cost of a sequence of steps, a shortest path in `Z*(a)` weighted by `r`.
//! Chains with steps `d <= N` and with steps `r <= N` connect the same pairs, so the
//! catenary degree is computed from `r` directly.

use std::collections::BTreeMap;

use super::{canonicalize, product, FactorError, Factorizer, MonoidProvider, RigidFactorization};

/// `z` read backwards through the involution: `conj(u_k) * ... * conj(u_1) * conj(unit)`.
pub fn reversed_conjugate<P: MonoidProvider>(
    p: &P,
    z: &RigidFactorization<P::Elem>,
) -> Result<RigidFactorization<P::Elem>, P::Error> {
    let mut atoms: Vec<P::Elem> = z.atoms.iter().rev().map(|u| p.involution(u)).collect();
    let tail_unit = p.involution(&z.leading_unit);
    match atoms.last_mut() {
        Some(last) => {
            *last = p.multiply(last, &tail_unit);
            canonicalize(p, &p.one(), &atoms)
        }
        None => Ok(RigidFactorization {
            leading_unit: tail_unit,
            atoms,
        }),
    }
}

/// A factorization together with its reversed-conjugate canonical form.
#[derive(Debug, Clone)]
pub struct RigidDistance<E> {
    forward: RigidFactorization<E>,
    backward: RigidFactorization<E>,
}

impl<E: Clone + Eq> RigidDistance<E> {
    pub fn prepare<P: MonoidProvider<Elem = E>>(
        p: &P,
        z: &RigidFactorization<E>,
    ) -> Result<Self, P::Error> {
        let forward = canonicalize(p, &z.leading_unit, &z.atoms)?;
        let backward = reversed_conjugate(p, &forward)?;
        Ok(RigidDistance { forward, backward })
    }

    pub fn factorization(&self) -> &RigidFactorization<E> {
        &self.forward
    }

    /// Cost of the cheapest single replacement step to another factorization of the same element.
    pub fn replacement_cost(&self, other: &Self) -> usize {
        if self.forward == other.forward {
            return 0;
        }
        let (k, l) = (self.forward.len(), other.forward.len());
        let short = k.min(l);
        // Only positions that are canonical in both forms are comparable.
        let comparable = short.saturating_sub(1);
        let common = |x: &[E], y: &[E]| {
            x.iter()
                .zip(y)
                .take(comparable)
                .take_while(|(a, b)| a == b)
                .count()
        };
        let prefix = common(&self.forward.atoms, &other.forward.atoms);
        let suffix = common(&self.backward.atoms, &other.backward.atoms);
        // Both replaced pieces are nonempty: a unit cannot equal a nonempty product of atoms.
        k.max(l) - (prefix + suffix).min(short.saturating_sub(1))
    }
}

/// Shortest replacement paths on a fully enumerated `Z*(a)`.
#[derive(Debug, Clone)]
pub struct DistanceTable<E> {
    prepared: Vec<RigidDistance<E>>,
    index: BTreeMap<Vec<E>, usize>,
    weights: Vec<Vec<usize>>,
}

impl<E: Clone + Eq + Ord> DistanceTable<E> {
    pub fn new<P: MonoidProvider<Elem = E>>(p: &P, zs: &[RigidFactorization<E>]) -> Result<Self, P::Error> {
        let prepared = zs
            .iter()
            .map(|z| RigidDistance::prepare(p, z))
            .collect::<Result<Vec<_>, _>>()?;
        let index = prepared
            .iter()
            .enumerate()
            .map(|(i, z)| (z.forward.atoms.clone(), i))
            .collect();
        let n = prepared.len();
        let mut weights = vec![vec![0; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let w = prepared[i].replacement_cost(&prepared[j]);
                weights[i][j] = w;
                weights[j][i] = w;
            }
        }
        Ok(DistanceTable {
            prepared,
            index,
            weights,
        })
    }

    pub fn len(&self) -> usize {
        self.prepared.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prepared.is_empty()
    }

    pub fn factorization(&self, i: usize) -> &RigidFactorization<E> {
        self.prepared[i].factorization()
    }

    pub fn position(&self, z: &RigidFactorization<E>) -> Option<usize> {
        self.index.get(&z.atoms).copied()
    }

    pub fn replacement_cost(&self, i: usize, j: usize) -> usize {
        self.weights[i][j]
    }

    /// Rigid distances from `i` to every factorization (dense Dijkstra).
    pub fn distances_from(&self, i: usize) -> Vec<usize> {
        let n = self.len();
        let mut dist = vec![usize::MAX; n];
        let mut done = vec![false; n];
        dist[i] = 0;
        for _ in 0..n {
            let Some(u) = (0..n).filter(|&u| !done[u]).min_by_key(|&u| dist[u]) else { break };
            done[u] = true;
            for v in 0..n {
                let alt = dist[u] + self.weights[u][v];
                if !done[v] && alt < dist[v] {
                    dist[v] = alt;
                }
            }
        }
        dist
    }

    pub fn distance(&self, i: usize, j: usize) -> usize {
        self.distances_from(i)[j]
    }

    /// Least `N` for which the graph with edges `r <= N` is connected.
    pub fn catenary_degree(&self) -> usize {
        let n = self.len();
        if n <= 1 {
            return 0;
        }
        let mut edges = Vec::with_capacity(n * (n - 1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                edges.push((self.weights[i][j], i, j));
            }
        }
        edges.sort_unstable();
        let mut uf = UnionFind::new(n);
        for (d, i, j) in edges {
            uf.union(i, j);
            if uf.sets == 1 {
                return d;
            }
        }
        unreachable!("complete graph is connected")
    }
}

/// The rigid distance between two factorizations of the same element.
///
/// Enumerates `Z*(a)` for `a = pi(z)`, so the cost grows with the number of factorizations.
pub fn rigid_distance<P: MonoidProvider>(
    p: &P,
    z: &RigidFactorization<P::Elem>,
    z2: &RigidFactorization<P::Elem>,
) -> Result<usize, FactorError<P::Error>> {
    let a = product(p, z);
    if a != product(p, z2) {
        return Err(FactorError::ProductMismatch);
    }
    let zs = Factorizer::new(p).factorizations(&a)?;
    rigid_distance_within(p, &zs, z, z2)
}

/// The rigid distance, given the full list `Z*(a)`.
pub fn rigid_distance_within<P: MonoidProvider>(
    p: &P,
    zs: &[RigidFactorization<P::Elem>],
    z: &RigidFactorization<P::Elem>,
    z2: &RigidFactorization<P::Elem>,
) -> Result<usize, FactorError<P::Error>> {
    if product(p, z) != product(p, z2) {
        return Err(FactorError::ProductMismatch);
    }
    let table = DistanceTable::new(p, zs)?;
    let locate = |z: &RigidFactorization<P::Elem>| -> Result<usize, FactorError<P::Error>> {
        let c = canonicalize(p, &z.leading_unit, &z.atoms)?;
        table
            .position(&c)
            .ok_or_else(|| FactorError::InvalidArgument("factorization not in the list".into()))
    };
    let (i, j) = (locate(z)?, locate(z2)?);
    Ok(table.distance(i, j))
}

struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
    sets: usize,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            rank: vec![0; n],
            sets: n,
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
        self.sets -= 1;
    }
}

/// Least `N` such that any two factorizations in `zs` are joined by an `N`-chain.
pub fn catenary_degree<P: MonoidProvider>(
    p: &P,
    zs: &[RigidFactorization<P::Elem>],
) -> Result<usize, FactorError<P::Error>> {
    Ok(DistanceTable::new(p, zs)?.catenary_degree())
}

/// The largest gap between consecutive lengths, 0 when there is none.
pub fn max_distance_gap(lengths: &std::collections::BTreeSet<usize>) -> usize {
    super::delta_set(lengths).last().copied().unwrap_or(0)
}
