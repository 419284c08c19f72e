//! Checks on Eichler orders of level `n >= 2`.

use std::collections::{BTreeSet, HashMap};

use quatfact::dvr::rat;
use quatfact::eichler::CanonicalAtom;
use quatfact::factorize::{concat, max_distance_gap, DistanceTable, Factorizer, RigidFactorization};
use quatfact::{EichlerOrder, Mat2};
use rand::seq::SliceRandom;
use rand::Rng;
use serde_json::{json, Value};

use super::{stream, Outcome};
use crate::config::RunConfig;
use crate::sample::{random_element, random_unit, rng, Region};

fn order(p: u64, n: u32) -> EichlerOrder {
    EichlerOrder::new(p, n).expect("grid levels are non-hereditary")
}

fn at(p: u64, n: u32, a: &Mat2) -> Value {
    json!({"p": p, "n": n, "element": a})
}

fn v_nr(r: &EichlerOrder, a: &Mat2) -> u32 {
    r.norm_valuation(a).finite().expect("cancellative") as u32
}

/// `[[p, p^n], [p, p^2 + p^n]]`.
pub fn min_delta_witness_matrix(p: u64, n: u32) -> Mat2 {
    let (p, pn) = (p as i64, (p as i64).pow(n));
    Mat2::from_ints(p, pn, p, p * p + pn)
}

pub fn off_radical_samples(config: &RunConfig, r: &EichlerOrder) -> Vec<Mat2> {
    let mut g = rng(config.seed, stream(2, r.prime(), r.level()));
    (0..config.count(50))
        .map(|_| random_element(&mut g, r, Region::OffRadical, 4))
        .collect()
}

pub fn mixed_samples(config: &RunConfig, r: &EichlerOrder) -> Vec<Mat2> {
    let mut g = rng(config.seed, stream(3, r.prime(), r.level()));
    (0..config.count(200))
        .map(|_| random_element(&mut g, r, Region::Mixed, 5))
        .collect()
}

pub fn radical_samples(config: &RunConfig, r: &EichlerOrder) -> Vec<Mat2> {
    let mut g = rng(config.seed, stream(5, r.prime(), r.level()));
    (0..config.count(50))
        .map(|_| random_element(&mut g, r, Region::Radical, 6))
        .collect()
}

/// The elements of the witness, off-radical and radical checks.
fn structural_samples(config: &RunConfig, r: &EichlerOrder) -> Vec<Mat2> {
    let mut out = vec![min_delta_witness_matrix(r.prime(), r.level())];
    out.extend(off_radical_samples(config, r));
    out.extend(radical_samples(config, r));
    out
}

pub fn min_delta_witness() -> Outcome {
    Outcome::over_grid(|p, n| {
        let r = order(p, n);
        let a = min_delta_witness_matrix(p, n);
        let mut out = Outcome::default();
        match Factorizer::new(&r).lengths(&a) {
            Ok(l) => out.record(l == BTreeSet::from([2, 3]), || json!({"at": at(p, n, &a), "lengths": l})),
            Err(e) => out.error(at(p, n, &a), e),
        }
        out
    })
}

pub fn unique_off_radical(config: &RunConfig) -> Outcome {
    Outcome::over_grid(|p, n| {
        let r = order(p, n);
        let mut f = Factorizer::new(&r);
        let mut out = Outcome::default();
        for a in off_radical_samples(config, &r) {
            match f.factorizations(&a) {
                Ok(zs) => {
                    let v = v_nr(&r, &a) as usize;
                    let lengths: BTreeSet<usize> = zs.iter().map(|z| z.len()).collect();
                    out.record(zs.len() == 1 && lengths == BTreeSet::from([v]), || {
                        json!({"at": at(p, n, &a), "count": zs.len(), "lengths": lengths, "norm_valuation": v})
                    });
                }
                Err(e) => out.error(at(p, n, &a), e),
            }
        }
        out
    })
}

/// `x` is an atom iff no canonical atom of smaller norm valuation divides it on the left.
fn atom_oracle(r: &EichlerOrder, table: &[CanonicalAtom], x: &Mat2) -> bool {
    let v = v_nr(r, x);
    table
        .iter()
        .filter(|u| u.norm_valuation < v)
        .all(|u| r.exact_left_divide(&u.matrix, x).is_none())
}

pub fn atom_criterion(config: &RunConfig) -> Outcome {
    Outcome::over_grid(|p, n| {
        let r = order(p, n);
        let mut out = Outcome::default();
        let table = match r.enumerate_atoms(4) {
            Ok(t) => t,
            Err(e) => {
                out.error(json!({"p": p, "n": n}), e);
                return out;
            }
        };
        for a in mixed_samples(config, &r) {
            match r.is_atom(&a) {
                Ok(got) => {
                    let want = atom_oracle(&r, &table, &a);
                    out.record(got == want, || json!({"at": at(p, n, &a), "is_atom": got, "oracle": want}));
                }
                Err(e) => out.error(at(p, n, &a), e),
            }
        }
        out
    })
}

/// Completeness of a canonical atom table against `atoms`, and pairwise
/// non-association of its entries with norm valuation at most `max_val`.
pub fn check_canonical_table(r: &EichlerOrder, table: &[CanonicalAtom], atoms: &[Mat2], max_val: u32) -> Outcome {
    let (p, n) = (r.prime(), r.level());
    let mut out = Outcome::default();
    for x in atoms {
        let v = v_nr(r, x);
        let matches: Vec<&Mat2> = table
            .iter()
            .filter(|u| u.norm_valuation == v && r.right_associated(&u.matrix, x))
            .map(|u| &u.matrix)
            .collect();
        let canonical = r.canonical_right_associate(x).map(|c| c.representative.matrix);
        let ok = matches.len() == 1 && canonical.as_ref().ok() == Some(matches[0]);
        out.record(ok, || {
            json!({
                "at": at(p, n, x),
                "matching_representatives": matches,
                "canonical": canonical.as_ref().ok(),
            })
        });
    }
    // Associates have equal norm valuations, so only equal-valuation pairs can collide.
    let small: Vec<&CanonicalAtom> = table.iter().filter(|u| u.norm_valuation <= max_val).collect();
    for (i, u) in small.iter().enumerate() {
        for w in &small[i + 1..] {
            if u.norm_valuation != w.norm_valuation {
                continue;
            }
            out.record(!r.right_associated(&u.matrix, &w.matrix), || {
                json!({"p": p, "n": n, "associated_pair": [&u.matrix, &w.matrix]})
            });
        }
    }
    out
}

pub fn canonical_associates(config: &RunConfig) -> Outcome {
    Outcome::over_grid(|p, n| {
        let r = order(p, n);
        let atoms: Vec<Mat2> = mixed_samples(config, &r)
            .into_iter()
            .filter(|a| r.is_atom(a).unwrap_or(false))
            .collect();
        match r.enumerate_atoms(5) {
            Ok(table) => check_canonical_table(&r, &table, &atoms, 3),
            Err(e) => {
                let mut out = Outcome::default();
                out.error(json!({"p": p, "n": n}), e);
                out
            }
        }
    })
}

pub fn radical_min_length(config: &RunConfig) -> Outcome {
    Outcome::over_grid(|p, n| {
        let r = order(p, n);
        let mut f = Factorizer::new(&r);
        let mut out = Outcome::default();
        for a in radical_samples(config, &r) {
            match f.lengths(&a) {
                Ok(l) => {
                    let min = l.first().copied().unwrap_or(0);
                    out.record(min <= n as usize + 5, || json!({"at": at(p, n, &a), "lengths": l}));
                }
                Err(e) => out.error(at(p, n, &a), e),
            }
        }
        out
    })
}

pub fn catenary_bounds(config: &RunConfig) -> Outcome {
    Outcome::over_grid(|p, n| {
        let r = order(p, n);
        let mut f = Factorizer::new(&r);
        let mut out = Outcome::default();
        let n = n as usize;
        for a in structural_samples(config, &r) {
            match f.length_profile(&a) {
                Ok(profile) => {
                    let gap = max_distance_gap(&profile.lengths);
                    out.record(profile.catenary <= n + 6 && gap <= n + 4, || {
                        json!({"at": at(p, n as u32, &a), "catenary": profile.catenary, "max_delta": gap})
                    });
                }
                Err(e) => out.error(at(p, n as u32, &a), e),
            }
        }
        out
    })
}

pub fn powers_of_pi() -> Outcome {
    Outcome::over_grid(|p, n| {
        let r = order(p, n);
        let mut f = Factorizer::new(&r);
        let mut out = Outcome::default();
        for m in 1..=3u32 {
            let a = Mat2::scalar(rat((p as i64).pow(m)));
            match f.lengths(&a) {
                Ok(l) => {
                    let ok = l.contains(&2) && l.contains(&(2 * m as usize));
                    out.record(ok, || json!({"at": at(p, n, &a), "m": m, "lengths": l}));
                }
                Err(e) => out.error(at(p, n, &a), e),
            }
        }
        out
    })
}

/// Elements with at most this many factorizations feed the distance axiom check.
const DISTANCE_POOL_LIMIT: usize = 150;
/// D4 translations are tried on elements with `v(nr) <= 4`, keeping products small.
const TRANSLATION_MAX_VAL: u32 = 4;

struct Tabled {
    element: Mat2,
    zs: Vec<RigidFactorization<Mat2>>,
    table: DistanceTable<Mat2>,
    rows: HashMap<usize, Vec<usize>>,
}

impl Tabled {
    fn row(&mut self, i: usize) -> &[usize] {
        let table = &self.table;
        self.rows.entry(i).or_insert_with(|| table.distances_from(i))
    }

    fn distance(&mut self, i: usize, j: usize) -> usize {
        self.row(i)[j]
    }
}

fn distance_instance<R: Rng>(
    g: &mut R,
    r: &EichlerOrder,
    f: &mut Factorizer<'_, EichlerOrder>,
    atoms: &[CanonicalAtom],
    t: &mut Tabled,
) -> Result<Option<Value>, String> {
    let len = t.zs.len();
    let (i, j, k) = (g.gen_range(0..len), g.gen_range(0..len), g.gen_range(0..len));
    let (dij, dji, dik, dkj, dii) = (t.distance(i, j), t.distance(j, i), t.distance(i, k), t.distance(k, j), t.distance(i, i));
    let (li, lj) = (t.zs[i].len(), t.zs[j].len());
    let mut failed = Vec::new();
    if dii != 0 {
        failed.push("D1");
    }
    if dij != dji {
        failed.push("D2");
    }
    if dij > dik + dkj {
        failed.push("D3");
    }
    if li.abs_diff(lj) > dij || dij > li.max(lj).max(1) {
        failed.push("D5");
    }
    let mut translated = Vec::new();
    if v_nr(r, &t.element) <= TRANSLATION_MAX_VAL {
        let u = &atoms[g.gen_range(0..atoms.len())].matrix;
        let x_elem = u * &random_unit(g, r);
        let x = f.factorizations(&x_elem).map_err(|e| e.to_string())?.remove(0);
        for left in [true, false] {
            let big_elem = if left { &x_elem * &t.element } else { &t.element * &x_elem };
            let big_zs = f.factorizations(&big_elem).map_err(|e| e.to_string())?;
            let big = DistanceTable::new(r, &big_zs).map_err(|e| e.to_string())?;
            let shift = |z: &RigidFactorization<Mat2>| -> Result<usize, String> {
                let w = if left { concat(r, &x, z) } else { concat(r, z, &x) }.map_err(|e| e.to_string())?;
                big.position(&w).ok_or_else(|| format!("{w:?} missing from Z*({big_elem})"))
            };
            let (si, sj) = (shift(&t.zs[i])?, shift(&t.zs[j])?);
            let d = big.distance(si, sj);
            translated.push(d);
            if d != dij {
                failed.push(if left { "D4 left" } else { "D4 right" });
            }
        }
    }
    Ok((!failed.is_empty()).then(|| {
        json!({
            "element": &t.element,
            "z": &t.zs[i].atoms,
            "z_prime": &t.zs[j].atoms,
            "z_double_prime": &t.zs[k].atoms,
            "d": [dij, dji, dik, dkj],
            "translated": translated,
            "failed": failed,
        })
    }))
}

pub fn distance_axioms(config: &RunConfig) -> Outcome {
    let total = config.count(500);
    Outcome::over_grid(|p, n| {
        let r = order(p, n);
        let mut f = Factorizer::new(&r);
        let mut out = Outcome::default();
        let atoms: Vec<CanonicalAtom> = match r.enumerate_atoms(1) {
            Ok(a) => a,
            Err(e) => {
                out.error(json!({"p": p, "n": n}), e);
                return out;
            }
        };
        let mut elements = structural_samples(config, &r);
        elements.extend(mixed_samples(config, &r));
        let mut pool = Vec::new();
        for a in elements {
            let zs = match f.factorizations(&a) {
                Ok(zs) => zs,
                Err(e) => {
                    out.error(at(p, n, &a), e);
                    continue;
                }
            };
            if zs.len() > DISTANCE_POOL_LIMIT {
                continue;
            }
            match DistanceTable::new(&r, &zs) {
                Ok(table) => pool.push(Tabled {
                    element: a,
                    zs,
                    table,
                    rows: HashMap::new(),
                }),
                Err(e) => out.error(at(p, n, &a), e),
            }
        }
        // Elements with several factorizations exercise the axioms; keep a few unique ones too.
        pool.sort_by_key(|t| std::cmp::Reverse(t.zs.len() > 1));
        let rich = pool.iter().filter(|t| t.zs.len() > 1).count().max(1).min(pool.len());
        let mut g = rng(config.seed, stream(8, p, n));
        let share = total / super::GRID.len() + usize::from(super::GRID.iter().position(|&x| x == (p, n)).unwrap() < total % super::GRID.len());
        for s in 0..share {
            let idx = if s % 10 == 9 { g.gen_range(0..pool.len()) } else { g.gen_range(0..rich) };
            let t = &mut pool[idx];
            match distance_instance(&mut g, &r, &mut f, &atoms, t) {
                Ok(fail) => out.record(fail.is_none(), || json!({"p": p, "n": n, "instance": fail})),
                Err(e) => out.error(at(p, n, &t.element), e),
            }
        }
        out
    })
}

/// Solutions `(x, y)` of `alpha * x + beta * y = 0 mod m1` and `gamma * x + delta * y = 0 mod m2`,
/// with `x` mod `mx` and `y` mod `my`.
fn solve_pair(coef: [i128; 4], scale_x: i128, moduli: (i128, i128), ranges: (u64, u64)) -> Vec<(i128, i128)> {
    let [alpha, beta, gamma, delta] = coef;
    let (m1, m2) = moduli;
    let mut out = Vec::new();
    for x in 0..ranges.0 as i128 {
        for y in 0..ranges.1 as i128 {
            if (alpha * scale_x * x + beta * y).rem_euclid(m1) == 0 && (gamma * scale_x * x + delta * y).rem_euclid(m2) == 0 {
                out.push((x, y));
            }
        }
    }
    out
}

/// Common right multiples `W = U X` with `V^{-1} W` in the order.
///
/// With `M = adj(V) U` and `t = v(nr V)`, `V^{-1} U X` lies in the order iff the first
/// column of `M X` vanishes mod `p^t`, `(M X)_12` mod `p^(t+n)` and `(M X)_22` mod `p^t`.
pub fn common_right_multiples<R: Rng>(g: &mut R, r: &EichlerOrder, u: &Mat2, v: &Mat2, count: usize) -> Vec<Mat2> {
    let (p, n) = (r.prime(), r.level());
    let t = v_nr(r, v);
    let pt = p.pow(t);
    let ptn = p.pow(t + n);
    let m = &v.adj() * u;
    let [m11, m12, m21, m22] = m
        .entries()
        .map(|e| r.dvr().residue_u64(e, ptn).expect("entries lie in D") as i128);
    let first = solve_pair([m11, m12, m21, m22], 1, (pt as i128, pt as i128), (pt, pt));
    let pn = p.pow(n) as i128;
    let second = solve_pair([m11, m12, m21, m22], pn, (ptn as i128, pt as i128), (pt, ptn));
    let mut out = Vec::new();
    let mut attempts = 0;
    while out.len() < count && attempts < 100 * count {
        attempts += 1;
        let &(x1, x3) = first.choose(g).expect("zero is a solution");
        let &(x2, x4) = second.choose(g).expect("zero is a solution");
        let lift = |x: i128, m: u64, g: &mut R| x as i64 + m as i64 * g.gen_range(-1..=1);
        let x = Mat2::from_ints(
            lift(x1, pt, g),
            pn as i64 * lift(x2, pt, g),
            lift(x3, pt, g),
            lift(x4, ptn, g),
        );
        if x.det() == rat(0) {
            continue;
        }
        out.push(u * &x);
    }
    out
}

pub fn intersection_in_radical(config: &RunConfig) -> Outcome {
    let pairs = config.count(50);
    Outcome::over_grid(|p, n| {
        let r = order(p, n);
        let mut out = Outcome::default();
        let table = match r.enumerate_atoms(3) {
            Ok(t) => t,
            Err(e) => {
                out.error(json!({"p": p, "n": n}), e);
                return out;
            }
        };
        let mut g = rng(config.seed, stream(12, p, n));
        let slot = super::GRID.iter().position(|&x| x == (p, n)).unwrap();
        let share = pairs / super::GRID.len() + usize::from(slot < pairs % super::GRID.len());
        for _ in 0..share {
            let (u, v) = loop {
                let u = table.choose(&mut g).unwrap();
                let v = table.choose(&mut g).unwrap();
                if u != v {
                    break (u, v);
                }
            };
            let multiples = common_right_multiples(&mut g, &r, &u.matrix, &v.matrix, config.count(20));
            if multiples.is_empty() {
                out.record(false, || json!({"p": p, "n": n, "pair": [&u.matrix, &v.matrix], "error": "no multiples"}));
            }
            for w in multiples {
                let both = r.exact_left_divide(&u.matrix, &w).is_some() && r.exact_left_divide(&v.matrix, &w).is_some();
                let in_j = r.in_jacobson(&w).unwrap_or(false);
                out.record(both && in_j, || {
                    json!({"p": p, "n": n, "pair": [&u.matrix, &v.matrix], "multiple": w, "common": both, "in_radical": in_j})
                });
            }
        }
        out
    })
}
