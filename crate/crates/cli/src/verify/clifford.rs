//! Checks on even Clifford algebras of ternary forms.

use num_rational::BigRational;
use quatfact::clifford::local::{LocalAtomStatus, LocalOrder, DEFAULT_ISOTROPY_BOUND};
use quatfact::clifford::radical::{classify_residue, ResidueCase};
use quatfact::clifford::ring::{CoeffRing, ZModPk};
use quatfact::clifford::{C0Algebra, C0Element, TernaryForm};
use quatfact::dvr::ratio;
use rand::Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::{stream, Outcome};
use crate::config::RunConfig;
use crate::sample::rng;

fn merge_ordered(parts: Vec<Outcome>) -> Outcome {
    let mut out = Outcome::default();
    for part in parts {
        out.merge(part);
    }
    out
}

/// A nondegenerate form with small rational coefficients.
fn random_form<R: Rng>(g: &mut R) -> TernaryForm {
    loop {
        let coeffs = std::array::from_fn(|_| ratio(g.gen_range(-6..=6), if g.gen_bool(0.2) { 2 } else { 1 }));
        let f = TernaryForm::new(coeffs);
        if f.is_nondegenerate() {
            return f;
        }
    }
}

fn identities_on<R: CoeffRing, G: Rng>(g: &mut G, alg: &C0Algebra<R>, triples: usize, label: &str) -> Outcome {
    let mut out = Outcome::default();
    let draw = |g: &mut G| alg.element(std::array::from_fn(|_| g.gen_range(-9..=9)));
    for _ in 0..triples {
        let (x, y, z) = (draw(g), draw(g), draw(g));
        let xy = alg.mul(&x, &y);
        let assoc = alg.mul(&xy, &z) == alg.mul(&x, &alg.mul(&y, &z));
        let conj = alg.conj(&xy) == alg.mul(&alg.conj(&y), &alg.conj(&x));
        let ring = alg.ring();
        let norm = alg.norm(&xy) == ring.mul(&alg.norm(&x), &alg.norm(&y));
        let quadratic = alg.sub(&alg.mul(&x, &x), &alg.scale(&alg.trace(&x), &x));
        let quadratic = alg.is_zero(&alg.add(&quadratic, &alg.scalar(&alg.norm(&x))));
        let conj_sum = alg.add(&x, &alg.conj(&x)) == alg.scalar(&alg.trace(&x));
        let conj_prod = alg.mul(&x, &alg.conj(&x)) == alg.scalar(&alg.norm(&x));
        out.record(assoc && conj && norm && quadratic && conj_sum && conj_prod, || {
            json!({
                "ring": label,
                "coefficients": format!("{:?}", alg.coeffs()),
                "x": format!("{:?}", x.x), "y": format!("{:?}", y.x), "z": format!("{:?}", z.x),
                "associative": assoc,
                "conjugation_reverses": conj,
                "norm_multiplicative": norm,
                "quadratic_identity": quadratic && conj_sum && conj_prod,
            })
        });
    }
    out
}

pub fn algebra_identities(config: &RunConfig) -> Outcome {
    let forms = {
        let mut g = rng(config.seed, stream(9, 0, 0));
        (0..10).map(|_| random_form(&mut g)).collect::<Vec<_>>()
    };
    let triples = config.count(1000);
    let parts: Vec<Outcome> = forms
        .par_iter()
        .enumerate()
        .map(|(idx, form)| {
            let mut g = rng(config.seed, stream(9, idx as u64, 1));
            let mut out = identities_on(&mut g, &form.algebra_over_q(), triples, "Q");
            for p in [2u64, 3, 5] {
                let ring = ZModPk::new(p, 1).expect("small prime");
                let scaled = scale_to_integral(form);
                match scaled.algebra_mod(ring) {
                    Ok(alg) => out.merge(identities_on(&mut g, &alg, triples, &format!("F_{p}"))),
                    Err(e) => out.error(json!({"form": form.to_string(), "p": p}), e),
                }
            }
            out
        })
        .collect();
    merge_ordered(parts)
}

/// `2 q`, so halves become integers and the form reduces modulo 2 too.
fn scale_to_integral(form: &TernaryForm) -> TernaryForm {
    TernaryForm::new(form.coefficients().map(|c| c * BigRational::from_integer(2.into())))
}

/// Reduced coefficients `[a, b, c, u, v, w]` of a random form of the given shape.
fn shape_residues<R: Rng>(g: &mut R, case: ResidueCase, p: u64) -> [u64; 6] {
    let unit = |g: &mut R| g.gen_range(1..p);
    let any = |g: &mut R| g.gen_range(0..p);
    match case {
        ResidueCase::DiagonalOdd | ResidueCase::DiagonalEven => [unit(g), unit(g), unit(g), 0, 0, 0],
        ResidueCase::RankTwoOdd | ResidueCase::RankTwoEven => [unit(g), unit(g), 0, 0, 0, 0],
        ResidueCase::RankOne => [any(g), 0, 0, 0, 0, 0],
        ResidueCase::MixedNondegenerate => [1, any(g), any(g), 1, 0, 0],
        ResidueCase::MixedDegenerate => [0, any(g), any(g), 1, 0, 0],
    }
}

/// Integer lifts `r + p * s` of residues, rejecting degenerate lifts.
fn lift_form<R: Rng>(g: &mut R, residues: [u64; 6], p: u64) -> TernaryForm {
    loop {
        let c = residues.map(|r| r as i64 + p as i64 * g.gen_range(-2..=2));
        let f = TernaryForm::from_ints(c);
        if f.is_nondegenerate() {
            return f;
        }
    }
}

pub fn residue_case_table(config: &RunConfig) -> Outcome {
    let per_shape = config.count(5);
    let jobs: Vec<(u64, ResidueCase)> = [2u64, 3, 5]
        .iter()
        .flat_map(|&p| ResidueCase::ALL.iter().filter(move |c| c.occurs_for(p)).map(move |&c| (p, c)))
        .collect();
    let parts: Vec<Outcome> = jobs
        .par_iter()
        .enumerate()
        .map(|(idx, &(p, case))| {
            let mut g = rng(config.seed, stream(10, p, idx as u32));
            let mut out = Outcome::default();
            for _ in 0..per_shape {
                let residues = shape_residues(&mut g, case, p);
                let form = lift_form(&mut g, residues, p);
                let context = || json!({"p": p, "expected_case": case.label(), "form": form.to_string()});
                match classify_residue(&form, p) {
                    Ok(c) => {
                        let dim = c.computed.quotient_dimension();
                        let ok = c.case == case && c.agrees() && [1, 2, 4].contains(&dim);
                        out.record(ok, || {
                            json!({
                                "at": context(),
                                "detected_case": c.case.label(),
                                "predicted": c.prediction,
                                "computed_radical_powers": (1..=3).map(|m| c.computed.radical_power(m).to_vec()).collect::<Vec<_>>(),
                                "computed_quotient": c.computed.quotient(),
                            })
                        });
                    }
                    Err(e) => out.error(context(), e),
                }
            }
            out
        })
        .collect();
    merge_ordered(parts)
}

fn is_square_mod(p: u64, x: u64) -> bool {
    (0..p).any(|y| (y * y) % p == x % p)
}

/// Isotropic forms whose orders are local: `(a, b, -b t^2)` with `p | t` and `A / J`
/// a field, alternating with `(a, p b', -p b' t^2)`.
fn isotropic_local_form<R: Rng>(g: &mut R, p: u64, family: usize) -> TernaryForm {
    let pi = p as i64;
    loop {
        let unit = |g: &mut R| {
            let x = g.gen_range(1..pi * pi) * if g.gen_bool(0.5) { 1 } else { -1 };
            if x % pi == 0 {
                x + 1
            } else {
                x
            }
        };
        let a = unit(g);
        let s = g.gen_range(1..=3);
        let (b, t) = if family == 0 {
            let b = unit(g);
            let neg_ab = (-(a * b)).rem_euclid(pi) as u64;
            if p != 2 && is_square_mod(p, neg_ab) {
                continue;
            }
            (b, pi * s)
        } else {
            (pi * unit(g), s)
        };
        let f = TernaryForm::from_ints([a, b, -b * t * t, 0, 0, 0]);
        if f.is_nondegenerate() {
            return f;
        }
    }
}

fn nilpotent_case(p: u64, form: &TernaryForm) -> Result<Option<Value>, String> {
    let order = LocalOrder::new(form, p).map_err(|e| e.to_string())?;
    if !order.is_local() {
        return Ok(Some(json!({"reason": "order is not local"})));
    }
    let z = order.find_nilpotent_in_radical(DEFAULT_ISOTROPY_BOUND).map_err(|e| e.to_string())?;
    let alg = order.algebra();
    let (nr, tr) = (alg.norm(&z), alg.trace(&z));
    let in_j = order.in_radical(&z).map_err(|e| e.to_string())?;
    let in_j2 = order.in_radical_squared(&z).map_err(|e| e.to_string())?;
    let mut bad = Vec::new();
    if nr != BigRational::from_integer(0.into()) || tr != BigRational::from_integer(0.into()) || !in_j || in_j2 {
        bad.push(json!({"z": z.to_string(), "nr": nr.to_string(), "tr": tr.to_string(), "in_radical": in_j, "in_radical_squared": in_j2}));
    }
    for k in 2..=5u32 {
        let x: C0Element<BigRational> = order.long_atom_family(&z, k).map_err(|e| e.to_string())?;
        let v = order.dvr().valuation(&alg.norm(&x)).finite();
        let status = order.is_atom_local(&x).map_err(|e| e.to_string())?;
        if status != LocalAtomStatus::Atom || v != Some(2 * k as i64) {
            bad.push(json!({"k": k, "element": x.to_string(), "norm_valuation": v, "status": status}));
        }
    }
    Ok((!bad.is_empty()).then(|| json!({"z": z.to_string(), "failures": bad})))
}

pub fn nilpotent_long_atoms(config: &RunConfig) -> Outcome {
    let per_prime = config.count(10);
    let parts: Vec<Outcome> = [2u64, 3]
        .par_iter()
        .map(|&p| {
            let mut g = rng(config.seed, stream(11, p, 0));
            let mut out = Outcome::default();
            for i in 0..per_prime {
                let form = isotropic_local_form(&mut g, p, i % 2);
                match nilpotent_case(p, &form) {
                    Ok(fail) => out.record(fail.is_none(), || json!({"p": p, "form": form.to_string(), "detail": fail})),
                    Err(e) => out.error(json!({"p": p, "form": form.to_string()}), e),
                }
            }
            out
        })
        .collect();
    merge_ordered(parts)
}
