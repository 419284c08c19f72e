use std::collections::BTreeSet;

use quatfact::dvr::rat;
use quatfact::eichler::CanonicalAtom;
use quatfact::factorize::{product, Factorizer};
use quatfact::{EichlerOrder, Mat2};

/// All canonical factorizations by trying every enumerated atom as a left divisor.
fn naive(r: &EichlerOrder, atoms: &[CanonicalAtom], x: &Mat2) -> BTreeSet<Vec<Mat2>> {
    let mut out = BTreeSet::new();
    if r.is_atom(x).unwrap() {
        out.insert(vec![x.clone()]);
        return out;
    }
    let t = r.norm_valuation(x).finite().unwrap() as u32;
    for v in atoms.iter().filter(|v| v.norm_valuation < t) {
        if let Some(c) = r.exact_left_divide(&v.matrix, x) {
            if r.is_unit(&c).unwrap() {
                continue;
            }
            for tail in naive(r, atoms, &c) {
                let mut f = vec![v.matrix.clone()];
                f.extend(tail);
                out.insert(f);
            }
        }
    }
    out
}

#[test]
fn enumeration_matches_naive_search() {
    for (p, n) in [(2u64, 2u32), (3, 2), (2, 3)] {
        let r = EichlerOrder::new(p, n).unwrap();
        let pp = p as i64;
        let elems = [
            Mat2::scalar(rat(pp * pp)),
            Mat2::from_ints(pp, pp.pow(n), pp, pp * pp + pp.pow(n)),
            Mat2::from_ints(pp * pp, pp.pow(n), pp + 1, pp * pp * pp),
            Mat2::from_ints(1, pp.pow(n), pp, pp * pp + pp.pow(n + 1)),
        ];
        let atoms = r.enumerate_atoms(4).unwrap();
        for a in elems {
            let zs = Factorizer::new(&r).factorizations(&a).unwrap();
            let fast: BTreeSet<Vec<Mat2>> = zs.iter().map(|z| z.atoms.clone()).collect();
            assert_eq!(fast.len(), zs.len(), "duplicates for {a}");
            for z in &zs {
                assert_eq!(product(&r, z), a);
            }
            assert_eq!(fast, naive(&r, &atoms, &a), "p={p} n={n} a={a}");
        }
    }
}

#[test]
fn lengths_match_listing() {
    let r = EichlerOrder::new(3, 2).unwrap();
    for a in [Mat2::scalar(rat(9)), Mat2::from_ints(9, 9, 1, 9), Mat2::from_ints(3, 9, 3, 18)] {
        let mut f = Factorizer::new(&r);
        let from_listing: BTreeSet<usize> = f.factorizations(&a).unwrap().iter().map(|z| z.len()).collect();
        assert_eq!(Factorizer::new(&r).lengths(&a).unwrap(), from_listing);
    }
}

#[test]
fn powers_of_pi_have_lengths_two_and_2m() {
    for (p, n) in [(2u64, 2u32), (3, 2)] {
        let r = EichlerOrder::new(p, n).unwrap();
        let mut f = Factorizer::new(&r);
        for m in 1..=3u32 {
            let x = Mat2::scalar(rat((p as i64).pow(m)));
            let l = f.lengths(&x).unwrap();
            assert!(l.contains(&2) && l.contains(&(2 * m as usize)), "p={p} m={m} L={l:?}");
        }
    }
}
