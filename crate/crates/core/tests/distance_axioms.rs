use quatfact::dvr::rat;
use quatfact::factorize::{concat, DistanceTable, Factorizer, RigidFactorization};
use quatfact::{EichlerOrder, Mat2};

fn samples(p: i64, n: u32) -> Vec<Mat2> {
    vec![
        Mat2::scalar(rat(p * p)),
        Mat2::from_ints(p, p.pow(n), p, p * p + p.pow(n)),
        Mat2::from_ints(p * p, p.pow(n), 1, p * p),
        Mat2::from_ints(p, p.pow(n), 1, p + p * p),
    ]
}

#[test]
fn d1_d2_d3_d5_on_small_elements() {
    for (p, n) in [(2u64, 2u32), (3, 2), (2, 3)] {
        let r = EichlerOrder::new(p, n).unwrap();
        for a in samples(p as i64, n) {
            let zs = Factorizer::new(&r).factorizations(&a).unwrap();
            let table = DistanceTable::new(&r, &zs).unwrap();
            let d: Vec<Vec<usize>> = (0..zs.len()).map(|i| table.distances_from(i)).collect();
            for i in 0..zs.len() {
                assert_eq!(d[i][i], 0);
                for j in 0..zs.len() {
                    assert_eq!(d[i][j], d[j][i]);
                    let (k, l) = (zs[i].len(), zs[j].len());
                    assert!(k.abs_diff(l) <= d[i][j]);
                    assert!(d[i][j] <= k.max(l).max(1));
                    if i != j {
                        assert!(d[i][j] > 0);
                    }
                    for m in 0..zs.len() {
                        assert!(d[i][j] <= d[i][m] + d[m][j]);
                    }
                }
            }
        }
    }
}

#[test]
fn d4_translation_by_an_atom() {
    for (p, n) in [(2u64, 2u32), (3, 2)] {
        let r = EichlerOrder::new(p, n).unwrap();
        let pp = p as i64;
        let x_elem = Mat2::from_ints(pp, 0, 0, 1);
        let x = Factorizer::new(&r).factorizations(&x_elem).unwrap().remove(0);
        for a in samples(pp, n) {
            let zs = Factorizer::new(&r).factorizations(&a).unwrap();
            let small = DistanceTable::new(&r, &zs).unwrap();
            for (left, big_elem) in [(true, &x_elem * &a), (false, &a * &x_elem)] {
                let big_zs = Factorizer::new(&r).factorizations(&big_elem).unwrap();
                let big = DistanceTable::new(&r, &big_zs).unwrap();
                let shift = |z: &RigidFactorization<Mat2>| {
                    let w = if left { concat(&r, &x, z) } else { concat(&r, z, &x) }.unwrap();
                    big.position(&w).unwrap()
                };
                for i in 0..zs.len() {
                    let row = big.distances_from(shift(&zs[i]));
                    let base = small.distances_from(i);
                    for j in 0..zs.len() {
                        assert_eq!(row[shift(&zs[j])], base[j], "p={p} n={n} a={a} left={left}");
                    }
                }
            }
        }
    }
}

#[test]
fn catenary_matches_chain_definition() {
    let r = EichlerOrder::new(2, 2).unwrap();
    let zs = Factorizer::new(&r).factorizations(&Mat2::scalar(rat(4))).unwrap();
    let table = DistanceTable::new(&r, &zs).unwrap();
    let c = table.catenary_degree();
    // every pair is joined by a chain of steps with rigid distance at most c, and not c - 1
    let connected = |bound: usize| {
        let mut seen = vec![false; zs.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            let row = table.distances_from(i);
            for j in 0..zs.len() {
                if !seen[j] && row[j] <= bound {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.iter().all(|&s| s)
    };
    assert!(connected(c));
    assert!(c == 0 || !connected(c - 1));
}
