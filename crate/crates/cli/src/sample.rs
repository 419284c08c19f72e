//! Seeded random elements of Eichler orders and random ternary forms.

use quatfact::dvr::rat;
use quatfact::{EichlerOrder, Mat2};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A generator keyed by the run seed and a stream label, so checks sample independently.
pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    /// Non-units outside `J(R)`.
    OffRadical,
    /// Elements of `J(R)`.
    Radical,
    /// Either of the above, or a right associate of a canonical atom.
    Mixed,
}

/// `p^e * u` with `e` in `[base, base + 2]` and `u` in `[1, p^3]`.
fn entry<R: Rng>(rng: &mut R, p: i64, base: u32) -> i64 {
    let e = base + rng.gen_range(0..=2);
    let u = rng.gen_range(1..=p.pow(3));
    let s = if rng.gen_bool(0.5) { 1 } else { -1 };
    s * p.pow(e) * u
}

/// A random unit `[[u1, p^n x], [y, u2]]` of the order.
pub fn random_unit<R: Rng>(rng: &mut R, r: &EichlerOrder) -> Mat2 {
    let p = r.prime() as i64;
    let unit = |rng: &mut R| {
        let x = rng.gen_range(1..p * p);
        if x % p == 0 {
            x + 1
        } else {
            x
        }
    };
    let x = rng.gen_range(-p..=p);
    let y = rng.gen_range(-p * p..=p * p);
    let (a, d) = (unit(rng), unit(rng));
    let m = Mat2::from_ints(a, x * p.pow(r.level()), y, d);
    if r.is_unit(&m).unwrap_or(false) {
        m
    } else {
        Mat2::identity()
    }
}

/// A cancellative non-unit with `1 <= v(nr) <= max_val` in the requested region.
pub fn random_element<R: Rng>(rng: &mut R, r: &EichlerOrder, region: Region, max_val: u32) -> Mat2 {
    let p = r.prime() as i64;
    let n = r.level();
    loop {
        let region = match region {
            Region::Mixed => match rng.gen_range(0..3) {
                0 => Region::OffRadical,
                1 => Region::Radical,
                _ => {
                    let atoms = r.enumerate_atoms(max_val.min(3)).expect("non-hereditary order");
                    let v = &atoms[rng.gen_range(0..atoms.len())];
                    return &v.matrix * &random_unit(rng, r);
                }
            },
            other => other,
        };
        let m = match region {
            Region::Radical => Mat2::from_ints(entry(rng, p, 1), entry(rng, p, n), entry(rng, p, 0), entry(rng, p, 1)),
            _ => {
                let (a, d) = if rng.gen_bool(0.5) {
                    (rng.gen_range(1..p * p) * if rng.gen_bool(0.5) { 1 } else { -1 }, entry(rng, p, 0))
                } else {
                    (entry(rng, p, 0), rng.gen_range(1..p * p))
                };
                Mat2::from_ints(a, entry(rng, p, n), entry(rng, p, 0), d)
            }
        };
        let det = m.det();
        if det == rat(0) {
            continue;
        }
        let v = r.norm_valuation(&m).finite().unwrap_or(0);
        if v < 1 || v > max_val as i64 {
            continue;
        }
        let in_j = r.in_jacobson(&m).unwrap_or(false);
        if (region == Region::Radical) != in_j {
            continue;
        }
        return m;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_are_deterministic_and_in_region() {
        let r = EichlerOrder::new(3, 2).unwrap();
        let draw = |seed| {
            let mut g = rng(seed, 1);
            (0..20).map(|_| random_element(&mut g, &r, Region::Mixed, 5)).collect::<Vec<_>>()
        };
        assert_eq!(draw(7), draw(7));
        assert_ne!(draw(7), draw(8));
        let mut g = rng(1, 2);
        for _ in 0..50 {
            let m = random_element(&mut g, &r, Region::Radical, 6);
            assert!(r.in_jacobson(&m).unwrap());
            let m = random_element(&mut g, &r, Region::OffRadical, 4);
            assert!(!r.in_jacobson(&m).unwrap() && !r.is_unit(&m).unwrap());
            let u = random_unit(&mut g, &r);
            assert!(r.is_unit(&u).unwrap());
        }
    }
}
