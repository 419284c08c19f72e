//! Elasticities from the extreme atom norm valuations.
//!
//! With `m` and `M` the least and largest norm valuations of atoms, `m` in
//! {1, 2}, and `D = 2M / m`: `rho_{2k} = kD`, `1 + kD <= rho_{2k+1} <= kD + floor(D/2)`
//! and `rho = D / 2`. An infinite `M` makes all of them infinite.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;

use super::{FactorError, MonoidProvider};
use crate::dvr::format_rational;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Elasticity {
    Finite(BigRational),
    Infinite,
}

impl serde::Serialize for Elasticity {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Display for Elasticity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Elasticity::Finite(x) => f.write_str(&format_rational(x)),
            Elasticity::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElasticityFormulas {
    pub rho_even: Elasticity,
    pub rho_odd_lower: Elasticity,
    pub rho_odd_upper: Elasticity,
    pub rho: Elasticity,
}

/// `max_val = None` stands for `M = infinity`.
pub fn elasticity_formulas(
    min_val: u64,
    max_val: Option<u64>,
    k: u64,
) -> Result<ElasticityFormulas, String> {
    if min_val != 1 && min_val != 2 {
        return Err(format!("least atom norm valuation must be 1 or 2, got {min_val}"));
    }
    let Some(max_val) = max_val else {
        return Ok(ElasticityFormulas {
            rho_even: Elasticity::Infinite,
            rho_odd_lower: Elasticity::Infinite,
            rho_odd_upper: Elasticity::Infinite,
            rho: Elasticity::Infinite,
        });
    };
    if max_val < min_val {
        return Err(format!("largest atom norm valuation {max_val} is below {min_val}"));
    }
    let d = BigInt::from(2 * max_val) / BigInt::from(min_val);
    let k = BigInt::from(k);
    let fin = |x: BigInt| Elasticity::Finite(BigRational::from_integer(x));
    Ok(ElasticityFormulas {
        rho_even: fin(&k * &d),
        rho_odd_lower: fin(&k * &d + 1),
        rho_odd_upper: fin(&k * &d + d.div_floor(&BigInt::from(2))),
        rho: Elasticity::Finite(BigRational::new(d, BigInt::from(2))),
    })
}

/// `(m, largest observed norm valuation)` over atoms with norm valuation `<= bound`.
pub fn scan_atom_norm_valuations<P: MonoidProvider>(
    p: &P,
    bound: u32,
) -> Result<(u32, u32), FactorError<P::Error>> {
    let vals = p.atom_norm_valuations(bound)?;
    match (vals.iter().min(), vals.iter().max()) {
        (Some(&lo), Some(&hi)) => Ok((lo, hi)),
        _ => Err(FactorError::InvalidArgument(format!(
            "no atoms with norm valuation <= {bound}"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fin(n: i64) -> Elasticity {
        Elasticity::Finite(BigRational::from_integer(n.into()))
    }

    #[test]
    fn closed_forms() {
        let f = elasticity_formulas(1, Some(3), 2).unwrap();
        assert_eq!(f.rho_even, fin(12));
        assert_eq!(f.rho_odd_lower, fin(13));
        assert_eq!(f.rho_odd_upper, fin(15));
        assert_eq!(f.rho, fin(3));

        let f = elasticity_formulas(2, Some(2), 3).unwrap();
        assert_eq!(f.rho_even, fin(6));
        assert_eq!(f.rho, fin(1));

        let f = elasticity_formulas(2, Some(3), 1).unwrap();
        assert_eq!(f.rho, Elasticity::Finite(BigRational::new(3.into(), 2.into())));

        let f = elasticity_formulas(1, None, 4).unwrap();
        assert!([f.rho_even, f.rho_odd_lower, f.rho_odd_upper, f.rho]
            .iter()
            .all(|x| *x == Elasticity::Infinite));

        assert!(elasticity_formulas(3, Some(5), 1).is_err());
        assert!(elasticity_formulas(2, Some(1), 1).is_err());
    }

    #[test]
    fn display() {
        assert_eq!(fin(3).to_string(), "3");
        assert_eq!(Elasticity::Infinite.to_string(), "inf");
    }
}
