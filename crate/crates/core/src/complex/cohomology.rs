use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use super::{sign, ChainComplex};
use crate::error::{Error, Result};
use crate::linalg::{
    determinant, integer_rank, saturated_image, saturated_kernel, smith_normal_form, RatMatrix,
};
use crate::serde_util;
use crate::torsion::TorsionValue;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegreeCohomology {
    pub degree: i64,
    pub free_rank: usize,
    /// Elementary divisors (greater than one) of the torsion subgroup.
    #[serde(serialize_with = "serde_util::bigs")]
    pub divisors: Vec<BigInt>,
    #[serde(serialize_with = "serde_util::big")]
    pub torsion_order: BigInt,
    /// Square of the covolume of `H^i / tors` in harmonic cochains.
    #[serde(serialize_with = "serde_util::opt_rat")]
    pub regulator_sq: Option<BigRational>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CohomologyReport {
    pub degrees: Vec<DegreeCohomology>,
}

impl CohomologyReport {
    pub fn is_rationally_acyclic(&self) -> bool {
        self.degrees.iter().all(|d| d.free_rank == 0)
    }

    /// `sum_i (-1)^i log |H^i_tors|` with the given parity shift (0 or 1).
    pub fn alternating_torsion(&self, parity: i64) -> TorsionValue {
        self.degrees.iter().fold(TorsionValue::one(), |acc, d| {
            acc.mul(&TorsionValue::from_integer(&d.torsion_order).pow_i64(sign(d.degree + parity)))
        })
    }

    pub fn torsion_orders(&self) -> Vec<BigInt> {
        self.degrees.iter().map(|d| d.torsion_order.clone()).collect()
    }

    /// Order of the `p`-primary part of all torsion, as a product over degrees.
    pub fn total_primary_order(&self, p: u64) -> BigInt {
        let pb = BigInt::from(p);
        let mut acc = BigInt::one();
        for d in &self.degrees {
            let mut t = d.torsion_order.clone();
            while (&t % &pb) == BigInt::from(0) {
                t /= &pb;
                acc *= &pb;
            }
        }
        acc
    }
}

/// Integer cohomology, with regulators when the complex carries a metric.
pub fn cohomology(c: &ChainComplex) -> Result<CohomologyReport> {
    c.require_valid()?;
    let ranks: Vec<usize> = (0..c.len()).map(|k| integer_rank(&c.d(k))).collect();
    let mut degrees = Vec::with_capacity(c.len());
    for k in 0..c.len() {
        let incoming = c.d_into(k);
        let snf = smith_normal_form(&incoming);
        let divisors = snf.nontrivial_divisors();
        let torsion_order = divisors.iter().fold(BigInt::one(), |a, d| a * d);
        let r_in = if k == 0 { 0 } else { ranks[k - 1] };
        let free_rank = c.rank(k) - ranks[k] - r_in;
        let regulator_sq = match c.gram(k) {
            Some(h) => Some(regulator_sq(c, k, h)?),
            None => None,
        };
        degrees.push(DegreeCohomology {
            degree: c.degree(k),
            free_rank,
            divisors,
            torsion_order,
            regulator_sq,
        });
    }
    Ok(CohomologyReport { degrees })
}

/// Regulators only; fails without a metric.
pub fn regulators(c: &ChainComplex) -> Result<Vec<BigRational>> {
    c.require_gram("regulators")?;
    cohomology(c).map(|r| r.degrees.into_iter().filter_map(|d| d.regulator_sq).collect())
}

/// `det(Z^T h Z) / det(S^T h S)` with `Z` the saturated cocycles and `S` the
/// saturated coboundaries, a direct summand of `Z`.
fn regulator_sq(c: &ChainComplex, k: usize, h: &RatMatrix) -> Result<BigRational> {
    let z = saturated_kernel(&c.d(k)).to_rational();
    let s = saturated_image(&c.d_into(k)).to_rational();
    let gz = determinant(&z.transpose().matmul(h).matmul(&z));
    let gs = determinant(&s.transpose().matmul(h).matmul(&s));
    if gs == BigRational::from_integer(0.into()) {
        return Err(Error::Singular("degenerate coboundary lattice".into()));
    }
    Ok(gz / gs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::IntMatrix;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn z_two_z() {
        let c = ChainComplex::two_term(IntMatrix::from_i64(&[&[2]])).with_identity_gram();
        let r = cohomology(&c).unwrap();
        assert_eq!(r.degrees[0].free_rank, 0);
        assert_eq!(r.degrees[1].divisors, vec![BigInt::from(2)]);
        assert_eq!(r.degrees[0].regulator_sq, Some(q(1, 1)));
        assert_eq!(r.degrees[1].regulator_sq, Some(q(1, 1)));
    }

    #[test]
    fn zero_differential() {
        let c = ChainComplex::two_term(IntMatrix::from_i64(&[&[0]])).with_identity_gram();
        let r = cohomology(&c).unwrap();
        assert_eq!(r.degrees[0].free_rank, 1);
        assert_eq!(r.degrees[1].free_rank, 1);
        assert_eq!(r.degrees[1].regulator_sq, Some(q(1, 1)));
    }

    #[test]
    fn triangle_circle() {
        // vertices a,b,c; edges ab, bc, ca; (df)(uv) = f(v) - f(u)
        let d = IntMatrix::from_i64(&[&[-1, 1, 0], &[0, -1, 1], &[1, 0, -1]]);
        let c = ChainComplex::two_term(d).with_identity_gram();
        let r = cohomology(&c).unwrap();
        assert_eq!(r.degrees[0].free_rank, 1);
        assert_eq!(r.degrees[1].free_rank, 1);
        assert_eq!(r.degrees[0].regulator_sq, Some(q(3, 1)));
        assert_eq!(r.degrees[1].regulator_sq, Some(q(1, 3)));
    }

    #[test]
    fn regulators_need_metric() {
        let c = ChainComplex::two_term(IntMatrix::from_i64(&[&[2]]));
        assert!(matches!(regulators(&c), Err(Error::MissingGram(_))));
        assert!(cohomology(&c).unwrap().degrees[0].regulator_sq.is_none());
    }
}
