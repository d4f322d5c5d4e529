use num_bigint::BigInt;
use num_rational::BigRational;

use super::isotypic::isotypic_decomposition;
use crate::complex::{analytic_torsion, ChainComplex};
use crate::error::Result;
use crate::torsion::TorsionValue;

/// Equivariant Reidemeister torsion of an acyclic complex:
/// `1/2 log tau(A[sigma-1]) - 1/(2(p-1)) log tau(A[P(sigma)])`, each part
/// carrying the restricted metric.
pub fn rt_sigma(c: &ChainComplex) -> Result<TorsionValue> {
    let p = c.require_action("equivariant Reidemeister torsion")?.order();
    c.require_gram("equivariant Reidemeister torsion")?;
    c.require_acyclic()?;
    let iso = isotypic_decomposition(c)?;
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let w = BigRational::new(BigInt::from(-1), BigInt::from(2 * (p as i64 - 1)));
    Ok(analytic_torsion(&iso.fixed_part)?
        .pow(&half)
        .mul(&analytic_torsion(&iso.pofsigma_part)?.pow(&w)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::GroupAction;
    use crate::constructions::{direct_sum_swap, tensor_power_cyclic};
    use crate::linalg::IntMatrix;

    fn z2z() -> ChainComplex {
        ChainComplex::two_term(IntMatrix::from_i64(&[&[2]])).with_identity_gram()
    }

    #[test]
    fn tensor_square_anchor() {
        let t = tensor_power_cyclic(&z2z(), 2).unwrap();
        let expected = TorsionValue::from_rational_pow(&BigRational::from_integer(2.into()), &BigRational::new((-3).into(), 2.into()));
        assert_eq!(rt_sigma(&t).unwrap(), expected);
    }

    #[test]
    fn identity_is_half_untwisted() {
        let c = z2z().with_action(GroupAction::trivial(2, &[1, 1])).unwrap();
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(rt_sigma(&c).unwrap(), analytic_torsion(&c).unwrap().pow(&half));
    }

    #[test]
    fn swap_sum() {
        assert!(rt_sigma(&direct_sum_swap(&z2z()).unwrap()).unwrap().is_one());
    }
}
