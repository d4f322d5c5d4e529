use num_bigint::BigInt;
use num_rational::BigRational;

use super::{sign, ChainComplex};
use crate::error::Result;
use crate::linalg::{charpoly, inverse, pdet_from_charpoly, RatMatrix, RatPoly};
use crate::torsion::TorsionValue;

/// Metric adjoint `h_k^{-1} d^T h_{k+1}` of `d: A^k -> A^{k+1}`.
pub(crate) fn adjoint(d: &RatMatrix, h_src: &RatMatrix, h_dst: &RatMatrix) -> Result<RatMatrix> {
    Ok(inverse(h_src)?.matmul(&d.transpose()).matmul(h_dst))
}

/// Combinatorial Laplacians `d d* + d* d`, one per stored degree. They are
/// self-adjoint for the metric but not symmetric matrices in general.
pub fn laplacians(c: &ChainComplex) -> Result<Vec<RatMatrix>> {
    let g = c.require_gram("Laplacians")?;
    c.require_valid()?;
    let n = c.len();
    let ds: Vec<RatMatrix> = (0..n).map(|k| c.d(k).to_rational()).collect();
    let mut adj = Vec::with_capacity(n);
    for k in 0..n.saturating_sub(1) {
        adj.push(adjoint(&ds[k], &g[k], &g[k + 1])?);
    }
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let mut lap = RatMatrix::zeros(c.rank(k), c.rank(k));
        if k > 0 {
            lap = lap.add_matrix(&ds[k - 1].matmul(&adj[k - 1]));
        }
        if k + 1 < n {
            lap = lap.add_matrix(&adj[k].matmul(&ds[k]));
        }
        out.push(lap);
    }
    Ok(out)
}

/// Spectral data of one Laplacian.
#[derive(Clone, Debug)]
pub struct LaplacianData {
    pub degree: i64,
    pub laplacian: RatMatrix,
    pub charpoly: RatPoly,
    /// Number of nonzero eigenvalues.
    pub rank: usize,
    /// Product of the nonzero eigenvalues.
    pub pdet: BigRational,
}

pub fn spectrum_data(c: &ChainComplex) -> Result<Vec<LaplacianData>> {
    laplacians(c)?
        .into_iter()
        .enumerate()
        .map(|(k, lap)| {
            let chi = charpoly(&lap);
            let (rank, pdet) = pdet_from_charpoly(&chi)?;
            Ok(LaplacianData {
                degree: c.degree(k),
                laplacian: lap,
                charpoly: chi,
                rank,
                pdet,
            })
        })
        .collect()
}

/// `log tau(C) = 1/2 sum_j (-1)^j j log pdet Delta_j`.
pub fn analytic_torsion(c: &ChainComplex) -> Result<TorsionValue> {
    let data = spectrum_data(c)?;
    Ok(data.iter().fold(TorsionValue::one(), |acc, l| {
        let e = BigRational::new(BigInt::from(sign(l.degree) * l.degree), BigInt::from(2));
        acc.mul(&TorsionValue::from_rational(&l.pdet).pow(&e))
    }))
}

/// `Z(0) = sum_j (-1)^j j rank Delta_j`.
pub fn zeta_at_zero(c: &ChainComplex) -> Result<i64> {
    let data = spectrum_data(c)?;
    Ok(data
        .iter()
        .map(|l| sign(l.degree) * l.degree * l.rank as i64)
        .sum())
}

/// `exp Z'(0)` where `Z'(0) = -sum_j (-1)^j j log pdet Delta_j = -2 log tau`.
pub fn zeta_derivative_at_zero(c: &ChainComplex) -> Result<TorsionValue> {
    Ok(analytic_torsion(c)?.pow_i64(-2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::IntMatrix;
    use crate::torsion::tv;

    fn z_k_z(k: i64) -> ChainComplex {
        ChainComplex::two_term(IntMatrix::from_i64(&[&[k]])).with_identity_gram()
    }

    #[test]
    fn anchors() {
        assert_eq!(analytic_torsion(&z_k_z(2)).unwrap(), tv(2).inv());
        assert!(analytic_torsion(&z_k_z(0)).unwrap().is_one());
        assert_eq!(zeta_at_zero(&z_k_z(2)).unwrap(), -1);
        assert_eq!(zeta_at_zero(&z_k_z(0)).unwrap(), 0);
        assert_eq!(zeta_derivative_at_zero(&z_k_z(2)).unwrap(), tv(4));
    }

    #[test]
    fn missing_gram() {
        let c = ChainComplex::two_term(IntMatrix::from_i64(&[&[2]]));
        assert!(analytic_torsion(&c).is_err());
        assert!(zeta_at_zero(&c).is_err());
    }

    #[test]
    fn empty_is_neutral() {
        let c = ChainComplex::empty().with_identity_gram();
        assert!(analytic_torsion(&c).unwrap().is_one());
    }

    #[test]
    fn non_identity_metric_uses_adjoint() {
        // Z -2-> Z with grams a, b: Delta = 4 b / a in both degrees.
        let c = ChainComplex::two_term(IntMatrix::from_i64(&[&[2]]))
            .with_gram(vec![
                RatMatrix::from_i64(&[&[3]]),
                RatMatrix::from_i64(&[&[5]]),
            ])
            .unwrap();
        let data = spectrum_data(&c).unwrap();
        assert_eq!(data[0].pdet, BigRational::new(20.into(), 3.into()));
        assert_eq!(data[1].pdet, BigRational::new(20.into(), 3.into()));
    }
}
