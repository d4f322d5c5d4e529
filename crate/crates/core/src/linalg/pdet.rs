//! Pseudo-determinants of positive semidefinite operators.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::charpoly::charpoly;
use super::matrix::RatMatrix;
use super::poly::RatPoly;
use crate::error::{Error, Result};

/// Elementary symmetric functions `e_0, ..., e_n` of the roots of a monic
/// polynomial of degree n: `chi(x) = sum_k (-1)^k e_k x^{n-k}`.
pub fn elementary_symmetric(chi: &RatPoly) -> Vec<BigRational> {
    let n = chi.degree().unwrap_or(0);
    (0..=n)
        .map(|k| {
            let c = chi.coeff(n - k);
            if k % 2 == 0 {
                c
            } else {
                -c
            }
        })
        .collect()
}

/// Rank and pseudo-determinant read off the characteristic polynomial of a
/// diagonalizable operator with real nonnegative spectrum. Fails if the sign
/// pattern rules out such a spectrum.
pub fn pdet_from_charpoly(chi: &RatPoly) -> Result<(usize, BigRational)> {
    let e = elementary_symmetric(chi);
    if let Some(k) = e.iter().position(|x| x.is_negative()) {
        return Err(Error::NotPsd(format!(
            "elementary symmetric function e_{k} of the spectrum is negative"
        )));
    }
    let r = e.iter().rposition(|x| !x.is_zero()).unwrap_or(0);
    if e[..=r].iter().any(|x| x.is_zero()) {
        return Err(Error::NotPsd(
            "characteristic polynomial coefficients do not alternate in sign".into(),
        ));
    }
    let value = if r == 0 { BigRational::one() } else { e[r].clone() };
    Ok((r, value))
}

/// Product of the nonzero eigenvalues of a symmetric positive semidefinite
/// rational matrix; 1 for the zero matrix.
pub fn pseudo_determinant(m: &RatMatrix) -> Result<BigRational> {
    if !m.is_square() {
        return Err(Error::Shape(format!(
            "pseudo-determinant of a {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    if let Some((row, col)) = m.first_asymmetry() {
        return Err(Error::NotSymmetric { row, col });
    }
    pdet_from_charpoly(&charpoly(m)).map(|(_, v)| v)
}

/// Rank and pseudo-determinant of a symmetric PSD matrix.
pub fn rank_and_pseudo_determinant(m: &RatMatrix) -> Result<(usize, BigRational)> {
    if let Some((row, col)) = m.first_asymmetry() {
        return Err(Error::NotSymmetric { row, col });
    }
    pdet_from_charpoly(&charpoly(m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn anchors() {
        assert_eq!(
            pseudo_determinant(&RatMatrix::from_i64(&[&[2, -1], &[-1, 2]])).unwrap(),
            q(3)
        );
        assert_eq!(
            pseudo_determinant(&RatMatrix::from_i64(&[&[1, -1], &[-1, 1]])).unwrap(),
            q(2)
        );
        assert_eq!(pseudo_determinant(&RatMatrix::zeros(4, 4)).unwrap(), q(1));
        assert_eq!(pseudo_determinant(&RatMatrix::zeros(0, 0)).unwrap(), q(1));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            pseudo_determinant(&RatMatrix::from_i64(&[&[1, 2], &[0, 1]])),
            Err(Error::NotSymmetric { row: 0, col: 1 })
        ));
        assert!(matches!(
            pseudo_determinant(&RatMatrix::from_i64(&[&[1, 2], &[2, 1]])),
            Err(Error::NotPsd(_))
        ));
        assert!(matches!(
            pseudo_determinant(&RatMatrix::from_i64(&[&[-1]])),
            Err(Error::NotPsd(_))
        ));
    }
}
