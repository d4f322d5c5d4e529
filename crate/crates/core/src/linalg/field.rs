//! Gaussian elimination over an arbitrary exact field.

use num_rational::BigRational;
use num_traits::Zero;

use super::matrix::{Matrix, Scalar};

pub trait Field: Scalar {
    /// Multiplicative inverse; `None` for zero (or a zero divisor).
    fn try_inv(&self) -> Option<Self>;

    fn from_i64(n: i64) -> Self;
}

impl Field for BigRational {
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(n.into())
    }

    fn try_inv(&self) -> Option<Self> {
        (!self.is_zero()).then(|| self.recip())
    }
}

/// Row echelon form; returns the pivot columns and the determinant factor
/// accumulated from swaps and pivots. `None` if a pivot is not invertible.
fn echelon<F: Field>(m: &mut Vec<Vec<F>>, cols: usize) -> Option<(Vec<usize>, F)> {
    let rows = m.len();
    let mut pivots = Vec::new();
    let mut det = F::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        if p != r {
            m.swap(p, r);
            det = -det;
        }
        let inv = m[r][c].try_inv()?;
        det = det * m[r][c].clone();
        for i in (r + 1)..rows {
            if m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone() * inv.clone();
            for k in c..cols {
                let x = f.clone() * m[r][k].clone();
                m[i][k] = m[i][k].clone() - x;
            }
        }
        pivots.push(c);
        r += 1;
    }
    Some((pivots, det))
}

pub fn rank<F: Field>(m: &Matrix<F>) -> Option<usize> {
    let mut rows = m.row_vecs();
    echelon(&mut rows, m.cols()).map(|(p, _)| p.len())
}

pub fn det<F: Field>(m: &Matrix<F>) -> Option<F> {
    assert!(m.is_square(), "determinant of a non-square matrix");
    let n = m.rows();
    let mut rows = m.row_vecs();
    let (pivots, d) = echelon(&mut rows, n)?;
    Some(if pivots.len() == n { d } else { F::zero() })
}

/// Basis (as columns) of the right kernel.
pub fn kernel<F: Field>(m: &Matrix<F>) -> Option<Matrix<F>> {
    let cols = m.cols();
    let mut rows = m.row_vecs();
    let (pivots, _) = echelon(&mut rows, cols)?;
    // Back-substitute to reduced form.
    for (r, &c) in pivots.iter().enumerate().rev() {
        let inv = rows[r][c].try_inv()?;
        for k in c..cols {
            rows[r][k] = rows[r][k].clone() * inv.clone();
        }
        for i in 0..r {
            if rows[i][c].is_zero() {
                continue;
            }
            let f = rows[i][c].clone();
            for k in c..cols {
                let x = f.clone() * rows[r][k].clone();
                rows[i][k] = rows[i][k].clone() - x;
            }
        }
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let basis: Vec<Vec<F>> = free
        .iter()
        .map(|&f| {
            let mut v = vec![F::zero(); cols];
            v[f] = F::one();
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = -rows[r][f].clone();
            }
            v
        })
        .collect();
    Some(Matrix::from_columns(cols, &basis))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::RatMatrix;

    #[test]
    fn rational_kernel() {
        let m = RatMatrix::from_i64(&[&[1, 2, 3], &[2, 4, 6]]);
        let k = kernel(&m).unwrap();
        assert_eq!(k.cols(), 2);
        assert!(m.matmul(&k).is_zero());
        assert_eq!(rank(&m), Some(1));
        assert_eq!(
            det(&RatMatrix::from_i64(&[&[0, 2], &[3, 1]])),
            Some(BigRational::from_integer((-6).into()))
        );
    }
}
