//! Fraction-free elimination for rank and determinant, and rational inversion.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::matrix::{IntMatrix, RatMatrix};
use crate::error::{Error, Result};

/// Bareiss elimination with row pivoting; returns (rank, determinant if square
/// and nonsingular, else zero).
fn bareiss(m: &IntMatrix) -> (usize, BigInt) {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a: Vec<Vec<BigInt>> = (0..rows).map(|r| m.row(r).to_vec()).collect();
    let mut prev = BigInt::one();
    let mut sign = BigInt::one();
    let mut rank = 0usize;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        if p != rank {
            a.swap(p, rank);
            sign = -sign;
        }
        for r in (rank + 1)..rows {
            for k in (c + 1)..cols {
                let v = (&a[rank][c] * &a[r][k] - &a[r][c] * &a[rank][k]) / &prev;
                a[r][k] = v;
            }
            a[r][c] = BigInt::zero();
        }
        prev = a[rank][c].clone();
        rank += 1;
    }
    let det = if rows == cols && rank == rows {
        if rows == 0 {
            BigInt::one()
        } else {
            sign * &a[rows - 1][cols - 1]
        }
    } else {
        BigInt::zero()
    };
    (rank, det)
}

/// Rank over Q of a rational matrix.
pub fn rational_rank(m: &RatMatrix) -> usize {
    bareiss(&m.clear_denominators().1).0
}

/// Determinant of an integer matrix.
pub fn determinant_int(m: &IntMatrix) -> BigInt {
    assert!(m.is_square(), "determinant of a non-square matrix");
    bareiss(m).1
}

/// Determinant of a rational matrix.
pub fn determinant(m: &RatMatrix) -> BigRational {
    assert!(m.is_square(), "determinant of a non-square matrix");
    let (l, b) = m.clear_denominators();
    let n = m.rows() as i32;
    BigRational::from_integer(bareiss(&b).1) / BigRational::from_integer(l).pow(n)
}

/// Inverse over Q by Gauss-Jordan elimination.
pub fn inverse(m: &RatMatrix) -> Result<RatMatrix> {
    if !m.is_square() {
        return Err(Error::Shape(format!(
            "cannot invert a {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.rows();
    let mut a: Vec<Vec<BigRational>> = (0..n).map(|r| m.row(r).to_vec()).collect();
    let mut inv: Vec<Vec<BigRational>> = RatMatrix::identity(n)
        .row_vecs();
    for c in 0..n {
        let p = (c..n)
            .find(|&r| !a[r][c].is_zero())
            .ok_or_else(|| Error::Singular(format!("no pivot in column {c}")))?;
        a.swap(p, c);
        inv.swap(p, c);
        let pinv = a[c][c].recip();
        for k in 0..n {
            a[c][k] *= &pinv;
            inv[c][k] *= &pinv;
        }
        for r in 0..n {
            if r == c || a[r][c].is_zero() {
                continue;
            }
            let f = a[r][c].clone();
            for k in 0..n {
                let x = &f * &a[c][k];
                a[r][k] -= x;
                let y = &f * &inv[c][k];
                inv[r][k] -= y;
            }
        }
    }
    RatMatrix::from_rows(inv, n)
}

/// Gram determinant `det(B^T G B)` of the columns of `b` under the form `g`.
pub fn gram_volume_sq(b: &RatMatrix, g: &RatMatrix) -> BigRational {
    determinant(&b.transpose().matmul(g).matmul(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_det() {
        let m = IntMatrix::from_i64(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]]);
        assert_eq!(determinant_int(&m), BigInt::from(-3));
        let s = RatMatrix::from_i64(&[&[1, 2, 3], &[2, 4, 6]]);
        assert_eq!(rational_rank(&s), 1);
        assert_eq!(rational_rank(&RatMatrix::zeros(0, 4)), 0);
        assert_eq!(determinant(&RatMatrix::zeros(0, 0)), BigRational::one());
    }

    #[test]
    fn pivoting_needed() {
        let m = IntMatrix::from_i64(&[&[0, 1], &[1, 0]]);
        assert_eq!(determinant_int(&m), BigInt::from(-1));
    }

    #[test]
    fn inverse_roundtrip() {
        let m = RatMatrix::from_i64(&[&[2, 1], &[1, 1]]);
        let inv = inverse(&m).unwrap();
        assert!(m.matmul(&inv).is_identity());
        assert!(inverse(&RatMatrix::from_i64(&[&[1, 1], &[1, 1]])).is_err());
    }
}
