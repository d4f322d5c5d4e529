//! Characteristic polynomials: fraction-free elimination over Z[x], and the
//! Faddeev-LeVerrier recurrence (which also yields the adjugate).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::matrix::{IntMatrix, RatMatrix};
use super::poly::{IntPoly, Poly, RatPoly};

/// `det(x I - A)` for an integer matrix by Bareiss elimination on `x I - A`
/// over Z[x]. The leading principal minors are monic, so no pivoting is needed
/// and every division is exact.
pub fn charpoly_int(a: &IntMatrix) -> IntPoly {
    assert!(a.is_square(), "characteristic polynomial of a non-square matrix");
    let n = a.rows();
    if n == 0 {
        return IntPoly::one();
    }
    let mut m: Vec<Vec<IntPoly>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let c = -a.get(i, j).clone();
                    if i == j {
                        Poly::new(vec![c, BigInt::one()])
                    } else {
                        Poly::constant(c)
                    }
                })
                .collect()
        })
        .collect();
    let mut prev = IntPoly::one();
    for k in 0..n - 1 {
        let pivot = m[k][k].clone();
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let num = &(&pivot * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num
                    .div_exact(&prev)
                    .expect("Bareiss step must divide exactly");
            }
            m[i][k] = IntPoly::zero();
        }
        prev = pivot;
    }
    m[n - 1][n - 1].clone()
}

/// `det(x I - A)` for a rational matrix, via `A = B / L` with `B` integral.
pub fn charpoly(a: &RatMatrix) -> RatPoly {
    let (l, b) = a.clear_denominators();
    let chi_b = charpoly_int(&b).to_rational();
    // det(xI - B/L) = L^{-n} det(L x I - B)
    let lr = BigRational::from_integer(l);
    let n = a.rows() as i32;
    chi_b.substitute_scaled(&lr).scale(&lr.pow(-n))
}

/// Faddeev-LeVerrier: returns `det(x I - A)` together with the matrices
/// `M_1, ..., M_n` such that `adj(x I - A) = sum_k M_k x^{n-k}`.
pub fn faddeev_leverrier(a: &RatMatrix) -> (RatPoly, Vec<RatMatrix>) {
    assert!(a.is_square());
    let n = a.rows();
    let mut c = vec![BigRational::zero(); n + 1];
    c[n] = BigRational::one();
    let mut ms = Vec::with_capacity(n);
    let mut m = RatMatrix::zeros(n, n);
    for k in 1..=n {
        let mut next = a.matmul(&m);
        for i in 0..n {
            let v = next.get(i, i) + &c[n - k + 1];
            next.set(i, i, v);
        }
        let tr = a.matmul(&next).trace();
        c[n - k] = -tr / BigRational::from_integer(BigInt::from(k));
        ms.push(next.clone());
        m = next;
    }
    (Poly::new(c), ms)
}

/// `tr(S adj(x I - A))` as a polynomial in x.
pub fn twisted_adjugate_trace(a: &RatMatrix, s: &RatMatrix) -> RatPoly {
    let n = a.rows();
    let (_, ms) = faddeev_leverrier(a);
    let mut coeffs = vec![BigRational::zero(); n];
    for (idx, mk) in ms.iter().enumerate() {
        // M_k multiplies x^{n-k}, k = idx + 1
        coeffs[n - idx - 1] = s.matmul(mk).trace();
    }
    Poly::new(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two() {
        let a = IntMatrix::from_i64(&[&[2, -1], &[-1, 2]]);
        assert_eq!(charpoly_int(&a), IntPoly::from_i64(&[3, -4, 1]));
    }

    #[test]
    fn zero_leading_minor() {
        // a_11 = 0 would stall naive elimination; x - 0 is still monic.
        let a = IntMatrix::from_i64(&[&[0, 1, 2], &[3, 0, 4], &[5, 6, 0]]);
        let (fl, _) = faddeev_leverrier(&a.to_rational());
        assert_eq!(charpoly_int(&a).to_rational(), fl);
    }

    #[test]
    fn rational_matrix() {
        let a = RatMatrix::from_i64(&[&[1, 2], &[3, 4]])
            .scale(&BigRational::new(1.into(), 3.into()));
        let (fl, _) = faddeev_leverrier(&a);
        assert_eq!(charpoly(&a), fl);
    }

    #[test]
    fn adjugate_trace_identity() {
        let a = RatMatrix::from_i64(&[&[2, 1], &[1, 2]]);
        // tr adj(xI - A) = chi'(x)
        let t = twisted_adjugate_trace(&a, &RatMatrix::identity(2));
        assert_eq!(t, charpoly(&a).derivative());
    }
}
