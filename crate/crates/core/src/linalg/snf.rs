//! Smith normal form over the integers and the lattice operations built on it.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;

/// `U * M * V = D` with `U`, `V` unimodular and `D` diagonal.
#[derive(Clone, Debug)]
pub struct SnfResult {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
    pub d: IntMatrix,
    /// Diagonal of `D`: positive invariant factors `d1 | d2 | ...` followed by zeros.
    pub divisors: Vec<BigInt>,
}

impl SnfResult {
    pub fn rank(&self) -> usize {
        self.divisors.iter().filter(|d| !d.is_zero()).count()
    }

    /// Invariant factors greater than one.
    pub fn nontrivial_divisors(&self) -> Vec<BigInt> {
        self.divisors
            .iter()
            .filter(|d| !d.is_zero() && !d.is_one())
            .cloned()
            .collect()
    }

    /// Product of the nonzero invariant factors, i.e. the order of the torsion
    /// subgroup of the cokernel.
    pub fn torsion_order(&self) -> BigInt {
        self.divisors
            .iter()
            .filter(|d| !d.is_zero())
            .fold(BigInt::one(), |acc, d| acc * d)
    }
}

struct Work {
    d: Vec<Vec<BigInt>>,
    u: Vec<Vec<BigInt>>,
    u_inv: Vec<Vec<BigInt>>,
    v: Vec<Vec<BigInt>>,
    v_inv: Vec<Vec<BigInt>>,
    m: usize,
    n: usize,
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

fn to_matrix(rows: Vec<Vec<BigInt>>, cols: usize) -> IntMatrix {
    IntMatrix::from_rows(rows, cols).expect("rectangular by construction")
}

impl Work {
    /// row_i += c * row_t
    fn add_row(&mut self, i: usize, t: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for k in 0..self.n {
            let x = &self.d[t][k] * c;
            self.d[i][k] += x;
        }
        for k in 0..self.m {
            let x = &self.u[t][k] * c;
            self.u[i][k] += x;
        }
        // U^{-1} <- U^{-1} (I - c e_i e_t^T): column t -= c * column i
        for r in 0..self.m {
            let x = &self.u_inv[r][i] * c;
            self.u_inv[r][t] -= x;
        }
    }

    /// col_j += c * col_t
    fn add_col(&mut self, j: usize, t: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for r in 0..self.m {
            let x = &self.d[r][t] * c;
            self.d[r][j] += x;
        }
        for r in 0..self.n {
            let x = &self.v[r][t] * c;
            self.v[r][j] += x;
        }
        // V^{-1} <- (I - c e_t e_j^T) V^{-1}: row t -= c * row j
        for k in 0..self.n {
            let x = &self.v_inv[j][k] * c;
            self.v_inv[t][k] -= x;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        self.d.swap(a, b);
        self.u.swap(a, b);
        for row in &mut self.u_inv {
            row.swap(a, b);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for row in &mut self.d {
            row.swap(a, b);
        }
        for row in &mut self.v {
            row.swap(a, b);
        }
        self.v_inv.swap(a, b);
    }

    fn negate_row(&mut self, t: usize) {
        for x in &mut self.d[t] {
            *x = -&*x;
        }
        for x in &mut self.u[t] {
            *x = -&*x;
        }
        for row in &mut self.u_inv {
            row[t] = -&row[t];
        }
    }

    /// Smallest nonzero |entry| in the trailing block, ties in row-major order.
    fn select_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, BigInt)> = None;
        for i in t..self.m {
            for j in t..self.n {
                let x = &self.d[i][j];
                if x.is_zero() {
                    continue;
                }
                let a = x.abs();
                if best.as_ref().is_none_or(|(_, _, b)| a < *b) {
                    best = Some((i, j, a));
                }
            }
        }
        best.map(|(i, j, _)| (i, j))
    }

    /// Smallest nonzero entry among column t below the pivot and row t right of it.
    fn select_in_cross(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, BigInt)> = None;
        let mut consider = |i: usize, j: usize, x: &BigInt| {
            if x.is_zero() {
                return;
            }
            let a = x.abs();
            if best.as_ref().is_none_or(|(_, _, b)| a < *b) {
                best = Some((i, j, a));
            }
        };
        for j in (t + 1)..self.n {
            consider(t, j, &self.d[t][j]);
        }
        for i in (t + 1)..self.m {
            consider(i, t, &self.d[i][t]);
        }
        best.map(|(i, j, _)| (i, j))
    }

    fn run(&mut self) {
        let steps = self.m.min(self.n);
        for t in 0..steps {
            let Some((pi, pj)) = self.select_pivot(t) else {
                break;
            };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                // Clear column t and row t by Euclidean division.
                let pivot = self.d[t][t].clone();
                for i in (t + 1)..self.m {
                    if self.d[i][t].is_zero() {
                        continue;
                    }
                    let q = self.d[i][t].div_floor(&pivot);
                    self.add_row(i, t, &-q);
                }
                for j in (t + 1)..self.n {
                    if self.d[t][j].is_zero() {
                        continue;
                    }
                    let q = self.d[t][j].div_floor(&pivot);
                    self.add_col(j, t, &-q);
                }
                if let Some((i, j)) = self.select_in_cross(t) {
                    // A remainder survived; it is smaller than the pivot.
                    if i == t {
                        self.swap_cols(t, j);
                    } else {
                        self.swap_rows(t, i);
                    }
                    continue;
                }
                // Enforce divisibility of the trailing block by the pivot.
                let pivot = self.d[t][t].clone();
                let offender = ((t + 1)..self.m).find(|&i| {
                    ((t + 1)..self.n).any(|j| !self.d[i][j].is_multiple_of(&pivot))
                });
                match offender {
                    Some(i) => self.add_row(t, i, &BigInt::one()),
                    None => break,
                }
            }
            if self.d[t][t].is_negative() {
                self.negate_row(t);
            }
        }
    }
}

/// Smith normal form with deterministic pivoting.
pub fn smith_normal_form(m: &IntMatrix) -> SnfResult {
    let (rows, cols) = (m.rows(), m.cols());
    let mut w = Work {
        d: (0..rows).map(|r| m.row(r).to_vec()).collect(),
        u: identity(rows),
        u_inv: identity(rows),
        v: identity(cols),
        v_inv: identity(cols),
        m: rows,
        n: cols,
    };
    w.run();
    let divisors = (0..rows.min(cols)).map(|i| w.d[i][i].clone()).collect();
    SnfResult {
        u: to_matrix(w.u, rows),
        u_inv: to_matrix(w.u_inv, rows),
        v: to_matrix(w.v, cols),
        v_inv: to_matrix(w.v_inv, cols),
        d: to_matrix(w.d, cols),
        divisors,
    }
}

/// Rank over Q of an integer matrix.
pub fn integer_rank(m: &IntMatrix) -> usize {
    smith_normal_form(m).rank()
}

/// Column basis of the saturated kernel `{v in Z^cols : M v = 0}`, in column
/// Hermite normal form.
pub fn saturated_kernel(m: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(m);
    let r = snf.rank();
    let idx: Vec<usize> = (r..m.cols()).collect();
    column_hermite_form(&snf.v.select_columns(&idx))
}

/// Column basis of the saturation of the column span of `M` inside `Z^rows`.
pub fn saturated_image(m: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(m);
    let r = snf.rank();
    let idx: Vec<usize> = (0..r).collect();
    column_hermite_form(&snf.u_inv.select_columns(&idx))
}

/// Canonical basis of the lattice spanned by the (independent) columns of `b`:
/// lower-echelon with positive pivots and reduced entries beside each pivot.
pub fn column_hermite_form(b: &IntMatrix) -> IntMatrix {
    let (rows, k) = (b.rows(), b.cols());
    let mut cols: Vec<Vec<BigInt>> = (0..k).map(|c| b.column(c)).collect();
    let mut pivot_rows = Vec::with_capacity(k);
    let mut next = 0usize;
    for r in 0..rows {
        if next == k {
            break;
        }
        // Euclid across columns next.. on row r.
        loop {
            let mut best: Option<usize> = None;
            for c in next..k {
                if !cols[c][r].is_zero()
                    && best.is_none_or(|bc| cols[c][r].abs() < cols[bc][r].abs())
                {
                    best = Some(c);
                }
            }
            let Some(bc) = best else { break };
            cols.swap(next, bc);
            let mut done = true;
            for c in (next + 1)..k {
                if cols[c][r].is_zero() {
                    continue;
                }
                let q = cols[c][r].div_floor(&cols[next][r]);
                let pivot_col = cols[next].clone();
                for (x, p) in cols[c].iter_mut().zip(&pivot_col) {
                    *x -= &q * p;
                }
                if !cols[c][r].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if next < k && !cols[next][r].is_zero() {
            if cols[next][r].is_negative() {
                for x in &mut cols[next] {
                    *x = -&*x;
                }
            }
            // Reduce earlier columns modulo this pivot.
            let pivot_col = cols[next].clone();
            for c in 0..next {
                let q = cols[c][r].div_floor(&pivot_col[r]);
                if q.is_zero() {
                    continue;
                }
                for (x, p) in cols[c].iter_mut().zip(&pivot_col) {
                    *x -= &q * p;
                }
            }
            pivot_rows.push(r);
            next += 1;
        }
    }
    IntMatrix::from_columns(rows, &cols)
}

/// Left inverse `L` (integer) of a saturated basis `K`, so that `L K = I`.
pub fn saturated_left_inverse(k: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(k);
    debug_assert!(
        snf.divisors.iter().all(|d| d.is_one()),
        "basis is not saturated"
    );
    // U K V = [I; 0]  =>  (V [I 0] U) K = I
    let r = k.cols();
    let rows: Vec<usize> = (0..r).collect();
    snf.v.matmul(&snf.u.select_rows(&rows))
}

/// Order of `Z^n / L` for the full-rank lattice spanned by the columns of `b`
/// (square, nonsingular); `None` if the columns are dependent.
pub fn lattice_index(b: &IntMatrix) -> Option<BigInt> {
    let snf = smith_normal_form(b);
    if snf.rank() < b.rows() {
        return None;
    }
    Some(snf.torsion_order())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_snf(m: &IntMatrix) -> SnfResult {
        let s = smith_normal_form(m);
        assert_eq!(s.u.matmul(m).matmul(&s.v), s.d);
        assert!(s.u.matmul(&s.u_inv).is_identity());
        assert!(s.v.matmul(&s.v_inv).is_identity());
        for (r, c, x) in s.d.entries() {
            if r != c {
                assert!(x.is_zero());
            }
        }
        for w in s.divisors.windows(2) {
            if !w[1].is_zero() {
                assert!(w[1].is_multiple_of(&w[0]));
            } else {
                assert!(w[0].is_zero() || w[0].is_positive());
            }
        }
        s
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn divisors_of_2468() {
        let s = check_snf(&IntMatrix::from_i64(&[&[2, 4], &[6, 8]]));
        assert_eq!(s.divisors, ints(&[2, 4]));
    }

    #[test]
    fn identity_and_zero() {
        let s = check_snf(&IntMatrix::identity(3));
        assert_eq!(s.divisors, ints(&[1, 1, 1]));
        let z = check_snf(&IntMatrix::from_i64(&[&[0]]));
        assert_eq!(z.rank(), 0);
        assert!(z.nontrivial_divisors().is_empty());
    }

    #[test]
    fn rectangular_and_empty() {
        let s = check_snf(&IntMatrix::from_i64(&[&[2, 4, 4], &[-6, 6, 12]]));
        assert_eq!(s.divisors, ints(&[2, 6]));
        let e = check_snf(&IntMatrix::zeros(0, 3));
        assert!(e.divisors.is_empty());
        assert_eq!(e.v.rows(), 3);
    }

    #[test]
    fn deterministic() {
        let m = IntMatrix::from_i64(&[&[3, 5, 7], &[2, -4, 6], &[9, 1, 1]]);
        let a = smith_normal_form(&m);
        let b = smith_normal_form(&m);
        assert_eq!(a.u, b.u);
        assert_eq!(a.v, b.v);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(
            saturated_kernel(&IntMatrix::from_i64(&[&[1, 1]])),
            IntMatrix::from_i64(&[&[1], &[-1]])
        );
        let k = saturated_kernel(&IntMatrix::from_i64(&[&[2, 0], &[0, 2]]));
        assert_eq!((k.rows(), k.cols()), (2, 0));
        assert_eq!(
            saturated_kernel(&IntMatrix::from_i64(&[&[2, 2]])),
            IntMatrix::from_i64(&[&[1], &[-1]])
        );
    }

    #[test]
    fn saturated_image_drops_content() {
        let img = saturated_image(&IntMatrix::from_i64(&[&[2], &[4]]));
        assert_eq!(img, IntMatrix::from_i64(&[&[1], &[2]]));
    }

    #[test]
    fn left_inverse_of_saturated_basis() {
        let k = IntMatrix::from_i64(&[&[1, 0], &[1, 1], &[0, 1]]);
        let l = saturated_left_inverse(&k);
        assert!(l.matmul(&k).is_identity());
    }

    #[test]
    fn index_of_sublattice() {
        let b = IntMatrix::from_i64(&[&[1, 1], &[1, -1]]);
        assert_eq!(lattice_index(&b), Some(BigInt::from(2)));
        assert_eq!(lattice_index(&IntMatrix::from_i64(&[&[1, 2], &[2, 4]])), None);
    }
}
