//! Oracles that share no code with the library: determinants by cofactor
//! expansion, cokernel orders by enumerating images mod n, and spectra from
//! nalgebra in floating point.
#![allow(dead_code)]

use fintorsion::linalg::{IntMatrix, RatMatrix};
use nalgebra::DMatrix;
use num_integer::Integer;
use num_traits::ToPrimitive;

pub type Dense = Vec<Vec<i64>>;

pub fn dense(m: &IntMatrix) -> Dense {
    (0..m.rows())
        .map(|r| m.row(r).iter().map(|x| x.to_i64().expect("small entry")).collect())
        .collect()
}

pub fn det(m: &Dense) -> i64 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        n => (0..n)
            .map(|j| {
                let minor: Dense = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
                    .collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m[0][j] * det(&minor)
            })
            .sum(),
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Rank of `m` and the gcd of its largest nonvanishing minors.
pub fn determinantal_divisor(m: &Dense, rows: usize, cols: usize) -> (usize, i64) {
    for k in (1..=rows.min(cols)).rev() {
        let mut g = 0i64;
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let sub: Dense = rs.iter().map(|&r| cs.iter().map(|&c| m[r][c]).collect()).collect();
                g = g.gcd(&det(&sub));
            }
        }
        if g != 0 {
            return (k, g);
        }
    }
    (0, 1)
}

/// Size of the subgroup of `(Z/n)^rows` generated by the columns of `m`.
pub fn image_size_mod(m: &Dense, rows: usize, cols: usize, n: i64) -> u64 {
    let n_us = n as usize;
    let size = n_us.pow(rows as u32);
    let encode = |v: &[usize]| v.iter().fold(0usize, |acc, &x| acc * n_us + x);
    let decode = |mut i: usize| {
        let mut v = vec![0usize; rows];
        for slot in v.iter_mut().rev() {
            *slot = i % n_us;
            i /= n_us;
        }
        v
    };
    let gens: Vec<Vec<usize>> = (0..cols)
        .map(|c| (0..rows).map(|r| m[r][c].rem_euclid(n) as usize).collect())
        .collect();
    let mut seen = vec![false; size];
    seen[0] = true;
    let mut queue = vec![0usize];
    let mut count = 1u64;
    while let Some(i) = queue.pop() {
        let v = decode(i);
        for g in &gens {
            let w: Vec<usize> = v.iter().zip(g).map(|(a, b)| (a + b) % n_us).collect();
            let j = encode(&w);
            if !seen[j] {
                seen[j] = true;
                count += 1;
                queue.push(j);
            }
        }
    }
    count
}

/// Torsion order of `Z^rows / im m`, computed twice: as the determinantal
/// divisor, and as `n^r / |im(m mod n)|` by enumeration.
pub fn cokernel_torsion(m: &Dense, rows: usize, cols: usize) -> (i64, i64) {
    let (r, n) = determinantal_divisor(m, rows, cols);
    let n = n.abs();
    if r == 0 || n == 1 {
        return (1, 1);
    }
    let im = image_size_mod(m, rows, cols, n) as i64;
    (n, n.pow(r as u32) / im)
}

/// Number of nonzero eigenvalues and their product.
pub fn eigen_pdet(m: &RatMatrix) -> (usize, f64) {
    let n = m.rows();
    if n == 0 {
        return (0, 1.0);
    }
    let a = DMatrix::from_row_slice(n, n, &m.to_f64());
    let ev = a.symmetric_eigen().eigenvalues;
    let scale = ev.iter().fold(1.0f64, |s, x| s.max(x.abs()));
    let nonzero: Vec<f64> = ev.iter().copied().filter(|x| x.abs() > 1e-9 * scale).collect();
    (nonzero.len(), nonzero.iter().product())
}

pub fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}
