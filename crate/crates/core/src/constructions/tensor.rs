//! Tensor products with Koszul signs, cyclic tensor powers, direct sums and cones.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::complex::{ChainComplex, GroupAction};
use crate::error::{Error, Result};
use crate::linalg::{IntMatrix, RatMatrix};

/// A basis vector of some chain group: `(degree index, position)`.
type Cell = (usize, usize);

fn koszul(deg: i64) -> BigInt {
    if deg.rem_euclid(2) == 0 {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

/// Graded basis of a tensor product, ordered by total degree and then
/// lexicographically on the factor tuples.
struct TensorBasis {
    min_degree: i64,
    /// `blocks[k]` lists the tuples of total degree `min_degree + k`.
    blocks: Vec<Vec<Vec<Cell>>>,
    index: HashMap<Vec<Cell>, usize>,
}

impl TensorBasis {
    fn new(factors: &[&ChainComplex]) -> Self {
        let min_degree = factors.iter().map(|c| c.min_degree()).sum();
        let span: usize = factors.iter().map(|c| c.len().saturating_sub(1)).sum();
        let mut blocks = vec![Vec::new(); if factors.iter().any(|c| c.is_empty()) { 0 } else { span + 1 }];
        if !blocks.is_empty() {
            let mut cur = Vec::with_capacity(factors.len());
            enumerate(factors, &mut cur, &mut blocks);
        }
        let mut index = HashMap::new();
        for block in &blocks {
            for (i, t) in block.iter().enumerate() {
                index.insert(t.clone(), i);
            }
        }
        TensorBasis {
            min_degree,
            blocks,
            index,
        }
    }

    fn ranks(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.len()).collect()
    }
}

fn enumerate(factors: &[&ChainComplex], cur: &mut Vec<Cell>, out: &mut [Vec<Vec<Cell>>]) {
    let m = cur.len();
    if m == factors.len() {
        let k: usize = cur.iter().map(|c| c.0).sum();
        out[k].push(cur.clone());
        return;
    }
    for k in 0..factors[m].len() {
        for i in 0..factors[m].rank(k) {
            cur.push((k, i));
            enumerate(factors, cur, out);
            cur.pop();
        }
    }
}

/// Tensor product of several complexes, `d(a (x) b) = da (x) b + (-1)^|a| a (x) db`,
/// with the product metric when every factor carries one.
pub fn tensor_product(factors: &[&ChainComplex]) -> Result<ChainComplex> {
    if factors.is_empty() {
        return ChainComplex::new(0, vec![1], vec![]);
    }
    let basis = TensorBasis::new(factors);
    let ranks = basis.ranks();
    let mut diffs = Vec::with_capacity(ranks.len().saturating_sub(1));
    for k in 0..ranks.len().saturating_sub(1) {
        let mut d = IntMatrix::zeros(ranks[k + 1], ranks[k]);
        for (col, t) in basis.blocks[k].iter().enumerate() {
            let mut prefix_deg = 0i64;
            for (m, &(dk, i)) in t.iter().enumerate() {
                let f = factors[m];
                if dk + 1 < f.len() {
                    let dm = &f.differentials()[dk];
                    let s = koszul(prefix_deg);
                    for j in 0..dm.rows() {
                        let v = dm.get(j, i);
                        if v.is_zero() {
                            continue;
                        }
                        let mut target = t.clone();
                        target[m] = (dk + 1, j);
                        let row = basis.index[&target];
                        let cur = d.get(row, col).clone();
                        d.set(row, col, cur + &s * v);
                    }
                }
                prefix_deg += f.degree(dk);
            }
        }
        diffs.push(d);
    }
    let mut out = ChainComplex::new(basis.min_degree, ranks.clone(), diffs)?;
    if factors.iter().all(|c| c.has_gram()) {
        let grams = basis
            .blocks
            .iter()
            .map(|block| {
                let n = block.len();
                let mut g = RatMatrix::zeros(n, n);
                for (r, a) in block.iter().enumerate() {
                    for (c, b) in block.iter().enumerate() {
                        let mut v = BigRational::one();
                        for (m, (x, y)) in a.iter().zip(b).enumerate() {
                            if x.0 != y.0 {
                                v = BigRational::zero();
                                break;
                            }
                            v *= factors[m].gram(x.0).expect("gram").get(x.1, y.1);
                            if v.is_zero() {
                                break;
                            }
                        }
                        g.set(r, c, v);
                    }
                }
                g
            })
            .collect();
        out = out.with_gram(grams)?;
    }
    Ok(out)
}

/// `A^{(x) n}` with the cyclic shift
/// `sigma(a_1 (x) ... (x) a_n) = (-1)^{|a_n|(|a_1| + ... + |a_{n-1}|)} a_n (x) a_1 (x) ... (x) a_{n-1}`.
pub fn tensor_power_cyclic(a: &ChainComplex, n: u32) -> Result<ChainComplex> {
    if n == 0 {
        return Err(Error::InvalidAction("tensor power of order 0".into()));
    }
    let factors = vec![a.clone().without_action(); n as usize];
    let refs: Vec<&ChainComplex> = factors.iter().collect();
    let out = tensor_product(&refs)?;
    let basis = TensorBasis::new(&refs);
    let mats = basis
        .blocks
        .iter()
        .map(|block| {
            let mut s = IntMatrix::zeros(block.len(), block.len());
            for (col, t) in block.iter().enumerate() {
                let last = *t.last().expect("nonempty tuple");
                let last_deg = a.degree(last.0);
                let rest: i64 = t[..t.len() - 1].iter().map(|c| a.degree(c.0)).sum();
                let mut rotated = Vec::with_capacity(t.len());
                rotated.push(last);
                rotated.extend_from_slice(&t[..t.len() - 1]);
                s.set(basis.index[&rotated], col, koszul(last_deg * rest));
            }
            s
        })
        .collect();
    let out = out.with_action(GroupAction::new(n, mats))?;
    debug_assert!(out.validate().passed());
    Ok(out)
}

fn pad(c: &ChainComplex, lo: i64, hi: i64) -> (Vec<usize>, Vec<IntMatrix>) {
    let len = (hi - lo + 1).max(0) as usize;
    let ranks: Vec<usize> = (0..len)
        .map(|k| {
            let deg = lo + k as i64;
            let j = deg - c.min_degree();
            if j >= 0 && (j as usize) < c.len() {
                c.rank(j as usize)
            } else {
                0
            }
        })
        .collect();
    let diffs = (0..len.saturating_sub(1))
        .map(|k| {
            let j = lo + k as i64 - c.min_degree();
            if j >= 0 && (j as usize) + 1 < c.len() {
                c.differentials()[j as usize].clone()
            } else {
                IntMatrix::zeros(ranks[k + 1], ranks[k])
            }
        })
        .collect();
    (ranks, diffs)
}

fn degree_range(a: &ChainComplex, b: &ChainComplex) -> Option<(i64, i64)> {
    let range = |c: &ChainComplex| (!c.is_empty()).then(|| (c.min_degree(), c.min_degree() + c.len() as i64 - 1));
    match (range(a), range(b)) {
        (None, None) => None,
        (Some(r), None) | (None, Some(r)) => Some(r),
        (Some((l1, h1)), Some((l2, h2))) => Some((l1.min(l2), h1.max(h2))),
    }
}

/// `A (+) B` over the union of the degree ranges. The metric is kept when both
/// summands carry one; actions are combined when both have the same order.
pub fn direct_sum(a: &ChainComplex, b: &ChainComplex) -> Result<ChainComplex> {
    if b.total_rank() == 0 && !a.is_empty() {
        return Ok(a.clone());
    }
    if a.total_rank() == 0 && !b.is_empty() {
        return Ok(b.clone());
    }
    let Some((lo, hi)) = degree_range(a, b) else {
        return Ok(ChainComplex::empty());
    };
    let (ra, da) = pad(a, lo, hi);
    let (rb, db) = pad(b, lo, hi);
    let ranks: Vec<usize> = ra.iter().zip(&rb).map(|(x, y)| x + y).collect();
    let diffs = da.iter().zip(&db).map(|(x, y)| x.block_diag(y)).collect();
    let mut out = ChainComplex::new(lo, ranks, diffs)?;
    let offset = |c: &ChainComplex, k: usize| -> Option<usize> {
        let j = lo + k as i64 - c.min_degree();
        (j >= 0 && (j as usize) < c.len()).then_some(j as usize)
    };
    if a.has_gram() && b.has_gram() {
        let grams = (0..ra.len())
            .map(|k| {
                let ga = offset(a, k).map(|j| a.gram(j).unwrap().clone()).unwrap_or_else(|| RatMatrix::zeros(0, 0));
                let gb = offset(b, k).map(|j| b.gram(j).unwrap().clone()).unwrap_or_else(|| RatMatrix::zeros(0, 0));
                ga.block_diag(&gb)
            })
            .collect();
        out = out.with_gram(grams)?;
    }
    if let (Some(x), Some(y)) = (a.action(), b.action()) {
        if x.order() != y.order() {
            return Err(Error::InvalidAction(format!(
                "summands carry actions of orders {} and {}",
                x.order(),
                y.order()
            )));
        }
        let mats = (0..ra.len())
            .map(|k| {
                let sa = offset(a, k).map(|j| x.matrix(j).clone()).unwrap_or_else(|| IntMatrix::zeros(0, 0));
                let sb = offset(b, k).map(|j| y.matrix(j).clone()).unwrap_or_else(|| IntMatrix::zeros(0, 0));
                sa.block_diag(&sb)
            })
            .collect();
        out = out.with_action(GroupAction::new(x.order(), mats))?;
    }
    Ok(out)
}

/// `A (+) A` with the order-2 action exchanging the summands.
pub fn direct_sum_swap(a: &ChainComplex) -> Result<ChainComplex> {
    let base = a.clone().without_action();
    let sum = direct_sum(&base, &base)?;
    let mats = a
        .ranks()
        .iter()
        .map(|&n| {
            let z = IntMatrix::zeros(n, n);
            let i = IntMatrix::identity(n);
            z.hstack(&i).vstack(&i.hstack(&z))
        })
        .collect();
    sum.with_action(GroupAction::new(2, mats))
}

/// Mapping cone of the identity of `B`: `C^k = B^{k+1} (+) B^k` with
/// `d(b', b) = (-d b', b' + d b)`. It is contractible; metric and action are
/// carried over blockwise.
pub fn cone_identity(b: &ChainComplex) -> Result<ChainComplex> {
    if b.is_empty() {
        return Ok(ChainComplex::empty());
    }
    let n = b.len();
    let lo = b.min_degree() - 1;
    // Index k of the cone is degree lo + k and holds B^{k} (shifted part, index k
    // of B) and B^{k-1}.
    let part = |k: usize| -> (usize, usize) {
        let shifted = if k < n { b.rank(k) } else { 0 };
        let plain = if k >= 1 { b.rank(k - 1) } else { 0 };
        (shifted, plain)
    };
    let len = n + 1;
    let ranks: Vec<usize> = (0..len).map(|k| { let (s, p) = part(k); s + p }).collect();
    let mut diffs = Vec::with_capacity(len - 1);
    for k in 0..len - 1 {
        let (s0, p0) = part(k);
        let (s1, p1) = part(k + 1);
        let mut d = IntMatrix::zeros(s1 + p1, s0 + p0);
        // -d on the shifted part: B^k -> B^{k+1}.
        if k + 1 < n {
            let dk = &b.differentials()[k];
            for (r, c, v) in dk.entries() {
                d.set(r, c, -v.clone());
            }
        }
        // identity: shifted B^k -> plain B^k.
        for i in 0..s0 {
            d.set(s1 + i, i, BigInt::one());
        }
        // d on the plain part: B^{k-1} -> B^k.
        if k >= 1 {
            let dk = &b.differentials()[k - 1];
            for (r, c, v) in dk.entries() {
                d.set(s1 + r, s0 + c, v.clone());
            }
        }
        diffs.push(d);
    }
    let mut out = ChainComplex::new(lo, ranks, diffs)?;
    let pick_rat = |k: usize| -> RatMatrix {
        let (s, p) = part(k);
        let gs = if s > 0 { b.gram(k).unwrap().clone() } else { RatMatrix::zeros(0, 0) };
        let gp = if p > 0 { b.gram(k - 1).unwrap().clone() } else { RatMatrix::zeros(0, 0) };
        gs.block_diag(&gp)
    };
    if b.has_gram() {
        out = out.with_gram((0..len).map(pick_rat).collect())?;
    }
    if let Some(a) = b.action() {
        let mats = (0..len)
            .map(|k| {
                let (s, p) = part(k);
                let ms = if s > 0 { a.matrix(k).clone() } else { IntMatrix::zeros(0, 0) };
                let mp = if p > 0 { a.matrix(k - 1).clone() } else { IntMatrix::zeros(0, 0) };
                ms.block_diag(&mp)
            })
            .collect();
        out = out.with_action(GroupAction::new(a.order(), mats))?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::cohomology;

    fn z2z() -> ChainComplex {
        ChainComplex::two_term(IntMatrix::from_i64(&[&[2]])).with_identity_gram()
    }

    #[test]
    fn tensor_square_of_z2z() {
        let t = tensor_power_cyclic(&z2z(), 2).unwrap();
        assert_eq!(t.ranks(), &[1, 2, 1]);
        assert_eq!(t.differentials()[0], IntMatrix::from_i64(&[&[2], &[2]]));
        let s = t.action().unwrap();
        assert_eq!(s.matrix(2), &IntMatrix::from_i64(&[&[-1]]));
        assert!(t.validate().passed());
    }

    #[test]
    fn cube_sign_on_top_cell() {
        let t = tensor_power_cyclic(&z2z(), 3).unwrap();
        assert_eq!(t.ranks(), &[1, 3, 3, 1]);
        assert_eq!(t.action().unwrap().matrix(3), &IntMatrix::from_i64(&[&[1]]));
        assert!(t.validate().passed());
    }

    #[test]
    fn sum_with_empty_is_identity() {
        let a = z2z();
        let s = direct_sum(&a, &ChainComplex::empty()).unwrap();
        assert_eq!(s.differentials(), a.differentials());
        assert_eq!(s.grams(), a.grams());
    }

    #[test]
    fn swap_sum_is_valid() {
        let s = direct_sum_swap(&z2z()).unwrap();
        assert!(s.validate().passed());
        assert_eq!(s.ranks(), &[2, 2]);
    }

    #[test]
    fn cone_is_contractible() {
        let a = tensor_power_cyclic(&z2z(), 2).unwrap();
        let c = cone_identity(&a).unwrap();
        assert!(c.validate().passed());
        let h = cohomology(&c).unwrap();
        assert!(h.degrees.iter().all(|d| d.free_rank == 0 && d.torsion_order == BigInt::one()));
    }
}
