//! The finite quotient complex `A' = A / (A[sigma - 1] + A[P(sigma)])`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use super::isotypic::{isotypic_decomposition, IsotypicDecomposition};
use crate::complex::ChainComplex;
use crate::error::{Error, Result};
use crate::linalg::{smith_normal_form, IntMatrix};
use crate::serde_util;

/// Complex of finite abelian groups `A_k = (+)_j Z/m_j`, with integer lifts of
/// the differentials acting on coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteComplex {
    pub min_degree: i64,
    pub moduli: Vec<Vec<BigInt>>,
    /// `maps[k]` sends `A_k` to `A_{k+1}` (shape `|moduli[k+1]| x |moduli[k]|`).
    pub maps: Vec<IntMatrix>,
}

fn product(xs: &[BigInt]) -> BigInt {
    xs.iter().fold(BigInt::one(), |a, b| a * b)
}

impl FiniteComplex {
    pub fn group_order(&self, k: usize) -> BigInt {
        product(&self.moduli[k])
    }

    fn image_order(&self, k: usize) -> BigInt {
        let Some(f) = self.maps.get(k) else {
            return BigInt::one();
        };
        let target = &self.moduli[k + 1];
        if target.is_empty() {
            return BigInt::one();
        }
        // |im f| = |A_{k+1}| / |A_{k+1} / im f|
        let mut diag = IntMatrix::zeros(target.len(), target.len());
        for (i, m) in target.iter().enumerate() {
            diag.set(i, i, m.clone());
        }
        let coker = smith_normal_form(&f.hstack(&diag)).torsion_order();
        product(target) / coker
    }

    /// Orders of `H^k` for every stored degree.
    pub fn cohomology_orders(&self) -> Vec<BigInt> {
        let n = self.moduli.len();
        let images: Vec<BigInt> = (0..n).map(|k| self.image_order(k)).collect();
        (0..n)
            .map(|k| {
                let ker = self.group_order(k) / &images[k];
                let im_in = if k == 0 { BigInt::one() } else { images[k - 1].clone() };
                ker / im_in
            })
            .collect()
    }

    /// Whether consecutive maps compose to zero modulo the target moduli.
    pub fn squares_to_zero(&self) -> bool {
        self.maps.windows(2).enumerate().all(|(k, w)| {
            let comp = w[1].matmul(&w[0]);
            let target = &self.moduli[k + 2];
            (0..comp.rows()).all(|r| {
                (0..comp.cols()).all(|c| (comp.get(r, c) % &target[r]).is_zero())
            })
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuotientReport {
    #[serde(skip)]
    pub complex: FiniteComplex,
    /// `|A'_k|` per degree.
    #[serde(serialize_with = "serde_util::bigs")]
    pub group_orders: Vec<BigInt>,
    /// `|H^k(A')|` per degree.
    #[serde(serialize_with = "serde_util::bigs")]
    pub cohomology_orders: Vec<BigInt>,
}

/// Builds `A'` from a precomputed decomposition.
pub fn quotient_from(c: &ChainComplex, iso: &IsotypicDecomposition) -> Result<QuotientReport> {
    let n = c.len();
    let mut us = Vec::with_capacity(n);
    let mut u_invs = Vec::with_capacity(n);
    let mut keep = Vec::with_capacity(n);
    let mut moduli = Vec::with_capacity(n);
    for k in 0..n {
        let e = iso.fixed_embedding[k].hstack(&iso.pofsigma_embedding[k]);
        let snf = smith_normal_form(&e);
        if snf.rank() != c.rank(k) {
            return Err(Error::InvalidAction(format!(
                "isotypic sublattices do not span in degree {}",
                c.degree(k)
            )));
        }
        let idx: Vec<usize> = (0..c.rank(k)).filter(|&i| !snf.divisors[i].is_one()).collect();
        moduli.push(idx.iter().map(|&i| snf.divisors[i].clone()).collect::<Vec<_>>());
        us.push(snf.u);
        u_invs.push(snf.u_inv);
        keep.push(idx);
    }
    let maps = (0..n.saturating_sub(1))
        .map(|k| {
            let f = us[k + 1].matmul(&c.differentials()[k]).matmul(&u_invs[k]);
            f.select_rows(&keep[k + 1]).select_columns(&keep[k])
        })
        .collect();
    let complex = FiniteComplex {
        min_degree: c.min_degree(),
        moduli,
        maps,
    };
    debug_assert!(complex.squares_to_zero());
    let group_orders = (0..n).map(|k| complex.group_order(k)).collect();
    let cohomology_orders = complex.cohomology_orders();
    Ok(QuotientReport {
        complex,
        group_orders,
        cohomology_orders,
    })
}

pub fn quotient_cohomology(c: &ChainComplex) -> Result<QuotientReport> {
    let iso = isotypic_decomposition(c)?;
    quotient_from(c, &iso)
}
