use crate::complex::{ChainComplex, GroupAction};
use crate::error::{Error, Result};
use crate::linalg::{saturated_kernel, saturated_left_inverse, IntMatrix};

/// The saturated sublattices `A[sigma - 1]` and `A[P(sigma)]` as complexes in
/// their own right, with the restricted metric and action.
#[derive(Clone, Debug)]
pub struct IsotypicDecomposition {
    pub fixed_part: ChainComplex,
    pub pofsigma_part: ChainComplex,
    /// Basis of `A^k[sigma - 1]` as columns in `A^k`.
    pub fixed_embedding: Vec<IntMatrix>,
    /// Basis of `A^k[P(sigma)]` as columns in `A^k`.
    pub pofsigma_embedding: Vec<IntMatrix>,
}

/// Restricts the complex to invariant saturated sublattices `K_k` (columns).
pub(crate) fn restrict(c: &ChainComplex, bases: &[IntMatrix], order: u32) -> Result<ChainComplex> {
    let left: Vec<IntMatrix> = bases.iter().map(saturated_left_inverse).collect();
    let ranks: Vec<usize> = bases.iter().map(|b| b.cols()).collect();
    let mut diffs = Vec::with_capacity(c.len().saturating_sub(1));
    for k in 0..c.len().saturating_sub(1) {
        let image = c.differentials()[k].matmul(&bases[k]);
        let x = left[k + 1].matmul(&image);
        if bases[k + 1].matmul(&x) != image {
            return Err(Error::InvalidAction(format!(
                "sublattice in degree {} is not carried into the next one by d",
                c.degree(k)
            )));
        }
        diffs.push(x);
    }
    let mut out = ChainComplex::new(c.min_degree(), ranks, diffs)?;
    if let Some(g) = c.grams() {
        let induced = g
            .iter()
            .zip(bases)
            .map(|(h, b)| {
                let br = b.to_rational();
                br.transpose().matmul(h).matmul(&br)
            })
            .collect();
        out = out.with_gram(induced)?;
    }
    if let Some(a) = c.action() {
        let mats = a
            .matrices()
            .iter()
            .enumerate()
            .map(|(k, s)| left[k].matmul(&s.matmul(&bases[k])))
            .collect();
        out = out.with_action(GroupAction::new(order, mats))?;
    }
    Ok(out)
}

pub fn isotypic_decomposition(c: &ChainComplex) -> Result<IsotypicDecomposition> {
    let a = c.require_action("isotypic decomposition")?;
    let report = c.validate();
    if let Some(issue) = report.issues.first() {
        return Err(Error::InvalidAction(issue.message.clone()));
    }
    let p = a.order();
    let mut fixed = Vec::with_capacity(c.len());
    let mut pofs = Vec::with_capacity(c.len());
    for k in 0..c.len() {
        let s = a.matrix(k);
        let n = s.rows();
        fixed.push(saturated_kernel(&s.sub_matrix(&IntMatrix::identity(n))));
        pofs.push(saturated_kernel(&a.p_of_sigma(k)));
    }
    Ok(IsotypicDecomposition {
        fixed_part: restrict(c, &fixed, p)?,
        pofsigma_part: restrict(c, &pofs, p)?,
        fixed_embedding: fixed,
        pofsigma_embedding: pofs,
    })
}
