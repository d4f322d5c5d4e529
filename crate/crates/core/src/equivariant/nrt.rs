use num_bigint::BigInt;
use num_rational::BigRational;

use super::isotypic::{isotypic_decomposition, IsotypicDecomposition};
use super::quotient::{quotient_from, QuotientReport};
use crate::complex::{cohomology, sign, ChainComplex};
use crate::error::Result;
use crate::torsion::TorsionValue;

/// Ingredients of the naive equivariant torsion, kept for reporting.
#[derive(Clone, Debug)]
pub struct NrtParts {
    pub order: u32,
    pub fixed_orders: Vec<(i64, BigInt)>,
    pub pofsigma_orders: Vec<(i64, BigInt)>,
    pub quotient: QuotientReport,
    pub min_degree: i64,
}

fn alternating(orders: &[(i64, BigInt)], parity: i64) -> TorsionValue {
    orders.iter().fold(TorsionValue::one(), |acc, (deg, n)| {
        acc.mul(&TorsionValue::from_integer(n).pow_i64(sign(deg + parity)))
    })
}

impl NrtParts {
    /// `sum (-1)^{i+parity} log|H^i(C^{sigma-1})|`
    pub fn fixed_term(&self, parity: i64) -> TorsionValue {
        alternating(&self.fixed_orders, parity)
    }

    pub fn pofsigma_term(&self, parity: i64) -> TorsionValue {
        alternating(&self.pofsigma_orders, parity)
    }

    pub fn quotient_term(&self, parity: i64) -> TorsionValue {
        let orders: Vec<(i64, BigInt)> = self
            .quotient
            .cohomology_orders
            .iter()
            .enumerate()
            .map(|(k, n)| (self.min_degree + k as i64, n.clone()))
            .collect();
        alternating(&orders, parity)
    }

    /// The combination with alternating sign `(-1)^{i + parity}`.
    pub fn value(&self, parity: i64) -> TorsionValue {
        let w = BigRational::new(BigInt::from(-1), BigInt::from(self.order as i64 - 1));
        self.fixed_term(parity)
            .mul(&self.pofsigma_term(parity).pow(&w))
            .mul(&self.quotient_term(parity))
    }
}

fn orders(c: &ChainComplex) -> Result<Vec<(i64, BigInt)>> {
    Ok(cohomology(c)?
        .degrees
        .into_iter()
        .map(|d| (d.degree, d.torsion_order))
        .collect())
}

pub fn nrt_parts_from(c: &ChainComplex, iso: &IsotypicDecomposition) -> Result<NrtParts> {
    c.require_acyclic()?;
    let order = c.require_action("naive equivariant torsion")?.order();
    Ok(NrtParts {
        order,
        fixed_orders: orders(&iso.fixed_part)?,
        pofsigma_orders: orders(&iso.pofsigma_part)?,
        quotient: quotient_from(c, iso)?,
        min_degree: c.min_degree(),
    })
}

pub fn nrt_parts(c: &ChainComplex) -> Result<NrtParts> {
    c.require_action("naive equivariant torsion")?;
    c.require_acyclic()?;
    let iso = isotypic_decomposition(c)?;
    nrt_parts_from(c, &iso)
}

/// `log NRT = sum (-1)^i [log|H^i(C^{sigma-1})| - 1/(p-1) log|H^i(C^{P(sigma)})|]
///  + sum (-1)^i log|H^i(C')|`.
pub fn nrt_sigma(c: &ChainComplex) -> Result<TorsionValue> {
    Ok(nrt_parts(c)?.value(0))
}
