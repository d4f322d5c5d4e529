//! Complexes of free modules over a monogenic order `O = Z[x]/(f)` and their
//! restriction of scalars to `Z`.

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::Serialize;

use crate::complex::{cohomology, rt_volume_forms, sign, ChainComplex, FieldComplex, VolumeForm};
use crate::error::{Error, Result};
use crate::linalg::{IntMatrix, IntPoly, Matrix, NfElem};
use crate::serde_util;
use crate::torsion::TorsionValue;

#[derive(Clone, Debug, PartialEq)]
pub struct OrderComplex {
    modulus: IntPoly,
    min_degree: i64,
    ranks: Vec<usize>,
    /// `differentials[k][row][col]`, each entry a polynomial in the power basis.
    differentials: Vec<Vec<Vec<IntPoly>>>,
}

impl OrderComplex {
    pub fn new(
        modulus: IntPoly,
        min_degree: i64,
        ranks: Vec<usize>,
        differentials: Vec<Vec<Vec<IntPoly>>>,
    ) -> Result<Self> {
        match (modulus.degree(), modulus.leading()) {
            (Some(d), Some(l)) if d > 0 && l.is_one() => {}
            _ => return Err(Error::NotMonic),
        }
        if differentials.len() != ranks.len().saturating_sub(1) {
            return Err(Error::Shape("one differential per consecutive pair of degrees".into()));
        }
        for (k, d) in differentials.iter().enumerate() {
            if d.len() != ranks[k + 1] || d.iter().any(|row| row.len() != ranks[k]) {
                return Err(Error::Shape(format!(
                    "differential {k} must be {}x{} over the order",
                    ranks[k + 1],
                    ranks[k]
                )));
            }
        }
        Ok(OrderComplex {
            modulus,
            min_degree,
            ranks,
            differentials,
        })
    }

    pub fn modulus(&self) -> &IntPoly {
        &self.modulus
    }

    pub fn min_degree(&self) -> i64 {
        self.min_degree
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn differentials(&self) -> &[Vec<Vec<IntPoly>>] {
        &self.differentials
    }

    pub fn degree_of_order(&self) -> usize {
        self.modulus.degree().expect("monic")
    }

    fn rat_modulus(&self) -> Arc<crate::linalg::RatPoly> {
        Arc::new(self.modulus.to_rational())
    }
}

/// Each `O`-rank `n` becomes `Z`-rank `n deg f`; an entry `a` becomes the matrix of
/// multiplication by `a` on the power basis.
pub fn restrict_scalars(p: &OrderComplex) -> Result<ChainComplex> {
    let m = p.degree_of_order();
    let f = p.rat_modulus();
    let ranks: Vec<usize> = p.ranks.iter().map(|r| r * m).collect();
    let mut diffs = Vec::with_capacity(p.differentials.len());
    for (k, d) in p.differentials.iter().enumerate() {
        let mut out = IntMatrix::zeros(ranks[k + 1], ranks[k]);
        for (i, row) in d.iter().enumerate() {
            for (j, a) in row.iter().enumerate() {
                let block = NfElem::new(a.to_rational(), f.clone())
                    .multiplication_matrix(&f)
                    .to_integer()?;
                for (r, c, v) in block.entries() {
                    out.set(i * m + r, j * m + c, v.clone());
                }
            }
        }
        diffs.push(out);
    }
    let c = ChainComplex::new(p.min_degree, ranks, diffs)?;
    c.require_valid()?;
    Ok(c)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormReport {
    /// `prod_i |H^i(res P)|^{(-1)^{i+1}}`.
    pub cohomology_product: TorsionValue,
    /// Reidemeister torsion over `Q[x]/(f)` with standard volume forms.
    #[serde(skip)]
    pub torsion: NfElem,
    /// `|Norm(RT)|`.
    #[serde(serialize_with = "serde_util::rat")]
    pub norm: BigRational,
    pub agrees: bool,
}

/// Compares the alternating product of cohomology orders of the restricted
/// complex with the norm of the torsion computed over the field of fractions.
/// Requires `f` irreducible so that `Q[x]/(f)` is a field.
pub fn norm_report(p: &OrderComplex) -> Result<NormReport> {
    let res = restrict_scalars(p)?;
    res.require_acyclic()?;
    let h = cohomology(&res)?;
    let cohomology_product = h.degrees.iter().fold(TorsionValue::one(), |acc, d| {
        acc.mul(&TorsionValue::from_integer(&d.torsion_order).pow_i64(sign(d.degree + 1)))
    });
    let f = p.rat_modulus();
    let d = p
        .differentials
        .iter()
        .enumerate()
        .map(|(k, rows)| {
            let data = rows
                .iter()
                .flatten()
                .map(|a| NfElem::new(a.to_rational(), f.clone()))
                .collect();
            Matrix::from_vec(p.ranks[k + 1], p.ranks[k], data)
        })
        .collect::<Result<Vec<_>>>()?;
    let fc = FieldComplex::new(p.min_degree, p.ranks.clone(), d)?;
    let omega: Vec<VolumeForm<NfElem>> = p.ranks.iter().map(|&n| VolumeForm::standard(n)).collect();
    let mu = vec![None; p.ranks.len()];
    let torsion = rt_volume_forms(&fc, &omega, &mu)?;
    let norm = torsion.norm(&f).abs();
    let agrees = cohomology_product == TorsionValue::from_rational(&norm);
    Ok(NormReport {
        cohomology_product,
        torsion,
        norm,
        agrees,
    })
}

pub fn norm_of_torsion(p: &OrderComplex) -> Result<TorsionValue> {
    Ok(norm_report(p)?.cohomology_product)
}

/// `O = Z[i]`.
pub fn gaussian_modulus() -> IntPoly {
    IntPoly::from_i64(&[1, 0, 1])
}

/// `O = Z[zeta_3]`.
pub fn eisenstein_modulus() -> IntPoly {
    IntPoly::from_i64(&[1, 1, 1])
}

/// `O --a--> O` in degrees 0, 1.
pub fn two_term(modulus: IntPoly, a: IntPoly) -> Result<OrderComplex> {
    OrderComplex::new(modulus, 0, vec![1, 1], vec![vec![vec![a]]])
}
