//! Cellular cochain complexes of finite CW complexes with a cyclic cell action.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::complex::{is_prime, ChainComplex, GroupAction};
use crate::equivariant::FiniteComplex;
use crate::error::{Error, Result};
use crate::linalg::IntMatrix;

/// A cell as written in documents: identifier, dimension and boundary
/// incidences `[this : face]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellSpec {
    pub id: String,
    pub dim: usize,
    #[serde(default)]
    pub boundary: Vec<(String, i64)>,
}

/// Generator of the action: `cell -> sign * image`. Cells not listed are fixed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellActionSpec {
    pub order: u32,
    pub map: BTreeMap<String, (String, i64)>,
}

/// Finite CW complex with cells sorted by identifier in each dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct CwData {
    cells: Vec<Vec<String>>,
    /// `boundary[k]`: cellular boundary from dimension `k + 1` to `k`.
    boundary: Vec<IntMatrix>,
    /// Signed permutation matrices of the generator on cellular chains.
    action: Option<GroupAction>,
}

fn index_of(cells: &[Vec<String>], id: &str) -> Option<(usize, usize)> {
    cells
        .iter()
        .enumerate()
        .find_map(|(d, ids)| ids.binary_search_by(|x| x.as_str().cmp(id)).ok().map(|i| (d, i)))
}

impl CwData {
    pub fn new(specs: &[CellSpec], action: Option<&CellActionSpec>) -> Result<Self> {
        let top = specs.iter().map(|c| c.dim).max();
        let mut cells: Vec<Vec<String>> = vec![Vec::new(); top.map_or(0, |t| t + 1)];
        let mut seen = BTreeSet::new();
        for c in specs {
            if !seen.insert(c.id.clone()) {
                return Err(Error::Cell(format!("duplicate cell `{}`", c.id)));
            }
            cells[c.dim].push(c.id.clone());
        }
        for ids in &mut cells {
            ids.sort();
        }
        let mut boundary: Vec<IntMatrix> = (1..cells.len())
            .map(|k| IntMatrix::zeros(cells[k - 1].len(), cells[k].len()))
            .collect();
        for c in specs {
            let (_, col) = index_of(&cells, &c.id).expect("registered");
            for (face, n) in &c.boundary {
                let (fd, row) = index_of(&cells, face)
                    .ok_or_else(|| Error::Cell(format!("unknown face `{face}` of `{}`", c.id)))?;
                if fd + 1 != c.dim {
                    return Err(Error::Cell(format!(
                        "face `{face}` of `{}` has dimension {fd}, expected {}",
                        c.id,
                        c.dim as i64 - 1
                    )));
                }
                let cur = boundary[fd].get(row, col).clone();
                boundary[fd].set(row, col, cur + BigInt::from(*n));
            }
        }
        for k in 1..boundary.len() {
            if !boundary[k - 1].matmul(&boundary[k]).is_zero() {
                return Err(Error::Cell(format!(
                    "boundary of boundary is nonzero from dimension {}",
                    k + 1
                )));
            }
        }
        let action = match action {
            None => None,
            Some(a) => Some(Self::build_action(&cells, &boundary, a)?),
        };
        Ok(CwData {
            cells,
            boundary,
            action,
        })
    }

    fn build_action(
        cells: &[Vec<String>],
        boundary: &[IntMatrix],
        spec: &CellActionSpec,
    ) -> Result<GroupAction> {
        if !is_prime(spec.order) {
            return Err(Error::Cell(format!("action order {} is not prime", spec.order)));
        }
        let mut mats: Vec<IntMatrix> = cells.iter().map(|ids| IntMatrix::identity(ids.len())).collect();
        for (from, (to, s)) in &spec.map {
            let (d, i) = index_of(cells, from).ok_or_else(|| Error::Cell(format!("unknown cell `{from}`")))?;
            let (d2, j) = index_of(cells, to).ok_or_else(|| Error::Cell(format!("unknown cell `{to}`")))?;
            if d != d2 {
                return Err(Error::Cell(format!("`{from}` and `{to}` differ in dimension")));
            }
            if s.abs() != 1 {
                return Err(Error::Cell(format!("sign of `{from}` must be +1 or -1")));
            }
            mats[d].set(i, i, BigInt::zero());
            mats[d].set(j, i, BigInt::from(*s));
        }
        for (d, m) in mats.iter().enumerate() {
            let n = m.rows();
            let is_signed_perm = (0..n).all(|c| (0..n).filter(|&r| !m.get(r, c).is_zero()).count() == 1)
                && (0..n).all(|r| (0..n).filter(|&c| !m.get(r, c).is_zero()).count() == 1);
            if !is_signed_perm {
                return Err(Error::Cell(format!("action is not a bijection on {d}-cells")));
            }
            if !m.pow(spec.order).is_identity() {
                return Err(Error::Cell(format!("action on {d}-cells does not have order {}", spec.order)));
            }
            for i in 0..n {
                if m.get(i, i) == &-BigInt::one() {
                    return Err(Error::Cell(format!(
                        "cell `{}` is mapped to itself reversing orientation",
                        cells[d][i]
                    )));
                }
            }
        }
        for (k, b) in boundary.iter().enumerate() {
            if mats[k].matmul(b) != b.matmul(&mats[k + 1]) {
                return Err(Error::Cell(format!(
                    "action does not commute with the boundary from dimension {}",
                    k + 1
                )));
            }
        }
        let fixed = |d: usize, i: usize| mats[d].get(i, i).is_one();
        for (k, b) in boundary.iter().enumerate() {
            for col in 0..b.cols() {
                if !fixed(k + 1, col) {
                    continue;
                }
                if (0..b.rows()).any(|row| !b.get(row, col).is_zero() && !fixed(k, row)) {
                    return Err(Error::Cell(format!(
                        "fixed cell `{}` has a non-fixed face",
                        cells[k + 1][col]
                    )));
                }
            }
        }
        Ok(GroupAction::new(spec.order, mats))
    }

    pub fn dimension(&self) -> Option<usize> {
        self.cells.len().checked_sub(1)
    }

    pub fn cells(&self, dim: usize) -> &[String] {
        &self.cells[dim]
    }

    pub fn cell_counts(&self) -> Vec<usize> {
        self.cells.iter().map(|c| c.len()).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.cells
            .iter()
            .enumerate()
            .map(|(d, c)| if d % 2 == 0 { c.len() as i64 } else { -(c.len() as i64) })
            .sum()
    }

    pub fn action(&self) -> Option<&GroupAction> {
        self.action.as_ref()
    }

    /// Whether the cell is fixed by the action (and so lies in `M_sigma`).
    pub fn is_fixed(&self, dim: usize, i: usize) -> bool {
        self.action.as_ref().is_none_or(|a| a.matrix(dim).get(i, i).is_one())
    }

    fn coboundary(&self, k: usize) -> IntMatrix {
        self.boundary[k].transpose()
    }

    fn free_cells(&self, dim: usize) -> Vec<usize> {
        (0..self.cells[dim].len()).filter(|&i| !self.is_fixed(dim, i)).collect()
    }
}

/// Integral cellular cochains with the identity metric and the transported action.
pub fn cw_cochain_complex(k: &CwData) -> Result<ChainComplex> {
    let ranks = k.cell_counts();
    let diffs = (0..k.boundary.len()).map(|d| k.coboundary(d)).collect();
    let c = ChainComplex::new(0, ranks, diffs)?.with_identity_gram();
    match &k.action {
        // Signed permutations are orthogonal, so pulling back by sigma^{-1}
        // acts on indicator cochains by the same matrices.
        Some(a) => c.with_action(a.clone()),
        None => Ok(c),
    }
}

fn mod_complex(moduli: Vec<Vec<BigInt>>, maps: Vec<IntMatrix>) -> FiniteComplex {
    FiniteComplex {
        min_degree: 0,
        moduli,
        maps,
    }
}

/// Cellular cochains with `Z/p` coefficients.
pub fn cw_cochain_complex_mod(k: &CwData, p: u32) -> FiniteComplex {
    let pm = BigInt::from(p);
    mod_complex(
        k.cells.iter().map(|c| vec![pm.clone(); c.len()]).collect(),
        (0..k.boundary.len()).map(|d| k.coboundary(d)).collect(),
    )
}

/// Cochains of `(M, M_sigma)` with `Z/p` coefficients, i.e. compactly
/// supported cochains of the complement of the fixed set.
pub fn relative_cochains_mod(k: &CwData, p: u32) -> FiniteComplex {
    let pm = BigInt::from(p);
    let free: Vec<Vec<usize>> = (0..k.cells.len()).map(|d| k.free_cells(d)).collect();
    mod_complex(
        free.iter().map(|f| vec![pm.clone(); f.len()]).collect(),
        (0..k.boundary.len())
            .map(|d| k.coboundary(d).select_rows(&free[d + 1]).select_columns(&free[d]))
            .collect(),
    )
}

/// Invariant relative cochains mod `p`, which compute
/// `H^*_c((M - M_sigma)/<sigma>; F_p)` since the action off the fixed set is free.
/// The basis is given by orbit sums of the lowest-named cell in each orbit.
pub fn quotient_relative_cochains_mod(k: &CwData) -> Result<FiniteComplex> {
    let a = k.action.as_ref().ok_or(Error::MissingAction("quotient cochains"))?;
    let p = a.order();
    let pm = BigInt::from(p);
    let n = k.cells.len();
    let mut orbit_vecs: Vec<Vec<Vec<BigInt>>> = Vec::with_capacity(n);
    let mut reps: Vec<Vec<usize>> = Vec::with_capacity(n);
    for d in 0..n {
        let m = a.matrix(d);
        let size = k.cells[d].len();
        let mut done = vec![false; size];
        let mut vecs = Vec::new();
        let mut rs = Vec::new();
        for i in k.free_cells(d) {
            if done[i] {
                continue;
            }
            let mut v = vec![BigInt::zero(); size];
            let mut cur = vec![BigInt::zero(); size];
            cur[i] = BigInt::one();
            for _ in 0..p {
                for (x, y) in v.iter_mut().zip(&cur) {
                    *x += y;
                }
                cur = m.mul_vec(&cur);
            }
            for (j, x) in v.iter().enumerate() {
                if !x.is_zero() {
                    done[j] = true;
                }
            }
            vecs.push(v);
            rs.push(i);
        }
        orbit_vecs.push(vecs);
        reps.push(rs);
    }
    let maps = (0..k.boundary.len())
        .map(|d| {
            let delta = k.coboundary(d);
            let mut f = IntMatrix::zeros(reps[d + 1].len(), reps[d].len());
            for (col, v) in orbit_vecs[d].iter().enumerate() {
                let image = delta.mul_vec(v);
                for (row, &r) in reps[d + 1].iter().enumerate() {
                    f.set(row, col, image[r].clone());
                }
            }
            f
        })
        .collect();
    Ok(mod_complex(
        reps.iter().map(|r| vec![pm.clone(); r.len()]).collect(),
        maps,
    ))
}

/// Built-in fixtures.
pub mod fixtures {
    use super::*;

    fn cell(id: &str, dim: usize, boundary: &[(&str, i64)]) -> CellSpec {
        CellSpec {
            id: id.into(),
            dim,
            boundary: boundary.iter().map(|(f, n)| (f.to_string(), *n)).collect(),
        }
    }

    fn action(order: u32, map: &[(&str, &str, i64)]) -> CellActionSpec {
        CellActionSpec {
            order,
            map: map.iter().map(|(a, b, s)| (a.to_string(), (b.to_string(), *s))).collect(),
        }
    }

    pub fn point() -> CwData {
        CwData::new(&[cell("v", 0, &[])], Some(&action(2, &[]))).expect("fixture")
    }

    /// Circle with `p` vertices and edges, rotated by one step.
    pub fn rotation_circle(p: u32) -> CwData {
        let n = p as usize;
        let v = |i: usize| format!("v{i}");
        let e = |i: usize| format!("e{i}");
        let mut cells: Vec<CellSpec> = (0..n).map(|i| cell(&v(i), 0, &[])).collect();
        for i in 0..n {
            cells.push(CellSpec {
                id: e(i),
                dim: 1,
                boundary: vec![(v((i + 1) % n), 1), (v(i), -1)],
            });
        }
        let mut map = BTreeMap::new();
        for i in 0..n {
            map.insert(v(i), (v((i + 1) % n), 1));
            map.insert(e(i), (e((i + 1) % n), 1));
        }
        CwData::new(&cells, Some(&CellActionSpec { order: p, map })).expect("fixture")
    }

    /// Circle with two vertices and two edges, reflected through both vertices.
    pub fn reflection_circle() -> CwData {
        CwData::new(
            &[
                cell("a", 0, &[]),
                cell("b", 0, &[]),
                cell("e", 1, &[("b", 1), ("a", -1)]),
                cell("f", 1, &[("a", 1), ("b", -1)]),
            ],
            // The reflection reverses orientation of the circle.
            Some(&action(2, &[("e", "f", -1), ("f", "e", -1)])),
        )
        .expect("fixture")
    }

    /// Two-sphere as two discs on a loop, reflected through the equator.
    pub fn reflection_sphere() -> CwData {
        CwData::new(
            &[
                cell("v", 0, &[]),
                cell("e", 1, &[("v", 1), ("v", -1)]),
                cell("n", 2, &[("e", 1)]),
                cell("s", 2, &[("e", 1)]),
            ],
            Some(&action(2, &[("n", "s", 1), ("s", "n", 1)])),
        )
        .expect("fixture")
    }

    /// Every built-in fixture with an action, by name.
    pub fn all() -> Vec<(&'static str, CwData)> {
        vec![
            ("point", point()),
            ("reflection-circle", reflection_circle()),
            ("reflection-sphere", reflection_sphere()),
            ("rotation-circle", rotation_circle(3)),
        ]
    }
}
