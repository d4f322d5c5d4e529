//! Morse-Smale cochain complexes from combinatorial flow data.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::complex::ChainComplex;
use crate::error::{Error, Result};
use crate::linalg::{determinant_int, IntMatrix};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub id: String,
    pub index: usize,
}

/// A flow line from `from` (index `i`) to `to` (index `i + 1`) with sign
/// `n_gamma` and parallel transport (identity when absent).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlowLine {
    pub from: String,
    pub to: String,
    pub sign: i64,
    #[serde(default)]
    pub transport: Option<Vec<Vec<i64>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MsData {
    /// Rank of the coefficient system.
    #[serde(default = "one")]
    pub rank: usize,
    pub critical_points: Vec<CriticalPoint>,
    #[serde(default)]
    pub flows: Vec<FlowLine>,
}

fn one() -> usize {
    1
}

/// `delta(W^u(x) (x) a) = sum_gamma n_gamma W^u(y) (x) PT_gamma(a)`, with the
/// unstable-cell basis orthonormal. Critical points of each index are ordered
/// by identifier.
pub fn morse_smale_complex(data: &MsData) -> Result<ChainComplex> {
    let r = data.rank;
    let Some(top) = data.critical_points.iter().map(|c| c.index).max() else {
        return Ok(ChainComplex::empty());
    };
    let mut by_index: Vec<Vec<&str>> = vec![Vec::new(); top + 1];
    for c in &data.critical_points {
        by_index[c.index].push(&c.id);
    }
    for ids in &mut by_index {
        ids.sort();
        if ids.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Cell("duplicate critical point".into()));
        }
    }
    let locate = |id: &str| -> Result<(usize, usize)> {
        by_index
            .iter()
            .enumerate()
            .find_map(|(k, ids)| ids.binary_search(&id).ok().map(|i| (k, i)))
            .ok_or_else(|| Error::Cell(format!("unknown critical point `{id}`")))
    };
    let ranks: Vec<usize> = by_index.iter().map(|ids| r * ids.len()).collect();
    let mut diffs: Vec<IntMatrix> = (0..top).map(|k| IntMatrix::zeros(ranks[k + 1], ranks[k])).collect();
    for f in &data.flows {
        let (ki, i) = locate(&f.from)?;
        let (kj, j) = locate(&f.to)?;
        if kj != ki + 1 {
            return Err(Error::Cell(format!(
                "flow line `{}` -> `{}` joins indices {ki} and {kj}",
                f.from, f.to
            )));
        }
        if f.sign.abs() != 1 {
            return Err(Error::Cell(format!("flow line `{}` -> `{}` has sign {}", f.from, f.to, f.sign)));
        }
        let pt = match &f.transport {
            None => IntMatrix::identity(r),
            Some(rows) => {
                let m = IntMatrix::from_rows(
                    rows.iter().map(|row| row.iter().map(|&x| BigInt::from(x)).collect()).collect(),
                    r,
                )?;
                if m.rows() != r || determinant_int(&m).magnitude() != &1u32.into() {
                    return Err(Error::Cell(format!(
                        "transport along `{}` -> `{}` is not an invertible {r}x{r} integer matrix",
                        f.from, f.to
                    )));
                }
                m
            }
        };
        let d = &mut diffs[ki];
        for a in 0..r {
            for b in 0..r {
                let cur = d.get(j * r + a, i * r + b).clone();
                d.set(j * r + a, i * r + b, cur + BigInt::from(f.sign) * pt.get(a, b));
            }
        }
    }
    for k in 1..diffs.len() {
        let sq = diffs[k].matmul(&diffs[k - 1]);
        let bad = sq.entries().find(|(_, _, v)| !num_traits::Zero::is_zero(*v)).map(|(r, c, _)| (r, c));
        if let Some((row, col)) = bad {
            return Err(Error::MorseSquare {
                from: by_index[k - 1][col / r].to_string(),
                to: by_index[k + 1][row / r].to_string(),
            });
        }
    }
    Ok(ChainComplex::new(0, ranks, diffs)?.with_identity_gram())
}

pub mod fixtures {
    use super::*;

    fn cp(id: &str, index: usize) -> CriticalPoint {
        CriticalPoint { id: id.into(), index }
    }

    fn flow(from: &str, to: &str, sign: i64, transport: Option<i64>) -> FlowLine {
        FlowLine {
            from: from.into(),
            to: to.into(),
            sign,
            transport: transport.map(|t| vec![vec![t]]),
        }
    }

    pub fn point() -> MsData {
        MsData { rank: 1, critical_points: vec![cp("x", 0)], flows: vec![] }
    }

    /// Height function on the circle.
    pub fn circle() -> MsData {
        MsData {
            rank: 1,
            critical_points: vec![cp("min", 0), cp("max", 1)],
            flows: vec![flow("min", "max", 1, None), flow("min", "max", -1, None)],
        }
    }

    /// Height function on the circle with the orientation local system.
    pub fn circle_twisted() -> MsData {
        MsData {
            rank: 1,
            critical_points: vec![cp("min", 0), cp("max", 1)],
            flows: vec![flow("min", "max", 1, None), flow("min", "max", -1, Some(-1))],
        }
    }

    pub fn sphere() -> MsData {
        MsData { rank: 1, critical_points: vec![cp("min", 0), cp("max", 2)], flows: vec![] }
    }
}
