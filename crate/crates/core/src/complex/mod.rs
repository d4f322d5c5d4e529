//! Finite cochain complexes of free abelian groups with optional metrics and
//! cyclic group actions.

mod analytic;
mod cohomology;
mod volume;

pub use analytic::{
    analytic_torsion, laplacians, spectrum_data, zeta_at_zero, zeta_derivative_at_zero,
    LaplacianData,
};
pub use cohomology::{cohomology, regulators, CohomologyReport, DegreeCohomology};
pub use volume::{rt_volume_forms, rt_volume_forms_rechosen, FieldComplex, VolumeForm};

use num_traits::{One, Signed};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{determinant, inverse, IntMatrix, RatMatrix};

/// Order-p action: one integer matrix per degree.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupAction {
    order: u32,
    matrices: Vec<IntMatrix>,
}

impl GroupAction {
    pub fn new(order: u32, matrices: Vec<IntMatrix>) -> Self {
        GroupAction { order, matrices }
    }

    pub fn trivial(order: u32, ranks: &[usize]) -> Self {
        GroupAction {
            order,
            matrices: ranks.iter().map(|&r| IntMatrix::identity(r)).collect(),
        }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn matrices(&self) -> &[IntMatrix] {
        &self.matrices
    }

    pub fn matrix(&self, k: usize) -> &IntMatrix {
        &self.matrices[k]
    }

    /// `P(sigma) = 1 + sigma + ... + sigma^{p-1}` in degree index `k`.
    pub fn p_of_sigma(&self, k: usize) -> IntMatrix {
        let s = &self.matrices[k];
        let mut acc = IntMatrix::identity(s.rows());
        let mut pw = IntMatrix::identity(s.rows());
        for _ in 1..self.order {
            pw = pw.matmul(s);
            acc = acc.add_matrix(&pw);
        }
        acc
    }
}

pub fn is_prime(n: u32) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChainComplex {
    min_degree: i64,
    ranks: Vec<usize>,
    differentials: Vec<IntMatrix>,
    gram: Option<Vec<RatMatrix>>,
    action: Option<GroupAction>,
}

/// Which invariant a validation issue concerns.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IssueKind {
    DifferentialSquare,
    GramAsymmetric,
    GramNotPositiveDefinite,
    ActionOrder,
    ActionNotPeriodic,
    ActionNotChainMap,
    ActionNotIsometry,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationIssue {
    pub kind: IssueKind,
    pub degree: i64,
    /// Offending (row, column), when a single entry witnesses the failure.
    pub entry: Option<(usize, usize)>,
    pub message: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub issues: Vec<ValidationIssue>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.issues.is_empty()
    }

    pub fn into_result(self) -> Result<()> {
        match self.issues.first() {
            None => Ok(()),
            Some(i) => Err(Error::InvalidComplex(i.message.clone())),
        }
    }
}

fn first_nonzero<T: crate::linalg::Scalar>(m: &crate::linalg::Matrix<T>) -> Option<(usize, usize)> {
    m.entries().find(|(_, _, x)| !x.is_zero()).map(|(r, c, _)| (r, c))
}

fn first_difference<T: crate::linalg::Scalar>(
    a: &crate::linalg::Matrix<T>,
    b: &crate::linalg::Matrix<T>,
) -> Option<(usize, usize)> {
    a.entries()
        .zip(b.entries())
        .find(|((_, _, x), (_, _, y))| x != y)
        .map(|((r, c, _), _)| (r, c))
}

/// Exact positive-definiteness by Sylvester's criterion; returns the first
/// leading minor that fails.
pub fn first_nonpositive_minor(g: &RatMatrix) -> Option<usize> {
    (1..=g.rows()).find(|&k| {
        let idx: Vec<usize> = (0..k).collect();
        !determinant(&g.select_rows(&idx).select_columns(&idx)).is_positive()
    })
}

impl ChainComplex {
    /// `differentials[k]` maps degree `min_degree + k` to the next one and has
    /// shape `ranks[k+1] x ranks[k]`.
    pub fn new(min_degree: i64, ranks: Vec<usize>, differentials: Vec<IntMatrix>) -> Result<Self> {
        let expected = ranks.len().saturating_sub(1);
        if differentials.len() != expected {
            return Err(Error::Shape(format!(
                "{} differentials for {} degrees",
                differentials.len(),
                ranks.len()
            )));
        }
        for (k, d) in differentials.iter().enumerate() {
            if d.rows() != ranks[k + 1] || d.cols() != ranks[k] {
                return Err(Error::Shape(format!(
                    "d in degree {} is {}x{}, expected {}x{}",
                    min_degree + k as i64,
                    d.rows(),
                    d.cols(),
                    ranks[k + 1],
                    ranks[k]
                )));
            }
        }
        Ok(ChainComplex {
            min_degree,
            ranks,
            differentials,
            gram: None,
            action: None,
        })
    }

    /// Two-term complex `Z^a --d--> Z^b` in degrees 0, 1.
    pub fn two_term(d: IntMatrix) -> Self {
        let ranks = vec![d.cols(), d.rows()];
        ChainComplex::new(0, ranks, vec![d]).expect("shapes agree")
    }

    pub fn empty() -> Self {
        ChainComplex::new(0, Vec::new(), Vec::new()).expect("empty complex")
    }

    pub fn with_gram(mut self, gram: Vec<RatMatrix>) -> Result<Self> {
        if gram.len() != self.ranks.len() {
            return Err(Error::Shape(format!(
                "{} gram matrices for {} degrees",
                gram.len(),
                self.ranks.len()
            )));
        }
        for (k, g) in gram.iter().enumerate() {
            if g.rows() != self.ranks[k] || g.cols() != self.ranks[k] {
                return Err(Error::Shape(format!(
                    "gram in degree {} is {}x{}, expected {}x{}",
                    self.degree(k),
                    g.rows(),
                    g.cols(),
                    self.ranks[k],
                    self.ranks[k]
                )));
            }
        }
        self.gram = Some(gram);
        Ok(self)
    }

    pub fn with_identity_gram(self) -> Self {
        let g = self.ranks.iter().map(|&r| RatMatrix::identity(r)).collect();
        self.with_gram(g).expect("identity grams fit")
    }

    pub fn with_action(mut self, action: GroupAction) -> Result<Self> {
        if action.matrices.len() != self.ranks.len() {
            return Err(Error::Shape(format!(
                "{} action matrices for {} degrees",
                action.matrices.len(),
                self.ranks.len()
            )));
        }
        for (k, s) in action.matrices.iter().enumerate() {
            if s.rows() != self.ranks[k] || s.cols() != self.ranks[k] {
                return Err(Error::Shape(format!(
                    "action in degree {} is {}x{}, expected {}x{}",
                    self.degree(k),
                    s.rows(),
                    s.cols(),
                    self.ranks[k],
                    self.ranks[k]
                )));
            }
        }
        self.action = Some(action);
        Ok(self)
    }

    pub fn without_action(mut self) -> Self {
        self.action = None;
        self
    }

    pub fn without_gram(mut self) -> Self {
        self.gram = None;
        self
    }

    pub fn min_degree(&self) -> i64 {
        self.min_degree
    }

    /// Number of stored degrees.
    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    pub fn degree(&self, k: usize) -> i64 {
        self.min_degree + k as i64
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn rank(&self, k: usize) -> usize {
        self.ranks.get(k).copied().unwrap_or(0)
    }

    pub fn total_rank(&self) -> usize {
        self.ranks.iter().sum()
    }

    pub fn differentials(&self) -> &[IntMatrix] {
        &self.differentials
    }

    /// Differential out of index `k` (a zero map at the top).
    pub fn d(&self, k: usize) -> IntMatrix {
        match self.differentials.get(k) {
            Some(d) => d.clone(),
            None => IntMatrix::zeros(0, self.rank(k)),
        }
    }

    /// Differential into index `k` (a zero map at the bottom).
    pub fn d_into(&self, k: usize) -> IntMatrix {
        if k == 0 {
            IntMatrix::zeros(self.rank(0), 0)
        } else {
            self.differentials[k - 1].clone()
        }
    }

    pub fn gram(&self, k: usize) -> Option<&RatMatrix> {
        self.gram.as_ref().map(|g| &g[k])
    }

    pub fn grams(&self) -> Option<&[RatMatrix]> {
        self.gram.as_deref()
    }

    pub fn has_gram(&self) -> bool {
        self.gram.is_some()
    }

    pub fn require_gram(&self, what: &'static str) -> Result<&[RatMatrix]> {
        self.gram.as_deref().ok_or(Error::MissingGram(what))
    }

    pub fn action(&self) -> Option<&GroupAction> {
        self.action.as_ref()
    }

    pub fn require_action(&self, what: &'static str) -> Result<&GroupAction> {
        self.action.as_ref().ok_or(Error::MissingAction(what))
    }

    /// `sum (-1)^i rank A^i`.
    pub fn euler_characteristic(&self) -> i64 {
        self.ranks
            .iter()
            .enumerate()
            .map(|(k, &r)| sign(self.degree(k)) * r as i64)
            .sum()
    }

    /// Whether every lattice has covolume one under its metric.
    pub fn has_unimodular_metric(&self) -> bool {
        self.gram
            .as_ref()
            .is_some_and(|g| g.iter().all(|h| determinant(h).is_one()))
    }

    /// Transports the complex along new bases `P_k` (columns in the old basis):
    /// `d' = P^{-1} d P`, `h' = P^T h P`, `sigma' = P^{-1} sigma P`.
    pub fn change_basis(&self, p: &[IntMatrix]) -> Result<Self> {
        if p.len() != self.len() {
            return Err(Error::Shape("one basis change per degree required".into()));
        }
        let inv: Vec<IntMatrix> = p
            .iter()
            .map(|m| inverse(&m.to_rational())?.to_integer())
            .collect::<Result<_>>()?;
        let diffs = self
            .differentials
            .iter()
            .enumerate()
            .map(|(k, d)| inv[k + 1].matmul(d).matmul(&p[k]))
            .collect();
        let mut out = ChainComplex::new(self.min_degree, self.ranks.clone(), diffs)?;
        if let Some(g) = &self.gram {
            let g2 = g
                .iter()
                .zip(p)
                .map(|(h, m)| {
                    let mr = m.to_rational();
                    mr.transpose().matmul(h).matmul(&mr)
                })
                .collect();
            out = out.with_gram(g2)?;
        }
        if let Some(a) = &self.action {
            let s2 = a
                .matrices
                .iter()
                .enumerate()
                .map(|(k, s)| inv[k].matmul(s).matmul(&p[k]))
                .collect();
            out = out.with_action(GroupAction::new(a.order, s2))?;
        }
        Ok(out)
    }

    /// Same complex placed so that it starts in `min_degree`.
    pub fn shifted_to(&self, min_degree: i64) -> Self {
        let mut c = self.clone();
        c.min_degree = min_degree;
        c
    }

    /// Checks every invariant and reports all violations.
    pub fn validate(&self) -> ValidationReport {
        let mut issues = Vec::new();
        for k in 0..self.differentials.len().saturating_sub(1) {
            let sq = self.differentials[k + 1].matmul(&self.differentials[k]);
            if let Some((r, c)) = first_nonzero(&sq) {
                issues.push(ValidationIssue {
                    kind: IssueKind::DifferentialSquare,
                    degree: self.degree(k),
                    entry: Some((r, c)),
                    message: format!(
                        "d^2 != 0 from degree {} to {}: entry ({r}, {c}) = {}",
                        self.degree(k),
                        self.degree(k + 2),
                        sq.get(r, c)
                    ),
                });
            }
        }
        if let Some(g) = &self.gram {
            for (k, h) in g.iter().enumerate() {
                if let Some((r, c)) = h.first_asymmetry() {
                    issues.push(ValidationIssue {
                        kind: IssueKind::GramAsymmetric,
                        degree: self.degree(k),
                        entry: Some((r, c)),
                        message: format!(
                            "gram in degree {} is not symmetric at ({r}, {c})",
                            self.degree(k)
                        ),
                    });
                } else if let Some(m) = first_nonpositive_minor(h) {
                    issues.push(ValidationIssue {
                        kind: IssueKind::GramNotPositiveDefinite,
                        degree: self.degree(k),
                        entry: Some((m - 1, m - 1)),
                        message: format!(
                            "gram in degree {} is not positive definite: leading minor of order {m} is not positive",
                            self.degree(k)
                        ),
                    });
                }
            }
        }
        if let Some(a) = &self.action {
            self.validate_action(a, &mut issues);
        }
        ValidationReport { issues }
    }

    fn validate_action(&self, a: &GroupAction, issues: &mut Vec<ValidationIssue>) {
        if !is_prime(a.order) {
            issues.push(ValidationIssue {
                kind: IssueKind::ActionOrder,
                degree: self.min_degree,
                entry: None,
                message: format!("action order {} is not prime", a.order),
            });
            return;
        }
        for (k, s) in a.matrices.iter().enumerate() {
            let pw = s.pow(a.order);
            if let Some((r, c)) = first_difference(&pw, &IntMatrix::identity(s.rows())) {
                issues.push(ValidationIssue {
                    kind: IssueKind::ActionNotPeriodic,
                    degree: self.degree(k),
                    entry: Some((r, c)),
                    message: format!(
                        "sigma^{} != 1 in degree {} at ({r}, {c})",
                        a.order,
                        self.degree(k)
                    ),
                });
            }
            if let Some(h) = self.gram(k) {
                let sr = s.to_rational();
                let pulled = sr.transpose().matmul(h).matmul(&sr);
                if let Some((r, c)) = first_difference(&pulled, h) {
                    issues.push(ValidationIssue {
                        kind: IssueKind::ActionNotIsometry,
                        degree: self.degree(k),
                        entry: Some((r, c)),
                        message: format!(
                            "sigma is not an isometry in degree {} at ({r}, {c})",
                            self.degree(k)
                        ),
                    });
                }
            }
        }
        for (k, d) in self.differentials.iter().enumerate() {
            let lhs = a.matrices[k + 1].matmul(d);
            let rhs = d.matmul(&a.matrices[k]);
            if let Some((r, c)) = first_difference(&lhs, &rhs) {
                issues.push(ValidationIssue {
                    kind: IssueKind::ActionNotChainMap,
                    degree: self.degree(k),
                    entry: Some((r, c)),
                    message: format!(
                        "sigma d != d sigma from degree {} at ({r}, {c})",
                        self.degree(k)
                    ),
                });
            }
        }
    }

    pub fn require_valid(&self) -> Result<()> {
        self.validate().into_result()
    }

    /// Rational Betti numbers per stored degree.
    pub fn betti_numbers(&self) -> Vec<usize> {
        let r: Vec<usize> = (0..self.len())
            .map(|k| crate::linalg::integer_rank(&self.d(k)))
            .collect();
        (0..self.len())
            .map(|k| self.rank(k) - r[k] - if k == 0 { 0 } else { r[k - 1] })
            .collect()
    }

    pub fn is_rationally_acyclic(&self) -> bool {
        self.betti_numbers().iter().all(|&b| b == 0)
    }

    /// Errors with the first degree carrying free cohomology.
    pub fn require_acyclic(&self) -> Result<()> {
        match self.betti_numbers().iter().position(|&b| b > 0) {
            None => Ok(()),
            Some(k) => Err(Error::NotAcyclic {
                degree: self.degree(k),
                rank: self.betti_numbers()[k],
            }),
        }
    }
}

/// `(-1)^j`
pub fn sign(j: i64) -> i64 {
    if j.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub fn z_two_z() -> ChainComplex {
        ChainComplex::two_term(IntMatrix::from_i64(&[&[2]]))
    }

    #[test]
    fn validation_examples() {
        assert!(z_two_z().validate().passed());
        let bad = ChainComplex::new(
            0,
            vec![1, 1, 1],
            vec![IntMatrix::from_i64(&[&[1]]), IntMatrix::from_i64(&[&[1]])],
        )
        .unwrap();
        let rep = bad.validate();
        assert_eq!(rep.issues.len(), 1);
        assert_eq!(rep.issues[0].kind, IssueKind::DifferentialSquare);
        assert_eq!(rep.issues[0].degree, 0);
        let degenerate = z_two_z()
            .with_gram(vec![RatMatrix::from_i64(&[&[0]]), RatMatrix::identity(1)])
            .unwrap();
        let rep = degenerate.validate();
        assert_eq!(rep.issues[0].kind, IssueKind::GramNotPositiveDefinite);
    }

    #[test]
    fn action_checks() {
        let c = ChainComplex::two_term(IntMatrix::from_i64(&[&[1, 0], &[0, 1]]));
        let swap = IntMatrix::from_i64(&[&[0, 1], &[1, 0]]);
        let ok = c
            .clone()
            .with_action(GroupAction::new(2, vec![swap.clone(), swap.clone()]))
            .unwrap();
        assert!(ok.validate().passed());
        let bad = c
            .with_action(GroupAction::new(2, vec![swap, IntMatrix::identity(2)]))
            .unwrap();
        assert!(bad
            .validate()
            .issues
            .iter()
            .any(|i| i.kind == IssueKind::ActionNotChainMap));
    }

    #[test]
    fn shape_errors() {
        assert!(ChainComplex::new(0, vec![1, 2], vec![IntMatrix::zeros(1, 1)]).is_err());
        assert!(z_two_z().with_gram(vec![RatMatrix::identity(1)]).is_err());
    }

    #[test]
    fn unimodular_predicate() {
        assert!(z_two_z().with_identity_gram().has_unimodular_metric());
        let g = z_two_z()
            .with_gram(vec![RatMatrix::from_i64(&[&[2]]), RatMatrix::identity(1)])
            .unwrap();
        assert!(!g.has_unimodular_metric());
    }
}
