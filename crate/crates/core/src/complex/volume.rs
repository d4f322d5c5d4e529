//! Reidemeister torsion of a complex of vector spaces from volume forms on the
//! chain groups and on cohomology.

use num_rational::BigRational;
use rand::Rng;

use super::{sign, ChainComplex};
use crate::error::{Error, Result};
use crate::linalg::field::{det, kernel, rank};
use crate::linalg::{Field, Matrix};

/// Cochain complex over a field `F`.
#[derive(Clone, Debug)]
pub struct FieldComplex<F> {
    pub min_degree: i64,
    pub dims: Vec<usize>,
    /// `d[k]` maps index `k` to `k + 1`.
    pub d: Vec<Matrix<F>>,
}

impl<F: Field> FieldComplex<F> {
    pub fn new(min_degree: i64, dims: Vec<usize>, d: Vec<Matrix<F>>) -> Result<Self> {
        if d.len() != dims.len().saturating_sub(1) {
            return Err(Error::Shape("one differential per consecutive pair".into()));
        }
        for (k, m) in d.iter().enumerate() {
            if m.rows() != dims[k + 1] || m.cols() != dims[k] {
                return Err(Error::Shape(format!(
                    "differential {k} has shape {}x{}",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        Ok(FieldComplex { min_degree, dims, d })
    }

    fn d_out(&self, k: usize) -> Matrix<F> {
        self.d
            .get(k)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(0, self.dims[k]))
    }

    fn rank_out(&self, k: usize) -> Result<usize> {
        rank(&self.d_out(k)).ok_or_else(|| Error::VolumeForm("non-invertible pivot".into()))
    }

    /// Dimension of `H^k`.
    pub fn betti(&self, k: usize) -> Result<usize> {
        let below = if k == 0 { 0 } else { self.rank_out(k - 1)? };
        Ok(self.dims[k] - self.rank_out(k)? - below)
    }
}

impl FieldComplex<BigRational> {
    pub fn from_integer_complex(c: &ChainComplex) -> Self {
        FieldComplex {
            min_degree: c.min_degree(),
            dims: c.ranks().to_vec(),
            d: c.differentials().iter().map(|m| m.to_rational()).collect(),
        }
    }
}

/// Volume form given by an ordered basis (columns) and its value on it.
#[derive(Clone, Debug)]
pub struct VolumeForm<F> {
    pub basis: Matrix<F>,
    pub scalar: F,
}

impl<F: Field> VolumeForm<F> {
    pub fn new(basis: Matrix<F>, scalar: F) -> Self {
        VolumeForm { basis, scalar }
    }

    /// The form taking value 1 on the standard basis.
    pub fn standard(n: usize) -> Self {
        VolumeForm {
            basis: Matrix::identity(n),
            scalar: F::one(),
        }
    }

    pub fn scaled(&self, c: F) -> Self {
        VolumeForm {
            basis: self.basis.clone(),
            scalar: self.scalar.clone() * c,
        }
    }
}

/// Standard lifts: ascending standard basis vectors whose images are independent.
fn greedy_lifts<F: Field>(d: &Matrix<F>) -> Result<Matrix<F>> {
    let n = d.cols();
    let mut chosen: Vec<usize> = Vec::new();
    let mut current = 0usize;
    for j in 0..n {
        let mut trial = chosen.clone();
        trial.push(j);
        let r = rank(&d.select_columns(&trial))
            .ok_or_else(|| Error::VolumeForm("non-invertible pivot".into()))?;
        if r > current {
            chosen = trial;
            current = r;
        }
    }
    Ok(Matrix::identity(n).select_columns(&chosen))
}

struct Choices<F> {
    lifts: Vec<Matrix<F>>,
    cocycles: Vec<Option<Matrix<F>>>,
}

fn compute<F: Field>(
    c: &FieldComplex<F>,
    omega: &[VolumeForm<F>],
    mu: &[Option<VolumeForm<F>>],
    choices: Choices<F>,
) -> Result<F> {
    let n = c.dims.len();
    if omega.len() != n || mu.len() != n {
        return Err(Error::VolumeForm(format!(
            "need {n} chain volume forms and {n} cohomology slots"
        )));
    }
    let mut rt = F::one();
    for k in 0..n {
        let deg = c.min_degree + k as i64;
        let a = c.dims[k];
        let h = c.betti(k)?;
        let b = if k == 0 {
            Matrix::zeros(a, 0)
        } else {
            c.d[k - 1].matmul(&choices.lifts[k - 1])
        };
        let y = &choices.lifts[k];
        let (z, s_mu) = match (&mu[k], h) {
            (None, 0) => (Matrix::zeros(a, 0), F::one()),
            (None, _) => {
                return Err(Error::VolumeForm(format!(
                    "H^{deg} has dimension {h} but no volume form was supplied"
                )))
            }
            (Some(m), _) => {
                if m.basis.rows() != a || m.basis.cols() != h {
                    return Err(Error::VolumeForm(format!(
                        "cohomology volume form in degree {deg} needs {h} representatives in dimension {a}"
                    )));
                }
                let z = choices.cocycles[k].clone().unwrap_or_else(|| m.basis.clone());
                if !c.d_out(k).matmul(&z).is_zero() {
                    return Err(Error::VolumeForm(format!(
                        "representatives in degree {deg} are not cocycles"
                    )));
                }
                (z, m.scalar.clone())
            }
        };
        let w = &omega[k];
        if w.basis.rows() != a || w.basis.cols() != a {
            return Err(Error::VolumeForm(format!(
                "chain volume form in degree {deg} needs a basis of {a} vectors"
            )));
        }
        let det_w = det(&w.basis).ok_or_else(|| Error::VolumeForm("non-invertible pivot".into()))?;
        if det_w.is_zero() || w.scalar.is_zero() {
            return Err(Error::VolumeForm(format!("omega in degree {deg} is degenerate")));
        }
        let full = b.hstack(y).hstack(&z);
        let det_full =
            det(&full).ok_or_else(|| Error::VolumeForm("non-invertible pivot".into()))?;
        if det_full.is_zero() {
            return Err(Error::VolumeForm(format!(
                "cohomology representatives in degree {deg} are dependent modulo coboundaries"
            )));
        }
        let num = s_mu * det_w;
        let den = (w.scalar.clone() * det_full)
            .try_inv()
            .ok_or_else(|| Error::VolumeForm("non-invertible determinant".into()))?;
        let m_k = num * den;
        rt = if sign(deg) == 1 {
            rt * m_k
        } else {
            rt * m_k
                .try_inv()
                .ok_or_else(|| Error::VolumeForm("non-invertible factor".into()))?
        };
    }
    Ok(rt)
}

/// `RT(A, omega, mu) = prod_i m_i^{(-1)^i}` where
/// `rho_i ^ d*(rho_{i+1}) ^ sigma_i = m_i omega_i`. `mu[k]` lists cocycle
/// representatives of a basis of `H^k` and the value of the form on it.
pub fn rt_volume_forms<F: Field>(
    c: &FieldComplex<F>,
    omega: &[VolumeForm<F>],
    mu: &[Option<VolumeForm<F>>],
) -> Result<F> {
    let lifts = (0..c.dims.len())
        .map(|k| greedy_lifts(&c.d_out(k)))
        .collect::<Result<Vec<_>>>()?;
    let cocycles = vec![None; c.dims.len()];
    compute(c, omega, mu, Choices { lifts, cocycles })
}

fn random_entry<R: Rng, F: Field>(rng: &mut R) -> F {
    F::from_i64(rng.gen_range(-3..=3))
}

/// Same invariant with randomized auxiliary choices: lifts are mixed by a
/// random invertible matrix and shifted by cocycles, representatives are
/// shifted by coboundaries.
pub fn rt_volume_forms_rechosen<F: Field, R: Rng>(
    c: &FieldComplex<F>,
    omega: &[VolumeForm<F>],
    mu: &[Option<VolumeForm<F>>],
    rng: &mut R,
) -> Result<F> {
    let n = c.dims.len();
    let mut lifts = Vec::with_capacity(n);
    for k in 0..n {
        let d = c.d_out(k);
        let y = greedy_lifts(&d)?;
        let r = y.cols();
        // Upper triangular with nonzero diagonal.
        let mut g = Matrix::<F>::zeros(r, r);
        for i in 0..r {
            for j in i..r {
                let v = if i == j {
                    F::from_i64([1, -1, 2, 3][rng.gen_range(0..4)])
                } else {
                    random_entry(rng)
                };
                g.set(i, j, v);
            }
        }
        let ker = kernel(&d).ok_or_else(|| Error::VolumeForm("non-invertible pivot".into()))?;
        let mut shift = Matrix::<F>::zeros(ker.cols(), r);
        for i in 0..ker.cols() {
            for j in 0..r {
                shift.set(i, j, random_entry(rng));
            }
        }
        lifts.push(y.matmul(&g).add_matrix(&ker.matmul(&shift)));
    }
    let mut cocycles = Vec::with_capacity(n);
    for k in 0..n {
        cocycles.push(match &mu[k] {
            Some(m) if k > 0 => {
                let src = c.dims[k - 1];
                let mut t = Matrix::<F>::zeros(src, m.basis.cols());
                for i in 0..src {
                    for j in 0..m.basis.cols() {
                        t.set(i, j, random_entry(rng));
                    }
                }
                Some(m.basis.add_matrix(&c.d[k - 1].matmul(&t)))
            }
            _ => None,
        });
    }
    compute(c, omega, mu, Choices { lifts, cocycles })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{IntMatrix, RatMatrix};
    use num_traits::Signed;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn standard(c: &FieldComplex<BigRational>) -> Vec<VolumeForm<BigRational>> {
        c.dims.iter().map(|&n| VolumeForm::standard(n)).collect()
    }

    #[test]
    fn q_two_q() {
        let c = FieldComplex::from_integer_complex(&ChainComplex::two_term(IntMatrix::from_i64(&[&[2]])));
        let rt = rt_volume_forms(&c, &standard(&c), &[None, None]).unwrap();
        assert_eq!(rt, q(2));
        let c1 = FieldComplex::from_integer_complex(&ChainComplex::two_term(IntMatrix::from_i64(&[&[1]])));
        assert_eq!(rt_volume_forms(&c1, &standard(&c1), &[None, None]).unwrap().abs(), q(1));
    }

    #[test]
    fn mu_scaling() {
        // Z -0-> Z: H^0 and H^1 both one-dimensional.
        let c = FieldComplex::from_integer_complex(&ChainComplex::two_term(IntMatrix::from_i64(&[&[0]])));
        let mu = |s: i64| {
            vec![
                Some(VolumeForm::standard(1)),
                Some(VolumeForm::new(RatMatrix::identity(1), q(s))),
            ]
        };
        let base = rt_volume_forms(&c, &standard(&c), &mu(1)).unwrap();
        let scaled = rt_volume_forms(&c, &standard(&c), &mu(3)).unwrap();
        assert_eq!(scaled, base / q(3));
    }

    #[test]
    fn missing_mu_rejected() {
        let c = FieldComplex::from_integer_complex(&ChainComplex::two_term(IntMatrix::from_i64(&[&[0]])));
        assert!(rt_volume_forms(&c, &standard(&c), &[None, None]).is_err());
    }

    #[test]
    fn rechoice_invariance() {
        let d0 = IntMatrix::from_i64(&[&[1, 2], &[0, 0], &[3, 1]]);
        let d1 = IntMatrix::from_i64(&[&[0, 1, 0]]);
        let c = ChainComplex::new(0, vec![2, 3, 1], vec![d0, d1]).unwrap();
        assert!(c.validate().passed());
        let f = FieldComplex::from_integer_complex(&c);
        let mu = vec![None, None, None];
        let base = rt_volume_forms(&f, &standard(&f), &mu).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let other = rt_volume_forms_rechosen(&f, &standard(&f), &mu, &mut rng).unwrap();
            assert_eq!(other.abs(), base.abs());
        }
    }
}
