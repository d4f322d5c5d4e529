//! Elements of `Q[x]/(f)` for a monic integer polynomial `f`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::elimination::determinant;
use super::field::Field;
use super::matrix::RatMatrix;
use super::poly::RatPoly;

/// Element of `Q[x]/(f)`. Constants carry no modulus so that `zero()` and
/// `one()` need no context; any binary operation adopts the modulus of
/// whichever operand has one.
#[derive(Clone)]
pub struct NfElem {
    value: RatPoly,
    modulus: Option<Arc<RatPoly>>,
}

impl NfElem {
    pub fn new(value: RatPoly, modulus: Arc<RatPoly>) -> Self {
        let value = value.rem(&modulus);
        NfElem {
            value,
            modulus: Some(modulus),
        }
    }

    pub fn rational(q: BigRational) -> Self {
        NfElem {
            value: RatPoly::constant(q),
            modulus: None,
        }
    }

    pub fn value(&self) -> &RatPoly {
        &self.value
    }

    fn join(&self, other: &Self) -> Option<Arc<RatPoly>> {
        self.modulus.clone().or_else(|| other.modulus.clone())
    }

    fn reduce(value: RatPoly, modulus: Option<Arc<RatPoly>>) -> Self {
        match modulus {
            Some(m) => NfElem::new(value, m),
            None => NfElem {
                value,
                modulus: None,
            },
        }
    }

    /// Matrix of multiplication by `self` on the power basis of `Q[x]/(m)`.
    pub fn multiplication_matrix(&self, modulus: &RatPoly) -> RatMatrix {
        let n = modulus.degree().expect("nonzero modulus");
        let mut cols = Vec::with_capacity(n);
        let mut cur = self.value.rem(modulus);
        for _ in 0..n {
            cols.push((0..n).map(|k| cur.coeff(k)).collect::<Vec<_>>());
            cur = (&cur * &RatPoly::x()).rem(modulus);
        }
        RatMatrix::from_columns(n, &cols)
    }

    /// Field norm to Q with respect to `modulus`.
    pub fn norm(&self, modulus: &RatPoly) -> BigRational {
        determinant(&self.multiplication_matrix(modulus))
    }
}

impl PartialEq for NfElem {
    fn eq(&self, other: &Self) -> bool {
        match self.join(other) {
            Some(m) => self.value.rem(&m) == other.value.rem(&m),
            None => self.value == other.value,
        }
    }
}

impl fmt::Debug for NfElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for NfElem {
    type Output = NfElem;
    fn add(self, rhs: NfElem) -> NfElem {
        let m = self.join(&rhs);
        NfElem::reduce(&self.value + &rhs.value, m)
    }
}

impl Sub for NfElem {
    type Output = NfElem;
    fn sub(self, rhs: NfElem) -> NfElem {
        let m = self.join(&rhs);
        NfElem::reduce(&self.value - &rhs.value, m)
    }
}

impl Mul for NfElem {
    type Output = NfElem;
    fn mul(self, rhs: NfElem) -> NfElem {
        let m = self.join(&rhs);
        NfElem::reduce(&self.value * &rhs.value, m)
    }
}

impl Neg for NfElem {
    type Output = NfElem;
    fn neg(self) -> NfElem {
        NfElem {
            value: -&self.value,
            modulus: self.modulus,
        }
    }
}

impl Zero for NfElem {
    fn zero() -> Self {
        NfElem::rational(BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.value.is_zero()
    }
}

impl One for NfElem {
    fn one() -> Self {
        NfElem::rational(BigRational::one())
    }
}

impl Field for NfElem {
    fn from_i64(n: i64) -> Self {
        NfElem::rational(BigRational::from_integer(n.into()))
    }

    fn try_inv(&self) -> Option<Self> {
        if self.value.is_zero() {
            return None;
        }
        match &self.modulus {
            None => {
                let c = self.value.coeff(0);
                Some(NfElem::rational(c.recip()))
            }
            Some(m) => {
                let inv = self.value.inverse_mod(m)?;
                Some(NfElem::new(inv, m.clone()))
            }
        }
    }
}
