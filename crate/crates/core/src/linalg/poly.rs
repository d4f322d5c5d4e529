//! Dense univariate polynomials over Z and Q, coefficients stored low to high.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::matrix::Scalar;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

pub type IntPoly = Poly<BigInt>;
pub type RatPoly = Poly<BigRational>;

impl<T: Scalar> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(T::one())
    }

    pub fn constant(c: T) -> Self {
        Poly::new(vec![c])
    }

    /// `c * x^k`
    pub fn monomial(c: T, k: usize) -> Self {
        let mut v = vec![T::zero(); k];
        v.push(c);
        Poly::new(v)
    }

    pub fn x() -> Self {
        Poly::monomial(T::one(), 1)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &T) -> Self {
        Poly::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn eval(&self, at: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * at.clone() + c.clone())
    }

    /// `p(c x)`
    pub fn substitute_scaled(&self, c: &T) -> Self {
        let mut pw = T::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            out.push(a.clone() * pw.clone());
            pw = pw * c.clone();
        }
        Poly::new(out)
    }

    /// Quotient by `x^k`, assuming the low coefficients vanish.
    pub fn shift_down(&self, k: usize) -> Self {
        Poly::new(self.coeffs.iter().skip(k).cloned().collect())
    }

    /// Multiplicity of the root 0.
    pub fn zero_multiplicity(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }
}

impl IntPoly {
    pub fn from_i64(c: &[i64]) -> Self {
        Poly::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn to_rational(&self) -> RatPoly {
        Poly::new(
            self.coeffs
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        )
    }

    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = self.content();
        if self.leading().is_some_and(|l| l.is_negative()) {
            g = -g;
        }
        Poly::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    pub fn derivative(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigInt::from(k))
                .collect(),
        )
    }

    /// Exact quotient `self / other` in Z[x], or `None` if it does not exist.
    pub fn div_exact(&self, other: &Self) -> Option<Self> {
        let dd = other.degree()?;
        let lead = other.leading()?.clone();
        let mut rem = self.coeffs.clone();
        if rem.len() < other.coeffs.len() {
            return if self.is_zero() { Some(Poly::zero()) } else { None };
        }
        let mut q = vec![BigInt::zero(); rem.len() - dd];
        for k in (0..q.len()).rev() {
            let top = &rem[k + dd];
            if top.is_zero() {
                continue;
            }
            let (c, r) = top.div_rem(&lead);
            if !r.is_zero() {
                return None;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                rem[k + j] -= &c * b;
            }
            q[k] = c;
        }
        if rem.iter().all(|c| c.is_zero()) {
            Some(Poly::new(q))
        } else {
            None
        }
    }
}

impl RatPoly {
    pub fn from_i64(c: &[i64]) -> Self {
        IntPoly::from_i64(c).to_rational()
    }

    pub fn derivative(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigRational::from_integer(BigInt::from(k)))
                .collect(),
        )
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some(l) => {
                let inv = l.recip();
                self.scale(&inv)
            }
        }
    }

    /// Euclidean division; panics on division by zero.
    pub fn div_rem(&self, other: &Self) -> (Self, Self) {
        let dd = other.degree().expect("polynomial division by zero");
        let lead_inv = other.leading().unwrap().recip();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut q = vec![BigRational::zero(); rem.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &rem[k + dd] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                rem[k + j] -= &c * b;
            }
            q[k] = c;
        }
        rem.truncate(dd);
        (Poly::new(q), Poly::new(rem))
    }

    pub fn rem(&self, other: &Self) -> Self {
        self.div_rem(other).1
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, s, t)` with `s a + t b = g = gcd(a, b)` monic.
    pub fn extended_gcd(&self, other: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s = &s0 - &(&q * &s1);
            let t = &t0 - &(&q * &t1);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        match r0.leading().cloned() {
            None => (r0, s0, t0),
            Some(l) => {
                let inv = l.recip();
                (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
            }
        }
    }

    /// Inverse of `self` modulo `m`, if coprime.
    pub fn inverse_mod(&self, m: &Self) -> Option<Self> {
        let (g, s, _) = self.rem(m).extended_gcd(m);
        (g.degree() == Some(0)).then(|| s.rem(m))
    }

    /// Squarefree part `p / gcd(p, p')`, monic.
    pub fn squarefree_part(&self) -> Self {
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Primitive integer polynomial with the same roots (positive leading coefficient).
    pub fn to_primitive_int(&self) -> IntPoly {
        let l = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        Poly::new(
            self.coeffs
                .iter()
                .map(|c| (c * BigRational::from_integer(l.clone())).to_integer())
                .collect(),
        )
        .primitive_part()
    }
}

impl<T: Scalar> Add for &Poly<T> {
    type Output = Poly<T>;
    fn add(self, rhs: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new(
            (0..n)
                .map(|k| self.coeff(k) + rhs.coeff(k))
                .collect(),
        )
    }
}

impl<T: Scalar> Sub for &Poly<T> {
    type Output = Poly<T>;
    fn sub(self, rhs: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new(
            (0..n)
                .map(|k| self.coeff(k) - rhs.coeff(k))
                .collect(),
        )
    }
}

impl<T: Scalar> Mul for &Poly<T> {
    type Output = Poly<T>;
    fn mul(self, rhs: &Poly<T>) -> Poly<T> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }
}

impl<T: Scalar> Neg for &Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Poly<T> {
        Poly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl<T: Scalar + fmt::Display> fmt::Display for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})x")?,
                _ => write!(f, "({c})x^{k}")?,
            }
        }
        Ok(())
    }
}

impl<T: Scalar + fmt::Display> fmt::Debug for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let a = IntPoly::from_i64(&[1, 1]);
        let b = IntPoly::from_i64(&[-1, 1]);
        assert_eq!(&a * &b, IntPoly::from_i64(&[-1, 0, 1]));
        assert_eq!(&a - &a, IntPoly::zero());
        assert_eq!((&a * &b).div_exact(&a), Some(b.clone()));
        assert_eq!(IntPoly::from_i64(&[1, 0, 1]).div_exact(&a), None);
    }

    #[test]
    fn gcd_and_squarefree() {
        // (x-1)^2 (x+2)
        let p = RatPoly::from_i64(&[2, -3, 0, 1]);
        assert_eq!(p.squarefree_part(), RatPoly::from_i64(&[-2, 1, 1]));
        let q = RatPoly::from_i64(&[-1, 1]);
        assert_eq!(p.gcd(&q), q);
    }

    #[test]
    fn inverse_modulo() {
        let m = RatPoly::from_i64(&[1, 0, 1]);
        let a = RatPoly::from_i64(&[1, 1]);
        let inv = a.inverse_mod(&m).unwrap();
        assert_eq!((&a * &inv).rem(&m), RatPoly::one());
    }

    #[test]
    fn primitive_integer_form() {
        let p = Poly::new(vec![
            BigRational::new(1.into(), 2.into()),
            BigRational::new((-3).into(), 4.into()),
        ]);
        assert_eq!(p.to_primitive_int(), IntPoly::from_i64(&[-2, 3]));
    }
}
