//! Exact multiplicative values `prod_b b^{e_b}` with rational exponents, used
//! for every torsion invariant. Logarithms are the additive view.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer, MapAccess, Visitor};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

use crate::linalg::real::{ln_interval, Interval};

/// Default trial-division bound.
pub const DEFAULT_FACTOR_BOUND: u64 = 1_000_000;

/// A positive real stored as `prod b^{e_b} * exp(residual_log)`.
///
/// Bases are primes below the factoring bound, or pairwise coprime opaque
/// cofactors whose prime factors all exceed it.
#[derive(Clone, Debug, Default)]
pub struct TorsionValue {
    factors: BTreeMap<BigUint, BigRational>,
    residual_log: Option<f64>,
}

fn small_factor(n: &BigUint, bound: u64) -> (Vec<(BigUint, u32)>, BigUint) {
    let mut out = Vec::new();
    let mut n = n.clone();
    let mut p = 2u64;
    while p <= bound {
        let pb = BigUint::from(p);
        if &pb * &pb > n {
            break;
        }
        let mut k = 0u32;
        while (&n % &pb).is_zero() {
            n /= &pb;
            k += 1;
        }
        if k > 0 {
            out.push((pb, k));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    (out, n)
}

impl TorsionValue {
    pub fn one() -> Self {
        TorsionValue::default()
    }

    /// `|q|` for a nonzero rational `q`.
    pub fn from_rational(q: &BigRational) -> Self {
        Self::from_rational_with_bound(q, DEFAULT_FACTOR_BOUND)
    }

    pub fn from_rational_with_bound(q: &BigRational, bound: u64) -> Self {
        assert!(!q.is_zero(), "torsion value of zero");
        let mut v = TorsionValue::one();
        v.insert_integer(q.numer().magnitude(), &BigRational::one(), bound);
        v.insert_integer(q.denom().magnitude(), &-BigRational::one(), bound);
        v
    }

    pub fn from_integer(n: &BigInt) -> Self {
        Self::from_rational(&BigRational::from_integer(n.clone()))
    }

    pub fn from_u64(n: u64) -> Self {
        Self::from_integer(&BigInt::from(n))
    }

    /// `|q|^e`
    pub fn from_rational_pow(q: &BigRational, e: &BigRational) -> Self {
        Self::from_rational(q).pow(e)
    }

    /// A purely numeric value `exp(log)`.
    pub fn from_log(log: f64) -> Self {
        TorsionValue {
            factors: BTreeMap::new(),
            residual_log: Some(log),
        }
    }

    fn insert_integer(&mut self, n: &BigUint, e: &BigRational, bound: u64) {
        if n.is_one() {
            return;
        }
        let (small, rest) = small_factor(n, bound);
        for (p, k) in small {
            self.insert_base(p, e * BigRational::from_integer(BigInt::from(k)));
        }
        if !rest.is_one() {
            self.insert_base(rest, e.clone());
        }
    }

    /// Adds `e` to the exponent of `b`, refining bases to stay pairwise coprime.
    fn insert_base(&mut self, b: BigUint, e: BigRational) {
        let mut pending = vec![(b, e)];
        while let Some((b, e)) = pending.pop() {
            if b.is_one() || e.is_zero() {
                continue;
            }
            if let Some(x) = self.factors.get_mut(&b) {
                *x += &e;
                if x.is_zero() {
                    self.factors.remove(&b);
                }
                continue;
            }
            let clash = self
                .factors
                .keys()
                .find(|c| !c.gcd(&b).is_one())
                .cloned();
            match clash {
                None => {
                    self.factors.insert(b, e);
                }
                Some(c) => {
                    let f = self.factors.remove(&c).unwrap();
                    let g = c.gcd(&b);
                    pending.push((&c / &g, f.clone()));
                    pending.push((g.clone(), f));
                    pending.push((&b / &g, e.clone()));
                    pending.push((g, e));
                }
            }
        }
    }

    pub fn factors(&self) -> &BTreeMap<BigUint, BigRational> {
        &self.factors
    }

    pub fn residual_log(&self) -> Option<f64> {
        self.residual_log
    }

    pub fn is_exact(&self) -> bool {
        self.residual_log.is_none()
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty() && self.residual_log.is_none_or(|r| r == 0.0)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (b, e) in &other.factors {
            out.insert_base(b.clone(), e.clone());
        }
        out.residual_log = match (self.residual_log, other.residual_log) {
            (None, None) => None,
            (a, b) => Some(a.unwrap_or(0.0) + b.unwrap_or(0.0)),
        };
        out
    }

    pub fn inv(&self) -> Self {
        self.pow(&-BigRational::one())
    }

    pub fn div(&self, other: &Self) -> Self {
        self.mul(&other.inv())
    }

    pub fn pow(&self, e: &BigRational) -> Self {
        if e.is_zero() {
            return TorsionValue::one();
        }
        let factors = self
            .factors
            .iter()
            .map(|(b, x)| (b.clone(), x * e))
            .collect();
        TorsionValue {
            factors,
            residual_log: self
                .residual_log
                .map(|r| r * e.to_f64().unwrap_or(f64::NAN)),
        }
    }

    pub fn pow_i64(&self, e: i64) -> Self {
        self.pow(&BigRational::from_integer(BigInt::from(e)))
    }

    /// Natural logarithm as a double.
    pub fn log_f64(&self) -> f64 {
        let mut s = self.residual_log.unwrap_or(0.0);
        for (b, e) in &self.factors {
            s += e.to_f64().unwrap_or(f64::NAN) * ln_biguint(b);
        }
        s
    }

    /// Correctly rounded when the value is a rational of moderate size.
    pub fn value_f64(&self) -> f64 {
        let size: f64 = self
            .factors
            .iter()
            .map(|(b, e)| e.to_f64().unwrap_or(f64::INFINITY).abs() * b.bits() as f64)
            .sum();
        if size <= 4096.0 {
            if let Some(x) = self.as_rational().and_then(|q| q.to_f64()) {
                return x;
            }
        }
        self.log_f64().exp()
    }

    /// Rigorous enclosure of the exact part of the logarithm.
    pub fn log_interval(&self, bits: u64) -> Interval {
        let mut acc = Interval::zero();
        for (b, e) in &self.factors {
            let l = ln_interval(&BigRational::from_integer(BigInt::from(b.clone())), bits);
            acc = acc.add(&l.scale(e));
        }
        acc
    }

    /// The value itself when every exponent is an integer.
    pub fn as_rational(&self) -> Option<BigRational> {
        if !self.is_exact() {
            return None;
        }
        let mut q = BigRational::one();
        for (b, e) in &self.factors {
            if !e.is_integer() {
                return None;
            }
            let k = e.to_integer().to_i32()?;
            q *= BigRational::from_integer(BigInt::from(b.clone())).pow(k);
        }
        Some(q)
    }

    /// Exponent of the prime `p` (zero when absent).
    pub fn exponent_of(&self, p: u64) -> BigRational {
        self.factors
            .get(&BigUint::from(p))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// `log(self) / log(2)` when the value is a rational power of 2.
    pub fn as_power_of(&self, p: u64) -> Option<BigRational> {
        let pb = BigUint::from(p);
        if !self.is_exact() || self.factors.keys().any(|b| b != &pb) {
            return None;
        }
        Some(self.exponent_of(p))
    }

    /// Compares logarithms; exact when both sides are exact.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        if self.is_exact() && other.is_exact() {
            return self == other;
        }
        (self.log_f64() - other.log_f64()).abs() <= tol
    }

    /// Human-readable product form, e.g. `2^(-1) * 3^(1/2)`.
    pub fn product_string(&self) -> String {
        if self.factors.is_empty() && self.residual_log.is_none() {
            return "1".into();
        }
        let mut parts: Vec<String> = self
            .factors
            .iter()
            .map(|(b, e)| {
                if e.is_one() {
                    b.to_string()
                } else {
                    format!("{b}^({e})")
                }
            })
            .collect();
        if let Some(r) = self.residual_log {
            parts.push(format!("exp({r})"));
        }
        parts.join(" * ")
    }
}

fn ln_biguint(b: &BigUint) -> f64 {
    let bits = b.bits();
    if bits < 1000 {
        b.to_f64().map(f64::ln).unwrap_or(f64::NAN)
    } else {
        let shift = bits - 64;
        let top = (b >> shift).to_f64().unwrap_or(f64::NAN);
        top.ln() + shift as f64 * std::f64::consts::LN_2
    }
}

impl PartialEq for TorsionValue {
    /// Exact comparison by forming the quotient and testing for one.
    fn eq(&self, other: &Self) -> bool {
        let q = self.div(other);
        q.factors.is_empty()
            && match (self.residual_log, other.residual_log) {
                (None, None) => true,
                (Some(a), Some(b)) => a == b,
                _ => false,
            }
    }
}

impl fmt::Display for TorsionValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.product_string())
    }
}

impl Serialize for TorsionValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        struct Factors<'a>(&'a BTreeMap<BigUint, BigRational>);
        impl Serialize for Factors<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                let mut m = s.serialize_map(Some(self.0.len()))?;
                for (b, e) in self.0 {
                    m.serialize_entry(&b.to_string(), &e.to_string())?;
                }
                m.end()
            }
        }
        let n = if self.residual_log.is_some() { 4 } else { 3 };
        let mut m = s.serialize_map(Some(n))?;
        m.serialize_entry("factors", &Factors(&self.factors))?;
        if let Some(r) = self.residual_log {
            m.serialize_entry("residual_log", &r)?;
        }
        m.serialize_entry("log", &format_f64(self.log_f64()))?;
        m.serialize_entry("value", &format_f64(self.value_f64()))?;
        m.end()
    }
}

/// Shortest round-trip decimal for a double.
pub fn format_f64(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    format!("{x:?}")
}

impl<'de> Deserialize<'de> for TorsionValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = TorsionValue;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                write!(f, "a torsion value object")
            }
            fn visit_map<A: MapAccess<'de>>(self, mut a: A) -> Result<TorsionValue, A::Error> {
                let mut out = TorsionValue::one();
                while let Some(k) = a.next_key::<String>()? {
                    match k.as_str() {
                        "factors" => {
                            let m: BTreeMap<String, String> = a.next_value()?;
                            for (b, e) in m {
                                let b: BigUint = b.parse().map_err(de::Error::custom)?;
                                let e: BigRational = e.parse().map_err(de::Error::custom)?;
                                out.insert_base(b, e);
                            }
                        }
                        "residual_log" => out.residual_log = Some(a.next_value()?),
                        _ => {
                            let _: serde::de::IgnoredAny = a.next_value()?;
                        }
                    }
                }
                Ok(out)
            }
        }
        d.deserialize_map(V)
    }
}

/// Convenience: `log|n|` as a value.
pub fn tv(n: i64) -> TorsionValue {
    TorsionValue::from_integer(&BigInt::from(n))
}

/// Convenience: `|n|^(num/den)`.
pub fn tv_pow(n: i64, num: i64, den: i64) -> TorsionValue {
    tv(n).pow(&BigRational::new(BigInt::from(num), BigInt::from(den)))
}

/// Sign of a nonzero rational as `+1` or `-1`.
pub fn sign_of(q: &BigRational) -> i8 {
    if q.is_negative() {
        -1
    } else {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factor_and_multiply() {
        let a = tv(12);
        assert_eq!(a.exponent_of(2), BigRational::from_integer(2.into()));
        assert_eq!(a.exponent_of(3), BigRational::one());
        assert!(a.mul(&a.inv()).is_one());
        assert_eq!(tv(4).pow(&BigRational::new(1.into(), 2.into())), tv(2));
    }

    #[test]
    fn half_value() {
        let h = TorsionValue::from_rational(&BigRational::new(1.into(), 2.into()));
        assert_eq!(h, tv(2).inv());
        assert!((h.value_f64() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn opaque_composites_refine() {
        // Two primes above a tiny bound stay opaque and are split on contact.
        let p = BigRational::from_integer(BigInt::from(101 * 103));
        let a = TorsionValue::from_rational_with_bound(&p, 10);
        assert_eq!(a.factors().len(), 1);
        let b = TorsionValue::from_rational_with_bound(&BigRational::from_integer(101.into()), 10);
        let q = a.div(&b);
        assert_eq!(q.factors().len(), 1);
        assert_eq!(
            q.factors().keys().next().unwrap(),
            &BigUint::from(103u32)
        );
        assert!(a.div(&a).is_one());
    }

    #[test]
    fn json_numeric_key_order() {
        let v = tv(2).inv().mul(&tv(10).pow_i64(3)).mul(&tv(7));
        let s = serde_json::to_string(&v).unwrap();
        assert!(s.starts_with(r#"{"factors":{"2":"2","5":"3","7":"1"}"#), "{s}");
        let back: TorsionValue = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
    }

    #[test]
    fn as_rational_roundtrip() {
        let q = BigRational::new(BigInt::from(-9), BigInt::from(8));
        let v = TorsionValue::from_rational(&q);
        assert_eq!(v.as_rational(), Some(-q));
    }
}
