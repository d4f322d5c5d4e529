//! Serialization of arbitrary-precision numbers as decimal strings.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::ser::SerializeSeq;
use serde::Serializer;

pub fn big<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

pub fn bigs<S: Serializer>(xs: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(xs.len()))?;
    for x in xs {
        seq.serialize_element(&x.to_string())?;
    }
    seq.end()
}

pub fn opt_rat<S: Serializer>(x: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(q) => s.serialize_str(&q.to_string()),
        None => s.serialize_none(),
    }
}

pub fn rat<S: Serializer>(x: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}
