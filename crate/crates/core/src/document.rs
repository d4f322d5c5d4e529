//! Text documents for complexes, cell complexes, Morse-Smale data and order
//! complexes.
//!
//! Documents are JSON. Integers are written as decimal strings and rationals
//! as `"p/q"` strings, so no value is ever truncated to a machine width.
//! Parse errors name the offending field path and, for syntax and type
//! errors, the line and column.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::de::{self, DeserializeOwned, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};
use serde_json::Value;

use crate::complex::{ChainComplex, GroupAction, IssueKind};
use crate::constructions::{CellActionSpec, CellSpec, CriticalPoint, CwData, FlowLine, MsData, OrderComplex};
use crate::error::{Error, Result};
use crate::linalg::{IntMatrix, IntPoly, Matrix, RatMatrix};

/// An integer written as a decimal string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Int(pub BigInt);

/// A rational written as `"p/q"` or `"p"`, stored in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rat(pub BigRational);

impl Serialize for Int {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

fn parse_int(s: &str) -> Option<BigInt> {
    let t = s.trim();
    let digits = t.strip_prefix(['-', '+']).unwrap_or(t);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    t.parse().ok()
}

impl<'de> Deserialize<'de> for Int {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Int;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer as a decimal string")
            }
            fn visit_str<E: de::Error>(self, s: &str) -> std::result::Result<Int, E> {
                parse_int(s)
                    .map(Int)
                    .ok_or_else(|| E::custom(format!("`{s}` is not a decimal integer")))
            }
        }
        d.deserialize_str(V)
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Rat;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a rational as a string \"p/q\"")
            }
            fn visit_str<E: de::Error>(self, s: &str) -> std::result::Result<Rat, E> {
                let bad = || E::custom(format!("`{s}` is not a rational p/q"));
                let (n, q) = match s.split_once('/') {
                    Some((n, q)) => (parse_int(n).ok_or_else(bad)?, parse_int(q).ok_or_else(bad)?),
                    None => (parse_int(s).ok_or_else(bad)?, BigInt::one()),
                };
                if q.is_zero() {
                    return Err(E::custom(format!("`{s}` has zero denominator")));
                }
                Ok(Rat(BigRational::new(n, q)))
            }
        }
        d.deserialize_str(V)
    }
}

/// Rows of decimal strings.
pub type IntRows = Vec<Vec<Int>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionDocument {
    pub order: u32,
    /// One matrix per degree, acting on column vectors.
    pub matrices: Vec<IntRows>,
}

/// A cochain complex. `differentials[k]` maps degree `min_degree + k` to the
/// next and has `ranks[k + 1]` rows of length `ranks[k]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexDocument {
    pub name: String,
    pub min_degree: i64,
    pub ranks: Vec<usize>,
    pub differentials: Vec<IntRows>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gram: Option<Vec<Vec<Vec<Rat>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<ActionDocument>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CwDocument {
    pub name: String,
    pub cells: Vec<CellSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<CellActionSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MsDocument {
    pub name: String,
    #[serde(default = "one")]
    pub rank: usize,
    pub critical_points: Vec<CriticalPoint>,
    #[serde(default)]
    pub flows: Vec<FlowLine>,
}

fn one() -> usize {
    1
}

/// A complex over `Z[x]/(f)`. Polynomials are coefficient lists, constant
/// term first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrderDocument {
    pub name: String,
    pub modulus: Vec<Int>,
    pub min_degree: i64,
    pub ranks: Vec<usize>,
    pub differentials: Vec<Vec<Vec<Vec<Int>>>>,
}

fn doc_err(path: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Document { path: path.into(), message: message.into() }
}

/// Parses any document type, reporting the field path and position of the
/// first error.
pub fn parse<T: DeserializeOwned>(text: &str) -> Result<T> {
    let mut de = serde_json::Deserializer::from_str(text);
    let value: T = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        let path = if path == "." { "document".to_string() } else { path };
        doc_err(path, inner.to_string())
    })?;
    de.end().map_err(|e| doc_err("document", e.to_string()))?;
    Ok(value)
}

/// Canonical text: two-space indentation, arrays of scalars on one line,
/// trailing newline.
pub fn to_text<T: Serialize>(doc: &T) -> String {
    let v = serde_json::to_value(doc).expect("documents serialize");
    let mut out = String::new();
    write_value(&v, 0, &mut out);
    out.push('\n');
    out
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Array(xs) => xs.iter().all(|x| !x.is_array() && !x.is_object()),
        _ => true,
    }
}

fn write_value(v: &Value, indent: usize, out: &mut String) {
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Array(xs) if xs.is_empty() => out.push_str("[]"),
        Value::Array(xs) if is_flat(v) => {
            out.push('[');
            for (i, x) in xs.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                out.push_str(&x.to_string());
            }
            out.push(']');
        }
        Value::Array(xs) => {
            out.push_str("[\n");
            for (i, x) in xs.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_value(x, indent + 1, out);
                out.push_str(if i + 1 < xs.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(m) if m.is_empty() => out.push_str("{}"),
        Value::Object(m) => {
            out.push_str("{\n");
            for (i, (k, x)) in m.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_value(x, indent + 1, out);
                out.push_str(if i + 1 < m.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        x => out.push_str(&x.to_string()),
    }
}

fn int_matrix(rows: &[Vec<Int>], nrows: usize, ncols: usize, path: &str) -> Result<IntMatrix> {
    if rows.len() != nrows {
        return Err(doc_err(path, format!("expected {nrows} rows, found {}", rows.len())));
    }
    let mut data = Vec::with_capacity(nrows * ncols);
    for (r, row) in rows.iter().enumerate() {
        if row.len() != ncols {
            return Err(doc_err(
                format!("{path}[{r}]"),
                format!("expected {ncols} entries, found {}", row.len()),
            ));
        }
        data.extend(row.iter().map(|x| x.0.clone()));
    }
    Matrix::from_vec(nrows, ncols, data)
}

fn int_rows(m: &IntMatrix) -> IntRows {
    (0..m.rows()).map(|r| m.row(r).iter().cloned().map(Int).collect()).collect()
}

fn issue_path(kind: IssueKind, k: usize) -> String {
    match kind {
        IssueKind::DifferentialSquare => format!("differentials[{}]", k + 1),
        IssueKind::GramAsymmetric | IssueKind::GramNotPositiveDefinite => format!("gram[{k}]"),
        IssueKind::ActionOrder => "action.order".into(),
        IssueKind::ActionNotPeriodic | IssueKind::ActionNotIsometry | IssueKind::ActionNotChainMap => {
            format!("action.matrices[{k}]")
        }
    }
}

impl ComplexDocument {
    /// Builds and validates the complex.
    pub fn to_complex(&self) -> Result<ChainComplex> {
        let n = self.ranks.len();
        if self.differentials.len() != n.saturating_sub(1) {
            return Err(doc_err(
                "differentials",
                format!("expected {} matrices for {n} degrees, found {}", n.saturating_sub(1), self.differentials.len()),
            ));
        }
        let ds = self
            .differentials
            .iter()
            .enumerate()
            .map(|(k, m)| int_matrix(m, self.ranks[k + 1], self.ranks[k], &format!("differentials[{k}]")))
            .collect::<Result<Vec<_>>>()?;
        let mut c = ChainComplex::new(self.min_degree, self.ranks.clone(), ds)?;
        if let Some(g) = &self.gram {
            if g.len() != n {
                return Err(doc_err("gram", format!("expected {n} matrices, found {}", g.len())));
            }
            let mut grams = Vec::with_capacity(n);
            for (k, rows) in g.iter().enumerate() {
                let path = format!("gram[{k}]");
                let r = self.ranks[k];
                if rows.len() != r {
                    return Err(doc_err(path, format!("expected {r} rows, found {}", rows.len())));
                }
                let mut data = Vec::with_capacity(r * r);
                for (i, row) in rows.iter().enumerate() {
                    if row.len() != r {
                        return Err(doc_err(format!("{path}[{i}]"), format!("expected {r} entries, found {}", row.len())));
                    }
                    data.extend(row.iter().map(|x| x.0.clone()));
                }
                grams.push(RatMatrix::from_vec(r, r, data)?);
            }
            c = c.with_gram(grams)?;
        }
        if let Some(a) = &self.action {
            if a.matrices.len() != n {
                return Err(doc_err("action.matrices", format!("expected {n} matrices, found {}", a.matrices.len())));
            }
            let ms = a
                .matrices
                .iter()
                .enumerate()
                .map(|(k, m)| int_matrix(m, self.ranks[k], self.ranks[k], &format!("action.matrices[{k}]")))
                .collect::<Result<Vec<_>>>()?;
            c = c.with_action(GroupAction::new(a.order, ms))?;
        }
        if let Some(i) = c.validate().issues.into_iter().next() {
            let k = (i.degree - self.min_degree) as usize;
            return Err(doc_err(issue_path(i.kind, k), i.message));
        }
        Ok(c)
    }

    pub fn from_complex(name: &str, c: &ChainComplex) -> Self {
        ComplexDocument {
            name: name.into(),
            min_degree: c.min_degree(),
            ranks: c.ranks().to_vec(),
            differentials: c.differentials().iter().map(int_rows).collect(),
            gram: c.grams().map(|g| {
                g.iter()
                    .map(|m| (0..m.rows()).map(|r| m.row(r).iter().cloned().map(Rat).collect()).collect())
                    .collect()
            }),
            action: c.action().map(|a| ActionDocument {
                order: a.order(),
                matrices: a.matrices().iter().map(int_rows).collect(),
            }),
        }
    }
}

impl CwDocument {
    pub fn to_cw(&self) -> Result<CwData> {
        CwData::new(&self.cells, self.action.as_ref()).map_err(|e| match e {
            Error::Cell(m) => doc_err(if self.action.is_some() { "cells/action" } else { "cells" }, m),
            e => e,
        })
    }
}

impl MsDocument {
    pub fn to_data(&self) -> MsData {
        MsData {
            rank: self.rank,
            critical_points: self.critical_points.clone(),
            flows: self.flows.clone(),
        }
    }
}

fn poly(coeffs: &[Int]) -> IntPoly {
    IntPoly::new(coeffs.iter().map(|c| c.0.clone()).collect())
}

impl OrderDocument {
    pub fn to_order(&self) -> Result<OrderComplex> {
        let n = self.ranks.len();
        if self.differentials.len() != n.saturating_sub(1) {
            return Err(doc_err(
                "differentials",
                format!("expected {} matrices for {n} degrees, found {}", n.saturating_sub(1), self.differentials.len()),
            ));
        }
        for (k, m) in self.differentials.iter().enumerate() {
            let path = format!("differentials[{k}]");
            if m.len() != self.ranks[k + 1] {
                return Err(doc_err(path, format!("expected {} rows, found {}", self.ranks[k + 1], m.len())));
            }
            if let Some(r) = m.iter().position(|row| row.len() != self.ranks[k]) {
                return Err(doc_err(format!("{path}[{r}]"), format!("expected {} entries", self.ranks[k])));
            }
        }
        let ds = self
            .differentials
            .iter()
            .map(|m| m.iter().map(|row| row.iter().map(|e| poly(e)).collect()).collect())
            .collect();
        OrderComplex::new(poly(&self.modulus), self.min_degree, self.ranks.clone(), ds).map_err(|e| match e {
            Error::NotMonic => doc_err("modulus", e.to_string()),
            e => e,
        })
    }
}
