use serde::Serialize;

use crate::equivariant::NumericValue;
use crate::linalg::real::Interval;
use crate::torsion::TorsionValue;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    ExactPass,
    NumericPass,
    Fail,
    FailUnderAlternateConvention,
    /// The input does not satisfy the check's preconditions.
    NotApplicable,
}

impl Verdict {
    pub fn is_pass(self) -> bool {
        matches!(self, Verdict::ExactPass | Verdict::NumericPass)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::ExactPass => "exact-pass",
            Verdict::NumericPass => "numeric-pass",
            Verdict::Fail => "fail",
            Verdict::FailUnderAlternateConvention => "fail-under-alternate-convention",
            Verdict::NotApplicable => "not-applicable",
        }
    }
}

/// How the two sides are compared.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    Equal,
    /// `left <= right`.
    AtMost,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "kebab-case")]
pub enum CheckValue {
    Exact(TorsionValue),
    Numeric(NumericValue),
    /// Group orders per degree, as decimal strings.
    Orders(Vec<String>),
    /// Not evaluated because the input is outside the check's hypotheses.
    Unavailable,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Residual {
    /// `left / right`; identically one on a pass.
    Ratio { value: TorsionValue },
    /// `right / left` for an inequality; at least one on a pass.
    Margin { value: TorsionValue },
    /// `log left - log right` with its rigorous bound and the tolerance.
    Difference { value: f64, bound: f64, tolerance: f64 },
    /// Number of degrees in which the orders differ.
    Mismatches { count: usize },
    Unavailable,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Comparison {
    pub left: CheckValue,
    pub right: CheckValue,
    pub residual: Residual,
    /// Whether the relation holds (exactly, or within the bound).
    pub holds: bool,
    pub exact: bool,
}

impl Comparison {
    pub fn equal(left: TorsionValue, right: TorsionValue) -> Self {
        let ratio = left.div(&right);
        Comparison {
            holds: ratio.is_one(),
            exact: true,
            residual: Residual::Ratio { value: ratio },
            left: CheckValue::Exact(left),
            right: CheckValue::Exact(right),
        }
    }

    pub fn at_most(left: TorsionValue, right: TorsionValue) -> Self {
        let margin = right.div(&left);
        Comparison {
            holds: margin.log_f64() >= 0.0 && margin.is_exact(),
            exact: true,
            residual: Residual::Margin { value: margin },
            left: CheckValue::Exact(left),
            right: CheckValue::Exact(right),
        }
    }

    /// A rigorous enclosure of `log left` against an exact `right`.
    pub fn numeric(left: NumericValue, right: TorsionValue, tolerance: f64) -> Self {
        let r = right.log_interval(left.precision_bits + 64);
        let d: Interval = left.interval.sub(&r);
        let value = d.mid_f64();
        let bound = d.radius_f64();
        Comparison {
            holds: value.abs() <= bound + tolerance,
            exact: false,
            residual: Residual::Difference { value, bound, tolerance },
            left: CheckValue::Numeric(left),
            right: CheckValue::Exact(right),
        }
    }

    pub fn orders(left: Vec<num_bigint::BigInt>, right: Vec<num_bigint::BigInt>) -> Self {
        let n = left.len().max(right.len());
        let one = num_bigint::BigInt::from(1);
        let count = (0..n)
            .filter(|&i| left.get(i).unwrap_or(&one) != right.get(i).unwrap_or(&one))
            .count();
        Comparison {
            left: CheckValue::Orders(left.iter().map(|x| x.to_string()).collect()),
            right: CheckValue::Orders(right.iter().map(|x| x.to_string()).collect()),
            residual: Residual::Mismatches { count },
            holds: count == 0,
            exact: true,
        }
    }

    fn pass_verdict(&self) -> Verdict {
        if self.exact {
            Verdict::ExactPass
        } else {
            Verdict::NumericPass
        }
    }
}

/// One alternative convention evaluated alongside the primary one.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Variant {
    pub convention: String,
    pub relation: Relation,
    pub left: CheckValue,
    pub right: CheckValue,
    pub residual: Residual,
    pub verdict: Verdict,
}

impl Variant {
    pub fn new(convention: &str, relation: Relation, cmp: Comparison) -> Self {
        let verdict = if cmp.holds {
            cmp.pass_verdict()
        } else {
            Verdict::FailUnderAlternateConvention
        };
        Variant {
            convention: convention.into(),
            relation,
            left: cmp.left,
            right: cmp.right,
            residual: cmp.residual,
            verdict,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub input: String,
    pub relation: Relation,
    pub left: CheckValue,
    pub right: CheckValue,
    pub residual: Residual,
    pub verdict: Verdict,
    /// Conventions in force for the primary comparison.
    pub conventions: Vec<String>,
    pub conventions_version: &'static str,
    pub variants: Vec<Variant>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckReport {
    pub fn new(check: &str, input: String, relation: Relation, cmp: Comparison) -> Self {
        let verdict = if cmp.holds { cmp.pass_verdict() } else { Verdict::Fail };
        CheckReport {
            check: check.into(),
            input,
            relation,
            left: cmp.left,
            right: cmp.right,
            residual: cmp.residual,
            verdict,
            conventions: Vec::new(),
            conventions_version: super::CONVENTIONS_VERSION,
            variants: Vec::new(),
            note: None,
        }
    }

    /// A report for an input on which neither side could be evaluated.
    pub fn unavailable(check: &str, input: String, why: String) -> Self {
        CheckReport {
            check: check.into(),
            input,
            relation: Relation::Equal,
            left: CheckValue::Unavailable,
            right: CheckValue::Unavailable,
            residual: Residual::Unavailable,
            verdict: Verdict::NotApplicable,
            conventions: Vec::new(),
            conventions_version: super::CONVENTIONS_VERSION,
            variants: Vec::new(),
            note: Some(why),
        }
    }

    pub fn convention(mut self, c: &str) -> Self {
        self.conventions.push(c.into());
        self
    }

    pub fn variant(mut self, v: Variant) -> Self {
        self.variants.push(v);
        self
    }

    pub fn note(mut self, n: impl Into<String>) -> Self {
        self.note = Some(n.into());
        self
    }

    /// Marks the input as outside the check's hypotheses; the values stay
    /// in the report for inspection.
    pub fn not_applicable(mut self, why: impl Into<String>) -> Self {
        self.verdict = Verdict::NotApplicable;
        self.note = Some(why.into());
        self
    }

    pub fn variant_verdict(&self, convention: &str) -> Option<Verdict> {
        self.variants.iter().find(|v| v.convention == convention).map(|v| v.verdict)
    }
}
