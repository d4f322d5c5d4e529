//! The individual identities. Each function evaluates both sides by
//! independent routes and never assumes the identity it checks.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::report::{CheckReport, Comparison, Relation, Residual, Variant};
use crate::complex::{
    analytic_torsion, cohomology, sign, zeta_at_zero, zeta_derivative_at_zero, ChainComplex,
};
use crate::constructions::{
    cone_identity, cw_cochain_complex, direct_sum, norm_report, quotient_relative_cochains_mod,
    tensor_power_cyclic, CwData, OrderComplex,
};
use crate::equivariant::{
    isotypic_decomposition, nrt_parts, nrt_parts_from, quotient_from, rt_sigma, tau_sigma_exact_p2,
    tau_sigma_numeric, tau_sigma_spectral, twisted_zeta_derivative, NumericValue,
};
use crate::error::{Error, Result};
use crate::linalg::{determinant, IntMatrix};
use crate::torsion::TorsionValue;

/// Precision of every numeric enclosure, in bits.
pub const NUMERIC_BITS: u64 = 128;
/// Tolerance for numeric comparisons, on top of the rigorous enclosure radius.
pub const NUMERIC_TOLERANCE: f64 = 1e-9;

const PARITY: &str = "sum* = sum_i (-1)^i";
const LOG_TAU: &str = "log tau = 1/2 sum_j (-1)^j j log pdet Delta_j";

fn half() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(2))
}

fn tv(n: &BigInt) -> TorsionValue {
    TorsionValue::from_integer(n)
}

/// `prod_i x_i^{(-1)^{i + parity}}`.
fn alternating(items: impl IntoIterator<Item = (i64, TorsionValue)>, parity: i64) -> TorsionValue {
    items
        .into_iter()
        .fold(TorsionValue::one(), |acc, (deg, x)| acc.mul(&x.pow_i64(sign(deg + parity))))
}

fn abs_log(x: &TorsionValue) -> TorsionValue {
    if x.log_f64() < 0.0 {
        x.inv()
    } else {
        x.clone()
    }
}

fn primary_part(n: &BigInt, p: u32) -> BigInt {
    let pb = BigInt::from(p);
    let mut n = n.clone();
    let mut out = BigInt::one();
    while !n.is_zero() && (&n % &pb).is_zero() {
        n /= &pb;
        out *= &pb;
    }
    out
}

fn sqrt_det(h: &crate::linalg::RatMatrix) -> TorsionValue {
    TorsionValue::from_rational(&determinant(h)).pow(&half())
}

pub fn describe(c: &ChainComplex) -> String {
    let top = c.min_degree() + c.len() as i64 - 1;
    let mut s = format!("degrees {}..{}, ranks {:?}", c.min_degree(), top, c.ranks());
    if let Some(a) = c.action() {
        s.push_str(&format!(", order {}", a.order()));
    }
    match c.grams() {
        None => s.push_str(", no metric"),
        Some(_) if c.has_unimodular_metric() => s.push_str(", identity metric"),
        Some(_) => s.push_str(", metric"),
    }
    s
}

fn with_metric(c: &ChainComplex) -> ChainComplex {
    if c.has_gram() {
        c.clone()
    } else {
        c.clone().with_identity_gram()
    }
}

pub fn is_signed_permutation(m: &IntMatrix) -> bool {
    let one = BigInt::one();
    let col_ok = (0..m.cols()).all(|j| {
        let nz: Vec<&BigInt> = (0..m.rows()).map(|i| m.get(i, j)).filter(|v| !v.is_zero()).collect();
        nz.len() == 1 && nz[0].magnitude() == one.magnitude()
    });
    let row_ok = (0..m.rows()).all(|i| m.row(i).iter().filter(|v| !v.is_zero()).count() == 1);
    col_ok && row_ok
}

/// `sum_k (-1)^k #{basis vectors e with sigma e = +-e}`.
pub fn fixed_euler_characteristic(c: &ChainComplex) -> Option<i64> {
    let a = c.action()?;
    let mut chi = 0;
    for k in 0..c.len() {
        let s = a.matrix(k);
        if !is_signed_permutation(s) {
            return None;
        }
        let fixed = (0..s.cols()).filter(|&j| !s.get(j, j).is_zero()).count() as i64;
        chi += sign(c.degree(k)) * fixed;
    }
    Some(chi)
}

fn na(check: &str, input: String, e: &Error) -> CheckReport {
    CheckReport::unavailable(check, input, e.to_string())
}

/// `sum* [log|H^i_tors| - log R^i + log vol(A^i)]`.
fn homological_side(c: &ChainComplex, parity: i64) -> Result<TorsionValue> {
    let h = cohomology(c)?;
    let grams = c.require_gram("regulators")?;
    let terms = h.degrees.iter().zip(grams).map(|(d, g)| {
        let reg = d.regulator_sq.clone().expect("metric present");
        let t = tv(&d.torsion_order)
            .mul(&TorsionValue::from_rational(&reg).pow(&-half()))
            .mul(&sqrt_det(g));
        (d.degree, t)
    });
    Ok(alternating(terms, parity))
}

pub fn untwisted_cm_finite(c: &ChainComplex, input: String) -> Result<CheckReport> {
    const NAME: &str = "untwisted-cm-finite";
    let c = with_metric(c);
    let tau = analytic_torsion(&c)?;
    let right = homological_side(&c, 0)?;
    let literal_left = zeta_derivative_at_zero(&c)?.inv();
    Ok(CheckReport::new(NAME, input, Relation::Equal, Comparison::equal(tau.clone(), right.clone()))
        .convention(LOG_TAU)
        .convention(PARITY)
        .variant(Variant::new(
            "tau = exp(-Z'(0)) read literally against the same right side",
            Relation::Equal,
            Comparison::equal(literal_left, right.clone()),
        ))
        .variant(Variant::new(
            "sum* = sum_i (-1)^{i+1}",
            Relation::Equal,
            Comparison::equal(tau, right.inv()),
        )))
}

pub fn twisted_split_p2(c: &ChainComplex, input: String) -> Result<CheckReport> {
    const NAME: &str = "twisted-split-p2";
    match c.action() {
        Some(a) if a.order() == 2 => {}
        Some(a) => return Ok(na(NAME, input, &Error::UnsupportedOrder(a.order()))),
        None => return Ok(na(NAME, input, &Error::MissingAction("twisted torsion"))),
    }
    if !c.has_gram() {
        return Ok(na(NAME, input, &Error::MissingGram("twisted torsion")));
    }
    let spectral = tau_sigma_spectral(c)?;
    let split = tau_sigma_exact_p2(c)?;
    let numeric = tau_sigma_numeric(c, NUMERIC_BITS)?;
    Ok(CheckReport::new(NAME, input, Relation::Equal, Comparison::equal(spectral, split.clone()))
        .convention(LOG_TAU)
        .convention("left: 1/2 sum_j (-1)^j j sum_lambda tr(sigma|E_lambda) log lambda; right: log tau(A[sigma-1]) - log tau(A[sigma+1])")
        .variant(Variant::new(
            "left evaluated by interval arithmetic",
            Relation::Equal,
            Comparison::numeric(numeric, split, NUMERIC_TOLERANCE),
        )))
}

/// `sum* (log|H^i_tors| - log R^i)`.
fn u_prime(c: &ChainComplex, parity: i64) -> Result<TorsionValue> {
    let h = cohomology(c)?;
    Ok(alternating(
        h.degrees.iter().map(|d| {
            let reg = d.regulator_sq.clone().expect("metric present");
            (d.degree, tv(&d.torsion_order).mul(&TorsionValue::from_rational(&reg).pow(&-half())))
        }),
        parity,
    ))
}

/// `sum* log vol(A^i)`.
fn volume_term(c: &ChainComplex, parity: i64) -> Result<TorsionValue> {
    let g = c.require_gram("volumes")?;
    Ok(alternating((0..c.len()).map(|k| (c.degree(k), sqrt_det(&g[k]))), parity))
}

pub fn twisted_guess_volume_variants(c: &ChainComplex, input: String) -> Result<CheckReport> {
    const NAME: &str = "twisted-guess-volume-variants";
    match c.action() {
        Some(a) if a.order() == 2 => {}
        Some(a) => return Ok(na(NAME, input, &Error::UnsupportedOrder(a.order()))),
        None => return Ok(na(NAME, input, &Error::MissingAction("twisted torsion"))),
    }
    let c = with_metric(c);
    let spectral = tau_sigma_spectral(&c)?;
    let iso = isotypic_decomposition(&c)?;
    let (plus, minus) = (&iso.fixed_part, &iso.pofsigma_part);
    let quotient = quotient_from(&c, &iso)?;
    let h_quot = alternating(
        quotient
            .cohomology_orders
            .iter()
            .enumerate()
            .map(|(k, n)| (c.degree(k), tv(n))),
        0,
    );
    let common = u_prime(plus, 0)?.div(&u_prime(minus, 0)?);
    let ratio = common.mul(&volume_term(plus, 0)?.div(&volume_term(minus, 0)?));
    let combined = common.mul(&h_quot);
    let opposite = u_prime(plus, 1)?
        .div(&u_prime(minus, 1)?)
        .mul(&volume_term(plus, 1)?.div(&volume_term(minus, 1)?));
    let mut report = CheckReport::new(NAME, input, Relation::Equal, Comparison::equal(spectral.clone(), ratio))
        .convention(LOG_TAU)
        .convention(PARITY)
        .convention("ratio reading: the volume corrections of A[sigma-1] and A[sigma+1] enter with opposite signs")
        .variant(Variant::new(
            "combined reading: both volume corrections merged into sum* log|H^i(A')|",
            Relation::Equal,
            Comparison::equal(spectral.clone(), combined),
        ))
        .variant(Variant::new(
            "ratio reading with sum* = sum_i (-1)^{i+1}",
            Relation::Equal,
            Comparison::equal(spectral, opposite),
        ));
    if !c.has_unimodular_metric() {
        report = report.note("metric is not unimodular; the combined reading assumes vol(A^i) = 1");
    }
    Ok(report)
}

fn require_same_order(a: &ChainComplex, b: &ChainComplex) -> Option<Error> {
    match (a.action(), b.action()) {
        (Some(x), Some(y)) if x.order() == y.order() => None,
        (Some(_), Some(y)) => Some(Error::InvalidAction(format!("orders differ ({})", y.order()))),
        _ => Some(Error::MissingAction("naive equivariant torsion")),
    }
}

pub fn nrt_homotopy(c: &ChainComplex, b: &ChainComplex, input: String) -> Result<CheckReport> {
    const NAME: &str = "nrt-homotopy";
    if let Some(e) = require_same_order(c, b) {
        return Ok(na(NAME, input, &e));
    }
    if let Err(e) = c.require_acyclic() {
        return Ok(na(NAME, input, &e));
    }
    let big = direct_sum(c, &cone_identity(b)?)?;
    let (l, r) = (nrt_parts(c)?, nrt_parts(&big)?);
    Ok(CheckReport::new(NAME, input, Relation::Equal, Comparison::equal(l.value(0), r.value(0)))
        .convention(PARITY)
        .convention("right: C plus the cone of the identity of B, an equivariantly contractible complex")
        .variant(Variant::new("sum* = sum_i (-1)^{i+1}", Relation::Equal, Comparison::equal(l.value(1), r.value(1)))))
}

pub fn nrt_additivity(a: &ChainComplex, b: &ChainComplex, p: u32, input: String) -> Result<CheckReport> {
    const NAME: &str = "nrt-additivity";
    for x in [a, b] {
        if let Err(e) = x.require_acyclic() {
            return Ok(na(NAME, input, &e));
        }
    }
    let a = a.clone().without_action().without_gram();
    let b = b.clone().without_action().without_gram();
    let sum = nrt_parts(&tensor_power_cyclic(&direct_sum(&a, &b)?, p)?)?;
    let pa = nrt_parts(&tensor_power_cyclic(&a, p)?)?;
    let pb = nrt_parts(&tensor_power_cyclic(&b, p)?)?;
    Ok(CheckReport::new(
        NAME,
        input,
        Relation::Equal,
        Comparison::equal(sum.value(0), pa.value(0).mul(&pb.value(0))),
    )
    .convention(PARITY)
    .convention("left: (A + B)^{(x)p}; right: A^{(x)p} and B^{(x)p}, cyclic permutation action")
    .variant(Variant::new(
        "sum* = sum_i (-1)^{i+1}",
        Relation::Equal,
        Comparison::equal(sum.value(1), pa.value(1).mul(&pb.value(1))),
    )))
}

pub fn product_zeta(a: &ChainComplex, n: u32, input: String) -> Result<CheckReport> {
    const NAME: &str = "product-zeta";
    let a = with_metric(&a.clone().without_action());
    let t = tensor_power_cyclic(&a, n)?;
    let left = twisted_zeta_derivative(&t)?;
    let z0 = zeta_at_zero(&a)?;
    let right = zeta_derivative_at_zero(&a)?
        .pow_i64(n as i64)
        .mul(&TorsionValue::from_u64(n as u64).pow_i64(-(n as i64) * z0));
    Ok(CheckReport::new(NAME, input, Relation::Equal, Comparison::equal(left, right))
        .convention("Z'(0) = -sum_j (-1)^j j log pdet Delta_j; Z(0) = sum_j (-1)^j j rank Delta_j")
        .convention("left: Z'_sigma(0) of the n-th tensor power with product metric; right: n [Z'_A(0) - log(n) Z_A(0)]")
        .note(format!("n = {n}, Z_A(0) = {z0}")))
}

pub fn nrt_tensor_power(a: &ChainComplex, p: u32, input: String) -> Result<CheckReport> {
    const NAME: &str = "nrt-tensor-power";
    let a = with_metric(&a.clone().without_action());
    if let Err(e) = a.require_acyclic() {
        return Ok(na(NAME, input, &e));
    }
    let left = nrt_parts(&tensor_power_cyclic(&a, p)?)?.value(0);
    let h = cohomology(&a)?;
    let star = |parity| alternating(h.degrees.iter().map(|d| (d.degree, tv(&d.torsion_order))), parity);
    let z0 = zeta_at_zero(&a)?;
    let pi = p as i64;
    let pv = TorsionValue::from_u64(p as u64);
    // For p = 2 the sign of the swap on odd cochains costs one factor of 2 per
    // unit of rank of the differential.
    let sign_defect: i64 = if p == 2 {
        a.differentials().iter().map(|d| crate::linalg::integer_rank(d) as i64).sum()
    } else {
        0
    };
    let right = star(0)
        .pow_i64(pi)
        .mul(&pv.pow(&BigRational::new(BigInt::from(pi * z0), BigInt::from(2))))
        .mul(&pv.pow_i64(-sign_defect));
    let power = tensor_power_cyclic(&a, p)?;
    Ok(CheckReport::new(NAME, input, Relation::Equal, Comparison::equal(left.clone(), right))
        .convention(PARITY)
        .convention("right: p sum* log|H^i(A)| + (p/2) Z_A(0) log p - [p = 2] (sum_j rank d_j) log 2")
        .variant(Variant::new(
            "right: p log RT(A)",
            Relation::Equal,
            Comparison::equal(left.clone(), star(0).pow_i64(pi)),
        ))
        .variant(Variant::new(
            "right: p log RT(A) with sum* = sum_i (-1)^{i+1}",
            Relation::Equal,
            Comparison::equal(left.clone(), star(1).pow_i64(pi)),
        ))
        .variant(Variant::new(
            "right: log tau_sigma(A^{(x)p})",
            Relation::Equal,
            Comparison::equal(left, tau_sigma_spectral(&power)?),
        ))
        .note(format!("p = {p}, Z_A(0) = {z0}")))
}

pub fn quotient_geometric(k: &CwData, input: String) -> Result<CheckReport> {
    const NAME: &str = "quotient-geometric";
    if k.action().is_none() {
        return Ok(na(NAME, input, &Error::MissingAction("quotient complex")));
    }
    let c = cw_cochain_complex(k)?;
    let algebraic = quotient_from(&c, &isotypic_decomposition(&c)?)?.cohomology_orders;
    let geometric = quotient_relative_cochains_mod(k)?.cohomology_orders();
    Ok(CheckReport::new(NAME, input, Relation::Equal, Comparison::orders(algebraic, geometric))
        .convention("left: |H^i(A')|, A' = A / (A[sigma-1] + A[P(sigma)]); right: |H^i_c((M - M_sigma)/sigma; F_p)| from invariant relative cochains"))
}

pub fn spectral_bound(c: &ChainComplex, input: String) -> Result<CheckReport> {
    const NAME: &str = "spectral-bound";
    match c.action() {
        Some(a) if a.order() == 2 => {}
        Some(a) => return Ok(na(NAME, input, &Error::UnsupportedOrder(a.order()))),
        None => return Ok(na(NAME, input, &Error::MissingAction("spectral bound"))),
    }
    if let Err(e) = c.require_acyclic() {
        return Ok(na(NAME, input, &e));
    }
    let iso = isotypic_decomposition(c)?;
    let (hp, hm, h) = (cohomology(&iso.fixed_part)?, cohomology(&iso.pofsigma_part)?, cohomology(c)?);
    let quotient = quotient_from(c, &iso)?;
    let at2 = alternating(
        hp.degrees.iter().zip(&hm.degrees).map(|(x, y)| {
            (x.degree, tv(&primary_part(&x.torsion_order, 2)).div(&tv(&primary_part(&y.torsion_order, 2))))
        }),
        0,
    );
    let fixedpts = alternating(
        quotient.cohomology_orders.iter().enumerate().map(|(k, n)| (c.degree(k), tv(n))),
        0,
    );
    let total_quot = quotient.cohomology_orders.iter().fold(TorsionValue::one(), |acc, n| acc.mul(&tv(n)));
    let total_a2 = h.degrees.iter().fold(TorsionValue::one(), |acc, d| acc.mul(&tv(&primary_part(&d.torsion_order, 2))));
    let left = abs_log(&at2).mul(&abs_log(&fixedpts));
    let right = total_a2.mul(&total_quot.pow_i64(2));
    Ok(CheckReport::new(NAME, input, Relation::AtMost, Comparison::at_most(left, right))
        .convention("left: |sum* log|H(A+)[2^inf]| - log|H(A-)[2^inf]|| + |sum* log|H(A')||; right: log|H*(A)[2^inf]| + 2 log|H*(A')|")
        .variant(Variant::new(
            "intermediate bound on the first term alone: log|H*(A)[2^inf]| + log|H*(A')|",
            Relation::AtMost,
            Comparison::at_most(abs_log(&at2), total_a2.mul(&total_quot)),
        )))
}

pub fn rt_sigma_decomposition(c: &ChainComplex, input: String) -> Result<CheckReport> {
    const NAME: &str = "rt-sigma-decomposition";
    if c.action().is_none() {
        return Ok(na(NAME, input, &Error::MissingAction("equivariant torsion")));
    }
    if let Err(e) = c.require_acyclic() {
        return Ok(na(NAME, input, &e));
    }
    let c = with_metric(c);
    let rt = rt_sigma(&c)?;
    let cmp = match tau_sigma_spectral(&c) {
        Ok(t) => Comparison::equal(rt, t.pow(&half())),
        Err(Error::NonIntegralTraces) => {
            let n = tau_sigma_numeric(&c, NUMERIC_BITS)?;
            let halved = NumericValue::new(n.interval.scale(&half()), n.precision_bits);
            swap_sides(Comparison::numeric(halved, rt, NUMERIC_TOLERANCE))
        }
        Err(e) => return Err(e),
    };
    Ok(CheckReport::new(NAME, input, Relation::Equal, cmp)
        .convention(LOG_TAU)
        .convention("left: 1/2 log tau(A[sigma-1]) - 1/(2(p-1)) log tau(A[P(sigma)]); right: 1/2 sum_j (-1)^j j sum_lambda tr(sigma|E_lambda) log lambda"))
}

fn swap_sides(mut c: Comparison) -> Comparison {
    std::mem::swap(&mut c.left, &mut c.right);
    if let Residual::Difference { value, .. } = &mut c.residual {
        *value = -*value;
    }
    c
}

pub fn norm_compatibility(o: &OrderComplex, input: String) -> Result<CheckReport> {
    const NAME: &str = "norm-compatibility";
    let r = match norm_report(o) {
        Ok(r) => r,
        Err(e @ Error::NotAcyclic { .. }) => return Ok(na(NAME, input, &e)),
        Err(e) => return Err(e),
    };
    let norm = TorsionValue::from_rational(&r.norm);
    Ok(CheckReport::new(NAME, input, Relation::Equal, Comparison::equal(norm.clone(), r.cohomology_product.clone()))
        .convention("right: prod_i |H^i(res A)|^{(-1)^{i+1}}, standard volume forms over the order")
        .variant(Variant::new(
            "right: prod_i |H^i(res A)|^{(-1)^i}",
            Relation::Equal,
            Comparison::equal(norm, r.cohomology_product.inv()),
        )))
}

pub fn rt_nrt_relation(c: &ChainComplex, input: String) -> Result<CheckReport> {
    const NAME: &str = "rt-nrt-relation";
    let p = match c.action() {
        Some(a) => a.order(),
        None => return Ok(na(NAME, input, &Error::MissingAction("equivariant torsion"))),
    };
    if let Err(e) = c.require_acyclic() {
        return Ok(na(NAME, input, &e));
    }
    let c = with_metric(c);
    let iso = isotypic_decomposition(&c)?;
    let parts = nrt_parts_from(&c, &iso)?;
    let rt = rt_sigma(&c)?;
    let quot = parts.quotient_term(0);
    let nrt = parts.value(0);
    let right = nrt.div(&quot).pow(&half());
    let printed = nrt.div(&quot);
    let report = CheckReport::new(NAME, input, Relation::Equal, Comparison::equal(rt.clone(), right))
        .convention(LOG_TAU)
        .convention(PARITY)
        .convention("right: 1/2 (log NRT_sigma - sum* log|H^i(A')|)")
        .variant(Variant::new(
            "right: log NRT_sigma - sum* log|H^i(A')| (no factor 1/2)",
            Relation::Equal,
            Comparison::equal(rt, printed),
        ));
    let unimodular = c.has_unimodular_metric();
    match fixed_euler_characteristic(&c) {
        _ if !unimodular => Ok(report.not_applicable("metric is not the identity")),
        None => Ok(report.not_applicable("action is not a signed permutation of the basis")),
        Some(chi) if chi != 0 => Ok(report.not_applicable(format!("fixed cells have Euler characteristic {chi}"))),
        Some(_) if p > 3 => Ok(report.note(format!("p = {p}"))),
        Some(_) => Ok(report),
    }
}
