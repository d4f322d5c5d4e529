//! Twisted analytic torsion `1/2 sum_j (-1)^j j sum_lambda tr(sigma | E_lambda) log lambda`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::isotypic::isotypic_decomposition;
use crate::complex::{analytic_torsion, laplacians, sign, ChainComplex};
use crate::error::{Error, Result};
use crate::linalg::real::{eval_interval, isolate_real_roots, ln_interval, Interval};
use crate::linalg::{charpoly, pdet_from_charpoly, twisted_adjugate_trace, RatPoly};
use crate::torsion::TorsionValue;

/// `log tau(A[sigma-1]) - log tau(A[sigma+1])` with the restricted metrics.
pub fn tau_sigma_exact_p2(c: &ChainComplex) -> Result<TorsionValue> {
    let a = c.require_action("twisted torsion")?;
    if a.order() != 2 {
        return Err(Error::UnsupportedOrder(a.order()));
    }
    c.require_gram("twisted torsion")?;
    let iso = isotypic_decomposition(c)?;
    Ok(analytic_torsion(&iso.fixed_part)?.div(&analytic_torsion(&iso.pofsigma_part)?))
}

/// Per-degree spectral data: the nonzero spectrum as the roots of a monic
/// squarefree `g0`, and a polynomial `t` with `t(lambda) = tr(sigma | E_lambda)`.
#[derive(Clone, Debug)]
pub struct TraceData {
    pub degree: i64,
    pub nonzero_spectrum: RatPoly,
    pub trace: RatPoly,
    pub size: usize,
}

pub fn trace_data(c: &ChainComplex) -> Result<Vec<TraceData>> {
    let a = c.require_action("twisted torsion")?;
    let laps = laplacians(c)?;
    let mut out = Vec::with_capacity(laps.len());
    for (k, lap) in laps.iter().enumerate() {
        let s = a.matrix(k).to_rational();
        let chi = charpoly(lap);
        pdet_from_charpoly(&chi)?;
        let g = chi.squarefree_part();
        // adj(xI - L) = sum_mu chi/(x - mu) P_mu, so N / (chi/g) = sum_mu t_mu g/(x - mu)
        // and evaluating at a root lambda gives t_lambda g'(lambda).
        let n_poly = twisted_adjugate_trace(lap, &s);
        let (q, r0) = chi.div_rem(&g);
        debug_assert!(r0.is_zero());
        let (big_r, r1) = n_poly.div_rem(&q);
        if !r1.is_zero() {
            return Err(Error::NotSelfAdjoint);
        }
        let dg_inv = g.derivative().inverse_mod(&g).ok_or(Error::NotSelfAdjoint)?;
        let t = (&big_r * &dg_inv).rem(&g);
        let g0 = if g.coeff(0).is_zero() { g.shift_down(1) } else { g };
        let t0 = if g0.degree().unwrap_or(0) > 0 { t.rem(&g0) } else { RatPoly::zero() };
        out.push(TraceData {
            degree: c.degree(k),
            nonzero_spectrum: g0,
            trace: t0,
            size: lap.rows(),
        });
    }
    Ok(out)
}

fn weight(degree: i64) -> BigRational {
    BigRational::new(BigInt::from(sign(degree) * degree), BigInt::from(2))
}

/// Exact spectral twisted torsion when every trace `tr(sigma | E_lambda)` is a
/// rational integer (always the case for involutions).
pub fn tau_sigma_spectral(c: &ChainComplex) -> Result<TorsionValue> {
    let mut acc = TorsionValue::one();
    for td in trace_data(c)? {
        let g0 = &td.nonzero_spectrum;
        let deg = g0.degree().unwrap_or(0);
        if deg == 0 {
            continue;
        }
        let mut covered = 0usize;
        let n = td.size as i64;
        for value in -n..=n {
            let shifted = &td.trace - &RatPoly::constant(BigRational::from_integer(value.into()));
            let h = g0.gcd(&shifted);
            let dh = h.degree().unwrap_or(0);
            if dh == 0 || value == 0 {
                covered += dh;
                continue;
            }
            covered += dh;
            // Monic with positive roots: the product of the roots is |h(0)|.
            let prod = h.coeff(0).abs();
            let e = weight(td.degree) * BigRational::from_integer(value.into());
            acc = acc.mul(&TorsionValue::from_rational(&prod).pow(&e));
        }
        if covered != deg {
            return Err(Error::NonIntegralTraces);
        }
    }
    Ok(acc)
}

/// A real number known to lie in `interval`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NumericValue {
    #[serde(skip)]
    pub interval: Interval,
    pub midpoint: f64,
    pub radius: f64,
    pub decimal: String,
    pub precision_bits: u64,
}

impl NumericValue {
    pub fn new(interval: Interval, bits: u64) -> Self {
        NumericValue {
            midpoint: interval.mid_f64(),
            radius: interval.radius_f64(),
            decimal: interval.decimal(40),
            interval,
            precision_bits: bits,
        }
    }

    /// Whether `x` lies within the enclosure widened by `tol`.
    pub fn agrees_with(&self, x: f64, tol: f64) -> bool {
        (self.midpoint - x).abs() <= self.radius + tol
    }
}

/// Rigorous enclosure of `log tau_sigma` for any prime order: the nonzero
/// eigenvalues are isolated by Sturm sequences to `bits` bits, traces are
/// evaluated by interval arithmetic on `t`, and logarithms are enclosed.
pub fn tau_sigma_numeric(c: &ChainComplex, bits: u64) -> Result<NumericValue> {
    c.require_gram("twisted torsion")?;
    let w = bits + 64;
    let mut acc = Interval::zero();
    for td in trace_data(c)? {
        if td.nonzero_spectrum.degree().unwrap_or(0) == 0 {
            continue;
        }
        let mut iso_bits = w;
        let roots = loop {
            let roots = isolate_real_roots(&td.nonzero_spectrum, iso_bits);
            if roots.iter().all(|r| r.lo.is_positive()) {
                break roots;
            }
            iso_bits *= 2;
        };
        let wt = weight(td.degree);
        for root in roots {
            let tr = eval_interval(&td.trace, &root, w);
            let ln = Interval::new(ln_interval(&root.lo, w).lo, ln_interval(&root.hi, w).hi);
            acc = acc.add(&tr.mul(&ln).scale(&wt)).round_out(w);
        }
    }
    Ok(NumericValue::new(acc, bits))
}

/// `exp Z'_sigma(0)` with `Z'_sigma(0) = -sum_j (-1)^j j sum_lambda tr log lambda`.
pub fn twisted_zeta_derivative(c: &ChainComplex) -> Result<TorsionValue> {
    Ok(tau_sigma_spectral(c)?.pow_i64(-2))
}
