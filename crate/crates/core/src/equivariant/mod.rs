//! Torsion invariants of complexes with an automorphism of prime order.

mod isotypic;
mod nrt;
mod quotient;
mod rt_sigma;
mod twisted;

pub use crate::complex::GroupAction;
pub use isotypic::{isotypic_decomposition, IsotypicDecomposition};
pub use nrt::{nrt_parts, nrt_parts_from, nrt_sigma, NrtParts};
pub use quotient::{quotient_cohomology, quotient_from, FiniteComplex, QuotientReport};
pub use rt_sigma::rt_sigma;
pub use twisted::{
    tau_sigma_exact_p2, tau_sigma_numeric, tau_sigma_spectral, trace_data, twisted_zeta_derivative,
    NumericValue, TraceData,
};
