//! Builders for complexes: tensor powers, sums and cones, CW and Morse-Smale
//! cochains, restriction of scalars.

pub mod cw;
pub mod morse;
pub mod order;
mod tensor;

pub use cw::{
    cw_cochain_complex, cw_cochain_complex_mod, quotient_relative_cochains_mod, relative_cochains_mod,
    CellActionSpec, CellSpec, CwData,
};
pub use morse::{morse_smale_complex, CriticalPoint, FlowLine, MsData};
pub use order::{norm_of_torsion, norm_report, restrict_scalars, NormReport, OrderComplex};
pub use tensor::{cone_identity, direct_sum, direct_sum_swap, tensor_power_cyclic, tensor_product};
