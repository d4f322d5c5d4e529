//! Exact integer and rational linear algebra.

pub mod charpoly;
pub mod elimination;
pub mod field;
pub mod matrix;
pub mod number_field;
pub mod pdet;
pub mod poly;
pub mod real;
pub mod snf;

pub use charpoly::{charpoly, charpoly_int, faddeev_leverrier, twisted_adjugate_trace};
pub use elimination::{determinant, determinant_int, gram_volume_sq, inverse, rational_rank};
pub use matrix::{IntMatrix, Matrix, RatMatrix, Scalar};
pub use pdet::{pdet_from_charpoly, pseudo_determinant, rank_and_pseudo_determinant};
pub use poly::{IntPoly, Poly, RatPoly};
pub use snf::{
    column_hermite_form, integer_rank, lattice_index, saturated_image, saturated_kernel,
    saturated_left_inverse, smith_normal_form, SnfResult,
};
pub use field::Field;
pub use number_field::NfElem;
