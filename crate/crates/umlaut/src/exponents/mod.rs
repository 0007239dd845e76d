//! Zero-rate error exponents without assistance and with list decoding.
//!
//! The unassisted exponent is the maximum of the quadratic form `pᵀAp` with
//! the Bhattacharyya distance matrix `A`; its doubly-nonnegative relaxation
//! is solved by ADMM. The list-decoding exponents maximize the lower umlaut
//! information `ℓ_{L+1}` over input laws.

mod bhattacharyya;
mod dnn;
mod list;

pub use bhattacharyya::{bhattacharyya_matrix, unassisted_zero_rate, unassisted_zero_rate_with, BhattMatrix};
pub use dnn::{dnn_bound, dnn_bound_matrix};
pub use list::{
    ell_kq, geometric_exponent, list_gap_bound, list_zero_rate, list_zero_rate_with, EllSpec, GapBound,
};
