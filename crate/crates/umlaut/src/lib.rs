//! Umlaut information and its operational companions.
//!
//! The crate computes the umlaut information `min_Q D(P_X × Q‖P_XY)` of joint
//! distributions and channels, its Rényi variants, the sphere-packing
//! exponent, unassisted, list-decoding and non-signalling zero-rate error
//! exponents, exact hypothesis-testing divergences, and Gaussian closed
//! forms. All quantities are in nats.

pub mod channel_umlaut;
pub mod divergence;
pub mod error;
pub mod exponents;
pub mod ext;
pub mod figure;
pub mod gaussian;
pub mod ns;
pub mod numeric;
pub mod prob;
pub mod simplex;
pub mod stein;
pub mod umlaut;

pub use channel_umlaut::{
    channel_renyi_umlaut, channel_umlaut, is_umlaut_finite, sphere_packing, CertifiedValue, SolverOptions,
};
pub use divergence::{dh_bounds, dh_eps, entropy, kl, renyi, HypoTestResult};
pub use error::{Error, Result};
pub use exponents::{
    bhattacharyya_matrix, dnn_bound, ell_kq, list_gap_bound, list_zero_rate, unassisted_zero_rate, BhattMatrix,
    EllSpec, GapBound,
};
pub use ext::ExtReal;
pub use figure::{lu_sweep, write_sweep_csv, SweepRow, Units};
pub use gaussian::{gaussian_channel_umlaut, gaussian_umlaut, GaussianChannelSpec, GaussianJoint, GaussianUmlaut};
pub use ns::{metaconverse_saddle, ns_error_lp, ns_sandwich, NsLpResult};
pub use prob::{joint_from_channel, product_joint, Alphabet, Channel, Dist, JointDist};
pub use stein::{stein_sandwich, SteinReport, SteinRow};
pub use umlaut::{lautum_mutual, renyi_umlaut_info, umlaut_info, umlaut_marginal, RenyiUmlautResult, UmlautResult};
