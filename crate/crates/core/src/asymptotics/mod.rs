//! Large-`N` limits: exact Maclaurin tables, Padé acceleration, the
//! known-states elliptic integral and the large-`d` regime.

pub mod estimator;
pub mod limits;
pub mod pade;
pub mod quadrature;
pub mod special;
pub mod table;

pub use estimator::{estimate_low_order_coeffs, CoefficientEstimate, EstimatorConfig};
pub use limits::{
    highest_diagonal_pade, large_d_limit, p0_known, p0_via_integral, p0_via_primitive, PadeEstimate, PadeMember,
    PadeRoute, RejectedPade,
};
pub use pade::{pade, PadeApproximant};
pub use special::{dawson, dawson_series, elliptic_k, elliptic_k_complement};
pub use table::{coefficient_table, RationalCoefficientTable};
