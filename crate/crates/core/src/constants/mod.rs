//! Closed-form constants and eigenvalue sequences.

mod eigen;
mod problem;
mod sharp;
mod theta;

pub use eigen::{
    asymptotic_constant, eigen_table, lambda_base, lambda_fw, lambda_ratio, lambda_recurrence,
    lambda_theta, laplace_eigenvalue, stirling_envelope, EigenTable, StirlingEnvelope, Tail,
    TIE_TOLERANCE,
};
pub use problem::Problem;
pub use sharp::{
    duplication_residual, exponents, hls_constant, holder_residual, lp_trace_constant,
    lp_trace_constant_direct, lp_trace_constant_via_hls, n_kd, trace_constant,
    DUPLICATION_TOLERANCE,
};
pub use theta::ThetaWeight;

pub(crate) use sharp::n_kd_f64;
