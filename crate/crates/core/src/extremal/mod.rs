//! Extremisers: the canonical Sobolev extremiser, the conformal family on the
//! sphere, and the grid HLS quotient used to test them.

mod hls;
mod lieb;
mod profile;

pub use hls::{
    el_residual, hls_quotient, lp_trace_check, random_harmonic_mixture, sample, sample_lieb,
    HlsGridOperator, LpTraceCheck, SingularPairPolicy, EL_TOLERANCE, HLS_TOLERANCE,
};
pub use lieb::{lieb_eval, LiebFunction};
pub use profile::{
    bessel_energy, closed_form_d3, fourier_profile, perturbed_trace_ratio, radial_profile,
    sobolev_hs_norm_sq, trace_ratio, trace_ratio_unchecked, SHARPNESS_TOLERANCE,
};
