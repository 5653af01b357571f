//! Operator-side numerics for `S S*` and its weighted versions.

mod coeffs;
mod kernel;
mod zonal;

pub use coeffs::{
    cap_coefficients, cap_coefficients_unchecked, cap_measure, energy_sum, knapp_point,
    knapp_predicted_slope, knapp_ratio, knapp_slope, CoeffVector, KnappFit, KnappPoint,
    CAP_DEFECT_LIMIT,
};
pub use kernel::{
    funk_hecke_eigen, funk_hecke_table, riesz_ft, riesz_prefactor, ss_star_eigen_numeric,
    ss_star_eigen_table, ZonalKernel,
};
pub use zonal::{power_iteration, power_iteration_deflated, zonal_operator, ZonalOperatorMatrix};
