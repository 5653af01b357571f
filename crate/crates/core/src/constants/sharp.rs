//! Sharp constants of the trace and Hardy–Littlewood–Sobolev inequalities.

use std::f64::consts::PI;

use super::{lambda_base, Problem};
use crate::error::{Error, Result};
use crate::numerics::{ln_gamma, sphere_area};
use crate::operator::riesz_prefactor;

/// Allowed relative disagreement between the two routes to `C(d,s)`.
pub const DUPLICATION_TOLERANCE: f64 = 1e-12;

/// The sharp `L^2` trace constant `λ_0`.
pub fn trace_constant(p: &Problem) -> f64 {
    lambda_base(p, 0)
}

/// The sharp HLS constant on `S^{d-1}` for the kernel `|ω - φ|^{2s-d}`:
/// `π^{(d-2s)/2} Γ((2s-1)/2) / Γ(d/2+s-1) · (Γ(d-1)/Γ((d-1)/2))^{(2s-1)/(d-1)}`.
pub fn hls_constant(p: &Problem) -> f64 {
    let (d, s) = (p.d() as f64, p.s());
    let ln = 0.5 * (d - 2.0 * s) * PI.ln() + ln_gamma(s - 0.5) - ln_gamma(d / 2.0 + s - 1.0)
        + (2.0 * s - 1.0) / (d - 1.0) * (ln_gamma(d - 1.0) - ln_gamma((d - 1.0) / 2.0));
    ln.exp()
}

/// `C(d,s) = λ_0 (Γ(d/2) / (2π^{d/2}))^{(2s-1)/(d-1)} = λ_0 |S^{d-1}|^{-(2s-1)/(d-1)}`.
pub fn lp_trace_constant_direct(p: &Problem) -> f64 {
    let (d, s) = (p.d() as f64, p.s());
    let ln_inv_area = ln_gamma(d / 2.0) - 2f64.ln() - 0.5 * d * PI.ln();
    trace_constant(p) * ((2.0 * s - 1.0) / (d - 1.0) * ln_inv_area).exp()
}

/// `C(d,s)` through the Riesz prefactor: `2^{-2s} π^{-d/2} Γ(d/2-s)/Γ(s) · 𝐋(d,s)`.
pub fn lp_trace_constant_via_hls(p: &Problem) -> f64 {
    riesz_prefactor(p) * hls_constant(p)
}

/// Relative disagreement of the two routes to `C(d,s)`.
pub fn duplication_residual(p: &Problem) -> f64 {
    let a = lp_trace_constant_direct(p);
    let b = lp_trace_constant_via_hls(p);
    ((a - b) / a).abs()
}

/// The sharp constant `C(d,s)` of the `L^q(S^{d-1}) → L^2(R^d)` extension estimate,
/// checked against the HLS route.
pub fn lp_trace_constant(p: &Problem) -> Result<f64> {
    let residual = duplication_residual(p);
    if !(residual <= DUPLICATION_TOLERANCE) {
        return Err(Error::Consistency { what: format!("C(d,s) routes at {p}"), residual });
    }
    Ok(lp_trace_constant_direct(p))
}

/// `|λ_0 - C(d,s) |S^{d-1}|^{(2s-1)/(d-1)}| / λ_0`: Hölder on the sphere loses
/// nothing for constant functions.
pub fn holder_residual(p: &Problem) -> Result<f64> {
    let (d, s) = (p.d() as f64, p.s());
    let lifted = lp_trace_constant(p)? * sphere_area(p.d()).powf((2.0 * s - 1.0) / (d - 1.0));
    let l0 = trace_constant(p);
    Ok(((lifted - l0) / l0).abs())
}

/// Conjugate exponents `(p, q) = (2(d-1)/(d-2s), 2(d-1)/(d+2s-2))`.
pub fn exponents(p: &Problem) -> (f64, f64) {
    let (d, s) = (p.d() as f64, p.s());
    (2.0 * (d - 1.0) / (d - 2.0 * s), 2.0 * (d - 1.0) / (d + 2.0 * s - 2.0))
}

/// Dimension of the space of degree-`k` spherical harmonics on `S^{d-1}`:
/// `(2k+d-2)(k+d-3)! / (k! (d-2)!)`, with the circle convention `1, 2, 2, ...` at `d = 2`.
pub fn n_kd(k: usize, d: usize) -> Result<u128> {
    if d < 2 {
        return Err(Error::domain(format!("n_kd requires d >= 2, got {d}")));
    }
    if d == 2 {
        return Ok(if k == 0 { 1 } else { 2 });
    }
    if k == 0 {
        return Ok(1);
    }
    // binom(k+d-3, k) built up exactly, then (2k+d-2)/(d-2)
    let overflow = || Error::Parameter(format!("N_{{{k},{d}}} overflows"));
    let mut b: u128 = 1;
    for i in 1..=k as u128 {
        b = b.checked_mul(d as u128 - 3 + i).ok_or_else(overflow)? / i;
    }
    let num = b.checked_mul(2 * k as u128 + d as u128 - 2).ok_or_else(overflow)?;
    Ok(num / (d as u128 - 2))
}

/// `N_{k,d}` as a real, for use in weights.
pub(crate) fn n_kd_f64(k: usize, d: usize) -> f64 {
    match d {
        2 => {
            if k == 0 {
                1.0
            } else {
                2.0
            }
        }
        _ => {
            if k == 0 {
                return 1.0;
            }
            let (kf, df) = (k as f64, d as f64);
            let ln_b = ln_gamma(kf + df - 2.0) - ln_gamma(kf + 1.0) - ln_gamma(df - 1.0);
            (2.0 * kf + df - 2.0) * ln_b.exp()
        }
    }
}
