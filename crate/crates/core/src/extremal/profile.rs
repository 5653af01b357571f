//! The canonical extremiser `f = |·|^{2s-d} * dσ` in physical and Fourier space.

use std::f64::consts::PI;

use crate::constants::{trace_constant, Problem};
use crate::error::{Error, Result};
use crate::numerics::{
    gauss_jacobi, gauss_legendre, integrate_bessel_tail, integrate_bessel_weighted,
    integrate_zonal, jv, sphere_area, Accumulator,
};
use crate::operator::riesz_ft;

/// Allowed relative gap between the trace ratio of the extremiser and `λ_0`.
pub const SHARPNESS_TOLERANCE: f64 = 1e-6;

/// `u(r) = |S^{d-2}| ∫ (1 + r^2 - 2rt)^{(2s-d)/2} (1-t^2)^{(d-3)/2} dt`, the value of
/// `|·|^{2s-d} * dσ` at distance `r` from the origin. `n` is the order of each
/// quadrature panel.
pub fn radial_profile(p: &Problem, r: f64, n: usize) -> Result<f64> {
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::domain(format!("radius must be finite and >= 0, got {r}")));
    }
    let d = p.d();
    if r == 0.0 {
        return Ok(sphere_area(d));
    }
    let a = (2.0 * p.s() - d as f64) / 2.0;
    if r == 1.0 {
        return integrate_zonal(|t| (2.0 - 2.0 * t).powf(a), d, n, Some(a));
    }
    let b = (d as f64 - 3.0) / 2.0;
    let c = (1.0 - r) * (1.0 - r);
    // x = 1 - t: integrand (c + 2 r x)^a x^b (2 - x)^b on (0, 2), peaked at
    // x = 0 on the scale c / 2r
    let f = |x: f64| (c + 2.0 * r * x).powf(a);
    let mut acc = Accumulator::default();

    // [1, 2] carries the endpoint t = -1
    let far = gauss_jacobi(n, b, 0.0)?;
    let (xs, ws) = far.mapped(1.0, 2.0);
    for (&x, &w) in xs.iter().zip(&ws) {
        acc.add(w * f(x) * x.powf(b));
    }

    // [0, 1] in geometrically growing panels from the peak scale
    let scale = (c / (2.0 * r)).min(1.0);
    let near = gauss_jacobi(n, 0.0, b)?;
    let (xs, ws) = near.mapped(0.0, scale);
    for (&x, &w) in xs.iter().zip(&ws) {
        acc.add(w * f(x) * (2.0 - x).powf(b));
    }
    let gl = gauss_legendre(n)?;
    let mut left = scale;
    while left < 1.0 {
        let right = (2.0 * left).min(1.0);
        let (xs, ws) = gl.mapped(left, right);
        for (&x, &w) in xs.iter().zip(&ws) {
            acc.add(w * f(x) * (x * (2.0 - x)).powf(b));
        }
        left = right;
    }
    let v = sphere_area(d - 1) * acc.value();
    if !v.is_finite() {
        return Err(Error::Evaluation(format!("radial profile is {v} at r = {r}")));
    }
    Ok(v)
}

/// `(2π/(2s-1)) ((r+1)^{2s-1} - |r-1|^{2s-1}) / r`, the `d = 3` profile in closed form.
pub fn closed_form_d3(s: f64, r: f64) -> Result<f64> {
    if !(s > 0.5 && s < 1.5) {
        return Err(Error::domain(format!("closed_form_d3 requires 1/2 < s < 3/2, got {s}")));
    }
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::domain(format!("closed_form_d3 requires r > 0, got {r}")));
    }
    let m = 2.0 * s - 1.0;
    // difference of powers without cancellation:
    // (r+1)^m - |r-1|^m = |r-1|^m expm1(2m atanh(min(r, 1/r)))
    let diff = if r == 1.0 {
        2f64.powf(m)
    } else {
        let z = if r < 1.0 { r } else { 1.0 / r };
        (r - 1.0).abs().powf(m) * (2.0 * m * z.atanh()).exp_m1()
    };
    Ok(2.0 * PI / m * diff / r)
}

/// Scale of the Fourier-side profile: `riesz_ft(d, 2s) (2π)^{d/2}`.
fn fourier_scale(p: &Problem) -> Result<f64> {
    Ok(riesz_ft(p.d(), 2.0 * p.s())? * (2.0 * PI).powf(p.half_d()))
}

/// `f̂(ρ) = riesz_ft(d, 2s) (2π)^{d/2} J_{d/2-1}(ρ) / ρ^{d/2+2s-1}`.
pub fn fourier_profile(p: &Problem, rho: f64) -> Result<f64> {
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(Error::domain(format!("fourier_profile requires rho > 0, got {rho}")));
    }
    Ok(fourier_scale(p)? * jv(p.nu(), rho) / rho.powf(p.half_d() + 2.0 * p.s() - 1.0))
}

/// `∫_0^∞ J_{d/2-1}(ρ)^2 ρ^{1-2s} dρ`.
pub fn bessel_energy(p: &Problem) -> Result<f64> {
    integrate_bessel_tail(p.nu(), 1.0 - 2.0 * p.s())
}

/// `‖f‖^2_{Ḣ^s} = (2π)^{-d} ∫ |ξ|^{2s} |f̂(ξ)|^2 dξ` for the canonical extremiser.
pub fn sobolev_hs_norm_sq(p: &Problem) -> Result<f64> {
    let scale = fourier_scale(p)?;
    Ok((2.0 * PI).powi(-(p.d() as i32)) * sphere_area(p.d()) * scale * scale * bessel_energy(p)?)
}

/// Order of the zonal rule used for `u(1)` inside [`trace_ratio`].
const TRACE_ORDER: usize = 64;

/// `‖f|_{S^{d-1}}‖^2 / ‖f‖^2_{Ḣ^s}` for the canonical extremiser, without the check.
pub fn trace_ratio_unchecked(p: &Problem) -> Result<f64> {
    let u1 = radial_profile(p, 1.0, TRACE_ORDER)?;
    Ok(sphere_area(p.d()) * u1 * u1 / sobolev_hs_norm_sq(p)?)
}

/// The trace ratio of the canonical extremiser; fails unless it equals `λ_0`.
pub fn trace_ratio(p: &Problem) -> Result<f64> {
    let ratio = trace_ratio_unchecked(p)?;
    let constant = trace_constant(p);
    let gap = ((ratio - constant) / constant).abs();
    if !(gap <= SHARPNESS_TOLERANCE) {
        return Err(Error::Sharpness { ratio, constant, gap });
    }
    Ok(ratio)
}

/// Trace quotient after multiplying the Fourier side by `1 + ε ρ/(1+ρ)`.
///
/// On the sphere the perturbed function equals `(2π)^{-d/2} scale ∫ J^2 ρ^{1-2s} m`,
/// and its Sobolev norm involves `m^2`, so the quotient is `I_1^2 / I_2`.
pub fn perturbed_trace_ratio(p: &Problem, eps: f64) -> Result<f64> {
    let (nu, g) = (p.nu(), 1.0 - 2.0 * p.s());
    let m = |rho: f64| 1.0 + eps * rho / (1.0 + rho);
    let i1 = integrate_bessel_weighted(nu, g, m)?;
    let i2 = integrate_bessel_weighted(nu, g, |rho| m(rho) * m(rho))?;
    Ok(i1 * i1 / i2)
}
