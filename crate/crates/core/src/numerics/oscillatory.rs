//! Semi-infinite integrals of `J_nu(ρ)^2 ρ^gamma h(ρ)`.
//!
//! Since `J_nu^2 >= 0`, lobe integrals between zeros do not alternate and the
//! naive partial sums converge like `R^gamma`. The integral is therefore split as
//!
//! * `[0, R]`: Gauss rules on the panels between consecutive zeros of `J_nu`, the
//!   first panel carrying the `ρ^{2nu+gamma}` behaviour at the origin in a Jacobi
//!   weight;
//! * the mean `M(ρ)^2 / 2` over `[R, ∞)`, with `M^2 = J^2 + Y^2` from its
//!   asymptotic series, mapped to `(0, 1]` by `u = R/ρ` where it becomes a smooth
//!   function against the weight `u^{-1-gamma}`;
//! * the oscillating remainder `J^2 - M^2/2` over `[R, ∞)`, which does alternate
//!   in sign every quarter zero spacing. Its half-period integrals are summed with
//!   iterated averaging of the partial sums.

use super::bessel::{bessel_j_zero, jv, modulus_sq};
use super::quadrature::{gauss_jacobi, gauss_legendre};
use super::Accumulator;
use crate::error::{Error, Result};

const PANEL_ORDER: usize = 24;
const MEAN_ORDER: usize = 48;
const MAX_LOBES: usize = 200;
const ACCEL_DEPTH: usize = 24;

/// `∫_0^∞ J_nu(ρ)^2 ρ^gamma dρ`.
///
/// Converges for `-2nu - 1 < gamma < 0`.
pub fn integrate_bessel_tail(nu: f64, gamma: f64) -> Result<f64> {
    integrate_bessel_weighted(nu, gamma, |_| 1.0)
}

/// `∫_0^∞ J_nu(ρ)^2 ρ^gamma h(ρ) dρ` for a smooth bounded multiplier `h` with a
/// limit at infinity.
pub fn integrate_bessel_weighted<H: Fn(f64) -> f64>(nu: f64, gamma: f64, h: H) -> Result<f64> {
    if !(nu >= 0.0) || !nu.is_finite() {
        return Err(Error::domain(format!("Bessel order must be >= 0, got {nu}")));
    }
    if !(gamma < 0.0) {
        return Err(Error::Divergence(format!(
            "J_nu^2 rho^gamma is not integrable at infinity for gamma = {gamma} >= 0"
        )));
    }
    let origin = 2.0 * nu + gamma;
    if !(origin > -1.0) {
        return Err(Error::Divergence(format!(
            "J_nu^2 rho^gamma is not integrable at 0 for 2 nu + gamma = {origin} <= -1"
        )));
    }

    let head_len = 40.0 + 2.0 * nu * nu;
    let mut zeros = vec![0.0];
    let mut m = 1;
    loop {
        let z = bessel_j_zero(nu, m)?;
        zeros.push(z);
        if z >= head_len {
            break;
        }
        m += 1;
    }
    let r = *zeros.last().unwrap();

    let head = head_integral(nu, gamma, origin, &zeros, &h)?;
    let mean = mean_tail(nu, gamma, r, &h)?;
    let wave = oscillating_tail(nu, gamma, m, &h, head.abs() + mean.abs())?;
    let total = head + mean + wave;
    if !total.is_finite() {
        return Err(Error::Evaluation("Bessel integral is not finite".into()));
    }
    Ok(total)
}

fn head_integral<H: Fn(f64) -> f64>(
    nu: f64,
    gamma: f64,
    origin: f64,
    zeros: &[f64],
    h: &H,
) -> Result<f64> {
    let mut acc = Accumulator::default();
    let first = gauss_jacobi(PANEL_ORDER, 0.0, origin)?;
    let (x, w) = first.mapped(0.0, zeros[1]);
    for (&p, &wt) in x.iter().zip(&w) {
        let j = jv(nu, p) / p.powf(nu);
        acc.add(wt * j * j * h(p));
    }
    let gl = gauss_legendre(PANEL_ORDER)?;
    for pair in zeros[1..].windows(2) {
        let (x, w) = gl.mapped(pair[0], pair[1]);
        for (&p, &wt) in x.iter().zip(&w) {
            let j = jv(nu, p);
            acc.add(wt * j * j * p.powf(gamma) * h(p));
        }
    }
    Ok(acc.value())
}

fn mean_tail<H: Fn(f64) -> f64>(nu: f64, gamma: f64, r: f64, h: &H) -> Result<f64> {
    let rule = gauss_jacobi(MEAN_ORDER, 0.0, -1.0 - gamma)?;
    let (u, w) = rule.mapped(0.0, 1.0);
    let mut acc = Accumulator::default();
    for (&ui, &wi) in u.iter().zip(&w) {
        let x = r / ui;
        // M^2 = 2/(π x) · S(x); (M^2/2) x^gamma dx becomes (R^gamma/π) S u^{-1-gamma} du
        let s = modulus_sq(nu, x) * std::f64::consts::PI * x / 2.0;
        acc.add(wi * s * h(x));
    }
    Ok(acc.value() * r.powf(gamma) / std::f64::consts::PI)
}

fn oscillating_tail<H: Fn(f64) -> f64>(
    nu: f64,
    gamma: f64,
    first_zero: usize,
    h: &H,
    scale: f64,
) -> Result<f64> {
    let gl = gauss_legendre(PANEL_ORDER)?;
    let piece = |a: f64, b: f64| {
        let (x, w) = gl.mapped(a, b);
        let mut acc = Accumulator::default();
        for (&p, &wt) in x.iter().zip(&w) {
            let j = jv(nu, p);
            acc.add(wt * (j * j - 0.5 * modulus_sq(nu, p)) * p.powf(gamma) * h(p));
        }
        acc.value()
    };

    let mut partial = Vec::with_capacity(2 * MAX_LOBES + 1);
    let mut sum = 0.0;
    let mut left = bessel_j_zero(nu, first_zero)?;
    let mut m = first_zero;
    let mut last_accel = f64::NAN;
    while partial.len() < 2 * MAX_LOBES {
        let right = bessel_j_zero(nu, m + 1)?;
        let q1 = left + 0.25 * (right - left);
        let q3 = left + 0.75 * (right - left);
        if partial.is_empty() {
            sum += piece(left, q1);
            partial.push(sum);
        }
        sum += piece(q1, q3);
        partial.push(sum);
        let next = bessel_j_zero(nu, m + 2)?;
        sum += piece(q3, right + 0.25 * (next - right));
        partial.push(sum);
        left = right;
        m += 1;

        let accel = iterated_average(&partial);
        if (accel - last_accel).abs() < 1e-12 * scale.max(f64::MIN_POSITIVE) {
            return Ok(accel);
        }
        last_accel = accel;
    }
    Ok(last_accel)
}

/// Repeated pairwise averaging of the trailing partial sums of an alternating series.
fn iterated_average(partial: &[f64]) -> f64 {
    let depth = partial.len().min(ACCEL_DEPTH);
    let mut row: Vec<f64> = partial[partial.len() - depth..].to_vec();
    while row.len() > 1 {
        for i in 0..row.len() - 1 {
            row[i] = 0.5 * (row[i] + row[i + 1]);
        }
        row.pop();
    }
    row[0]
}
