//! Harmonic energies `‖H_k G‖^2`, the quadratic form of `S_θ*`, and the Knapp example.

use std::f64::consts::PI;

use crate::constants::{lambda_base, lambda_theta, n_kd_f64, Problem, ThetaWeight};
use crate::error::{Error, Result};
use crate::numerics::{compensated_sum, gauss_jacobi, legendre_all, sphere_area};

/// Relative Parseval defect above which a cap expansion is rejected.
pub const CAP_DEFECT_LIMIT: f64 = 0.01;

/// Energies `‖H_k G‖^2_{L^2(S^{d-1})}` for `k = 0, ..., kmax`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffVector {
    pub problem: Problem,
    pub energies: Vec<f64>,
    pub total: f64,
    /// `‖G‖^2` minus the tabulated energies when the exact norm is known.
    pub missing: Option<f64>,
}

impl CoeffVector {
    pub fn new(problem: Problem, energies: Vec<f64>) -> Result<Self> {
        if energies.is_empty() {
            return Err(Error::Degenerate("empty coefficient vector".into()));
        }
        if let Some(e) = energies.iter().find(|e| !(e.is_finite() && **e >= 0.0)) {
            return Err(Error::Parameter(format!("harmonic energies must be finite and >= 0, got {e}")));
        }
        let total = compensated_sum(energies.iter().copied());
        Ok(CoeffVector { problem, energies, total, missing: None })
    }

    pub fn kmax(&self) -> usize {
        self.energies.len() - 1
    }
}

/// `‖S_θ* G‖^2 = Σ_k λ_k(θ) ‖H_k G‖^2`.
pub fn energy_sum(p: &Problem, theta: &ThetaWeight, coeffs: &CoeffVector) -> Result<f64> {
    let mut terms = Vec::with_capacity(coeffs.energies.len());
    for (k, &e) in coeffs.energies.iter().enumerate() {
        terms.push(lambda_theta(p, theta, k)? * e);
    }
    Ok(compensated_sum(terms))
}

/// `c_k = |S^{d-2}| ∫_{cos δ}^1 P_{k,d}(t) (1-t^2)^{(d-3)/2} dt` for `k <= kmax` and
/// `δ <= π/2`. The integrand is a polynomial times `(1-t)^b (1+t)^b`; the first factor
/// goes into the weight and the second is smooth on the cap.
fn cap_integrals_small(d: usize, delta: f64, kmax: usize) -> Result<Vec<f64>> {
    let b = (d as f64 - 3.0) / 2.0;
    let n = (kmax / 2 + 48).min(crate::numerics::MAX_ORDER);
    let rule = gauss_jacobi(n, b, 0.0)?;
    let (nodes, weights) = rule.mapped(delta.cos(), 1.0);
    let mut acc = vec![Vec::with_capacity(n); kmax + 1];
    for (&t, &w) in nodes.iter().zip(&weights) {
        let f = w * (1.0 + t).powf(b);
        for (k, pk) in legendre_all(kmax, d, t).into_iter().enumerate() {
            acc[k].push(f * pk);
        }
    }
    let area = sphere_area(d - 1);
    Ok(acc.into_iter().map(|terms| area * compensated_sum(terms)).collect())
}

/// Cap integrals for any `0 < δ <= π`, reflecting large caps through
/// `c_k(δ) = |S^{d-1}| [k = 0] - (-1)^k c_k(π - δ)`.
fn cap_integrals(d: usize, delta: f64, kmax: usize) -> Result<Vec<f64>> {
    if delta <= 0.5 * PI {
        return cap_integrals_small(d, delta, kmax);
    }
    let mut c = if delta >= PI { vec![0.0; kmax + 1] } else { cap_integrals_small(d, PI - delta, kmax)? };
    for (k, v) in c.iter_mut().enumerate() {
        *v = if k % 2 == 0 { -*v } else { *v };
    }
    c[0] += sphere_area(d);
    Ok(c)
}

/// Surface measure of the cap of angular radius `δ`.
pub fn cap_measure(d: usize, delta: f64) -> Result<f64> {
    Ok(cap_integrals(d, delta, 0)?[0])
}

/// Energies of the indicator of a cap of angular radius `δ`, without the
/// Parseval gate. `missing` holds `σ(cap) - Σ energies`.
pub fn cap_coefficients_unchecked(p: &Problem, delta: f64, kmax: usize) -> Result<CoeffVector> {
    if !(delta > 0.0 && delta <= PI) {
        return Err(Error::domain(format!("cap radius must lie in (0, π], got {delta}")));
    }
    if kmax < 1 {
        return Err(Error::Parameter("cap expansions need kmax >= 1".into()));
    }
    let d = p.d();
    let c = cap_integrals(d, delta, kmax)?;
    let area = sphere_area(d);
    let energies = c.iter().enumerate().map(|(k, ck)| n_kd_f64(k, d) / area * ck * ck).collect();
    let mut cv = CoeffVector::new(*p, energies)?;
    cv.missing = Some(c[0] - cv.total);
    Ok(cv)
}

/// Energies of a cap indicator; fails if more than 1% of `σ(cap)` lies beyond `kmax`.
pub fn cap_coefficients(p: &Problem, delta: f64, kmax: usize) -> Result<CoeffVector> {
    let cv = cap_coefficients_unchecked(p, delta, kmax)?;
    let sigma = cv.total + cv.missing.unwrap_or(0.0);
    let defect = cv.missing.unwrap_or(0.0).abs() / sigma;
    if defect > CAP_DEFECT_LIMIT {
        return Err(Error::Resolution { defect, limit: CAP_DEFECT_LIMIT });
    }
    Ok(cv)
}

/// One Knapp quotient with its truncation error bar.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KnappPoint {
    pub delta: f64,
    pub ratio: f64,
    /// Upper bound on the relative error from truncating at `kmax`:
    /// `λ_{kmax+1} · (σ(cap) - Σ energies) / energy_sum`.
    pub truncation: f64,
}

/// `‖S* G_δ‖^2 / ‖G_δ‖^2_{L^q}` for the indicator `G_δ` of a cap.
///
/// Since `λ_k` decreases, the energy beyond `kmax` is at most `λ_{kmax+1}` times
/// the missing `L^2` mass; the point is rejected if that bound exceeds 1% of the
/// computed energy.
pub fn knapp_point(p: &Problem, q: f64, delta: f64, kmax: usize) -> Result<KnappPoint> {
    if !(q >= 1.0) || !q.is_finite() {
        return Err(Error::domain(format!("Lebesgue exponent must be >= 1, got {q}")));
    }
    let cv = cap_coefficients_unchecked(p, delta, kmax)?;
    let energy = energy_sum(p, &ThetaWeight::One, &cv)?;
    let missing = cv.missing.unwrap_or(0.0).max(0.0);
    let sigma = cv.total + missing;
    let truncation = lambda_base(p, kmax + 1) * missing / energy;
    if truncation > CAP_DEFECT_LIMIT {
        return Err(Error::Resolution { defect: truncation, limit: CAP_DEFECT_LIMIT });
    }
    Ok(KnappPoint { delta, ratio: energy / sigma.powf(2.0 / q), truncation })
}

pub fn knapp_ratio(p: &Problem, q: f64, delta: f64, kmax: usize) -> Result<f64> {
    Ok(knapp_point(p, q, delta, kmax)?.ratio)
}

/// `d - 2 + 2s - 2(d-1)/q`, the small-cap exponent of the Knapp quotient.
pub fn knapp_predicted_slope(p: &Problem, q: f64) -> f64 {
    let d = p.d() as f64;
    d - 2.0 + 2.0 * p.s() - 2.0 * (d - 1.0) / q
}

#[derive(Debug, Clone, PartialEq)]
pub struct KnappFit {
    pub q: f64,
    pub points: Vec<KnappPoint>,
    /// Least-squares slope of `ln ratio` against `ln δ`.
    pub slope: f64,
    pub predicted: f64,
}

pub fn knapp_slope(p: &Problem, q: f64, deltas: &[f64], kmax: usize) -> Result<KnappFit> {
    if deltas.len() < 2 {
        return Err(Error::Parameter("a slope fit needs at least two radii".into()));
    }
    let points = deltas.iter().map(|&dl| knapp_point(p, q, dl, kmax)).collect::<Result<Vec<_>>>()?;
    let xs: Vec<f64> = points.iter().map(|pt| pt.delta.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|pt| pt.ratio.ln()).collect();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    Ok(KnappFit { q, points, slope: sxy / sxx, predicted: knapp_predicted_slope(p, q) })
}
