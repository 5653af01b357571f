//! The eigenvalues `λ_k` of `S S*` and their `θ`-weighted versions.

use std::f64::consts::{LN_2, PI};

use rayon::prelude::*;

use super::{Problem, ThetaWeight};
use crate::error::{Error, Result};
use crate::numerics::{ln_gamma, ln_gamma_ratio_shifted};

/// Relative tolerance under which two table entries count as equal.
pub const TIE_TOLERANCE: f64 = 1e-12;

/// Largest index probed when certifying the monotonicity of a table tail.
const PROBE_LIMIT: f64 = 1e7;

/// `ln(2^{1-2s} Γ(2s-1) / Γ(s)^2)`.
fn ln_base_constant(p: &Problem) -> f64 {
    let s = p.s();
    (1.0 - 2.0 * s) * LN_2 + ln_gamma(2.0 * s - 1.0) - 2.0 * ln_gamma(s)
}

/// `λ_k = 2^{1-2s} Γ(2s-1) Γ(k+d/2-s) / (Γ(s)^2 Γ(k+d/2-1+s))`.
pub fn lambda_base(p: &Problem, k: usize) -> f64 {
    let (h, s, kf) = (p.half_d(), p.s(), k as f64);
    (ln_base_constant(p) + ln_gamma_ratio_shifted(kf, h - s, h - 1.0 + s)).exp()
}

/// `λ_{k+1} / λ_k = (k + d/2 - s) / (k + d/2 - 1 + s)`.
pub fn lambda_ratio(p: &Problem, k: usize) -> f64 {
    let (h, s, kf) = (p.half_d(), p.s(), k as f64);
    (kf + h - s) / (kf + h - 1.0 + s)
}

/// `λ_0, ..., λ_kmax` generated by the ratio recurrence from `λ_0`.
pub fn lambda_recurrence(p: &Problem, kmax: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(kmax + 1);
    let mut v = lambda_base(p, 0);
    out.push(v);
    for k in 0..kmax {
        v *= lambda_ratio(p, k);
        out.push(v);
    }
    out
}

/// Laplace–Beltrami eigenvalue `k(k+d-2)` on degree-`k` harmonics.
pub fn laplace_eigenvalue(k: usize, d: usize) -> f64 {
    let kf = k as f64;
    kf * (kf + d as f64 - 2.0)
}

/// `λ_k(θ) = λ_k |θ(k(k+d-2))|^2`.
pub fn lambda_theta(p: &Problem, theta: &ThetaWeight, k: usize) -> Result<f64> {
    let rho = laplace_eigenvalue(k, p.d());
    let m = theta.modulus_sq(rho);
    if !m.is_finite() {
        return Err(Error::Evaluation(format!(
            "θ is not finite at ρ = {rho} (degree k = {k})"
        )));
    }
    if let ThetaWeight::One = theta {
        return Ok(lambda_base(p, k));
    }
    Ok(lambda_base(p, k) * m)
}

/// `λ̃_k`, the eigenvalue for `θ(ρ) = (1+ρ)^{(2s-1)/4}`; with `include_plancherel`
/// it carries the extra factor `(2π)^d`.
pub fn lambda_fw(p: &Problem, k: usize, include_plancherel: bool) -> f64 {
    let rho = laplace_eigenvalue(k, p.d());
    let v = lambda_base(p, k) * (1.0 + rho).powf(p.s() - 0.5);
    if include_plancherel {
        v * (2.0 * PI).powi(p.d() as i32)
    } else {
        v
    }
}

/// `2^{1-2s} Γ(2s-1) / Γ(s)^2`: the limit of `(1+k)^{2s-1} λ_k`, and of `λ̃_k`.
pub fn asymptotic_constant(p: &Problem) -> f64 {
    ln_base_constant(p).exp()
}

/// Behaviour of `λ_k(θ)` beyond the tabulated range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tail {
    /// All probed consecutive ratios equal one within rounding.
    Constant,
    Decreasing,
    Increasing,
    /// Not certified (user weights, or a sign change among the probes).
    Unknown,
}

#[derive(Debug, Clone)]
pub struct EigenTable {
    pub problem: Problem,
    pub theta: ThetaWeight,
    pub kmax: usize,
    pub values: Vec<f64>,
    pub inf_value: f64,
    pub sup_value: f64,
    /// Indices `k <= kmax` attaining the infimum (`𝐤`).
    pub argmin: Vec<usize>,
    /// Indices `k <= kmax` attaining the supremum (`𝐊`).
    pub argmax: Vec<usize>,
    pub tail_certified: bool,
    pub tail: Tail,
}

/// Tabulates `λ_k(θ)` for `k <= kmax` and determines its extrema over all `k`.
///
/// For the preset weights `|θ|^2 λ_k` behaves like `k^e` with
/// `e = 1 - 2s + 4a`. The sign of `ln(λ_{k+1}(θ)/λ_k(θ))` is probed for every
/// `k` in `[kmax, kmax + 2000]` and at geometric steps up to `10^7`; if it never
/// changes, the tail is monotone and its limit (0, ∞, or a finite value
/// extrapolated from the far tail) competes with the tabulated extrema.
pub fn eigen_table(p: &Problem, theta: &ThetaWeight, kmax: usize) -> Result<EigenTable> {
    if kmax < 1 {
        return Err(Error::Parameter("eigen_table requires kmax >= 1".into()));
    }
    let values: Vec<f64> = (0..=kmax)
        .into_par_iter()
        .map(|k| lambda_theta(p, theta, k))
        .collect::<Result<_>>()?;

    let mut tmin = f64::INFINITY;
    let mut tmax = f64::NEG_INFINITY;
    for &v in &values {
        tmin = tmin.min(v);
        tmax = tmax.max(v);
    }

    let tail = match theta.power_exponent() {
        Some(a) => probe_tail(p, a, kmax),
        None => Tail::Unknown,
    };
    let tail_certified = tail != Tail::Unknown;

    let (mut inf_value, mut sup_value) = (tmin, tmax);
    let (mut inf_in_table, mut sup_in_table) = (true, true);
    let exponent = theta.power_exponent().map(|a| 1.0 - 2.0 * p.s() + 4.0 * a);
    match (tail, exponent) {
        (Tail::Decreasing, Some(e)) => {
            let limit = if e < 0.0 { 0.0 } else { extrapolated_limit(p, theta, kmax)? };
            if limit < tmin || e < 0.0 {
                inf_value = limit;
                inf_in_table = false;
            }
        }
        (Tail::Increasing, Some(e)) => {
            let limit = if e > 0.0 { f64::INFINITY } else { extrapolated_limit(p, theta, kmax)? };
            if limit > tmax || e > 0.0 {
                sup_value = limit;
                sup_in_table = false;
            }
        }
        _ => {}
    }

    let ties = |target: f64| -> Vec<usize> {
        values
            .iter()
            .enumerate()
            .filter(|(_, &v)| (v - target).abs() <= TIE_TOLERANCE * target.abs())
            .map(|(k, _)| k)
            .collect()
    };
    let argmin = if inf_in_table { ties(inf_value) } else { Vec::new() };
    let argmax = if sup_in_table { ties(sup_value) } else { Vec::new() };

    Ok(EigenTable {
        problem: *p,
        theta: theta.clone(),
        kmax,
        values,
        inf_value,
        sup_value,
        argmin,
        argmax,
        tail_certified,
        tail,
    })
}

/// `ln(λ_{k+1}(θ)/λ_k(θ))` for `|θ| = (1+ρ)^a`, with an estimate of its rounding error.
fn log_step(p: &Problem, a: f64, k: usize) -> (f64, f64) {
    let (h, s, kf, d) = (p.half_d(), p.s(), k as f64, p.d() as f64);
    let base = ((1.0 - 2.0 * s) / (kf + h - 1.0 + s)).ln_1p();
    let weight = if a == 0.0 {
        0.0
    } else {
        2.0 * a * ((2.0 * kf + d - 1.0) / (1.0 + kf * (kf + d - 2.0))).ln_1p()
    };
    (base + weight, 8.0 * f64::EPSILON * (base.abs() + weight.abs()))
}

fn probe_tail(p: &Problem, a: f64, kmax: usize) -> Tail {
    let mut probes: Vec<usize> = (kmax..kmax + 2000).collect();
    let mut k = (kmax + 2000) as f64;
    while k < PROBE_LIMIT {
        probes.push(k as usize);
        k *= 1.25;
    }
    let (mut neg, mut pos) = (false, false);
    for k in probes {
        let (f, noise) = log_step(p, a, k);
        if f > noise {
            pos = true;
        } else if f < -noise {
            neg = true;
        }
    }
    match (neg, pos) {
        (false, false) => Tail::Constant,
        (true, false) => Tail::Decreasing,
        (false, true) => Tail::Increasing,
        (true, true) => Tail::Unknown,
    }
}

/// Richardson extrapolation of `λ_k(θ)` in powers of `1/k` from
/// `k = k0, 2k0, ..., 16k0`, for tails with a finite nonzero limit.
fn extrapolated_limit(p: &Problem, theta: &ThetaWeight, kmax: usize) -> Result<f64> {
    let k0 = kmax.max(1000);
    let levels = 5;
    let mut table: Vec<Vec<f64>> = Vec::with_capacity(levels);
    for j in 0..levels {
        let mut row = vec![lambda_theta(p, theta, k0 << j)?];
        for m in 1..=j {
            let f = (1u64 << m) as f64;
            let v = (f * row[m - 1] - table[j - 1][m - 1]) / (f - 1.0);
            row.push(v);
        }
        table.push(row);
    }
    Ok(table[levels - 1][levels - 1])
}

/// Empirical two-sided bound `c <= (1+k)^{2s-1} λ_k <= C` for `k <= kmax`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StirlingEnvelope {
    pub c: f64,
    pub big_c: f64,
    /// Limit of `(1+k)^{2s-1} λ_k` as `k → ∞`.
    pub limit: f64,
    /// First index from which `(1+k)^{2s-1} λ_k` is monotone up to `kmax`.
    pub monotone_from: usize,
    pub increasing: bool,
}

impl StirlingEnvelope {
    /// Bounds valid for every `k`, folding in the limit of the monotone tail.
    pub fn global(&self) -> (f64, f64) {
        (self.c.min(self.limit), self.big_c.max(self.limit))
    }
}

pub fn stirling_envelope(p: &Problem, kmax: usize) -> Result<StirlingEnvelope> {
    if kmax < 10 {
        return Err(Error::Parameter(format!("stirling_envelope requires kmax >= 10, got {kmax}")));
    }
    let e = 2.0 * p.s() - 1.0;
    let r: Vec<f64> = (0..=kmax).map(|k| (1.0 + k as f64).powf(e) * lambda_base(p, k)).collect();
    let c = r.iter().copied().fold(f64::INFINITY, f64::min);
    let big_c = r.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let increasing = r[kmax] > r[kmax - 1];
    let mut monotone_from = kmax - 1;
    while monotone_from > 0 {
        let step = r[monotone_from] - r[monotone_from - 1];
        if (step > 0.0) != increasing || step == 0.0 {
            break;
        }
        monotone_from -= 1;
    }
    Ok(StirlingEnvelope { c, big_c, limit: asymptotic_constant(p), monotone_from, increasing })
}
