//! Zonal kernels and their Funk–Hecke eigenvalues.

use std::f64::consts::{LN_2, PI};
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::constants::Problem;
use crate::error::{Error, Result};
use crate::numerics::{gauss_jacobi, legendre_all, legendre_unchecked, ln_gamma, sphere_area};

/// A rotation-invariant kernel `K(ω·φ)` with a `(1-t)^singular_alpha` singularity at
/// `t = 1` (`singular_alpha = 0` for regular kernels).
#[derive(Clone)]
pub struct ZonalKernel {
    pub label: String,
    pub singular_alpha: f64,
    evaluator: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl fmt::Debug for ZonalKernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ZonalKernel")
            .field("label", &self.label)
            .field("singular_alpha", &self.singular_alpha)
            .finish()
    }
}

impl ZonalKernel {
    pub fn new<F>(label: impl Into<String>, singular_alpha: f64, evaluator: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        ZonalKernel { label: label.into(), singular_alpha, evaluator: Arc::new(evaluator) }
    }

    pub fn constant(c: f64) -> Self {
        ZonalKernel::new(format!("constant {c}"), 0.0, move |_| c)
    }

    /// `|ω - φ|^{2s-d} = (2 - 2t)^{(2s-d)/2}`, the kernel of `S S*` up to
    /// [`riesz_prefactor`].
    pub fn riesz(p: &Problem) -> Self {
        let a = (2.0 * p.s() - p.d() as f64) / 2.0;
        ZonalKernel::new(format!("|w-v|^(2s-d) at {p}"), a, move |t| (2.0 - 2.0 * t).powf(a))
    }

    pub fn eval(&self, t: f64) -> f64 {
        (self.evaluator)(t)
    }

    /// Exponent of `(1-t)` in the Jacobi weight once the zonal measure
    /// `(1-t^2)^{(d-3)/2}` is included; `(2s-3)/2` for the Riesz kernel.
    pub fn total_alpha(&self, d: usize) -> f64 {
        (d as f64 - 3.0) / 2.0 + self.singular_alpha
    }
}

/// `2^{-2s} π^{-d/2} Γ(d/2-s) / Γ(s)`, so that `S S* G = prefactor · |·|^{2s-d} * G`.
pub fn riesz_prefactor(p: &Problem) -> f64 {
    let (h, s) = (p.half_d(), p.s());
    (-2.0 * s * LN_2 - h * PI.ln() + ln_gamma(h - s) - ln_gamma(s)).exp()
}

/// `c` with `FT(|x|^{-(d-ζ)}) = c |ξ|^{-ζ}`: `2^ζ π^{d/2} Γ(ζ/2) / Γ((d-ζ)/2)`.
pub fn riesz_ft(d: usize, zeta: f64) -> Result<f64> {
    let df = d as f64;
    if d < 1 || !(zeta > 0.0 && zeta < df) {
        return Err(Error::domain(format!("riesz_ft requires 0 < zeta < d = {d}, got {zeta}")));
    }
    Ok((zeta * LN_2 + 0.5 * df * PI.ln() + ln_gamma(zeta / 2.0) - ln_gamma((df - zeta) / 2.0)).exp())
}

/// `μ_k = |S^{d-2}| ∫ K(t) P_{k,d}(t) (1-t^2)^{(d-3)/2} dt` by Gauss–Jacobi quadrature
/// with the kernel singularity in the weight.
pub fn funk_hecke_eigen(kernel: &ZonalKernel, d: usize, k: usize, n: usize) -> Result<f64> {
    if d < 2 {
        return Err(Error::domain(format!("Funk–Hecke needs d >= 2, got {d}")));
    }
    let beta = (d as f64 - 3.0) / 2.0;
    let alpha = kernel.total_alpha(d);
    if !(alpha > -1.0) {
        return Err(Error::Parameter(format!(
            "kernel '{}' is not integrable on S^{}: Jacobi exponent {alpha} <= -1",
            kernel.label,
            d - 1
        )));
    }
    let rule = gauss_jacobi(n, alpha, beta)?;
    let sa = kernel.singular_alpha;
    let v = rule.try_integrate(|t| kernel.eval(t) / (1.0 - t).powf(sa) * legendre_unchecked(k, d, t))?;
    Ok(sphere_area(d - 1) * v)
}

/// All `μ_0, ..., μ_kmax` from one pass over the quadrature nodes.
pub fn funk_hecke_table(kernel: &ZonalKernel, d: usize, kmax: usize, n: usize) -> Result<Vec<f64>> {
    // validates the exponents
    funk_hecke_eigen(kernel, d, 0, n)?;
    let beta = (d as f64 - 3.0) / 2.0;
    let rule = gauss_jacobi(n, kernel.total_alpha(d), beta)?;
    let sa = kernel.singular_alpha;
    let rows: Vec<Vec<f64>> = rule
        .nodes
        .par_iter()
        .zip(rule.weights.par_iter())
        .map(|(&t, &w)| {
            let f = w * kernel.eval(t) / (1.0 - t).powf(sa);
            legendre_all(kmax, d, t).into_iter().map(|pk| f * pk).collect()
        })
        .collect();
    let area = sphere_area(d - 1);
    let mut out = Vec::with_capacity(kmax + 1);
    for k in 0..=kmax {
        let v = crate::numerics::compensated_sum(rows.iter().map(|r| r[k]));
        if !v.is_finite() {
            return Err(Error::Evaluation(format!("Funk–Hecke sum for k = {k} is {v}")));
        }
        out.push(area * v);
    }
    Ok(out)
}

/// `λ_k` from Funk–Hecke quadrature of the `S S*` kernel, independent of the Gamma closed form.
pub fn ss_star_eigen_numeric(p: &Problem, k: usize, n: usize) -> Result<f64> {
    Ok(riesz_prefactor(p) * funk_hecke_eigen(&ZonalKernel::riesz(p), p.d(), k, n)?)
}

/// `λ_0, ..., λ_kmax` by Funk–Hecke quadrature.
pub fn ss_star_eigen_table(p: &Problem, kmax: usize, n: usize) -> Result<Vec<f64>> {
    let pref = riesz_prefactor(p);
    Ok(funk_hecke_table(&ZonalKernel::riesz(p), p.d(), kmax, n)?.into_iter().map(|m| pref * m).collect())
}
