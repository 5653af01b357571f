//! Nyström discretisation of `S S*` restricted to zonal functions, and power iteration.
//!
//! For `d = 3` a zonal function is sampled at Gauss–Legendre nodes `t_i = cos θ_i` and
//! the kernel between two nodes is the azimuthal integral
//! `K̄(t, t') = ∫_0^{2π} k(t t' + √(1-t²)√(1-t'²) cos φ) dφ`. For `d = 2` zonal
//! functions are even in the angle, the nodes are Gauss–Chebyshev, and
//! `K̄(t, t') = k(cos(θ-θ')) + k(cos(θ+θ'))`.
//!
//! `K̄(t, t)` is infinite for `s <= 1`, so the diagonal is never formed. Instead
//! the row sums are corrected with the exact action on constants,
//! `(A g)_i = Σ_{j≠i} w_j K̄_ij (g_j - g_i) + μ_0 g_i`, which makes constants exact
//! eigenvectors and leaves an error that decays with the smoothness of `g`.

use std::f64::consts::PI;
use std::sync::Arc;

use rayon::prelude::*;

use super::kernel::{funk_hecke_eigen, riesz_prefactor, ZonalKernel};
use crate::constants::Problem;
use crate::error::{Error, Result};
use crate::numerics::{gauss_jacobi, gauss_legendre, QuadratureRule};

/// Points per panel of the azimuthal rule.
const AZIMUTH_ORDER: usize = 16;

#[derive(Debug, Clone)]
pub struct ZonalOperatorMatrix {
    pub problem: Problem,
    pub rule: Arc<QuadratureRule>,
    /// `D^{1/2} A D^{-1/2}` in row-major order, `D = diag(w)`.
    symmetric: Vec<f64>,
    sqrt_w: Vec<f64>,
    pub symmetrised: bool,
}

impl ZonalOperatorMatrix {
    pub fn order(&self) -> usize {
        self.sqrt_w.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.rule.nodes
    }

    /// Entry `(i, j)` of the symmetrised matrix.
    pub fn symmetric_entry(&self, i: usize, j: usize) -> f64 {
        self.symmetric[i * self.order() + j]
    }

    /// Entry `(i, j)` of the Nyström matrix acting on samples.
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.symmetric_entry(i, j) * self.sqrt_w[j] / self.sqrt_w[i]
    }

    /// Applies the discretised `S S*` to samples `g(t_j)`.
    pub fn apply(&self, g: &[f64]) -> Vec<f64> {
        let n = self.order();
        let v: Vec<f64> = g.iter().zip(&self.sqrt_w).map(|(a, b)| a * b).collect();
        let bv = self.mul_symmetric(&v);
        (0..n).map(|i| bv[i] / self.sqrt_w[i]).collect()
    }

    fn mul_symmetric(&self, v: &[f64]) -> Vec<f64> {
        let n = self.order();
        self.symmetric
            .par_chunks(n)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `max |B_ij - B_ji| / max |B_ij|` of the symmetrised matrix.
    pub fn symmetry_defect(&self) -> f64 {
        let n = self.order();
        let mut worst = 0.0f64;
        let mut scale = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                scale = scale.max(self.symmetric_entry(i, j).abs());
                if j > i {
                    worst = worst.max((self.symmetric_entry(i, j) - self.symmetric_entry(j, i)).abs());
                }
            }
        }
        worst / scale
    }
}

/// Builds the zonal restriction of `S S*` on `n` nodes (`d ∈ {2, 3}`, `n >= 32`).
pub fn zonal_operator(p: &Problem, n: usize) -> Result<ZonalOperatorMatrix> {
    if n < 32 {
        return Err(Error::Parameter(format!("zonal operator needs n >= 32, got {n}")));
    }
    let d = p.d();
    let rule = match d {
        2 => gauss_jacobi(n, -0.5, -0.5)?,
        3 => gauss_legendre(n)?,
        _ => return Err(Error::UnsupportedDimension(d)),
    };
    let a = (2.0 * p.s() - d as f64) / 2.0;
    let pref = riesz_prefactor(p);
    let mu0 = funk_hecke_eigen(&ZonalKernel::riesz(p), d, 0, 16)?;
    let nodes = &rule.nodes;
    let weights = &rule.weights;
    let panels = azimuth_panels()?;

    // Upper triangle of the symmetric kernel K̄.
    let rows: Vec<Result<Vec<f64>>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut row = vec![0.0; n];
            for j in (i + 1)..n {
                let v = match d {
                    2 => circle_kernel(a, nodes[i], nodes[j]),
                    _ => azimuthal_kernel(a, nodes[i], nodes[j], &panels),
                };
                if !v.is_finite() || v <= 0.0 {
                    return Err(Error::AzimuthalIntegration { i, j });
                }
                row[j] = v;
            }
            Ok(row)
        })
        .collect();
    let mut kbar = vec![0.0; n * n];
    for (i, row) in rows.into_iter().enumerate() {
        let row = row?;
        for j in (i + 1)..n {
            kbar[i * n + j] = row[j];
            kbar[j * n + i] = row[j];
        }
    }

    let sqrt_w: Vec<f64> = weights.iter().map(|w| w.sqrt()).collect();
    let mut symmetric = vec![0.0; n * n];
    for i in 0..n {
        let mut off = 0.0;
        for j in 0..n {
            if j != i {
                let k = kbar[i * n + j];
                off += weights[j] * k;
                symmetric[i * n + j] = pref * sqrt_w[i] * sqrt_w[j] * k;
            }
        }
        symmetric[i * n + i] = pref * (mu0 - off);
    }
    Ok(ZonalOperatorMatrix { problem: *p, rule, symmetric, sqrt_w, symmetrised: true })
}

fn circle_kernel(a: f64, t: f64, u: f64) -> f64 {
    let (th, ph) = (t.acos(), u.acos());
    // 2 - 2cos x = 4 sin^2(x/2)
    let minus = 4.0 * (0.5 * (th - ph)).sin().powi(2);
    let plus = 4.0 * (0.5 * (th + ph)).sin().powi(2);
    minus.powf(a) + plus.powf(a)
}

type Panels = Arc<QuadratureRule>;

fn azimuth_panels() -> Result<Panels> {
    gauss_legendre(AZIMUTH_ORDER)
}

/// `∫_0^{2π} (2 - 2(t u + √(1-t²)√(1-u²) cos φ))^a dφ`.
///
/// With `A = 4 sin²((θ-θ')/2)` and `B = 4 sin θ sin θ'` the integrand is
/// `(A + B sin² ψ)^a` after `φ = 2ψ`, which is peaked on the scale `√(A/B)` at
/// `ψ = 0`; panels are graded geometrically from that scale.
fn azimuthal_kernel(a: f64, t: f64, u: f64, gl: &QuadratureRule) -> f64 {
    let (th, ph) = (t.acos(), u.acos());
    let big_a = 4.0 * (0.5 * (th - ph)).sin().powi(2);
    let big_b = 4.0 * th.sin() * ph.sin();
    let f = |psi: f64| (big_a + big_b * psi.sin().powi(2)).powf(a);
    let half = 0.5 * PI;
    let mut h = (big_a / (big_a + big_b)).sqrt().max(1e-15);
    let mut left = 0.0;
    let mut total = 0.0;
    while left < half {
        let right = if h >= half || left + h >= half { half } else { left + h };
        let mid = 0.5 * (right + left);
        let rad = 0.5 * (right - left);
        let mut s = 0.0;
        for (&x, &w) in gl.nodes.iter().zip(&gl.weights) {
            s += w * f(mid + rad * x);
        }
        total += rad * s;
        left = right;
        h *= 2.0;
    }
    4.0 * total
}

/// Dominant eigenpair of the symmetrised matrix, started from the constant function.
/// The eigenvector is returned as samples at the nodes, scaled to unit discrete
/// `L^2` norm.
pub fn power_iteration(m: &ZonalOperatorMatrix, tol: f64, max_iter: usize) -> Result<(f64, Vec<f64>)> {
    power_iteration_deflated(m, &[], tol, max_iter)
}

/// Power iteration orthogonal to the given (sampled) eigenvectors.
pub fn power_iteration_deflated(
    m: &ZonalOperatorMatrix,
    converged: &[Vec<f64>],
    tol: f64,
    max_iter: usize,
) -> Result<(f64, Vec<f64>)> {
    if !(tol > 0.0) {
        return Err(Error::Parameter(format!("tolerance must be positive, got {tol}")));
    }
    let n = m.order();
    let to_sym = |g: &[f64]| -> Vec<f64> { g.iter().zip(&m.sqrt_w).map(|(a, b)| a * b).collect() };
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for g in converged {
        let mut v = to_sym(g);
        orthogonalise(&mut v, &basis);
        if normalise(&mut v) {
            basis.push(v);
        }
    }

    let mut v = to_sym(&vec![1.0; n]);
    orthogonalise(&mut v, &basis);
    if !normalise(&mut v) {
        // the constant lies in the deflated span; fall back to a ramp in the node index
        v = to_sym(&(0..n).map(|i| i as f64 + 1.0).collect::<Vec<_>>());
        orthogonalise(&mut v, &basis);
        if !normalise(&mut v) {
            return Err(Error::Degenerate("no start vector outside the deflated span".into()));
        }
    }

    let mut residual = f64::INFINITY;
    for _ in 0..max_iter {
        let mut w = m.mul_symmetric(&v);
        orthogonalise(&mut w, &basis);
        let lambda = dot(&v, &w);
        residual = w.iter().zip(&v).map(|(a, b)| (a - lambda * b).powi(2)).sum::<f64>().sqrt();
        if residual <= tol * lambda.abs() {
            let g: Vec<f64> = v.iter().zip(&m.sqrt_w).map(|(a, b)| a / b).collect();
            return Ok((lambda, g));
        }
        if !normalise(&mut w) {
            return Err(Error::Degenerate("iterate collapsed to zero".into()));
        }
        v = w;
    }
    Err(Error::NonConvergence { iterations: max_iter, residual })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn orthogonalise(v: &mut [f64], basis: &[Vec<f64>]) {
    // twice is enough
    for _ in 0..2 {
        for b in basis {
            let c = dot(v, b);
            for (x, y) in v.iter_mut().zip(b) {
                *x -= c * y;
            }
        }
    }
}

fn normalise(v: &mut [f64]) -> bool {
    let norm = dot(v, v).sqrt();
    if !(norm > 1e-10 * (v.len() as f64).sqrt()) {
        return false;
    }
    for x in v.iter_mut() {
        *x /= norm;
    }
    true
}
