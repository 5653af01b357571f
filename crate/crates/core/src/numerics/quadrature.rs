//! Gauss–Jacobi rules and the zonal reduction of sphere integrals.
//!
//! Nodes come from the eigenvalues of the symmetric Jacobi matrix (implicit QL),
//! are polished by Newton steps on the three-term recurrence, and the weights are
//! taken from the closed formula in terms of `P_n'` rather than from eigenvector
//! components, which loses relative accuracy in the tails for large `n`.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use super::gamma::{ln_gamma, ln_gamma_ratio_shifted};
use super::legendre::jacobi_with_derivative;
use super::Accumulator;
use crate::error::{Error, Result};

/// Largest supported rule order.
pub const MAX_ORDER: usize = 2048;

/// An `n`-point Gauss rule for the weight `(1-t)^alpha (1+t)^beta` on `(-1, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub alpha: f64,
    pub beta: f64,
    pub order: usize,
}

impl QuadratureRule {
    /// `sum_i w_i f(t_i)`, accumulated with compensation.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        let mut acc = Accumulator::default();
        for (&t, &w) in self.nodes.iter().zip(&self.weights) {
            acc.add(w * f(t));
        }
        acc.value()
    }

    /// Like [`integrate`](Self::integrate) but fails on a non-finite sample.
    pub fn try_integrate<F: Fn(f64) -> f64>(&self, f: F) -> Result<f64> {
        let mut acc = Accumulator::default();
        for (&t, &w) in self.nodes.iter().zip(&self.weights) {
            let v = f(t);
            if !v.is_finite() {
                return Err(Error::Evaluation(format!("integrand is {v} at node t = {t}")));
            }
            acc.add(w * v);
        }
        Ok(acc.value())
    }

    /// Nodes and weights mapped to `[a, b]` for the weight `(b-x)^alpha (x-a)^beta`.
    pub fn mapped(&self, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
        let half = 0.5 * (b - a);
        let scale = half.powf(self.alpha + self.beta + 1.0);
        let nodes = self.nodes.iter().map(|t| a + half * (t + 1.0)).collect();
        let weights = self.weights.iter().map(|w| w * scale).collect();
        (nodes, weights)
    }
}

/// `∫_{-1}^{1} (1-t)^a (1+t)^b dt = 2^{a+b+1} B(a+1, b+1)`.
pub fn jacobi_moment(alpha: f64, beta: f64) -> f64 {
    ((alpha + beta + 1.0) * std::f64::consts::LN_2 + ln_gamma(alpha + 1.0) + ln_gamma(beta + 1.0)
        - ln_gamma(alpha + beta + 2.0))
    .exp()
}

type CacheKey = (usize, u64, u64);

fn cache() -> &'static Mutex<HashMap<CacheKey, Arc<QuadratureRule>>> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, Arc<QuadratureRule>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The `n`-point Gauss–Jacobi rule, memoised.
pub fn gauss_jacobi(n: usize, alpha: f64, beta: f64) -> Result<Arc<QuadratureRule>> {
    if n == 0 || n > MAX_ORDER {
        return Err(Error::Parameter(format!("order must lie in 1..={MAX_ORDER}, got {n}")));
    }
    if !(alpha > -1.0) || !(beta > -1.0) || !alpha.is_finite() || !beta.is_finite() {
        return Err(Error::Parameter(format!(
            "Jacobi exponents must exceed -1, got alpha = {alpha}, beta = {beta}"
        )));
    }
    // normalise -0.0 so it shares a cache slot with 0.0
    let key = (n, (alpha + 0.0).to_bits(), (beta + 0.0).to_bits());
    if let Some(rule) = cache().lock().unwrap().get(&key) {
        return Ok(Arc::clone(rule));
    }
    let rule = Arc::new(build_rule(n, alpha, beta));
    cache().lock().unwrap().insert(key, Arc::clone(&rule));
    Ok(rule)
}

/// Gauss–Legendre rule on `(-1, 1)`.
pub fn gauss_legendre(n: usize) -> Result<Arc<QuadratureRule>> {
    gauss_jacobi(n, 0.0, 0.0)
}

fn build_rule(n: usize, alpha: f64, beta: f64) -> QuadratureRule {
    let ab = alpha + beta;
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n];
    diag[0] = (beta - alpha) / (ab + 2.0);
    for k in 1..n {
        let kf = k as f64;
        let c = 2.0 * kf + ab;
        diag[k] = (beta * beta - alpha * alpha) / (c * (c + 2.0));
        let b2 = if k == 1 {
            // (k + a + b) cancels against (2k + a + b - 1), which vanishes when a + b = -1
            4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab))
        } else {
            4.0 * kf * (kf + alpha) * (kf + beta) * (kf + ab) / (c * c * (c + 1.0) * (c - 1.0))
        };
        off[k] = b2.sqrt();
    }
    let mut nodes = tridiagonal_eigenvalues(diag, off);
    nodes.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let nf = n as f64;
    let ln_const = (ab + 1.0) * std::f64::consts::LN_2
        + ln_gamma_ratio_shifted(nf, alpha + 1.0, 1.0)
        + ln_gamma_ratio_shifted(nf, beta + 1.0, ab + 1.0);
    let mut weights = Vec::with_capacity(n);
    for x in nodes.iter_mut() {
        let mut dp = 0.0;
        for _ in 0..3 {
            let (p, d) = jacobi_with_derivative(n, alpha, beta, *x);
            dp = d;
            let step = p / d;
            let nx = *x - step;
            if nx > -1.0 && nx < 1.0 {
                *x = nx;
            }
            if step.abs() <= 1e-16 * x.abs().max(1e-3) {
                break;
            }
        }
        let (_, d) = jacobi_with_derivative(n, alpha, beta, *x);
        if d.is_finite() && d != 0.0 {
            dp = d;
        }
        let w = (ln_const - (1.0 - *x * *x).ln() - 2.0 * dp.abs().ln()).exp();
        weights.push(w);
    }
    // Nodes within a few ulps of an endpoint carry an unavoidable relative error in
    // 1 -+ x, which leaks into the largest weights when an exponent is near -1.
    // Renormalising to the exact zeroth moment removes it.
    let total: f64 = super::compensated_sum(weights.iter().copied());
    let fix = jacobi_moment(alpha, beta) / total;
    for w in weights.iter_mut() {
        *w *= fix;
    }
    QuadratureRule { nodes, weights, alpha, beta, order: n }
}

/// Eigenvalues of the symmetric tridiagonal matrix with diagonal `d` and
/// sub-diagonal `e[1..]` (implicit QL with Wilkinson shifts).
fn tridiagonal_eigenvalues(mut d: Vec<f64>, mut e: Vec<f64>) -> Vec<f64> {
    let n = d.len();
    if n == 1 {
        return d;
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m < n - 1 {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            assert!(iter < 100, "tridiagonal QL failed to converge");
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d
}

/// Surface area `|S^{d-1}| = 2 π^{d/2} / Γ(d/2)` of the unit sphere in `R^d`.
pub fn sphere_area(d: usize) -> f64 {
    match d {
        1 => 2.0,
        2 => 2.0 * PI,
        3 => 4.0 * PI,
        _ => {
            let h = d as f64 / 2.0;
            2.0 * (h * PI.ln() - ln_gamma(h)).exp()
        }
    }
}

/// `|S^{d-2}| ∫ f(t) (1-t^2)^{(d-3)/2} dt`, the integral over `S^{d-1}` of a zonal
/// function. A power singularity `(1-t)^{singular_alpha}` of `f` at `t = 1` is moved
/// into the Jacobi weight; `f` itself is still passed in full.
pub fn integrate_zonal<F: Fn(f64) -> f64>(
    f: F,
    d: usize,
    n: usize,
    singular_alpha: Option<f64>,
) -> Result<f64> {
    if d < 2 {
        return Err(Error::domain(format!("zonal integrals need d >= 2, got {d}")));
    }
    let beta = (d as f64 - 3.0) / 2.0;
    let sa = singular_alpha.unwrap_or(0.0);
    let rule = gauss_jacobi(n, beta + sa, beta)?;
    let raw = if sa == 0.0 {
        rule.try_integrate(f)?
    } else {
        rule.try_integrate(|t| f(t) / (1.0 - t).powf(sa))?
    };
    Ok(sphere_area(d - 1) * raw)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn one_point_rule() {
        let r = gauss_jacobi(1, 0.0, 0.0).unwrap();
        assert_eq!(r.nodes.len(), 1);
        assert!(r.nodes[0].abs() < 1e-16);
        assert!((r.weights[0] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn legendre_integrates_square() {
        for n in 2..40 {
            let r = gauss_legendre(n).unwrap();
            assert!((r.integrate(|t| t * t) - 2.0 / 3.0).abs() < 1e-12, "n = {n}");
        }
    }

    #[test]
    fn inverse_sqrt_weight() {
        let r = gauss_jacobi(40, -0.5, 0.0).unwrap();
        assert!((r.integrate(|_| 1.0) - 2.0 * 2f64.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn rule_invariants() {
        for &(a, b) in &[(0.0, 0.0), (-0.5, -0.5), (-0.75, 0.25), (1.5, -0.9), (-0.999, 3.0)] {
            for n in [1, 2, 5, 17, 64, 200, 800] {
                let r = gauss_jacobi(n, a, b).unwrap();
                assert_eq!(r.order, n);
                assert!(r.nodes.windows(2).all(|w| w[0] < w[1]));
                assert!(r.nodes.iter().all(|&t| t > -1.0 && t < 1.0));
                assert!(r.weights.iter().all(|&w| w > 0.0));
                let total: f64 = r.weights.iter().sum();
                assert!(rel(total, jacobi_moment(a, b)) < 1e-12, "({a},{b}) n = {n}: {}", rel(total, jacobi_moment(a, b)));
            }
        }
    }

    #[test]
    fn order_two_thousand() {
        let r = gauss_jacobi(2048, -0.25, 0.5).unwrap();
        assert!(rel(r.weights.iter().sum(), jacobi_moment(-0.25, 0.5)) < 1e-12);
        assert!(gauss_jacobi(2049, 0.0, 0.0).is_err());
    }

    #[test]
    fn rejects_bad_exponents() {
        assert!(matches!(gauss_jacobi(4, -1.0, 0.0), Err(Error::Parameter(_))));
        assert!(matches!(gauss_jacobi(4, 0.0, -1.5), Err(Error::Parameter(_))));
        assert!(gauss_jacobi(0, 0.0, 0.0).is_err());
    }

    #[test]
    fn mapped_rule_on_interval() {
        let r = gauss_jacobi(12, 0.5, 0.0).unwrap();
        let (x, w) = r.mapped(1.0, 3.0);
        // ∫_1^3 (3-x)^{1/2} dx = (2/3) 2^{3/2}
        let s: f64 = w.iter().sum();
        assert!(rel(s, 2.0 / 3.0 * 2f64.powf(1.5)) < 1e-13);
        assert!(x.iter().all(|&v| v > 1.0 && v < 3.0));
    }

    #[test]
    fn areas() {
        assert!((sphere_area(2) - 2.0 * PI).abs() < 1e-15);
        assert!((sphere_area(3) - 4.0 * PI).abs() < 1e-15);
        assert!(rel(sphere_area(4), 2.0 * PI * PI) < 1e-14);
        // |S^{d-1}| = |S^{d-2}| ∫ (1-t^2)^{(d-3)/2}
        for d in 3..12 {
            let b = (d as f64 - 3.0) / 2.0;
            assert!(rel(sphere_area(d), sphere_area(d - 1) * jacobi_moment(b, b)) < 1e-13);
        }
    }

    #[test]
    fn zonal_examples() {
        let v3 = integrate_zonal(|_| 1.0, 3, 8, None).unwrap();
        assert!(rel(v3, 4.0 * PI) < 1e-14);
        let v2 = integrate_zonal(|_| 1.0, 2, 8, None).unwrap();
        assert!(rel(v2, 2.0 * PI) < 1e-14);
        let riesz = integrate_zonal(|t| (2.0 - 2.0 * t).powf(-0.5), 3, 16, Some(-0.5)).unwrap();
        assert!(rel(riesz, 4.0 * PI) < 1e-13);
        for d in 2..=8 {
            assert!(rel(integrate_zonal(|_| 1.0, d, 20, None).unwrap(), sphere_area(d)) < 1e-10);
        }
    }

    #[test]
    fn zonal_rejects_non_finite() {
        let r = integrate_zonal(|t| if t > 0.5 { f64::NAN } else { 1.0 }, 3, 16, None);
        assert!(matches!(r, Err(Error::Evaluation(_))));
    }
}
