//! The HLS form `∫∫ G(ω) conj G(φ) |ω-φ|^{2s-d} dσ dσ` discretised on a sphere grid.
//!
//! Both grid layouts are unions of rings on which the grid is invariant under a
//! cyclic shift, and the kernel between two rings depends only on the azimuthal
//! offset. Each ring-pair block is therefore circulant and is applied with FFTs.

use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use super::lieb::{lieb_eval, LiebFunction};
use crate::constants::{exponents, hls_constant, lp_trace_constant, Problem};
use crate::error::{Error, Result};
use crate::numerics::{gauss_jacobi, legendre_unchecked, sphere_area, GridLayout, SphereGrid};
use crate::operator::{funk_hecke_eigen, riesz_prefactor, ZonalKernel};
use crate::report::{Provenance, VerificationReport};

/// Treatment of grid pairs at which the kernel is singular or nearly so.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SingularPairPolicy {
    /// `Σ_{j≠i} w_j K_ij (G_j - G_i) + G_i ∫ K`: constants are integrated exactly.
    #[default]
    Subtract,
    /// Pairs closer than the grid spacing `h` are dropped and replaced by
    /// `G_i` times the exact integral of `K` over the cap of chord radius `h`.
    LocalCap,
    /// Only the diagonal is dropped.
    Omit,
}

/// Relative tolerance for the grid quotient of an extremiser against `L(d, s)`.
pub const HLS_TOLERANCE: f64 = 5e-3;
/// Tolerance on the Euler–Lagrange residual of an extremiser.
pub const EL_TOLERANCE: f64 = 1e-3;

struct Rings {
    z: Vec<f64>,
    r: Vec<f64>,
    /// Quadrature weight of each point on the ring.
    w: Vec<f64>,
    n_az: usize,
    spacing: f64,
}

fn rings(grid: &SphereGrid) -> Rings {
    match grid.layout {
        GridLayout::Circle { n } => Rings {
            z: vec![0.0],
            r: vec![1.0],
            w: vec![grid.weights[0]],
            n_az: n,
            spacing: 2.0 * std::f64::consts::PI / n as f64,
        },
        GridLayout::Product { n_polar, n_azimuth } => {
            let z = grid.polar_nodes().expect("product grid");
            let r = z.iter().map(|z| (1.0 - z * z).sqrt()).collect();
            let w = (0..n_polar).map(|a| grid.weights[a * n_azimuth]).collect();
            Rings { z, r, w, n_az: n_azimuth, spacing: std::f64::consts::PI / n_polar as f64 }
        }
    }
}

pub struct HlsGridOperator {
    problem: Problem,
    policy: SingularPairPolicy,
    weights: Vec<f64>,
    n_rings: usize,
    n_az: usize,
    /// `w_b · DFT_m K_ab(m)` (real, since `K_ab` is even in `m`), indexed `a * n_rings + b`.
    blocks: Vec<Vec<f64>>,
    /// Per-ring coefficient `c_a` of the local term `c_a G_i`.
    local: Vec<f64>,
    fft: Arc<dyn Fft<f64>>,
    ifft: Arc<dyn Fft<f64>>,
}

impl HlsGridOperator {
    pub fn new(problem: &Problem, grid: &SphereGrid, policy: SingularPairPolicy) -> Result<Self> {
        let d = problem.d();
        if grid.d != d {
            return Err(Error::Parameter(format!("grid is on S^{}, problem has d = {d}", grid.d - 1)));
        }
        if d != 2 && d != 3 {
            return Err(Error::UnsupportedDimension(d));
        }
        let rg = rings(grid);
        let (nr, n) = (rg.z.len(), rg.n_az);
        let a = (2.0 * problem.s() - d as f64) / 2.0;
        let h2 = rg.spacing * rg.spacing;

        let mut planner = FftPlanner::new();
        let fft = planner.plan_fft_forward(n);
        let ifft = planner.plan_fft_inverse(n);

        let sin_half: Vec<f64> =
            (0..n).map(|m| (std::f64::consts::PI * m as f64 / n as f64).sin().powi(2)).collect();
        let blocks: Vec<Vec<f64>> = (0..nr * nr)
            .into_par_iter()
            .map(|ab| {
                let (ia, ib) = (ab / nr, ab % nr);
                let dz = rg.z[ia] - rg.z[ib];
                let dr = rg.r[ia] - rg.r[ib];
                let rr = 4.0 * rg.r[ia] * rg.r[ib];
                let mut row: Vec<Complex64> = sin_half
                    .iter()
                    .enumerate()
                    .map(|(m, &sh)| {
                        let chord2 = dz * dz + dr * dr + rr * sh;
                        let drop = match policy {
                            SingularPairPolicy::LocalCap => chord2 < h2,
                            _ => ia == ib && m == 0,
                        };
                        let k = if drop { 0.0 } else { chord2.powf(a) };
                        Complex64::new(k, 0.0)
                    })
                    .collect();
                fft.process(&mut row);
                row.iter().map(|c| rg.w[ib] * c.re).collect()
            })
            .collect();

        let local = match policy {
            SingularPairPolicy::Omit => vec![0.0; nr],
            SingularPairPolicy::Subtract => {
                let mu0 = funk_hecke_eigen(&ZonalKernel::riesz(problem), d, 0, 64)?;
                // blocks[.][0] is w_b Σ_m K_ab(m)
                (0..nr).map(|ia| mu0 - (0..nr).map(|ib| blocks[ia * nr + ib][0]).sum::<f64>()).collect()
            }
            SingularPairPolicy::LocalCap => vec![cap_kernel_integral(problem, rg.spacing)?; nr],
        };

        Ok(HlsGridOperator {
            problem: *problem,
            policy,
            weights: grid.weights.clone(),
            n_rings: nr,
            n_az: n,
            blocks,
            local,
            fft,
            ifft,
        })
    }

    pub fn policy(&self) -> SingularPairPolicy {
        self.policy
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// `(K G)_i ≈ ∫ |ω_i - φ|^{2s-d} G(φ) dσ(φ)`.
    pub fn apply(&self, g: &[Complex64]) -> Result<Vec<Complex64>> {
        if g.len() != self.len() {
            return Err(Error::Parameter(format!("expected {} samples, got {}", self.len(), g.len())));
        }
        if g.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Evaluation("non-finite sample".into()));
        }
        let n = self.n_az;
        let spectra: Vec<Vec<Complex64>> = g
            .par_chunks(n)
            .map(|ring| {
                let mut buf = ring.to_vec();
                self.fft.process(&mut buf);
                buf
            })
            .collect();
        let scale = 1.0 / n as f64;
        let out: Vec<Vec<Complex64>> = (0..self.n_rings)
            .into_par_iter()
            .map(|ia| {
                let mut acc = vec![Complex64::new(0.0, 0.0); n];
                for (ib, spectrum) in spectra.iter().enumerate() {
                    let block = &self.blocks[ia * self.n_rings + ib];
                    for ((o, &k), &x) in acc.iter_mut().zip(block).zip(spectrum) {
                        *o += k * x;
                    }
                }
                self.ifft.process(&mut acc);
                let ring = &g[ia * n..(ia + 1) * n];
                acc.iter().zip(ring).map(|(&v, &x)| v * scale + self.local[ia] * x).collect()
            })
            .collect();
        Ok(out.concat())
    }

    /// `(Σ w_i |G_i|^q)^{1/q}`.
    pub fn lq_norm(&self, g: &[Complex64], q: f64) -> f64 {
        let sum: f64 = g.iter().zip(&self.weights).map(|(z, w)| w * z.norm().powf(q)).sum();
        sum.powf(1.0 / q)
    }

    /// `Re ⟨K G, G⟩ / ‖G‖_q^2` with `q` the HLS exponent.
    pub fn quotient(&self, g: &[Complex64]) -> Result<f64> {
        let (_, q) = exponents(&self.problem);
        let norm = self.lq_norm(g, q);
        if norm == 0.0 {
            return Err(Error::Degenerate("HLS quotient of the zero function".into()));
        }
        let kg = self.apply(g)?;
        let num: f64 = kg.iter().zip(g).zip(&self.weights).map(|((a, b), w)| w * (a * b.conj()).re).sum();
        Ok(num / (norm * norm))
    }

    /// Largest pointwise relative gap between `K G` and `L ‖G‖_q^{2-q} |G|^{q-2} G`.
    pub fn el_residual(&self, g: &[Complex64]) -> Result<f64> {
        let (_, q) = exponents(&self.problem);
        let norm = self.lq_norm(g, q);
        if norm == 0.0 {
            return Err(Error::Degenerate("Euler–Lagrange residual of the zero function".into()));
        }
        let kg = self.apply(g)?;
        let lambda = hls_constant(&self.problem) * norm.powf(2.0 - q);
        let rhs: Vec<Complex64> =
            g.iter().map(|z| if z.norm() == 0.0 { *z } else { lambda * z.norm().powf(q - 2.0) * z }).collect();
        let floor = 1e-12 * rhs.iter().map(|z| z.norm()).fold(0.0, f64::max);
        Ok(kg
            .iter()
            .zip(&rhs)
            .map(|(l, r)| (l - r).norm() / r.norm().max(floor))
            .fold(0.0, f64::max))
    }
}

/// `∫_{|ω-φ| < h} |ω-φ|^{2s-d} dσ(φ)`.
fn cap_kernel_integral(p: &Problem, h: f64) -> Result<f64> {
    let d = p.d();
    let a = (2.0 * p.s() - d as f64) / 2.0;
    let b = (d as f64 - 3.0) / 2.0;
    let t0 = 1.0 - 0.5 * h * h;
    // (2-2t)^a (1-t^2)^b = 2^a (1-t)^{a+b} (1+t)^b on [t0, 1]
    let rule = gauss_jacobi(32, a + b, 0.0)?;
    let (ts, ws) = rule.mapped(t0, 1.0);
    let v: f64 = ts.iter().zip(&ws).map(|(t, w)| w * (1.0 + t).powf(b)).sum();
    Ok(sphere_area(d - 1) * 2f64.powf(a) * v)
}

/// Samples of `G` on the grid points.
pub fn sample<F: Fn(&[f64]) -> Complex64>(grid: &SphereGrid, g: F) -> Vec<Complex64> {
    grid.points().map(g).collect()
}

pub fn sample_lieb(grid: &SphereGrid, g: &LiebFunction) -> Vec<Complex64> {
    sample(grid, |w| lieb_eval(g, w))
}

/// `Re ⟨K G, G⟩ / ‖G‖_q^2` on `grid` with the default pair policy.
pub fn hls_quotient(p: &Problem, grid: &SphereGrid, g: &[Complex64]) -> Result<f64> {
    HlsGridOperator::new(p, grid, SingularPairPolicy::default())?.quotient(g)
}

/// Euler–Lagrange residual of a Lieb function on `grid` with the default pair policy.
pub fn el_residual(p: &Problem, grid: &SphereGrid, g: &LiebFunction) -> Result<f64> {
    HlsGridOperator::new(p, grid, SingularPairPolicy::default())?.el_residual(&sample_lieb(grid, g))
}

/// A constant plus `terms` zonal harmonics of degree `1..=max_degree` about random
/// axes, with complex Gaussian coefficients of size `amplitude`.
pub fn random_harmonic_mixture<R: Rng>(
    grid: &SphereGrid,
    rng: &mut R,
    terms: usize,
    max_degree: usize,
    amplitude: f64,
) -> Vec<Complex64> {
    let d = grid.d;
    let mut gauss = || {
        // Box–Muller
        let (u, v): (f64, f64) = (rng.gen_range(f64::EPSILON..1.0), rng.gen());
        (-2.0 * u.ln()).sqrt() * (2.0 * std::f64::consts::PI * v).cos()
    };
    let c0 = Complex64::new(1.0 + gauss().abs(), gauss());
    let mut parts = Vec::with_capacity(terms);
    for _ in 0..terms {
        let mut axis: Vec<f64> = (0..d).map(|_| gauss()).collect();
        let len = axis.iter().map(|x| x * x).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
        axis.iter_mut().for_each(|x| *x /= len);
        let c = amplitude * Complex64::new(gauss(), gauss());
        parts.push((axis, c));
    }
    let mut degree_rng = rand_chacha_from(&parts);
    let degrees: Vec<usize> = parts.iter().map(|_| 1 + degree_rng.gen_range(0..max_degree.max(1))).collect();
    sample(grid, |w| {
        let mut z = c0;
        for ((axis, c), &k) in parts.iter().zip(&degrees) {
            let t: f64 = axis.iter().zip(w).map(|(a, b)| a * b).sum();
            z += c * legendre_unchecked(k, d, t.clamp(-1.0, 1.0));
        }
        z
    })
}

fn rand_chacha_from(parts: &[(Vec<f64>, Complex64)]) -> rand_chacha::ChaCha8Rng {
    use rand::SeedableRng;
    let seed = parts.iter().fold(0u64, |h, (_, c)| h.rotate_left(7) ^ c.re.to_bits() ^ c.im.to_bits());
    rand_chacha::ChaCha8Rng::seed_from_u64(seed)
}

/// The two faces of the `L^p` trace inequality on grid samples of `G`.
#[derive(Debug, Clone)]
pub struct LpTraceCheck {
    /// `⟨S S* G, G⟩` against `C(d, s) ‖G‖_q^2`.
    pub dual: VerificationReport,
    /// Pointwise `S S* G = C ‖G‖_q^{2-q} |G|^{q-2} G`.
    pub eigen: VerificationReport,
}

pub fn lp_trace_check(p: &Problem, grid: &SphereGrid, g: &[Complex64]) -> Result<LpTraceCheck> {
    let op = HlsGridOperator::new(p, grid, SingularPairPolicy::default())?;
    let pref = riesz_prefactor(p);
    let c = lp_trace_constant(p)?;
    let (_, q) = exponents(p);
    let norm = op.lq_norm(g, q);
    let ratio = pref * op.quotient(g)?;
    let dual = VerificationReport::new(
        "lp_trace.dual",
        "L^p trace inequality, dual form <SS*G, G> = C ||G||_q^2",
        Provenance::Derived,
        c * norm * norm,
        ratio * norm * norm,
        HLS_TOLERANCE,
    );
    let eigen = VerificationReport::new(
        "lp_trace.eigen",
        "L^p trace inequality, Euler-Lagrange form SS*G = C ||G||^(2-q) |G|^(q-2) G",
        Provenance::Derived,
        0.0,
        op.el_residual(g)?,
        EL_TOLERANCE,
    );
    Ok(LpTraceCheck { dual, eigen })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::sphere_grid;
    use rand::SeedableRng;

    fn ones(grid: &SphereGrid) -> Vec<Complex64> {
        vec![Complex64::new(1.0, 0.0); grid.len()]
    }

    #[test]
    fn fft_matches_direct_sum() {
        let p = Problem::new(3, 0.75).unwrap();
        let grid = sphere_grid(3, 6).unwrap();
        let g = sample(&grid, |w| Complex64::new(1.0 + w[0], w[1] * w[2]));
        let a = (2.0 * p.s() - 3.0) / 2.0;
        for policy in [SingularPairPolicy::Omit, SingularPairPolicy::Subtract] {
            let op = HlsGridOperator::new(&p, &grid, policy).unwrap();
            let kg = op.apply(&g).unwrap();
            for i in 0..grid.len() {
                let mut v = Complex64::new(0.0, 0.0);
                for j in 0..grid.len() {
                    if i != j {
                        let c2: f64 = grid.point(i).iter().zip(grid.point(j)).map(|(x, y)| (x - y).powi(2)).sum();
                        let gj = if policy == SingularPairPolicy::Subtract { g[j] - g[i] } else { g[j] };
                        v += grid.weights[j] * c2.powf(a) * gj;
                    }
                }
                if policy == SingularPairPolicy::Subtract {
                    v += g[i] * funk_hecke_eigen(&ZonalKernel::riesz(&p), 3, 0, 64).unwrap();
                }
                assert!((v - kg[i]).norm() < 1e-10 * v.norm(), "{policy:?} {i}");
            }
        }
    }

    #[test]
    fn constant_is_exact_under_subtraction() {
        let p = Problem::new(3, 1.0).unwrap();
        let grid = sphere_grid(3, 64).unwrap();
        let v = hls_quotient(&p, &grid, &ones(&grid)).unwrap();
        let want = 2.0 * std::f64::consts::PI.sqrt();
        assert!(((v - want) / want).abs() < 1e-10);
        assert!((hls_constant(&p) - want).abs() < 1e-14);
    }

    #[test]
    fn lieb_functions_on_the_circle_and_sphere() {
        for (d, s, res) in [(2, 0.75, 256), (3, 1.0, 48), (3, 0.75, 48)] {
            let p = Problem::new(d, s).unwrap();
            let grid = sphere_grid(d, res).unwrap();
            let op = HlsGridOperator::new(&p, &grid, SingularPairPolicy::Subtract).unwrap();
            for r in [0.1, 0.3, 0.5] {
                let g = LiebFunction::on_axis(p, r).unwrap();
                let v = op.quotient(&sample_lieb(&grid, &g)).unwrap();
                let l = hls_constant(&p);
                assert!(((v - l) / l).abs() < HLS_TOLERANCE, "({d}, {s}) r {r}: {v} vs {l}");
                assert!(op.el_residual(&sample_lieb(&grid, &g)).unwrap() < EL_TOLERANCE);
            }
        }
    }

    #[test]
    fn non_extremiser_has_large_residual() {
        let p = Problem::new(3, 1.0).unwrap();
        let grid = sphere_grid(3, 32).unwrap();
        let op = HlsGridOperator::new(&p, &grid, SingularPairPolicy::Subtract).unwrap();
        let g = sample(&grid, |w| Complex64::new(1.0 + 0.5 * w[2], 0.0));
        assert!(op.el_residual(&g).unwrap() > 0.01);
        assert!(op.quotient(&g).unwrap() < hls_constant(&p));
    }

    #[test]
    fn azimuthal_shift_invariance() {
        let p = Problem::new(3, 0.75).unwrap();
        let grid = sphere_grid(3, 16).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let g = random_harmonic_mixture(&grid, &mut rng, 4, 3, 0.5);
        let n_az = 32;
        let shifted: Vec<Complex64> = (0..g.len()).map(|i| g[i - i % n_az + (i % n_az + 5) % n_az]).collect();
        let op = HlsGridOperator::new(&p, &grid, SingularPairPolicy::Subtract).unwrap();
        let (a, b) = (op.quotient(&g).unwrap(), op.quotient(&shifted).unwrap());
        assert!(((a - b) / a).abs() < 1e-12);
    }

    #[test]
    fn zero_is_degenerate() {
        let p = Problem::new(2, 0.75).unwrap();
        let grid = sphere_grid(2, 16).unwrap();
        let z = vec![Complex64::new(0.0, 0.0); 16];
        assert!(matches!(hls_quotient(&p, &grid, &z), Err(Error::Degenerate(_))));
    }

    #[test]
    fn policies_on_constants() {
        for (s, res) in [(1.0, 64), (0.75, 64)] {
            let p = Problem::new(3, s).unwrap();
            let grid = sphere_grid(3, res).unwrap();
            let l = hls_constant(&p);
            let q = |pol| HlsGridOperator::new(&p, &grid, pol).unwrap().quotient(&ones(&grid)).unwrap();
            let (sub, cap, omit) =
                (q(SingularPairPolicy::Subtract), q(SingularPairPolicy::LocalCap), q(SingularPairPolicy::Omit));
            eprintln!("s {s}: subtract {} cap {} omit {}", sub / l - 1.0, cap / l - 1.0, omit / l - 1.0);
            assert!(omit < l);
        }
    }
}
