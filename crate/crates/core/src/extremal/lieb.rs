//! The conformal family `G(ω) = c (1 - x·ω)^{-(d/2+s-1)}`, `|x| < 1`.

use num_complex::Complex64;

use crate::constants::Problem;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct LiebFunction {
    pub c: Complex64,
    pub x: Vec<f64>,
    pub problem: Problem,
}

impl LiebFunction {
    pub fn new(problem: Problem, c: Complex64, x: Vec<f64>) -> Result<Self> {
        if x.len() != problem.d() {
            return Err(Error::Parameter(format!(
                "centre has {} coordinates, expected d = {}",
                x.len(),
                problem.d()
            )));
        }
        if c == Complex64::new(0.0, 0.0) || !c.re.is_finite() || !c.im.is_finite() {
            return Err(Error::Parameter("scale c must be finite and nonzero".into()));
        }
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !(norm < 1.0) {
            return Err(Error::domain(format!("centre must lie in the open unit ball, |x| = {norm}")));
        }
        Ok(LiebFunction { c, x, problem })
    }

    /// Unit scale, centre `r e_d` (the last coordinate axis).
    pub fn on_axis(problem: Problem, r: f64) -> Result<Self> {
        let mut x = vec![0.0; problem.d()];
        x[problem.d() - 1] = r;
        LiebFunction::new(problem, Complex64::new(1.0, 0.0), x)
    }

    pub fn exponent(&self) -> f64 {
        self.problem.half_d() + self.problem.s() - 1.0
    }
}

/// `G(ω) = c (1 - x·ω)^{-(d/2+s-1)}`.
pub fn lieb_eval(g: &LiebFunction, omega: &[f64]) -> Complex64 {
    let dot: f64 = g.x.iter().zip(omega).map(|(a, b)| a * b).sum();
    g.c * (1.0 - dot).powf(-g.exponent())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn centre_and_alignment() {
        let p = Problem::new(3, 1.0).unwrap();
        let c = Complex64::new(0.5, -2.0);
        let g0 = LiebFunction::new(p, c, vec![0.0; 3]).unwrap();
        assert_eq!(lieb_eval(&g0, &[0.0, 0.6, 0.8]), c);
        let x = vec![0.0, 0.18, 0.24];
        let g = LiebFunction::new(p, c, x.clone()).unwrap();
        let omega: Vec<f64> = x.iter().map(|v| v / 0.3).collect();
        let want = c * 0.7f64.powf(-1.5);
        assert!((lieb_eval(&g, &omega) - want).norm() < 1e-14);
    }

    #[test]
    fn rotation_equivariance() {
        let p = Problem::new(3, 0.75).unwrap();
        let (ca, sa) = (0.3f64.cos(), 0.3f64.sin());
        let rot = |v: &[f64]| vec![ca * v[0] - sa * v[1], sa * v[0] + ca * v[1], v[2]];
        let x = vec![0.2, -0.1, 0.4];
        let g = LiebFunction::new(p, Complex64::new(1.0, 0.0), x.clone()).unwrap();
        let gr = LiebFunction::new(p, Complex64::new(1.0, 0.0), rot(&x)).unwrap();
        let w = [0.48, 0.6, 0.64];
        assert!((lieb_eval(&gr, &rot(&w)) - lieb_eval(&g, &w)).norm() < 1e-14);
    }

    #[test]
    fn rejects_boundary_centre() {
        let p = Problem::new(3, 1.0).unwrap();
        assert!(LiebFunction::on_axis(p, 1.0).is_err());
        assert!(LiebFunction::new(p, Complex64::new(1.0, 0.0), vec![0.0; 2]).is_err());
        assert!(LiebFunction::new(p, Complex64::new(0.0, 0.0), vec![0.0; 3]).is_err());
    }
}
