//! Angular weights `θ` applied through the Laplace–Beltrami spectrum.

use num_complex::Complex64;

use super::Problem;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum ThetaWeight {
    /// `θ ≡ 1`.
    One,
    /// `θ(ρ) = (1 + ρ)^{(2s-1)/4}`.
    FangWang { s: f64 },
    /// `θ(ρ) = (1 + ρ)^a`.
    Power { a: f64 },
    /// Piecewise-linear interpolation of a table of `(ρ, θ(ρ))` samples. Outside the
    /// tabulated range the weight is undefined.
    User(Vec<(f64, Complex64)>),
}

impl ThetaWeight {
    pub fn fang_wang(p: &Problem) -> Self {
        ThetaWeight::FangWang { s: p.s() }
    }

    /// A user table, sorted by `ρ`. Abscissae must be finite, nonnegative and distinct.
    pub fn user(mut points: Vec<(f64, Complex64)>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Parameter("user θ table is empty".into()));
        }
        if points.iter().any(|(r, v)| !(r.is_finite() && *r >= 0.0) || !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::Parameter("user θ table has invalid entries".into()));
        }
        points.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        if points.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::Parameter("user θ table has repeated abscissae".into()));
        }
        Ok(ThetaWeight::User(points))
    }

    /// Short tag used in reports and on the command line.
    pub fn tag(&self) -> String {
        match self {
            ThetaWeight::One => "one".into(),
            ThetaWeight::FangWang { .. } => "fang-wang".into(),
            ThetaWeight::Power { a } => format!("power({a})"),
            ThetaWeight::User(_) => "user".into(),
        }
    }

    pub fn eval(&self, rho: f64) -> Complex64 {
        match self {
            ThetaWeight::One => Complex64::new(1.0, 0.0),
            ThetaWeight::FangWang { s } => Complex64::new((1.0 + rho).powf((2.0 * s - 1.0) / 4.0), 0.0),
            ThetaWeight::Power { a } => Complex64::new((1.0 + rho).powf(*a), 0.0),
            ThetaWeight::User(points) => interpolate(points, rho),
        }
    }

    /// `|θ(ρ)|^2`, evaluated in real arithmetic for the presets.
    pub fn modulus_sq(&self, rho: f64) -> f64 {
        match self {
            ThetaWeight::One => 1.0,
            ThetaWeight::FangWang { s } => (1.0 + rho).powf(s - 0.5),
            ThetaWeight::Power { a } => (1.0 + rho).powf(2.0 * a),
            ThetaWeight::User(points) => interpolate(points, rho).norm_sqr(),
        }
    }

    /// Exponent `a` with `|θ(ρ)| = (1 + ρ)^a`, for the presets.
    pub(crate) fn power_exponent(&self) -> Option<f64> {
        match self {
            ThetaWeight::One => Some(0.0),
            ThetaWeight::FangWang { s } => Some((2.0 * s - 1.0) / 4.0),
            ThetaWeight::Power { a } => Some(*a),
            ThetaWeight::User(_) => None,
        }
    }
}

fn interpolate(points: &[(f64, Complex64)], rho: f64) -> Complex64 {
    let nan = Complex64::new(f64::NAN, f64::NAN);
    let i = points.partition_point(|(r, _)| *r < rho);
    if i < points.len() && points[i].0 == rho {
        return points[i].1;
    }
    if i == 0 || i == points.len() {
        return nan;
    }
    let (r0, v0) = points[i - 1];
    let (r1, v1) = points[i];
    let w = (rho - r0) / (r1 - r0);
    v0 * (1.0 - w) + v1 * w
}
