use serde::Serialize;

use crate::error::{Error, Result};

/// A dimension `d >= 2` and Sobolev order `s` with `1/2 < s < d/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Problem {
    d: usize,
    s: f64,
}

impl Problem {
    pub fn new(d: usize, s: f64) -> Result<Self> {
        if d < 2 {
            return Err(Error::domain(format!("dimension must satisfy d >= 2, got d = {d}")));
        }
        let hi = d as f64 / 2.0;
        if !(s > 0.5 && s < hi) {
            return Err(Error::domain(format!(
                "s = {s} lies outside the open interval (1/2, d/2) = (0.5, {hi}) for d = {d}"
            )));
        }
        Ok(Problem { d, s })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    /// `d / 2` as a real.
    pub fn half_d(&self) -> f64 {
        self.d as f64 / 2.0
    }

    /// Bessel order `d/2 - 1` of the Fourier transform of surface measure.
    pub fn nu(&self) -> f64 {
        self.half_d() - 1.0
    }
}

impl std::fmt::Display for Problem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(d = {}, s = {})", self.d, self.s)
    }
}
