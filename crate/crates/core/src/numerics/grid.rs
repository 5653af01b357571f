//! Quadrature grids on the circle and on the 2-sphere.

use std::f64::consts::PI;

use super::quadrature::gauss_legendre;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridLayout {
    /// `n` equally spaced angles on `S^1`.
    Circle { n: usize },
    /// Gauss–Legendre rings in `cos θ` times a uniform azimuth. Points are stored
    /// ring by ring, azimuth fastest.
    Product { n_polar: usize, n_azimuth: usize },
}

#[derive(Debug, Clone)]
pub struct SphereGrid {
    pub d: usize,
    pub layout: GridLayout,
    coords: Vec<f64>,
    pub weights: Vec<f64>,
}

impl SphereGrid {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.d..(i + 1) * self.d]
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.d)
    }

    /// `sum_i w_i g(ω_i)`.
    pub fn integrate<F: Fn(&[f64]) -> f64>(&self, g: F) -> f64 {
        let mut acc = super::Accumulator::default();
        for (p, w) in self.points().zip(&self.weights) {
            acc.add(w * g(p));
        }
        acc.value()
    }

    /// Polar nodes `cos θ_a` of a product grid, or `None` on the circle.
    pub fn polar_nodes(&self) -> Option<Vec<f64>> {
        match self.layout {
            GridLayout::Product { n_polar, n_azimuth } => {
                Some((0..n_polar).map(|a| self.coords[a * n_azimuth * 3 + 2]).collect())
            }
            GridLayout::Circle { .. } => None,
        }
    }
}

/// Standard grid: `resolution` points on `S^1`, or `resolution × 2·resolution` on `S^2`.
pub fn sphere_grid(d: usize, resolution: usize) -> Result<SphereGrid> {
    match d {
        2 => circle_grid(resolution),
        3 => product_grid(resolution, 2 * resolution),
        _ => Err(Error::UnsupportedDimension(d)),
    }
}

pub fn circle_grid(n: usize) -> Result<SphereGrid> {
    if n == 0 {
        return Err(Error::Parameter("grid resolution must be positive".into()));
    }
    let h = 2.0 * PI / n as f64;
    let mut coords = Vec::with_capacity(2 * n);
    for j in 0..n {
        let (s, c) = (j as f64 * h).sin_cos();
        coords.extend_from_slice(&[c, s]);
    }
    Ok(SphereGrid { d: 2, layout: GridLayout::Circle { n }, coords, weights: vec![h; n] })
}

pub fn product_grid(n_polar: usize, n_azimuth: usize) -> Result<SphereGrid> {
    if n_polar == 0 || n_azimuth == 0 {
        return Err(Error::Parameter("grid resolution must be positive".into()));
    }
    let rule = gauss_legendre(n_polar)?;
    let h = 2.0 * PI / n_azimuth as f64;
    let azimuths: Vec<(f64, f64)> = (0..n_azimuth).map(|j| (j as f64 * h).sin_cos()).collect();
    let mut coords = Vec::with_capacity(3 * n_polar * n_azimuth);
    let mut weights = Vec::with_capacity(n_polar * n_azimuth);
    for (&z, &w) in rule.nodes.iter().zip(&rule.weights) {
        let r = (1.0 - z * z).sqrt();
        for &(s, c) in &azimuths {
            coords.extend_from_slice(&[r * c, r * s, z]);
            weights.push(w * h);
        }
    }
    Ok(SphereGrid { d: 3, layout: GridLayout::Product { n_polar, n_azimuth }, coords, weights })
}
