//! Special functions and quadrature primitives.

mod bessel;
mod gamma;
mod grid;
mod legendre;
mod oscillatory;
mod quadrature;

pub use bessel::{bessel_j, bessel_j_zero};
pub use gamma::{gamma_ratio, log_gamma};
pub use grid::{circle_grid, product_grid, sphere_grid, GridLayout, SphereGrid};
pub use legendre::legendre_pd;
pub use oscillatory::{integrate_bessel_tail, integrate_bessel_weighted};
pub use quadrature::{
    gauss_jacobi, gauss_legendre, integrate_zonal, jacobi_moment, sphere_area, QuadratureRule,
    MAX_ORDER,
};

pub(crate) use bessel::jv;
pub(crate) use gamma::{ln_gamma, ln_gamma_ratio_shifted};
pub(crate) use legendre::{legendre_all, legendre_unchecked};

/// Neumaier-compensated running sum.
#[derive(Debug, Default, Clone, Copy)]
pub struct Accumulator {
    sum: f64,
    comp: f64,
}

impl Accumulator {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Compensated sum of a sequence.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(xs: I) -> f64 {
    let mut acc = Accumulator::default();
    for x in xs {
        acc.add(x);
    }
    acc.value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensation_recovers_lost_bits() {
        let xs = [1.0, 1e100, 1.0, -1e100];
        assert_eq!(compensated_sum(xs), 2.0);
    }
}
