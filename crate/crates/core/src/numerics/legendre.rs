//! Orthogonal polynomials on [-1, 1].

use crate::error::{Error, Result};

/// The `d`-dimensional Legendre polynomial `P_{k,d}`, normalised so that
/// `P_{k,d}(1) = 1`. For `d = 2` this is the Chebyshev polynomial `T_k`.
pub fn legendre_pd(k: usize, d: usize, t: f64) -> Result<f64> {
    if d < 2 {
        return Err(Error::domain(format!("legendre_pd requires d >= 2, got {d}")));
    }
    if !(t.abs() <= 1.0) {
        return Err(Error::domain(format!("legendre_pd requires |t| <= 1, got {t}")));
    }
    Ok(legendre_unchecked(k, d, t))
}

pub(crate) fn legendre_unchecked(k: usize, d: usize, t: f64) -> f64 {
    let mut prev = 1.0;
    if k == 0 {
        return prev;
    }
    let mut cur = t;
    let dm2 = (d - 2) as f64;
    for j in 1..k {
        let jf = j as f64;
        let next = ((2.0 * jf + dm2) * t * cur - jf * prev) / (jf + dm2);
        prev = cur;
        cur = next;
    }
    cur
}

/// All of `P_{0,d}(t), ..., P_{kmax,d}(t)`.
pub(crate) fn legendre_all(kmax: usize, d: usize, t: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(kmax + 1);
    out.push(1.0);
    if kmax == 0 {
        return out;
    }
    out.push(t);
    let dm2 = (d - 2) as f64;
    for j in 1..kmax {
        let jf = j as f64;
        let next = ((2.0 * jf + dm2) * t * out[j] - jf * out[j - 1]) / (jf + dm2);
        out.push(next);
    }
    out
}

/// Jacobi polynomial `P_n^{(a,b)}(x)` together with `P_{n-1}^{(a,b)}(x)`.
pub(crate) fn jacobi_pair(n: usize, a: f64, b: f64, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    if n == 0 {
        return (p0, 0.0);
    }
    let mut p1 = 0.5 * (a - b) + 0.5 * (a + b + 2.0) * x;
    let ab = a + b;
    for k in 2..=n {
        let kf = k as f64;
        let c = 2.0 * kf + ab;
        let a1 = 2.0 * kf * (kf + ab) * (c - 2.0);
        let a2 = (c - 1.0) * (a * a - b * b);
        let a3 = (c - 2.0) * (c - 1.0) * c;
        let a4 = 2.0 * (kf + a - 1.0) * (kf + b - 1.0) * c;
        let p2 = ((a2 + a3 * x) * p1 - a4 * p0) / a1;
        p0 = p1;
        p1 = p2;
    }
    (p1, p0)
}

/// Value and derivative of `P_n^{(a,b)}` at an interior point.
pub(crate) fn jacobi_with_derivative(n: usize, a: f64, b: f64, x: f64) -> (f64, f64) {
    let (pn, pm) = jacobi_pair(n, a, b, x);
    let nf = n as f64;
    let c = 2.0 * nf + a + b;
    // (2n+a+b)(1-x^2) P_n' = n[(a-b) - (2n+a+b) x] P_n + 2(n+a)(n+b) P_{n-1}
    let dp = (nf * ((a - b) - c * x) * pn + 2.0 * (nf + a) * (nf + b) * pm) / (c * (1.0 - x * x));
    (pn, dp)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_degrees() {
        for d in 2..9 {
            for t in [-1.0, -0.3, 0.0, 0.71, 1.0] {
                assert_eq!(legendre_pd(0, d, t).unwrap(), 1.0);
                assert_eq!(legendre_pd(1, d, t).unwrap(), t);
            }
        }
        for t in [-0.9, -0.2, 0.4, 0.99] {
            let want = 0.5 * (3.0 * t * t - 1.0);
            assert!((legendre_pd(2, 3, t).unwrap() - want).abs() < 1e-15);
            // d = 2 is Chebyshev
            let tk = (7.0 * t.acos()).cos();
            assert!((legendre_pd(7, 2, t).unwrap() - tk).abs() < 1e-13);
        }
    }

    #[test]
    fn bounded_and_normalised() {
        for d in 2..=8 {
            for k in 0..=200 {
                assert_eq!(legendre_pd(k, d, 1.0).unwrap(), 1.0);
                for i in 0..=100 {
                    let t = -1.0 + 0.02 * i as f64;
                    assert!(legendre_pd(k, d, t).unwrap().abs() <= 1.0 + 1e-12);
                }
            }
        }
    }

    #[test]
    fn table_matches_single() {
        let all = legendre_all(40, 5, 0.37);
        for (k, v) in all.iter().enumerate() {
            assert_eq!(*v, legendre_unchecked(k, 5, 0.37));
        }
    }

    #[test]
    fn jacobi_reduces_to_legendre() {
        for x in [-0.8, 0.1, 0.6] {
            let (p, _) = jacobi_pair(6, 0.0, 0.0, x);
            assert!((p - legendre_unchecked(6, 3, x)).abs() < 1e-14);
        }
    }

    #[test]
    fn jacobi_derivative_by_differences() {
        let (a, b) = (-0.5, 0.75);
        for x in [-0.6, 0.2, 0.8] {
            let h = 1e-6;
            let fd = (jacobi_pair(9, a, b, x + h).0 - jacobi_pair(9, a, b, x - h).0) / (2.0 * h);
            let (_, dp) = jacobi_with_derivative(9, a, b, x);
            assert!((fd - dp).abs() < 1e-6 * dp.abs().max(1.0));
        }
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(legendre_pd(3, 3, 1.0 + 1e-9).is_err());
        assert!(legendre_pd(3, 1, 0.0).is_err());
    }
}
