//! Bessel functions of the first kind for real order `nu >= 0`.
//!
//! Three evaluation regimes:
//! * ascending power series for `x <= 12`, where cancellation costs at most
//!   four digits;
//! * Hankel's asymptotic expansion once `x >= max(25, nu^2)`;
//! * Miller's backward recurrence, normalised with the Neumann sum
//!   `(x/2)^mu = sum_k (mu + 2k) Γ(mu + k) / k! J_{mu+2k}(x)`, in between.

use std::f64::consts::PI;

use super::gamma::{gamma, ln_gamma};
use crate::error::{Error, Result};

const SERIES_MAX_X: f64 = 12.0;
const HANKEL_MIN_X: f64 = 25.0;

/// `J_nu(x)` for `nu >= 0`, `x >= 0`.
pub fn bessel_j(nu: f64, x: f64) -> Result<f64> {
    if !(nu >= 0.0) || !nu.is_finite() {
        return Err(Error::domain(format!("bessel_j requires nu >= 0, got {nu}")));
    }
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("bessel_j requires x >= 0, got {x}")));
    }
    Ok(jv(nu, x))
}

pub(crate) fn jv(nu: f64, x: f64) -> f64 {
    if x == 0.0 {
        return if nu == 0.0 { 1.0 } else { 0.0 };
    }
    if x <= SERIES_MAX_X || x * x < nu + 1.0 {
        series(nu, x)
    } else if x >= HANKEL_MIN_X && x >= nu * nu {
        hankel(nu, x)
    } else {
        miller(nu, x)
    }
}

fn series(nu: f64, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut term = (nu * half.ln() - ln_gamma(nu + 1.0)).exp();
    let q = -half * half;
    let mut sum = term;
    let mut m = 0.0;
    loop {
        m += 1.0;
        term *= q / (m * (m + nu));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() && m > half {
            break;
        }
        if m > 500.0 {
            break;
        }
    }
    sum
}

/// Returns `(P, Q)` of the Hankel expansion `J = sqrt(2/(pi x)) (P cos chi - Q sin chi)`.
fn hankel_pq(nu: f64, x: f64) -> (f64, f64) {
    let mu = 4.0 * nu * nu;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0f64;
    let mut prev = f64::INFINITY;
    for k in 1..200 {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        term *= (mu - odd * odd) / (8.0 * kf * x);
        let mag = term.abs();
        if mag > prev {
            break;
        }
        prev = mag;
        // a_k / x^k enters P for even k, Q for odd k, with sign (-1)^{floor(k/2)}
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * term;
        } else {
            q += sign * term;
        }
        if mag < 1e-17 {
            break;
        }
    }
    (p, q)
}

fn hankel(nu: f64, x: f64) -> f64 {
    let (p, q) = hankel_pq(nu, x);
    let chi = x - (0.5 * nu + 0.25) * PI;
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

fn miller(nu: f64, x: f64) -> f64 {
    let n0 = nu.floor();
    let mu = nu - n0;
    let n0 = n0 as usize;
    let top = (1.2 * x.max(n0 as f64) + 40.0).ceil() as usize;
    let top = top + top % 2;

    let mut f_next = 0.0; // f_{k+1}
    let mut f = 1e-30; // f_k
    let mut saved = if top == n0 { f } else { 0.0 };
    // Neumann weights c_j = (mu + 2j) Γ(mu + j) / j!, c_0 = Γ(mu + 1)
    let c = neumann_weights(mu, top / 2);
    let mut norm = c[top / 2] * f;
    for k in (1..=top).rev() {
        let f_prev = 2.0 * (mu + k as f64) / x * f - f_next;
        f_next = f;
        f = f_prev;
        let idx = k - 1;
        if idx == n0 {
            saved = f;
        }
        if idx % 2 == 0 {
            norm += c[idx / 2] * f;
        }
        if f.abs() > 1e200 {
            f *= 1e-200;
            f_next *= 1e-200;
            norm *= 1e-200;
            saved *= 1e-200;
        }
    }
    saved * (0.5 * x).powf(mu) / norm
}

fn neumann_weights(mu: f64, count: usize) -> Vec<f64> {
    let mut c = Vec::with_capacity(count + 1);
    c.push(gamma(mu + 1.0));
    // g_j = Γ(mu + j) / j!, starting at g_1 = Γ(mu + 1)
    let mut g = gamma(mu + 1.0);
    for j in 1..=count {
        if j > 1 {
            let jf = j as f64;
            g *= (mu + jf - 1.0) / jf;
        }
        c.push((mu + 2.0 * j as f64) * g);
    }
    c
}

fn jv_prime(nu: f64, x: f64) -> f64 {
    nu / x * jv(nu, x) - jv(nu + 1.0, x)
}

/// The `m`-th positive zero of `J_nu` (`m >= 1`).
///
/// McMahon's expansion seeds a Newton iteration; if Newton wanders the zero is
/// bracketed by a scan and bisected.
pub fn bessel_j_zero(nu: f64, m: usize) -> Result<f64> {
    if !(nu >= 0.0) || m == 0 {
        return Err(Error::domain(format!(
            "bessel_j_zero requires nu >= 0 and m >= 1, got ({nu}, {m})"
        )));
    }
    let mu = 4.0 * nu * nu;
    let beta = (m as f64 + 0.5 * nu - 0.25) * PI;
    let e = 8.0 * beta;
    let guess = beta - (mu - 1.0) / e - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * e * e * e);
    if let Some(z) = newton_zero(nu, guess) {
        // accept only if it is the m-th zero: check against neighbouring McMahon guesses
        if (z - guess).abs() < 1.0 {
            return Ok(z);
        }
    }
    scan_zero(nu, m)
}

fn newton_zero(nu: f64, mut x: f64) -> Option<f64> {
    for _ in 0..60 {
        if !(x > 0.0) {
            return None;
        }
        let dx = jv(nu, x) / jv_prime(nu, x);
        x -= dx;
        if dx.abs() <= 4.0 * f64::EPSILON * x {
            return Some(x);
        }
    }
    None
}

fn scan_zero(nu: f64, m: usize) -> Result<f64> {
    let step = 0.05;
    let mut a = nu.max(1e-3);
    let mut fa = jv(nu, a);
    let mut found = 0;
    while a < 1e6 {
        let b = a + step;
        let fb = jv(nu, b);
        if fa == 0.0 || fa * fb < 0.0 {
            found += 1;
            if found == m {
                return Ok(bisect(nu, a, b));
            }
        }
        a = b;
        fa = fb;
    }
    Err(Error::Evaluation(format!("zero {m} of J_{nu} not found")))
}

fn bisect(nu: f64, mut a: f64, mut b: f64) -> f64 {
    let mut fa = jv(nu, a);
    for _ in 0..200 {
        let c = 0.5 * (a + b);
        let fc = jv(nu, c);
        if fa * fc <= 0.0 {
            b = c;
        } else {
            a = c;
            fa = fc;
        }
        if b - a <= 2.0 * f64::EPSILON * c {
            break;
        }
    }
    0.5 * (a + b)
}

/// Asymptotic `J_nu(x)^2 + Y_nu(x)^2` for large `x`.
pub(crate) fn modulus_sq(nu: f64, x: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let inv = 1.0 / (2.0 * x);
    let inv2 = inv * inv;
    let mut sum = 1.0;
    let mut term = 1.0f64;
    let mut prev = f64::INFINITY;
    for k in 1..100 {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        term *= (odd / (2.0 * kf)) * (mu - odd * odd) * inv2;
        if term.abs() > prev {
            break;
        }
        prev = term.abs();
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    2.0 / (PI * x) * sum
}

#[cfg(test)]
mod tests {
    use super::*;

    // 20-digit reference values
    const REFERENCE: [(f64, f64, f64); 10] = [
        (0.0, 1.0, 0.765_197_686_557_966_551_45),
        (0.5, 2.3, 0.392_322_595_891_227_677_07),
        (1.0, 15.0, 0.205_104_038_613_522_761_15),
        (1.5, 17.3, -0.015_160_195_535_710_135_106),
        (0.0, 19.9, 0.172_877_756_392_618_462_35),
        (2.5, 22.0, 0.024_692_208_996_457_115_555),
        (3.0, 30.0, 0.129_211_228_759_724_983_04),
        (0.5, 100.0, -0.040_402_132_716_252_123_744),
        (1.0, 1000.5, 0.016_027_715_373_203_338_006),
        (2.0, 9999.0, 0.000_766_176_142_846_839_584_67),
    ];

    #[test]
    fn reference_values() {
        for (nu, x, want) in REFERENCE {
            let got = bessel_j(nu, x).unwrap();
            assert!((got - want).abs() < 1e-12, "J_{nu}({x}) = {got}, want {want}");
        }
    }

    #[test]
    fn trivial_values() {
        assert_eq!(bessel_j(0.0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_j(1.5, 0.0).unwrap(), 0.0);
        // J_{1/2}(x) = sqrt(2/(pi x)) sin x
        for x in [0.3, PI, 7.7, 13.0, 24.0, 26.0, 300.0] {
            let want = (2.0 / (PI * x)).sqrt() * x.sin();
            assert!((bessel_j(0.5, x).unwrap() - want).abs() < 1e-13, "x = {x}");
        }
    }

    #[test]
    fn regimes_agree_at_switchovers() {
        for nu in [0.0, 0.5, 1.0, 1.5, 2.0, 3.0] {
            for x in [25.0, 30.0, 40.0] {
                let s = miller(nu, x);
                let h = hankel(nu, x);
                assert!((s - h).abs() < 1e-12, "nu {nu} x {x}: {s} vs {h}");
            }
            for x in [5.0, 10.0, 12.0] {
                assert!((series(nu, x) - miller(nu, x)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn first_zero_of_j1() {
        let z = bessel_j_zero(1.0, 1).unwrap();
        assert!((z - 3.831_705_970_207_512_3).abs() < 1e-12);
        assert!(bessel_j(1.0, z).unwrap().abs() < 1e-14);
    }

    #[test]
    fn zeros_are_ordered_and_simple() {
        for nu in [0.0, 0.5, 1.0, 1.5, 2.5, 3.0] {
            let mut prev = 0.0;
            for m in 1..60 {
                let z = bessel_j_zero(nu, m).unwrap();
                assert!(z > prev + 2.5 && z < prev + 3.8 || m == 1, "nu {nu} m {m}");
                assert!(jv(nu, z).abs() < 1e-12, "nu {nu} m {m}: {}", jv(nu, z));
                prev = z;
            }
        }
    }

    #[test]
    fn modulus_matches_hankel() {
        for nu in [0.0, 1.0, 2.5] {
            for x in [40.0, 80.0, 400.0] {
                let (p, q) = hankel_pq(nu, x);
                let want = 2.0 / (PI * x) * (p * p + q * q);
                assert!((modulus_sq(nu, x) - want).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn domain_errors() {
        assert!(bessel_j(-0.5, 1.0).is_err());
        assert!(bessel_j(1.0, -1.0).is_err());
        assert!(bessel_j_zero(1.0, 0).is_err());
    }
}
