//! Verification suites: each check pits an independent computation against a
//! closed form or a structural identity and yields a [`VerificationReport`].

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::constants::{
    asymptotic_constant, eigen_table, exponents, hls_constant, lambda_base, lambda_fw,
    lambda_recurrence, lp_trace_constant, lp_trace_constant_direct, lp_trace_constant_via_hls,
    stirling_envelope, trace_constant, Problem, ThetaWeight,
};
use crate::error::{Error, Result};
use crate::extremal::{
    bessel_energy, closed_form_d3, lp_trace_check, perturbed_trace_ratio, radial_profile,
    random_harmonic_mixture, sample, sample_lieb, trace_ratio_unchecked, HlsGridOperator,
    LiebFunction, SingularPairPolicy, EL_TOLERANCE, HLS_TOLERANCE, SHARPNESS_TOLERANCE,
};
use crate::numerics::{circle_grid, legendre_unchecked, product_grid, sphere_area, SphereGrid};
use crate::operator::{
    cap_coefficients_unchecked, energy_sum, funk_hecke_eigen, knapp_predicted_slope, knapp_slope,
    power_iteration, power_iteration_deflated, riesz_prefactor, ss_star_eigen_numeric,
    zonal_operator, CoeffVector, ZonalKernel,
};
use crate::report::{ConfigEcho, Provenance, Relation, ReportSet, VerificationReport};

/// Radii of the Knapp caps.
pub const KNAPP_DELTAS: [f64; 4] = [0.5, 0.25, 0.125, 0.0625];
/// Default truncation for cap expansions.
pub const CAP_KMAX: usize = 400;
/// Range of `k` over which monotonicity and the decay envelope are checked.
const MONOTONE_RANGE: usize = 10_000;
/// `μ_0` is a single Jacobi moment, so a short rule is exact.
const MU0_ORDER: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Profile {
    #[default]
    Fast,
    Full,
}

impl Profile {
    /// Quadrature order for Funk–Hecke integrals.
    pub fn order(self) -> usize {
        match self {
            Profile::Fast => 200,
            Profile::Full => 400,
        }
    }

    pub fn kmax(self) -> usize {
        match self {
            Profile::Fast => 100,
            Profile::Full => 400,
        }
    }

    /// Polar rings of the `S^2` grid; the azimuth has twice as many points.
    pub fn resolution(self) -> usize {
        match self {
            Profile::Fast => 48,
            Profile::Full => 96,
        }
    }

    /// Order of the zonal Nyström operator.
    pub fn zonal_order(self) -> usize {
        match self {
            Profile::Fast => 128,
            Profile::Full => 192,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Profile::Fast => "fast",
            Profile::Full => "full",
        }
    }
}

impl FromStr for Profile {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "fast" => Ok(Profile::Fast),
            "full" => Ok(Profile::Full),
            other => Err(Error::Parameter(format!("unknown profile '{other}' (expected fast or full)"))),
        }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Constants,
    Trace,
    Hls,
    Fw,
    Knapp,
    Operator,
    All,
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "constants" => Ok(Suite::Constants),
            "trace" => Ok(Suite::Trace),
            "hls" => Ok(Suite::Hls),
            "fw" => Ok(Suite::Fw),
            "knapp" => Ok(Suite::Knapp),
            "operator" => Ok(Suite::Operator),
            "all" => Ok(Suite::All),
            other => Err(Error::Parameter(format!("unknown suite '{other}'"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub problem: Problem,
    pub profile: Profile,
    pub seed: u64,
    /// Overrides the profile's quadrature order.
    pub order: Option<usize>,
    /// Overrides the profile's eigen-table truncation.
    pub kmax: Option<usize>,
    /// Restricts the Knapp suite to one exponent.
    pub q: Option<f64>,
    pub timings: bool,
}

impl VerifyOptions {
    pub fn new(problem: Problem, profile: Profile) -> Self {
        VerifyOptions { problem, profile, seed: 1, order: None, kmax: None, q: None, timings: false }
    }

    pub fn order(&self) -> usize {
        self.order.unwrap_or(self.profile.order())
    }

    pub fn kmax(&self) -> usize {
        self.kmax.unwrap_or(self.profile.kmax())
    }

    pub fn config(&self) -> ConfigEcho {
        ConfigEcho {
            d: self.problem.d(),
            s: self.problem.s(),
            profile: self.profile.name().to_string(),
            seed: self.seed,
            order: self.order(),
            kmax: self.kmax(),
            resolution: self.profile.resolution(),
        }
    }
}

/// Collects reports with the run configuration and optional timings attached.
struct Recorder<'a> {
    opts: &'a VerifyOptions,
    config: ConfigEcho,
    reports: Vec<VerificationReport>,
}

impl<'a> Recorder<'a> {
    fn new(opts: &'a VerifyOptions) -> Self {
        Recorder { opts, config: opts.config(), reports: Vec::new() }
    }

    /// Runs `f`, which returns one or more reports; a failure becomes a failed report
    /// under `id`.
    fn run<F>(&mut self, id: &str, anchor: &str, provenance: Provenance, claimed: f64, f: F)
    where
        F: FnOnce() -> Result<Vec<VerificationReport>>,
    {
        let start = Instant::now();
        let out = f();
        let ms = start.elapsed().as_millis() as u64;
        let reports = match out {
            Ok(r) => r,
            Err(e) => vec![VerificationReport::failed(id, anchor, provenance, claimed, &e)],
        };
        for r in reports {
            let r = r.with_config(&self.config);
            self.reports.push(if self.opts.timings { r.with_runtime(ms) } else { r });
        }
    }

    fn one<F>(&mut self, id: &str, anchor: &str, provenance: Provenance, claimed: f64, f: F)
    where
        F: FnOnce() -> Result<VerificationReport>,
    {
        self.run(id, anchor, provenance, claimed, || f().map(|r| vec![r]))
    }
}

pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> ReportSet {
    let mut rec = Recorder::new(opts);
    match suite {
        Suite::Constants => constants_suite(&mut rec),
        Suite::Trace => trace_suite(&mut rec),
        Suite::Hls => hls_suite(&mut rec),
        Suite::Fw => fw_suite(&mut rec),
        Suite::Knapp => knapp_suite(&mut rec),
        Suite::Operator => operator_suite(&mut rec),
        Suite::All => {
            constants_suite(&mut rec);
            trace_suite(&mut rec);
            hls_suite(&mut rec);
            fw_suite(&mut rec);
            knapp_suite(&mut rec);
            operator_suite(&mut rec);
        }
    }
    ReportSet::new(rec.config.clone(), rec.reports)
}

fn constants_suite(rec: &mut Recorder) {
    let p = rec.opts.problem;
    let n = rec.opts.order();
    let l0 = trace_constant(&p);
    rec.one("constants.lambda0", "sharp L2 trace constant lambda_0 (Gamma closed form)", Provenance::Paper, l0, || {
        Ok(VerificationReport::new(
            "constants.lambda0",
            "sharp L2 trace constant lambda_0 (Gamma closed form)",
            Provenance::Paper,
            l0,
            ss_star_eigen_numeric(&p, 0, n)?,
            1e-8,
        ))
    });
    let l = hls_constant(&p);
    let anchor = "sharp HLS constant on the sphere, attained by constants";
    rec.one("constants.hls", anchor, Provenance::Paper, l, || {
        // constants are extremisers: L = μ_0 |S|^{1-2/q}
        let (_, q) = exponents(&p);
        let mu0 = funk_hecke_eigen(&ZonalKernel::riesz(&p), p.d(), 0, n)?;
        let v = mu0 * sphere_area(p.d()).powf(1.0 - 2.0 / q);
        Ok(VerificationReport::new("constants.hls", anchor, Provenance::Paper, l, v, 1e-8))
    });
    let c = lp_trace_constant_direct(&p);
    let anchor = "L^p trace constant C(d,s): direct form vs Riesz prefactor times HLS constant";
    rec.one("constants.lp_trace", anchor, Provenance::Derived, c, || {
        Ok(VerificationReport::new("constants.lp_trace", anchor, Provenance::Derived, c, lp_trace_constant_via_hls(&p), 1e-13))
    });
    let anchor = "Hoelder on the sphere is lossless for constants: lambda_0 = C |S|^((2s-1)/(d-1))";
    rec.one("constants.holder", anchor, Provenance::Paper, l0, || {
        let (d, s) = (p.d() as f64, p.s());
        let v = lp_trace_constant(&p)? * sphere_area(p.d()).powf((2.0 * s - 1.0) / (d - 1.0));
        Ok(VerificationReport::new("constants.holder", anchor, Provenance::Paper, l0, v, 1e-12))
    });
    let (pe, qe) = exponents(&p);
    let anchor = "exponents p and q are conjugate";
    rec.one("constants.exponents", anchor, Provenance::Trivial, pe, || {
        Ok(VerificationReport::new("constants.exponents", anchor, Provenance::Trivial, pe, qe / (qe - 1.0), 1e-14))
    });
}

fn trace_suite(rec: &mut Recorder) {
    let p = rec.opts.problem;
    let l0 = trace_constant(&p);
    let anchor = "sharp trace inequality attained by |x|^(2s-d) * dsigma";
    rec.one("trace.ratio", anchor, Provenance::Paper, l0, || {
        Ok(VerificationReport::new("trace.ratio", anchor, Provenance::Paper, l0, trace_ratio_unchecked(&p)?, SHARPNESS_TOLERANCE))
    });
    let anchor = "Weber-Schafheitlin: int J^2 rho^(1-2s) equals the Gamma closed form";
    rec.one("trace.bessel_energy", anchor, Provenance::Derived, l0, || {
        Ok(VerificationReport::new("trace.bessel_energy", anchor, Provenance::Derived, l0, bessel_energy(&p)?, 1e-8))
    });
    let area = sphere_area(p.d());
    let anchor = "far field of the radial profile: u(r) r^(d-2s) -> |S^(d-1)|";
    rec.one("trace.far_field", anchor, Provenance::Trivial, area, || {
        let r = 1e3;
        let v = radial_profile(&p, r, 32)? * r.powf(p.d() as f64 - 2.0 * p.s());
        Ok(VerificationReport::new("trace.far_field", anchor, Provenance::Trivial, area, v, 1e-2))
    });
    if p.d() == 3 {
        let anchor = "d = 3 closed form of the radial profile";
        rec.one("trace.closed_form_d3", anchor, Provenance::Paper, 0.0, || {
            let mut worst: f64 = 0.0;
            for i in 0..=40 {
                let r = 10f64.powf(-2.0 + 0.1 * i as f64);
                let q = radial_profile(&p, r, 32)?;
                let c = closed_form_d3(p.s(), r)?;
                worst = worst.max((q - c).abs());
            }
            Ok(VerificationReport::new("trace.closed_form_d3", anchor, Provenance::Paper, 0.0, worst, 1e-10).absolute())
        });
    }
    let anchor = "perturbing the Fourier profile by 1 + eps rho/(1+rho) lowers the trace quotient";
    rec.run("trace.deficit", anchor, Provenance::Derived, l0, || {
        let mut out = Vec::new();
        let mut deficits = Vec::new();
        for eps in [0.1, 0.3] {
            let q = perturbed_trace_ratio(&p, eps)?;
            deficits.push(l0 - q);
            out.push(
                VerificationReport::new(format!("trace.deficit.eps{eps}"), anchor, Provenance::Derived, l0, q, 0.0)
                    .relation(Relation::Le),
            );
            // strictly below: the deficit must clear rounding by a wide margin
            out.push(
                VerificationReport::new(
                    format!("trace.deficit_positive.eps{eps}"),
                    anchor,
                    Provenance::Derived,
                    1e-10 * l0,
                    l0 - q,
                    0.0,
                )
                .relation(Relation::Ge),
            );
        }
        Ok(out)
    });
}

/// Grid used for the HLS double integral.
pub fn hls_grid(d: usize, resolution: usize) -> Result<SphereGrid> {
    match d {
        2 => circle_grid(8 * resolution),
        3 => product_grid(resolution, 2 * resolution),
        _ => Err(Error::UnsupportedDimension(d)),
    }
}

/// Number of random mixtures tested against the HLS constant.
pub const HLS_SAMPLES: usize = 200;

fn hls_suite(rec: &mut Recorder) {
    let p = rec.opts.problem;
    let d = p.d();
    let l = hls_constant(&p);
    let area = sphere_area(d);

    let anchor = "closed-form chain: <SS*1, 1> = lambda_0 |S| = C |S|^(2/q)";
    rec.one("hls.closed_form_chain", anchor, Provenance::Derived, 0.0, || {
        let (_, q) = exponents(&p);
        let mu0 = funk_hecke_eigen(&ZonalKernel::riesz(&p), d, 0, MU0_ORDER)?;
        let lhs = riesz_prefactor(&p) * mu0 * area;
        let rhs = lp_trace_constant(&p)? * area.powf(2.0 / q);
        Ok(VerificationReport::new("hls.closed_form_chain", anchor, Provenance::Derived, rhs, lhs, 1e-12))
    });
    if d > 3 {
        return;
    }

    let grid = match hls_grid(d, rec.opts.profile.resolution()) {
        Ok(g) => g,
        Err(e) => {
            rec.reports.push(VerificationReport::failed("hls.grid", "sphere grid", Provenance::Trivial, 0.0, &e));
            return;
        }
    };
    let op = match HlsGridOperator::new(&p, &grid, SingularPairPolicy::Subtract) {
        Ok(op) => op,
        Err(e) => {
            rec.reports.push(VerificationReport::failed("hls.operator", "grid HLS operator", Provenance::Trivial, l, &e));
            return;
        }
    };
    let ones = vec![Complex64::new(1.0, 0.0); grid.len()];

    let anchor = "HLS inequality on the sphere: constants attain the sharp constant";
    rec.one("hls.constant_function", anchor, Provenance::Derived, l, || {
        Ok(VerificationReport::new("hls.constant_function", anchor, Provenance::Derived, l, op.quotient(&ones)?, 1e-3))
    });
    let anchor = "HLS inequality on the sphere: the conformal family (1 - x.w)^-(d/2+s-1) attains the sharp constant";
    for r in [0.1, 0.3, 0.5] {
        let id = format!("hls.lieb.r{r}");
        rec.one(&id, anchor, Provenance::Paper, l, || {
            let g = LiebFunction::on_axis(p, r)?;
            Ok(VerificationReport::new(id.as_str(), anchor, Provenance::Paper, l, op.quotient(&sample_lieb(&grid, &g))?, HLS_TOLERANCE))
        });
    }
    let anchor = "no random harmonic mixture exceeds the sharp HLS constant";
    rec.one("hls.random_max", anchor, Provenance::Paper, l, || {
        let mut rng = ChaCha8Rng::seed_from_u64(rec.opts.seed);
        let mut worst = f64::NEG_INFINITY;
        for _ in 0..HLS_SAMPLES {
            let g = random_harmonic_mixture(&grid, &mut rng, 3, 4, 0.6);
            worst = worst.max(op.quotient(&g)?);
        }
        Ok(VerificationReport::new("hls.random_max", anchor, Provenance::Paper, l, worst, HLS_TOLERANCE).relation(Relation::Le))
    });
    let anchor = "zonal harmonic perturbations of the constant fall strictly below the HLS constant";
    rec.run("hls.perturbation", anchor, Provenance::Derived, 0.0, || {
        let deficit = |k: usize, eps: f64| -> Result<f64> {
            let g = sample(&grid, |w| Complex64::new(1.0 + eps * legendre_unchecked(k, d, w[d - 1]), 0.0));
            Ok(l - op.quotient(&g)?)
        };
        // degree 1 is tangent to the conformal family, so its deficit is of higher
        // order; degree 2 sees the spectral gap at second order
        let (a, b) = (deficit(2, 0.05)?, deficit(2, 0.1)?);
        Ok(vec![
            VerificationReport::new("hls.perturbation.degree1", anchor, Provenance::Derived, 0.0, deficit(1, 0.3)?, 0.0)
                .relation(Relation::Ge),
            VerificationReport::new("hls.perturbation.degree2", anchor, Provenance::Derived, 0.0, b, 0.0)
                .relation(Relation::Ge),
            VerificationReport::new("hls.perturbation.quadratic", anchor, Provenance::Derived, 4.0, b / a, 0.05),
        ])
    });
    let anchor = "Euler-Lagrange equation of the HLS functional holds on the conformal family";
    rec.one("hls.el_residual", anchor, Provenance::Paper, 0.0, || {
        let g = LiebFunction::on_axis(p, 0.3)?;
        Ok(VerificationReport::new("hls.el_residual", anchor, Provenance::Paper, 0.0, op.el_residual(&sample_lieb(&grid, &g))?, EL_TOLERANCE))
    });
    // the residual of 1 + w_d / 2 shrinks towards the ends of the s-range, so the
    // claim is separation from the extremiser residual on the same grid
    let anchor = "Euler-Lagrange equation fails off the extremal family (G = 1 + w_d / 2)";
    rec.one("hls.el_non_extremiser", anchor, Provenance::Derived, 0.0, || {
        let lieb = op.el_residual(&sample_lieb(&grid, &LiebFunction::on_axis(p, 0.3)?))?;
        let floor = (100.0 * lieb).min(0.01);
        let g = sample(&grid, |w| Complex64::new(1.0 + 0.5 * w[d - 1], 0.0));
        Ok(VerificationReport::new("hls.el_non_extremiser", anchor, Provenance::Derived, floor, op.el_residual(&g)?, 0.0)
            .relation(Relation::Ge))
    });
    rec.run("lp_trace", "L^p trace inequality on a conformal extremiser", Provenance::Derived, 0.0, || {
        let g = LiebFunction::on_axis(p, 0.3)?;
        let check = lp_trace_check(&p, &grid, &sample_lieb(&grid, &g))?;
        Ok(vec![check.dual, check.eigen])
    });
}

fn fw_suite(rec: &mut Recorder) {
    let p = rec.opts.problem;
    let d = p.d();
    let two_pi_d = (2.0 * PI).powi(d as i32);
    let anchor = "Fang-Wang eigenvalues with and without the (2 pi)^d Plancherel factor";
    rec.one("fw.plancherel", anchor, Provenance::Trivial, two_pi_d, || {
        let v = lambda_fw(&p, 3, true) / lambda_fw(&p, 3, false);
        Ok(VerificationReport::new("fw.plancherel", anchor, Provenance::Trivial, two_pi_d, v, 1e-13))
    });

    if d == 4 && p.s() == 1.0 {
        let anchor = "Fang-Wang eigenvalues are identically 1/2 at (d, s) = (4, 1)";
        rec.one("fw.identity", anchor, Provenance::Paper, 0.0, || {
            let worst = (0..=1000).map(|k| (lambda_fw(&p, k, false) - 0.5).abs()).fold(0.0, f64::max);
            Ok(VerificationReport::new("fw.identity", anchor, Provenance::Paper, 0.0, worst, 1e-12).absolute())
        });
    }

    let theta = ThetaWeight::fang_wang(&p);
    rec.run("fw.extrema", "two-sided Fang-Wang extension constants", Provenance::Paper, 0.0, || {
        let table = eigen_table(&p, &theta, MONOTONE_RANGE)?;
        let mut out = Vec::new();
        let anchor = "Fang-Wang two-sided constants are finite and positive";
        out.push(
            VerificationReport::new("fw.inf_positive", anchor, Provenance::Paper, 0.0, table.inf_value, 0.0)
                .relation(Relation::Ge),
        );
        out.push(
            VerificationReport::new("fw.tail_certified", anchor, Provenance::Derived, 1.0, f64::from(u8::from(table.tail_certified)), 0.0),
        );
        if d == 2 || d == 3 {
            let anchor = "d = 2, 3: Fang-Wang eigenvalues decrease strictly, sup at k = 0, inf the Gamma limit";
            let drops = table.values.windows(2).filter(|w| !(w[1] < w[0])).count();
            out.push(VerificationReport::new("fw.decreasing", anchor, Provenance::Paper, 0.0, drops as f64, 0.0));
            let l0 = lambda_fw(&p, 0, false);
            out.push(VerificationReport::new("fw.sup", anchor, Provenance::Paper, l0, table.sup_value, 1e-14));
            let limit = asymptotic_constant(&p);
            out.push(VerificationReport::new("fw.inf", anchor, Provenance::Paper, limit, table.inf_value, 1e-10));
        }
        Ok(out)
    });
}

fn knapp_suite(rec: &mut Recorder) {
    let p = rec.opts.problem;
    let kmax = rec.opts.kmax().max(CAP_KMAX);
    let (_, qc) = exponents(&p);
    let qs = match rec.opts.q {
        Some(q) => vec![q],
        None => vec![qc, (0.75 * qc).max(1.0), 1.5 * qc],
    };
    let anchor = "Knapp example: log-log slope of the cap quotient is d-2+2s-2(d-1)/q";
    for q in qs {
        let id = format!("knapp.slope.q{q:.6}");
        let predicted = knapp_predicted_slope(&p, q);
        rec.one(&id, anchor, Provenance::Derived, predicted, || {
            let fit = knapp_fit(&p, q, kmax)?;
            Ok(VerificationReport::new(id.as_str(), anchor, Provenance::Derived, predicted, fit.slope, 0.1).absolute())
        });
    }
    let anchor = "Parseval defect of cap expansions decays with kmax";
    rec.one("knapp.parseval_decay", anchor, Provenance::Derived, 0.0, || {
        let defect = |k: usize| -> Result<f64> {
            let cv = cap_coefficients_unchecked(&p, 0.25, k)?;
            Ok(cv.missing.unwrap_or(0.0) / (cv.total + cv.missing.unwrap_or(0.0)))
        };
        let (coarse, fine) = (defect(kmax / 4)?, defect(kmax)?);
        Ok(VerificationReport::new("knapp.parseval_decay", anchor, Provenance::Derived, coarse, fine, 0.0)
            .relation(Relation::Le))
    });
}

/// Knapp fit at `kmax`, doubling the truncation while the smallest cap is unresolved.
fn knapp_fit(p: &Problem, q: f64, kmax: usize) -> Result<crate::operator::KnappFit> {
    let mut k = kmax;
    loop {
        match knapp_slope(p, q, &KNAPP_DELTAS, k) {
            Err(Error::Resolution { .. }) if k < 8 * kmax => k *= 2,
            other => return other,
        }
    }
}

fn operator_suite(rec: &mut Recorder) {
    let p = rec.opts.problem;
    let n = rec.opts.order();
    let kmax = rec.opts.kmax();
    let kcheck = kmax.min(50);

    let anchor = "Funk-Hecke quadrature of SS* reproduces the Gamma closed form of lambda_k";
    rec.one("operator.funk_hecke", anchor, Provenance::Paper, 0.0, || {
        let mut worst: f64 = 0.0;
        for k in 0..=kcheck {
            let exact = lambda_base(&p, k);
            worst = worst.max(((ss_star_eigen_numeric(&p, k, n)? - exact) / exact).abs());
        }
        Ok(VerificationReport::new("operator.funk_hecke", anchor, Provenance::Paper, 0.0, worst, 1e-8))
    });
    let anchor = "lambda_k decreases strictly";
    rec.one("operator.strict_decrease", anchor, Provenance::Paper, 0.0, || {
        let v = lambda_recurrence(&p, MONOTONE_RANGE);
        let bad = v.windows(2).filter(|w| !(w[1] < w[0])).count();
        Ok(VerificationReport::new("operator.strict_decrease", anchor, Provenance::Paper, 0.0, bad as f64, 0.0))
    });
    let anchor = "(1+k)^(2s-1) lambda_k stays in a positive bounded envelope";
    rec.run("operator.envelope", anchor, Provenance::Paper, 0.0, || {
        let env = stirling_envelope(&p, MONOTONE_RANGE)?;
        let (lo, hi) = env.global();
        Ok(vec![
            VerificationReport::new("operator.envelope.lower", anchor, Provenance::Paper, 0.0, lo, 0.0).relation(Relation::Ge),
            VerificationReport::new("operator.envelope.limit", anchor, Provenance::Derived, asymptotic_constant(&p), env.limit, 1e-14),
            VerificationReport::new("operator.envelope.upper", anchor, Provenance::Paper, hi, env.big_c, 0.0).relation(Relation::Le),
        ])
    });

    let anchor = "energy sum lies between inf and sup of the eigenvalues times the L2 mass";
    rec.run("operator.sandwich", anchor, Provenance::Paper, 0.0, || {
        let mut rng = ChaCha8Rng::seed_from_u64(rec.opts.seed ^ 0x5eed);
        let mut out = Vec::new();
        for theta in [ThetaWeight::One, ThetaWeight::fang_wang(&p)] {
            let table = eigen_table(&p, &theta, kmax)?;
            let mut bad = 0usize;
            let mut slack = f64::INFINITY;
            let (l0, l1) = (lambda_base(&p, 0), lambda_base(&p, 1));
            for _ in 0..1000 {
                let energies: Vec<f64> = (0..=kmax)
                    .map(|_| if rng.gen_bool(0.3) { rng.gen::<f64>() } else { 0.0 })
                    .collect();
                let cv = CoeffVector::new(p, energies)?;
                if cv.total == 0.0 {
                    continue;
                }
                let e = energy_sum(&p, &theta, &cv)?;
                let tol = 1e-12 * e.abs();
                if e < table.inf_value * cv.total - tol || e > table.sup_value * cv.total + tol {
                    bad += 1;
                }
                if theta == ThetaWeight::One && cv.energies[1] > 0.0 {
                    slack = slack.min((l0 * cv.total - e) / ((l0 - l1) * cv.energies[1]));
                }
            }
            out.push(VerificationReport::new(
                format!("operator.sandwich.{}", theta.tag()),
                anchor,
                Provenance::Paper,
                0.0,
                bad as f64,
                0.0,
            ));
            if slack.is_finite() {
                out.push(
                    VerificationReport::new(
                        "operator.strict_witness",
                        "energies off k = 0 cost at least (lambda_0 - lambda_1) per unit of degree-1 mass",
                        Provenance::Paper,
                        1.0,
                        slack,
                        1e-12,
                    )
                    .relation(Relation::Ge),
                );
            }
        }
        Ok(out)
    });

    if p.d() > 3 {
        return;
    }
    let anchor = "power iteration on the zonal operator recovers lambda_0 with a constant eigenvector";
    rec.run("operator.power", anchor, Provenance::Paper, trace_constant(&p), || {
        let m = zonal_operator(&p, rec.opts.profile.zonal_order())?;
        let (l0, g0) = power_iteration(&m, 1e-12, 10_000)?;
        let w = &m.rule.weights;
        let (sw, sg, sgg) = w.iter().zip(&g0).fold((0.0, 0.0, 0.0), |(a, b, c), (w, g)| (a + w, b + w * g, c + w * g * g));
        let cosine = sg.abs() / (sw * sgg).sqrt();
        let (l1, _) = power_iteration_deflated(&m, &[g0], 1e-10, 20_000)?;
        Ok(vec![
            VerificationReport::new("operator.power.lambda0", anchor, Provenance::Paper, trace_constant(&p), l0, 1e-4),
            VerificationReport::new("operator.power.cosine", anchor, Provenance::Paper, 1.0, cosine, 1e-6).relation(Relation::Ge),
            VerificationReport::new("operator.power.lambda1", anchor, Provenance::Paper, lambda_base(&p, 1), l1, 1e-3),
        ])
    });
}
