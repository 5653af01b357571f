//! `sharptrace`: sharp constants, eigenvalue tables, extremiser profiles and
//! verification suites from the command line.
//!
//! Exit codes: 0 when every check passes, 1 when a verification fails, 2 on usage
//! or domain errors.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use sharptrace::constants::{
    duplication_residual, eigen_table, exponents, hls_constant, holder_residual, lambda_theta,
    lp_trace_constant, trace_constant, Problem, ThetaWeight,
};
use sharptrace::extremal::{closed_form_d3, fourier_profile, radial_profile};
use sharptrace::num_complex::Complex64;
use sharptrace::operator::ss_star_eigen_numeric;
use sharptrace::report::ReportSet;
use sharptrace::verify::{run_suite, Profile, Suite, VerifyOptions};

/// Relative gap allowed between closed-form and quadrature eigenvalues.
const EIGEN_GAP_TOLERANCE: f64 = 1e-8;
/// Order of the zonal rule behind each point of a radial profile.
const PROFILE_ORDER: usize = 32;

#[derive(Parser)]
#[command(name = "sharptrace", version, about = "Sharp trace constants on the sphere, with independent checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Dimension of the ambient space (the sphere is S^{d-1}).
    #[arg(long)]
    d: usize,
    /// Sobolev order, 1/2 < s < d/2.
    #[arg(long, allow_negative_numbers = true)]
    s: f64,
    /// Emit JSON instead of human-readable text or CSV.
    #[arg(long)]
    json: bool,
    /// Write the machine-readable output to this file.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Accuracy profile, fast or full. SHARPTRACE_PROFILE takes precedence.
    #[arg(long, default_value = "fast")]
    profile: String,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Truncation degree of eigenvalue tables.
    #[arg(long)]
    kmax: Option<usize>,
    /// Quadrature order for Funk-Hecke integrals.
    #[arg(long)]
    order: Option<usize>,
    /// Record per-check runtimes in reports (breaks byte-for-byte reproducibility).
    #[arg(long)]
    timings: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Sharp constants lambda_0, L(d,s), C(d,s), the exponents p and q, and consistency residuals.
    Constants(Common),
    /// Eigenvalue table lambda_k(theta) against Funk-Hecke quadrature.
    Eigen {
        #[command(flatten)]
        common: Common,
        /// one, fang-wang, power:<a>, or user:<csv with rho,re,im rows>.
        #[arg(long, default_value = "one")]
        theta: String,
    },
    /// Run a verification suite: trace, hls, fw, knapp, operator, constants or all.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "all")]
        suite: String,
        /// Restrict the Knapp suite to one Lebesgue exponent.
        #[arg(long)]
        q: Option<f64>,
    },
    /// Radial profile u(r) of the extremiser and its Fourier-side profile.
    Profile {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0.0)]
        rmin: f64,
        #[arg(long, default_value_t = 3.0)]
        rmax: f64,
        #[arg(long, default_value_t = 61)]
        npts: usize,
        #[arg(long, default_value_t = 20.0)]
        rho_max: f64,
    },
}

/// Failure classes mapped to exit codes.
enum Failure {
    Usage(anyhow::Error),
    Verification,
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(e)
    }
}

impl From<sharptrace::Error> for Failure {
    fn from(e: sharptrace::Error) -> Self {
        Failure::Usage(e.into())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Constants(c) => cmd_constants(&c),
        Command::Eigen { common, theta } => cmd_eigen(&common, &theta),
        Command::Verify { common, suite, q } => cmd_verify(&common, &suite, q),
        Command::Profile { common, rmin, rmax, npts, rho_max } => {
            cmd_profile(&common, rmin, rmax, npts, rho_max)
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn problem(c: &Common) -> Result<Problem, Failure> {
    Ok(Problem::new(c.d, c.s)?)
}

fn profile(c: &Common) -> Result<Profile, Failure> {
    let name = std::env::var("SHARPTRACE_PROFILE").unwrap_or_else(|_| c.profile.clone());
    Ok(name.parse::<Profile>()?)
}

fn options(c: &Common) -> Result<VerifyOptions, Failure> {
    let mut o = VerifyOptions::new(problem(c)?, profile(c)?);
    o.seed = c.seed;
    o.order = c.order;
    o.kmax = c.kmax;
    o.timings = c.timings;
    if o.order() == 0 || o.kmax() == 0 {
        return Err(anyhow!("--order and --kmax must be positive").into());
    }
    Ok(o)
}

fn write_out(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

/// Writes to stdout; a closed pipe (e.g. `| head`) is not an error.
fn stdout(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|_| out.flush());
}

/// Prints `text` to stdout unless `--out` is given, in which case it goes to the file.
fn emit(c: &Common, text: &str) -> Result<(), Failure> {
    match &c.out {
        Some(path) => write_out(path, text),
        None => {
            stdout(text);
            Ok(())
        }
    }
}

fn summary(set: &ReportSet) -> String {
    let mut s = String::new();
    for r in &set.reports {
        let _ = writeln!(
            s,
            "{}  {:<34} computed {:<24.16e} claimed {:<24.16e} rel {:.2e}  tol {:.1e}{}",
            if r.pass { "PASS" } else { "FAIL" },
            r.check_id,
            r.computed,
            r.claimed,
            r.rel_error,
            r.tolerance,
            r.note.as_deref().map(|n| format!("  ({n})")).unwrap_or_default(),
        );
    }
    let passed = set.reports.iter().filter(|r| r.pass).count();
    let _ = writeln!(s, "{passed}/{} checks passed", set.reports.len());
    s
}

fn finish(c: &Common, set: &ReportSet, human_head: &str) -> Result<(), Failure> {
    let text = set.to_json() + "\n";
    if c.json {
        stdout(&text);
    } else {
        stdout(&format!("{human_head}{}", summary(set)));
    }
    if let Some(path) = &c.out {
        write_out(path, &text)?;
    }
    if set.all_pass() {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn cmd_constants(c: &Common) -> Result<(), Failure> {
    let opts = options(c)?;
    let p = opts.problem;
    let (pe, qe) = exponents(&p);
    let mut head = String::new();
    let _ = writeln!(head, "{p}");
    let _ = writeln!(head, "lambda_0   = {:.16e}", trace_constant(&p));
    let _ = writeln!(head, "L(d,s)     = {:.16e}", hls_constant(&p));
    let _ = writeln!(head, "C(d,s)     = {:.16e}", lp_trace_constant(&p)?);
    let _ = writeln!(head, "p          = {pe:.16e}");
    let _ = writeln!(head, "q          = {qe:.16e}");
    let _ = writeln!(head, "duplication residual = {:.3e}", duplication_residual(&p));
    let _ = writeln!(head, "holder residual      = {:.3e}", holder_residual(&p)?);
    head.push('\n');
    finish(c, &run_suite(Suite::Constants, &opts), &head)
}

fn cmd_verify(c: &Common, suite: &str, q: Option<f64>) -> Result<(), Failure> {
    let suite: Suite = suite.parse()?;
    let mut opts = options(c)?;
    if let Some(q) = q {
        if !(q >= 1.0) || !q.is_finite() {
            return Err(anyhow!("--q must be a finite exponent >= 1, got {q}").into());
        }
    }
    opts.q = q;
    let head = format!("{} at {}, profile {}\n", suite_name(suite), opts.problem, opts.profile);
    finish(c, &run_suite(suite, &opts), &head)
}

fn suite_name(s: Suite) -> &'static str {
    match s {
        Suite::Constants => "constants",
        Suite::Trace => "trace",
        Suite::Hls => "hls",
        Suite::Fw => "fw",
        Suite::Knapp => "knapp",
        Suite::Operator => "operator",
        Suite::All => "all",
    }
}

fn parse_theta(arg: &str, p: &Problem) -> anyhow::Result<ThetaWeight> {
    let arg = arg.trim();
    match arg.to_ascii_lowercase().as_str() {
        "one" => return Ok(ThetaWeight::One),
        "fang-wang" | "fangwang" | "fw" => return Ok(ThetaWeight::fang_wang(p)),
        _ => {}
    }
    if let Some(a) = arg.strip_prefix("power:") {
        let a: f64 = a.parse().with_context(|| format!("bad exponent in '{arg}'"))?;
        if !a.is_finite() {
            bail!("power exponent must be finite");
        }
        return Ok(ThetaWeight::Power { a });
    }
    if let Some(path) = arg.strip_prefix("user:") {
        let text = fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
        let mut points = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with("rho") {
                continue;
            }
            let cols: Vec<&str> = line.split(',').map(str::trim).collect();
            let num = |j: usize| -> anyhow::Result<f64> {
                cols.get(j)
                    .unwrap_or(&"0")
                    .parse::<f64>()
                    .with_context(|| format!("{path}:{}: bad number", i + 1))
            };
            points.push((num(0)?, Complex64::new(num(1)?, num(2)?)));
        }
        return Ok(ThetaWeight::user(points)?);
    }
    bail!("unknown theta '{arg}' (expected one, fang-wang, power:<a> or user:<file>)")
}

fn cmd_eigen(c: &Common, theta: &str) -> Result<(), Failure> {
    let opts = options(c)?;
    let p = opts.problem;
    let theta = parse_theta(theta, &p)?;
    let kmax = opts.kmax();
    let order = opts.order();
    let table = eigen_table(&p, &theta, kmax)?;

    // quadrature is exact in the polynomial part up to degree 2 order - 1
    let numeric_max = kmax.min(order);
    let mut rows = Vec::with_capacity(kmax + 1);
    let mut worst: f64 = 0.0;
    for (k, &v) in table.values.iter().enumerate() {
        let numeric = if k <= numeric_max {
            let m = lambda_theta(&p, &theta, k)? / sharptrace::constants::lambda_base(&p, k);
            Some(ss_star_eigen_numeric(&p, k, order)? * m)
        } else {
            None
        };
        let gap = numeric.map(|n| ((n - v) / v).abs());
        if let Some(g) = gap {
            worst = worst.max(if g.is_nan() { f64::INFINITY } else { g });
        }
        rows.push((k, v, numeric, gap));
    }

    let text = if c.json {
        let json_rows: Vec<_> = rows
            .iter()
            .map(|(k, v, n, g)| json!({"k": k, "lambda": v, "lambda_numeric": n, "rel_gap": g}))
            .collect();
        let doc = json!({
            "d": p.d(),
            "s": p.s(),
            "theta": theta.tag(),
            "kmax": kmax,
            "order": order,
            "rows": json_rows,
            "summary": {
                "sup": table.sup_value,
                "inf": table.inf_value,
                "argmax": table.argmax,
                "argmin": table.argmin,
                "tail": format!("{:?}", table.tail).to_lowercase(),
                "tail_certified": table.tail_certified,
                "max_rel_gap": worst,
            },
        });
        serde_json::to_string_pretty(&doc).map_err(anyhow::Error::from)? + "\n"
    } else {
        let mut s = String::from("k,lambda,lambda_numeric,rel_gap\n");
        for (k, v, n, g) in &rows {
            let opt = |x: &Option<f64>| x.map(|x| format!("{x:.16e}")).unwrap_or_default();
            let _ = writeln!(s, "{k},{v:.16e},{},{}", opt(n), opt(g));
        }
        s
    };
    emit(c, &text)?;
    if !c.json {
        let idx = |v: &[usize]| {
            if v.is_empty() {
                "none (attained only in the limit k -> infinity)".to_string()
            } else if v.len() == table.values.len() {
                "all k".to_string()
            } else {
                format!("{v:?}")
            }
        };
        eprintln!("sup = {:.16e} at k in {}", table.sup_value, idx(&table.argmax));
        eprintln!("inf = {:.16e} at k in {}", table.inf_value, idx(&table.argmin));
        eprintln!(
            "tail: {:?} ({}); max quadrature gap {:.2e} over k <= {numeric_max}",
            table.tail,
            if table.tail_certified { "certified" } else { "not certified" },
            worst
        );
    }
    if worst > EIGEN_GAP_TOLERANCE {
        eprintln!("closed form and quadrature differ by {worst:.3e} > {EIGEN_GAP_TOLERANCE:.0e}");
        return Err(Failure::Verification);
    }
    Ok(())
}

fn cmd_profile(c: &Common, rmin: f64, rmax: f64, npts: usize, rho_max: f64) -> Result<(), Failure> {
    let p = problem(c)?;
    if !(rmin >= 0.0 && rmin < rmax && rmax.is_finite()) {
        return Err(anyhow!("invalid radius range: need 0 <= rmin < rmax, got [{rmin}, {rmax}]").into());
    }
    if npts < 2 {
        return Err(anyhow!("--npts must be at least 2").into());
    }
    if !(rho_max > 0.0 && rho_max.is_finite()) {
        return Err(anyhow!("--rho-max must be positive").into());
    }
    let mut rows = Vec::with_capacity(npts);
    for i in 0..npts {
        let r = rmin + (rmax - rmin) * i as f64 / (npts - 1) as f64;
        let u = radial_profile(&p, r, PROFILE_ORDER)?;
        let closed = if p.d() == 3 && r > 0.0 { Some(closed_form_d3(p.s(), r)?) } else { None };
        let rho = rho_max * (i + 1) as f64 / npts as f64;
        rows.push((r, u, closed, rho, fourier_profile(&p, rho)?));
    }
    let text = if c.json {
        let json_rows: Vec<_> = rows
            .iter()
            .map(|(r, u, cf, rho, f)| json!({"r": r, "u": u, "u_closed_form": cf, "rho": rho, "fourier": f}))
            .collect();
        let doc = json!({"d": p.d(), "s": p.s(), "rows": json_rows});
        serde_json::to_string_pretty(&doc).map_err(anyhow::Error::from)? + "\n"
    } else {
        let mut s = String::from("r,u,u_closed_form,rho,fourier\n");
        for (r, u, cf, rho, f) in &rows {
            let cf = cf.map(|x| format!("{x:.16e}")).unwrap_or_default();
            let _ = writeln!(s, "{r:.16e},{u:.16e},{cf},{rho:.16e},{f:.16e}");
        }
        s
    };
    emit(c, &text)
}
