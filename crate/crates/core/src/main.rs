//! Command-line front end: constants, trace and eigenvalue bounds, exact
//! spectra, and the verification suites.

mod output;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use output::{json_number, Format, NumberStyle, Output};
use spectral_bounds::constants::{angular_normalizer, c_bounds, lieb_thirring, round_down, round_up, SIGMA_MIN};
use spectral_bounds::domain::{Domain, DomainSpec};
use spectral_bounds::eigen_bounds::{
    default_alpha, explicit_2d, implicit_bound, k_star_lower, k_star_upper, krahn_szego, li_yau, next_integer_above,
    optimize_alpha,
};
use spectral_bounds::geometry::{perimeter_lower_bound, ConvexPolygon};
use spectral_bounds::numerics::Tolerance;
use spectral_bounds::spectra::{nth_eigenvalue, riesz_mean};
use spectral_bounds::trace_bounds::{
    berezin, berezin_proved, curvature_bound, improved, integral_remainder_bound, product_bound, ConstantChoice,
    Regime, SpectralParams, TraceBoundResult,
};
use spectral_bounds::verify::{
    coarea_run, crossover_check, lambda_star_run, log_grid, oracle_domains, perimeter_property_run, reproduce_table1,
    reproduce_table2, verify_eigen, verify_trace, VerificationReport, TABLE1_REFERENCE, TABLE2_REFERENCE,
};
use spectral_bounds::{Error, Result};

/// Environment variable overriding the absolute quadrature tolerance.
const TOL_ENV: &str = "SPECTRAL_BOUNDS_TOL";

#[derive(Parser)]
#[command(
    name = "spectral-bounds",
    version,
    about = "Semiclassical bounds for Dirichlet-Laplacian eigenvalues on convex domains"
)]
struct Cli {
    #[command(flatten)]
    out: OutputArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value = "table", global = true)]
    format: Format,

    /// Fixed decimal places instead of 12 significant digits
    #[arg(long, global = true)]
    decimals: Option<usize>,

    /// Omit the metadata block from JSON output
    #[arg(long, global = true)]
    no_meta: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Lieb–Thirring constant, sphere normaliser and bounds on C(σ, n)
    Constants {
        #[arg(long, default_value_t = 1.5)]
        sigma: f64,
        #[arg(long, default_value_t = 2)]
        dim: usize,
    },
    /// Bounds on C(σ, n) for σ ∈ {3/2, 2, 5/2, 3}, n = 2..6, beside the reference values
    Table1,
    /// Dimension-only bounds on k* and k_* for n = 2..8
    Table2,
    /// Upper bound on the Riesz mean Tr(−Δ − Λ)^σ_−
    TraceBound(TraceArgs),
    /// Lower bound on the k-th eigenvalue
    EigenBound(EigenArgs),
    /// Exact eigenvalues up to a level
    Spectrum {
        #[arg(long)]
        domain: DomainSpec,
        #[arg(long)]
        lambda_max: f64,
    },
    /// Run a verification suite; exits with status 1 if any check fails
    Verify(VerifyArgs),
    /// Geometric quantities of a domain
    Geometry {
        #[arg(long)]
        domain: DomainSpec,
        /// Distance t of the inner parallel set {x : d(x, ∂Ω) > t}
        #[arg(long)]
        inner_parallel: Option<f64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum TraceMethod {
    Berezin,
    Improved,
    Integral,
    Curvature,
    Product,
}

#[derive(Args)]
struct TraceArgs {
    #[arg(long, value_enum, default_value = "improved")]
    method: TraceMethod,
    #[arg(long, default_value_t = 1.5)]
    sigma: f64,
    /// One or more levels, comma separated
    #[arg(long, value_delimiter = ',', required = true)]
    lambda: Vec<f64>,
    #[arg(long)]
    domain: DomainSpec,
    /// Constant in the boundary term (default: the rigorous lower bound)
    #[arg(long)]
    c: Option<f64>,
    /// Lower bound on the principal curvature radii (curvature method)
    #[arg(long)]
    k_radius: Option<f64>,
    /// Add the exact Riesz mean (domains with an exact spectrum)
    #[arg(long)]
    exact: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum EigenMethod {
    Liyau,
    KrahnSzego,
    Implicit,
    Explicit2d,
}

#[derive(Args)]
struct EigenArgs {
    #[arg(long, value_enum, default_value = "implicit")]
    method: EigenMethod,
    /// One or more indices, comma separated
    #[arg(long, value_delimiter = ',', required = true)]
    k: Vec<usize>,
    #[arg(long)]
    domain: DomainSpec,
    /// Mixing parameter in (0, 1); default 3/(n+3)
    #[arg(long, conflicts_with = "optimize_alpha")]
    alpha: Option<f64>,
    /// Choose α per k to maximise the bound
    #[arg(long)]
    optimize_alpha: bool,
    #[arg(long)]
    c: Option<f64>,
    /// Add the exact eigenvalue (domains with an exact spectrum)
    #[arg(long)]
    exact: bool,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Suite {
    Trace,
    Eigen,
    Perimeter,
    Tables,
    All,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    suite: Suite,
    #[arg(long, default_value_t = 20_240_229)]
    seed: u64,
    /// Random polygons in the perimeter suite
    #[arg(long, default_value_t = 500)]
    trials: usize,
    /// Largest eigenvalue index in the eigen suite
    #[arg(long, default_value_t = 200)]
    k_max: usize,
    /// Restrict the trace and eigen suites to these domains
    #[arg(long, value_delimiter = ';')]
    domain: Vec<DomainSpec>,
    /// Emit every check instead of one summary line per report
    #[arg(long)]
    rows: bool,
}

/// Quadrature tolerance, with the environment override applied.
fn tolerance() -> Result<Tolerance> {
    match std::env::var(TOL_ENV) {
        Ok(v) => {
            let abs: f64 = v.trim().parse().map_err(|_| Error::Parse(format!("{TOL_ENV}={v:?} is not a number")))?;
            Tolerance::default().with_abs(abs)
        }
        Err(_) => Ok(Tolerance::default()),
    }
}

/// The constant for the boundary term: the user's value, or the lower bound
/// at the configured tolerance.
fn constant(user: Option<f64>, sigma: f64, dim: usize) -> Result<ConstantChoice> {
    let c = match user {
        Some(c) => ConstantChoice::Value(c),
        None => ConstantChoice::Value(c_bounds(sigma, dim, tolerance()?)?.lower),
    };
    c.resolve(sigma, dim)?;
    Ok(c)
}

fn num(x: f64) -> Value {
    json_number(x)
}

fn constants(sigma: f64, dim: usize) -> Result<Output> {
    let mut out = Output::new(
        "constants",
        &["sigma", "dim", "lieb_thirring", "angular_normalizer", "c_lower", "c_upper", "quad_error", "berezin_proved"],
    );
    let cn = if dim >= 2 { num(angular_normalizer(dim)?) } else { Value::Null };
    let (lower, upper, err) = if sigma >= SIGMA_MIN && dim >= 2 {
        let b = c_bounds(sigma, dim, tolerance()?)?;
        (num(b.lower), num(b.upper), num(b.quad_error))
    } else {
        (Value::Null, Value::Null, Value::Null)
    };
    out.push(vec![
        num(sigma),
        json!(dim),
        num(lieb_thirring(sigma, dim)?),
        cn,
        lower,
        upper,
        err,
        json!(berezin_proved(sigma)),
    ]);
    Ok(out)
}

fn table1() -> Result<(Output, bool)> {
    let tol = tolerance()?;
    let mut out = Output::new(
        "table1",
        &["sigma", "n", "upper", "upper_4dp", "upper_reference", "lower", "lower_4dp", "lower_reference", "quad_error"],
    );
    for (sigma, entries) in TABLE1_REFERENCE {
        for (i, (up, low)) in entries.into_iter().enumerate() {
            let b = c_bounds(sigma, i + 2, tol)?;
            out.push(vec![
                num(sigma),
                json!(i + 2),
                num(b.upper),
                num(round_up(b.upper, 4)),
                num(up),
                num(b.lower),
                num(round_down(b.lower, 4)),
                num(low),
                num(b.quad_error),
            ]);
        }
    }
    let rep = reproduce_table1(4, tol)?;
    out.summarize("passed", json!(rep.passed));
    out.summarize("rounding", json!("upper bounds rounded up, lower bounds rounded down"));
    Ok((out, rep.passed))
}

fn table2() -> Result<(Output, bool)> {
    let tol = tolerance()?;
    let mut out = Output::new(
        "table2",
        &[
            "n",
            "c_lower",
            "c_4dp",
            "k_star_raw",
            "k_star",
            "k_star_reference",
            "k_star_unrounded_c",
            "k_sub_raw",
            "k_sub",
            "k_sub_reference",
        ],
    );
    for (n, ks_reference, ksub_reference) in TABLE2_REFERENCE {
        let c = c_bounds(SIGMA_MIN, n, tol)?.lower;
        let floored = round_down(c, 4);
        let ks = k_star_lower(n, floored)?;
        let ksub = k_star_upper(n)?;
        out.push(vec![
            json!(n),
            num(c),
            num(floored),
            num(ks),
            json!(next_integer_above(ks)),
            json!(ks_reference),
            json!(next_integer_above(k_star_lower(n, c)?)),
            num(ksub),
            json!(ksub.ceil() as u64),
            json!(ksub_reference),
        ]);
    }
    let rep = reproduce_table2(tol)?;
    out.summarize("passed", json!(rep.passed));
    Ok((out, rep.passed))
}

fn trace_bound(a: &TraceArgs) -> Result<Output> {
    let domain = Domain::new(a.domain.clone())?;
    let m = domain.metrics();
    let mut columns = vec!["method", "domain", "sigma", "lambda", "value", "regime", "leading_term", "remainder_term"];
    if a.exact {
        columns.push("exact");
    }
    let mut out = Output::new("trace-bound", &columns);
    let spectrum = match a.exact {
        true => Some(domain.spectrum(a.lambda.iter().copied().fold(0.0, f64::max))?),
        false => None,
    };
    for &lambda in &a.lambda {
        let params = SpectralParams::new(a.sigma, m.dim(), lambda)?;
        let r: TraceBoundResult = match a.method {
            TraceMethod::Berezin => {
                let v = berezin(&params, m)?;
                TraceBoundResult { value: v, regime: Regime::Bounded, leading_term: v, remainder_term: 0.0 }
            }
            TraceMethod::Improved => improved(&params, m, constant(a.c, a.sigma, m.dim())?)?,
            TraceMethod::Integral => integral_remainder_bound(&params, m)?,
            TraceMethod::Curvature => {
                let k = a.k_radius.or(domain.curvature_radius()).ok_or_else(|| {
                    Error::InvalidParameter("the curvature method needs --k-radius for this domain".into())
                })?;
                curvature_bound(&params, m, k)?
            }
            TraceMethod::Product => {
                let (f1, f2) = domain.factors().ok_or_else(|| {
                    Error::InvalidParameter("the product method needs a product:(A)x(B) domain".into())
                })?;
                let (convex, other) = if f1.metrics().dim() >= 2 { (f1, f2) } else { (f2, f1) };
                let (n1, om) = (convex.metrics().dim(), other.metrics());
                let c = constant(a.c, a.sigma + 0.5 * om.dim() as f64, n1)?;
                product_bound(&params, convex.metrics(), om.volume(), om.dim(), c)?
            }
        };
        let regime = serde_json::to_value(r.regime).map_err(Error::from)?;
        let mut row = vec![
            json!(method_name(a.method)),
            json!(domain.label()),
            num(a.sigma),
            num(lambda),
            num(r.value),
            regime,
            num(r.leading_term),
            num(r.remainder_term),
        ];
        if let Some(s) = &spectrum {
            row.push(num(riesz_mean(s, a.sigma, lambda)?));
        }
        out.push(row);
    }
    Ok(out)
}

fn method_name(m: TraceMethod) -> &'static str {
    match m {
        TraceMethod::Berezin => "berezin",
        TraceMethod::Improved => "improved",
        TraceMethod::Integral => "integral",
        TraceMethod::Curvature => "curvature",
        TraceMethod::Product => "product",
    }
}

fn eigen_bound(a: &EigenArgs) -> Result<Output> {
    let domain = Domain::new(a.domain.clone())?;
    let m = domain.metrics();
    let n = m.dim();
    let mut columns = vec!["method", "domain", "k", "alpha", "value"];
    if a.exact {
        columns.push("exact");
    }
    let mut out = Output::new("eigen-bound", &columns);
    let spectrum = match a.exact {
        true => Some(domain.spectrum_with_at_least(a.k.iter().copied().max().unwrap_or(1))?),
        false => None,
    };
    let needs_c = matches!(a.method, EigenMethod::Implicit | EigenMethod::Explicit2d);
    let c = if needs_c { constant(a.c, SIGMA_MIN, n)? } else { ConstantChoice::Lower };
    for &k in &a.k {
        let alpha = match (needs_c, a.optimize_alpha) {
            (false, _) => None,
            (true, true) => Some(optimize_alpha(k, m, c)?.0),
            (true, false) => Some(a.alpha.unwrap_or_else(|| default_alpha(n))),
        };
        let (name, value) = match a.method {
            EigenMethod::Liyau => ("liyau", li_yau(k, m)?),
            EigenMethod::KrahnSzego => ("krahn-szego", krahn_szego(m)?),
            EigenMethod::Implicit => ("implicit", implicit_bound(k, m, alpha.unwrap_or_default(), c)?),
            EigenMethod::Explicit2d => ("explicit2d", explicit_2d(k, m, alpha.unwrap_or_default(), c)?),
        };
        let mut row = vec![json!(name), json!(domain.label()), json!(k), alpha.map_or(Value::Null, num), num(value)];
        if let Some(s) = &spectrum {
            row.push(num(nth_eigenvalue(s, k)?));
        }
        out.push(row);
    }
    if matches!(a.method, EigenMethod::KrahnSzego) {
        out.summarize("note", json!("valid for k >= 2"));
    }
    Ok(out)
}

fn spectrum(spec: &DomainSpec, lambda_max: f64) -> Result<Output> {
    let s = Domain::new(spec.clone())?.spectrum(lambda_max)?;
    let mut out = Output::new("spectrum", &["k", "eigenvalue"]);
    for (i, &l) in s.eigenvalues().iter().enumerate() {
        out.push(vec![json!(i + 1), num(l)]);
    }
    out.summarize("count", json!(s.len()));
    out.summarize("lambda_max", num(s.lambda_max()));
    Ok(out)
}

fn geometry(spec: &DomainSpec, t: Option<f64>) -> Result<Output> {
    let domain = Domain::new(spec.clone())?;
    let m = domain.metrics();
    let mut out = Output::new(
        "geometry",
        &["domain", "dim", "volume", "surface", "inradius", "width", "zero_region_threshold", "isoperimetric_ratio"],
    );
    out.push(vec![
        json!(domain.label()),
        json!(m.dim()),
        num(m.volume()),
        num(m.surface()),
        num(m.inradius()),
        num(m.width()),
        num(m.zero_region_threshold()),
        num(m.isoperimetric_ratio()),
    ]);
    if let Some(t) = t {
        let (area, perimeter) = match domain.spec() {
            DomainSpec::Disk(r) => {
                let s = (r - t).max(0.0);
                (std::f64::consts::PI * s * s, 2.0 * std::f64::consts::PI * s)
            }
            DomainSpec::Box(sides) if sides.len() == 2 => {
                let p = ConvexPolygon::new(vec![[0.0, 0.0], [sides[0], 0.0], [sides[0], sides[1]], [0.0, sides[1]]])?;
                let body = p.inner_parallel(t)?;
                (body.area(), body.perimeter())
            }
            DomainSpec::Polygon(_) => {
                let body = domain.polygon().expect("polygon domain").inner_parallel(t)?;
                (body.area(), body.perimeter())
            }
            _ => {
                return Err(Error::InvalidParameter(
                    "--inner-parallel supports polygon, disk and two-dimensional box domains".into(),
                ))
            }
        };
        let bound = perimeter_lower_bound(m, t)?;
        out.summarize("t", num(t));
        out.summarize("inner_parallel_area", num(area));
        out.summarize("inner_parallel_perimeter", num(perimeter));
        out.summarize("perimeter_lower_bound", num(bound));
        out.summarize("margin", num(perimeter - bound));
    }
    Ok(out)
}

fn verify(a: &VerifyArgs) -> Result<(Output, bool)> {
    let tol = tolerance()?;
    let domains = if a.domain.is_empty() {
        oracle_domains()
    } else {
        a.domain.iter().cloned().map(Domain::new).collect::<Result<Vec<_>>>()?
    };
    let run = |s: Suite| a.suite == s || a.suite == Suite::All;
    let mut reports: Vec<(String, VerificationReport)> = Vec::new();
    if run(Suite::Tables) {
        reports.push(("table1".into(), reproduce_table1(4, tol)?));
        reports.push(("table2".into(), reproduce_table2(tol)?));
    }
    if run(Suite::Trace) {
        for d in &domains {
            let grid = log_grid(d, 50, 200.0)?;
            for sigma in [1.5, 2.0, 3.0] {
                let c = constant(None, sigma, d.metrics().dim())?;
                reports.push((format!("trace sigma={sigma}"), verify_trace(d, sigma, &grid, c)?));
            }
        }
    }
    if run(Suite::Eigen) {
        for d in &domains {
            let n = d.metrics().dim();
            let c = constant(None, SIGMA_MIN, n)?;
            reports.push(("eigen".into(), verify_eigen(d, a.k_max, &[0.2, default_alpha(n), 0.8], c)?));
        }
        if a.domain.is_empty() {
            let disk = Domain::parse("disk:1")?;
            reports.push(("crossover".into(), crossover_check(&disk, 40, 0.6, constant(None, SIGMA_MIN, 2)?)?));
        }
    }
    if run(Suite::Perimeter) {
        reports.push(("perimeter".into(), perimeter_property_run(a.trials, a.seed)?));
        reports.push(("coarea".into(), coarea_run(50, a.seed, 1e-6)?));
        reports.push(("lambda_star".into(), lambda_star_run(20, a.seed, ConstantChoice::Lower)?));
    }
    let passed = reports.iter().all(|(_, r)| r.passed);
    let mut out = if a.rows {
        let mut out = Output::new("verify", &["report", "domain", "row", "x", "exact", "check", "bound", "margin"]);
        for (name, r) in &reports {
            for row in &r.rows {
                for (check, margin) in &row.margins {
                    out.push(vec![
                        json!(name),
                        json!(r.domain_label),
                        json!(row.label),
                        num(row.x),
                        num(row.exact),
                        json!(check),
                        row.bounds.get(check).map_or(Value::Null, |b| num(*b)),
                        num(*margin),
                    ]);
                }
            }
        }
        out
    } else {
        let mut out = Output::new("verify", &["report", "domain", "rows", "worst_margin", "passed"]);
        for (name, r) in &reports {
            out.push(vec![
                json!(name),
                json!(r.domain_label),
                json!(r.rows.len()),
                num(r.worst_margin),
                json!(r.passed),
            ]);
        }
        out
    };
    let failures: Vec<String> = reports
        .iter()
        .flat_map(|(_, r)| r.failures())
        .take(20)
        .map(|f| format!("{} {} x={} {} margin={:e}", f.domain, f.row, f.x, f.check, f.margin))
        .collect();
    out.summarize("passed", json!(passed));
    if !failures.is_empty() {
        out.summarize("failures", json!(failures));
    }
    Ok((out, passed))
}

fn run(cli: &Cli) -> Result<(Output, bool)> {
    match &cli.command {
        Command::Constants { sigma, dim } => Ok((constants(*sigma, *dim)?, true)),
        Command::Table1 => table1(),
        Command::Table2 => table2(),
        Command::TraceBound(a) => Ok((trace_bound(a)?, true)),
        Command::EigenBound(a) => Ok((eigen_bound(a)?, true)),
        Command::Spectrum { domain, lambda_max } => Ok((spectrum(domain, *lambda_max)?, true)),
        Command::Verify(a) => verify(a),
        Command::Geometry { domain, inner_parallel } => Ok((geometry(domain, *inner_parallel)?, true)),
    }
}

/// Bad input exits with 2, like a usage error; numerical failures with 1.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_)
        | Error::InvalidParameter(_)
        | Error::Domain(_)
        | Error::DimensionMismatch { .. }
        | Error::InvalidPolygon(_)
        | Error::Incomplete { .. }
        | Error::Io(_) => 2,
        Error::ToleranceNotMet { .. } | Error::BracketFailure { .. } | Error::NonConvergence(_) => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let style = NumberStyle { decimals: cli.out.decimals };
    match run(&cli) {
        Ok((out, passed)) => {
            let meta = match cli.out.no_meta {
                true => None,
                false => tolerance().ok().map(|t| {
                    json!({"tool": env!("CARGO_PKG_NAME"), "version": env!("CARGO_PKG_VERSION"), "quadrature_abs_tol": num(t.abs_tol)})
                }),
            };
            print!("{}", out.render(cli.out.format, style, meta));
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
