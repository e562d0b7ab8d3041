//! Semiclassical constants and the two-sided bounds on the boundary-term
//! constant C(σ, n).

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{gamma_pos, integrate, ln_gamma, try_integrate, QuadratureResult, Tolerance};

/// Smallest Riesz exponent for which the improved bound is proved.
pub const SIGMA_MIN: f64 = 1.5;

/// Two-sided enclosure `lower <= C(σ, n) <= upper`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundC {
    pub sigma: f64,
    pub dim: usize,
    pub lower: f64,
    pub upper: f64,
    /// Absolute quadrature error bound carried by `lower`.
    pub quad_error: f64,
}

fn check_sigma_dim(sigma: f64, dim: usize, min_sigma: f64, min_dim: usize) -> Result<()> {
    if !(sigma >= min_sigma) || !sigma.is_finite() {
        return Err(Error::InvalidParameter(format!("sigma must be >= {min_sigma}, got {sigma}")));
    }
    if dim < min_dim {
        return Err(Error::InvalidParameter(format!("dimension must be >= {min_dim}, got {dim}")));
    }
    Ok(())
}

/// Ratio Γ(a)/Γ(b) without overflow for large arguments.
fn gamma_ratio(a: f64, b: f64) -> f64 {
    if a.max(b) < 160.0 {
        gamma_pos(a) / gamma_pos(b)
    } else {
        (ln_gamma(a).expect("positive") - ln_gamma(b).expect("positive")).exp()
    }
}

/// L^cl_{σ,n} = Γ(σ+1) / ((4π)^{n/2} Γ(σ+1+n/2)).
pub fn lieb_thirring(sigma: f64, dim: usize) -> Result<f64> {
    check_sigma_dim(sigma, dim, 0.0, 1)?;
    let half = 0.5 * dim as f64;
    Ok(gamma_ratio(sigma + 1.0, sigma + 1.0 + half) / (4.0 * PI).powf(half))
}

/// C_n = 2Γ(n/2) / (√π Γ((n−1)/2)), the reciprocal of ∫₀^{π/2} sin^{n−2}θ dθ.
pub fn angular_normalizer(dim: usize) -> Result<f64> {
    if dim < 2 {
        return Err(Error::InvalidParameter(format!("dimension must be >= 2, got {dim}")));
    }
    let n = dim as f64;
    Ok(2.0 * gamma_ratio(0.5 * n, 0.5 * (n - 1.0)) / PI.sqrt())
}

/// C_n ∫₀^{π/2} (1 − cos²θ/s²)₊^{σ+n/2} sin^{n−2}θ dθ; the support starts
/// at θ = arccos(s) when s < 1.
fn angular_average(s: f64, sigma: f64, dim: usize, cn: f64, tol: Tolerance) -> Result<QuadratureResult> {
    let expo = sigma + 0.5 * dim as f64;
    let lo = if s < 1.0 { s.acos() } else { 0.0 };
    let r = integrate(
        |th: f64| {
            let c = th.cos() / s;
            (1.0 - c * c).max(0.0).powf(expo) * th.sin().powi(dim as i32 - 2)
        },
        lo,
        0.5 * PI,
        &[],
        tol,
    )?;
    Ok(QuadratureResult { value: cn * r.value, error_estimate: cn * r.error_estimate, evaluations: r.evaluations })
}

/// The s-integrand of I(σ,n): (1 − s/π)^{n−1} (1 − angular average).
pub fn remainder_integrand(s: f64, sigma: f64, dim: usize) -> Result<f64> {
    check_sigma_dim(sigma, dim, SIGMA_MIN, 2)?;
    if !(0.0..=PI).contains(&s) {
        return Err(Error::InvalidParameter(format!("s must lie in [0, π], got {s}")));
    }
    if s == 0.0 {
        return Ok(1.0);
    }
    let cn = angular_normalizer(dim)?;
    let inner = angular_average(s, sigma, dim, cn, inner_tolerance(Tolerance::default())?)?;
    Ok((1.0 - s / PI).powi(dim as i32 - 1) * (1.0 - inner.value))
}

fn inner_tolerance(outer: Tolerance) -> Result<Tolerance> {
    Tolerance::new(outer.abs_tol * 1e-3, outer.rel_tol, outer.max_depth)
}

type CacheKey = (u64, usize, u64, u64, usize);

fn cache() -> &'static Mutex<HashMap<CacheKey, QuadratureResult>> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, QuadratureResult>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// I(σ,n) = ∫₀^π (1−s/π)^{n−1} (1 − C_n ∫₀^{π/2} (1 − cos²θ/s²)₊^{σ+n/2} sin^{n−2}θ dθ) ds.
///
/// The error estimate includes the propagated inner-quadrature error.
/// Results are memoised per (σ, n, tolerance).
pub fn remainder_integral(sigma: f64, dim: usize, tol: Tolerance) -> Result<QuadratureResult> {
    check_sigma_dim(sigma, dim, SIGMA_MIN, 2)?;
    let key = (sigma.to_bits(), dim, tol.abs_tol.to_bits(), tol.rel_tol.to_bits(), tol.max_depth);
    if let Some(hit) = cache().lock().unwrap_or_else(|e| e.into_inner()).get(&key) {
        return Ok(*hit);
    }

    let cn = angular_normalizer(dim)?;
    let inner_tol = inner_tolerance(tol)?;
    let mut inner_err: f64 = 0.0;
    let mut inner_evals = 0;
    let outer = try_integrate(
        |s: f64| {
            if s <= 0.0 {
                return Ok(1.0);
            }
            let a = angular_average(s, sigma, dim, cn, inner_tol)?;
            inner_err = inner_err.max(a.error_estimate);
            inner_evals += a.evaluations;
            Ok((1.0 - s / PI).powi(dim as i32 - 1) * (1.0 - a.value))
        },
        0.0,
        PI,
        &[1.0],
        tol,
    )?;
    let result = QuadratureResult {
        value: outer.value,
        // each outer node carries at most `inner_err`; the weight (1−s/π)^{n−1} ≤ 1
        error_estimate: outer.error_estimate + PI * inner_err,
        evaluations: outer.evaluations + inner_evals,
    };
    cache().lock().unwrap_or_else(|e| e.into_inner()).insert(key, result);
    Ok(result)
}

/// Rigorous lower bound L_{σ,n} / (2 L_{σ,n−1}) · I(σ,n) on C(σ,n).
pub fn c_lower(sigma: f64, dim: usize) -> Result<f64> {
    Ok(c_bounds(sigma, dim, Tolerance::default())?.lower)
}

/// Upper bound √π Γ(σ+(n+1)/2) / (4n Γ(σ+1+n/2)) on C(σ,n).
pub fn c_upper(sigma: f64, dim: usize) -> Result<f64> {
    check_sigma_dim(sigma, dim, SIGMA_MIN, 2)?;
    let n = dim as f64;
    Ok(PI.sqrt() * gamma_ratio(sigma + 0.5 * (n + 1.0), sigma + 1.0 + 0.5 * n) / (4.0 * n))
}

pub fn c_bounds(sigma: f64, dim: usize, tol: Tolerance) -> Result<BoundC> {
    let i = remainder_integral(sigma, dim, tol)?;
    let factor = lieb_thirring(sigma, dim)? / (2.0 * lieb_thirring(sigma, dim - 1)?);
    Ok(BoundC {
        sigma,
        dim,
        lower: factor * i.value,
        upper: c_upper(sigma, dim)?,
        quad_error: factor * i.error_estimate,
    })
}

/// 11/(9π²) − 3/(20π⁴) − (2/(5π²)) ln(4π/3): the earlier planar constant for σ = 3/2.
pub fn glw_reference_constant() -> f64 {
    let p2 = PI * PI;
    11.0 / (9.0 * p2) - 3.0 / (20.0 * p2 * p2) - 2.0 / (5.0 * p2) * (4.0 * PI / 3.0).ln()
}

fn scaled_round(x: f64, decimals: u32, op: fn(f64) -> f64) -> f64 {
    let p = 10f64.powi(decimals as i32);
    op(x * p) / p
}

/// Round towards +∞ at `decimals` places (keeps a rounded upper bound valid).
pub fn round_up(x: f64, decimals: u32) -> f64 {
    scaled_round(x, decimals, f64::ceil)
}

/// Round towards −∞ at `decimals` places (keeps a rounded lower bound valid).
pub fn round_down(x: f64, decimals: u32) -> f64 {
    scaled_round(x, decimals, f64::floor)
}

pub fn round_nearest(x: f64, decimals: u32) -> f64 {
    scaled_round(x, decimals, f64::round)
}
