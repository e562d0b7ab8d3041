//! Upper bounds on the Riesz means Tr(−Δ_Ω − Λ)₋^σ = Σ_k (Λ − λ_k)₊^σ.

use serde::{Deserialize, Serialize};

use crate::constants::{c_lower, c_upper, lieb_thirring, SIGMA_MIN};
use crate::error::{Error, Result};
use crate::geometry::DomainMetrics;

/// Riesz exponent σ, dimension n and spectral level Λ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralParams {
    pub sigma: f64,
    pub dim: usize,
    pub lambda: f64,
}

impl SpectralParams {
    pub fn new(sigma: f64, dim: usize, lambda: f64) -> Result<Self> {
        if !(sigma >= 0.0) || !sigma.is_finite() {
            return Err(Error::InvalidParameter(format!("sigma must be >= 0, got {sigma}")));
        }
        if dim < 2 {
            return Err(Error::InvalidParameter(format!("dimension must be >= 2, got {dim}")));
        }
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::InvalidParameter(format!("lambda must be positive, got {lambda}")));
        }
        Ok(Self { sigma, dim, lambda })
    }

    fn require_sigma(&self, min: f64) -> Result<()> {
        if self.sigma < min {
            return Err(Error::InvalidParameter(format!(
                "bound is only established for sigma >= {min}, got {}",
                self.sigma
            )));
        }
        Ok(())
    }

    fn match_metrics(&self, metrics: &DomainMetrics) -> Result<()> {
        if metrics.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: metrics.dim() });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// Λ ≤ π²/(4r²): no eigenvalue lies below Λ.
    ZeroRegion,
    Bounded,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceBoundResult {
    pub value: f64,
    pub regime: Regime,
    pub leading_term: f64,
    pub remainder_term: f64,
}

impl TraceBoundResult {
    fn assemble(zero: bool, leading_term: f64, remainder_term: f64) -> Self {
        if zero {
            Self { value: 0.0, regime: Regime::ZeroRegion, leading_term, remainder_term }
        } else {
            Self { value: leading_term - remainder_term, regime: Regime::Bounded, leading_term, remainder_term }
        }
    }
}

/// Which value of C(σ, n) multiplies the boundary term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
pub enum ConstantChoice {
    /// The rigorous lower bound from the remainder integral.
    #[default]
    Lower,
    /// A user-supplied value in `[0, c_upper(σ, n)]`.
    Value(f64),
}

impl ConstantChoice {
    pub fn resolve(self, sigma: f64, dim: usize) -> Result<f64> {
        match self {
            ConstantChoice::Lower => c_lower(sigma, dim),
            ConstantChoice::Value(c) => {
                let upper = c_upper(sigma, dim)?;
                if !(c >= 0.0) || c > upper {
                    return Err(Error::InvalidParameter(format!(
                        "C = {c} outside [0, {upper}] for sigma = {sigma}, n = {dim}"
                    )));
                }
                Ok(c)
            }
        }
    }
}

/// Whether the plain Berezin inequality is a theorem at this σ (σ ≥ 1);
/// below that it is the Pólya-type conjecture.
pub fn berezin_proved(sigma: f64) -> bool {
    sigma >= 1.0
}

/// L^cl_{σ,n} |Ω| Λ^{σ+n/2}.
pub fn berezin(params: &SpectralParams, metrics: &DomainMetrics) -> Result<f64> {
    params.match_metrics(metrics)?;
    let n = params.dim as f64;
    Ok(lieb_thirring(params.sigma, params.dim)? * metrics.volume() * params.lambda.powf(params.sigma + 0.5 * n))
}

fn boundary_power(params: &SpectralParams) -> f64 {
    params.lambda.powf(params.sigma + 0.5 * (params.dim as f64 - 1.0))
}

/// L^cl_{σ,n}|Ω|Λ^{σ+n/2} − C(σ,n) L^cl_{σ,n−1}|∂Ω|Λ^{σ+(n−1)/2}, and 0 in
/// the zero region.
pub fn improved(params: &SpectralParams, metrics: &DomainMetrics, c: ConstantChoice) -> Result<TraceBoundResult> {
    params.require_sigma(SIGMA_MIN)?;
    let leading = berezin(params, metrics)?;
    let c = c.resolve(params.sigma, params.dim)?;
    let remainder = c * lieb_thirring(params.sigma, params.dim - 1)? * metrics.surface() * boundary_power(params);
    Ok(TraceBoundResult::assemble(params.lambda <= metrics.zero_region_threshold(), leading, remainder))
}

/// ∫₀¹ (1 − s/a)₊^{n−1} ds in closed form.
pub fn remainder_fraction(a: f64, dim: usize) -> f64 {
    let n = dim as f64;
    if a >= 1.0 {
        a / n * (1.0 - (1.0 - 1.0 / a).powi(dim as i32))
    } else {
        a / n
    }
}

/// ∫₀¹ (1 − b t)₊ dt in closed form.
pub fn curvature_fraction(b: f64) -> f64 {
    if b <= 1.0 {
        1.0 - 0.5 * b
    } else {
        0.5 / b
    }
}

fn shell_bound(params: &SpectralParams, metrics: &DomainMetrics, fraction: f64) -> Result<TraceBoundResult> {
    let leading = berezin(params, metrics)?;
    let remainder = lieb_thirring(params.sigma, params.dim)?
        * 2f64.powi(-(params.dim as i32) - 2)
        * metrics.surface()
        * boundary_power(params)
        * fraction;
    Ok(TraceBoundResult::assemble(params.lambda <= metrics.zero_region_threshold(), leading, remainder))
}

/// Bound whose remainder is weighted by ∫₀¹(1 − s/(4r√Λ))₊^{n−1} ds.
pub fn integral_remainder_bound(params: &SpectralParams, metrics: &DomainMetrics) -> Result<TraceBoundResult> {
    params.require_sigma(SIGMA_MIN)?;
    params.match_metrics(metrics)?;
    let a = 4.0 * metrics.inradius() * params.lambda.sqrt();
    shell_bound(params, metrics, remainder_fraction(a, params.dim))
}

/// Bound for smooth convex domains whose principal curvatures are at most
/// `1/k_radius`. The curvature radius is supplied by the caller.
pub fn curvature_bound(params: &SpectralParams, metrics: &DomainMetrics, k_radius: f64) -> Result<TraceBoundResult> {
    params.require_sigma(SIGMA_MIN)?;
    params.match_metrics(metrics)?;
    if !(k_radius > 0.0) || !k_radius.is_finite() {
        return Err(Error::InvalidParameter(format!("curvature radius K must be positive, got {k_radius}")));
    }
    let b = (params.dim as f64 - 1.0) / (4.0 * k_radius * params.lambda.sqrt());
    shell_bound(params, metrics, curvature_fraction(b))
}

/// Bound on Ω₁ × Ω₂ with Ω₁ convex (given by `convex_factor`) and Ω₂ any
/// open set of volume `other_volume` in dimension `other_dim` that satisfies
/// the Berezin inequality at exponent σ (the caller's assertion).
pub fn product_bound(
    params: &SpectralParams,
    convex_factor: &DomainMetrics,
    other_volume: f64,
    other_dim: usize,
    c: ConstantChoice,
) -> Result<TraceBoundResult> {
    convex_factor.require_dim_at_least(2)?;
    if other_dim < 1 {
        return Err(Error::InvalidParameter("second factor needs dimension >= 1".into()));
    }
    if !(other_volume > 0.0) || !other_volume.is_finite() {
        return Err(Error::InvalidParameter(format!("second factor volume must be positive, got {other_volume}")));
    }
    let n1 = convex_factor.dim();
    let n = n1 + other_dim;
    if params.dim != n {
        return Err(Error::DimensionMismatch { expected: params.dim, got: n });
    }
    let shifted = params.sigma + 0.5 * other_dim as f64;
    if shifted < SIGMA_MIN {
        return Err(Error::InvalidParameter(format!(
            "need sigma + n2/2 >= 3/2, got {} + {}/2",
            params.sigma, other_dim
        )));
    }
    let c = c.resolve(shifted, n1)?;
    let leading = lieb_thirring(params.sigma, n)?
        * convex_factor.volume()
        * other_volume
        * params.lambda.powf(params.sigma + 0.5 * n as f64);
    let remainder =
        c * lieb_thirring(params.sigma, n - 1)? * other_volume * convex_factor.surface() * boundary_power(params);
    Ok(TraceBoundResult::assemble(params.lambda <= convex_factor.zero_region_threshold(), leading, remainder))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{ball_metrics, box_metrics, Ball, BoxDomain};
    use crate::numerics::{integrate, Tolerance};
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use std::f64::consts::PI;

    fn square() -> DomainMetrics {
        box_metrics(&BoxDomain::unit(2)).unwrap()
    }

    #[test]
    fn berezin_values() {
        let p = SpectralParams::new(2.0, 2, 100.0).unwrap();
        assert_relative_eq!(berezin(&p, &square()).unwrap(), 1e6 / (12.0 * PI), max_relative = 1e-13);
        let disk = ball_metrics(&Ball::new(2, 1.0).unwrap()).unwrap();
        let p = SpectralParams::new(1.5, 2, 50.0).unwrap();
        assert_relative_eq!(berezin(&p, &disk).unwrap(), 0.1 * 50f64.powf(2.5), max_relative = 1e-13);
        let cube = box_metrics(&BoxDomain::unit(3)).unwrap();
        assert!(matches!(berezin(&p, &cube), Err(Error::DimensionMismatch { .. })));
        assert!(!berezin_proved(0.5));
    }

    #[test]
    fn improved_on_square() {
        let below = improved(&SpectralParams::new(1.5, 2, 9.0).unwrap(), &square(), ConstantChoice::Lower).unwrap();
        assert_eq!((below.value, below.regime), (0.0, Regime::ZeroRegion));

        let p = SpectralParams::new(1.5, 2, 100.0).unwrap();
        let r = improved(&p, &square(), ConstantChoice::Value(0.0846)).unwrap();
        assert_eq!(r.regime, Regime::Bounded);
        assert_relative_eq!(r.leading_term, 1e4 / PI, max_relative = 1e-13);
        assert_relative_eq!(r.remainder_term, 0.0846 * 3.0 / 16.0 * 4.0 * 1e4, max_relative = 1e-13);
        assert_relative_eq!(r.value, r.leading_term - r.remainder_term);

        assert!(improved(&SpectralParams::new(1.0, 2, 100.0).unwrap(), &square(), ConstantChoice::Lower).is_err());
        assert!(improved(&p, &square(), ConstantChoice::Value(0.2)).is_err());
        assert!(improved(&p, &square(), ConstantChoice::Value(-0.1)).is_err());
    }

    #[test]
    fn vanishing_surface_recovers_berezin() {
        let p = SpectralParams::new(1.5, 2, 1e4).unwrap();
        for eps in [1e-2, 1e-4, 1e-6] {
            // thin-surface limit in metrics space: |∂Ω| → 0 with volume fixed
            let m = DomainMetrics::new(2, 1.0, eps, 1.0, 2.0).unwrap();
            let r = improved(&p, &m, ConstantChoice::Lower).unwrap();
            assert!(r.remainder_term / r.leading_term < eps);
        }
    }

    #[test]
    fn closed_form_fractions() {
        assert_relative_eq!(remainder_fraction(1.0, 3), 1.0 / 3.0);
        assert_relative_eq!(remainder_fraction(2.0, 2), 0.75);
        assert_relative_eq!(remainder_fraction(0.5, 4), 0.125);
        assert_eq!(curvature_fraction(0.0), 1.0);
        assert_eq!(curvature_fraction(1.0), 0.5);
        assert_eq!(curvature_fraction(2.0), 0.25);
    }

    #[test]
    fn fractions_match_quadrature() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_xoshiro::SplitMix64::seed_from_u64(7);
        let tol = Tolerance::new(1e-13, 1e-14, 50).unwrap();
        for _ in 0..100 {
            let r: f64 = rng.random_range(0.01..2.0);
            let lambda: f64 = rng.random_range(0.01..400.0);
            let n = rng.random_range(2..=6usize);
            let a = 4.0 * r * lambda.sqrt();
            let f = |s: f64| (1.0 - s / a).max(0.0).powi(n as i32 - 1);
            let q = integrate(f, 0.0, 1.0, &[a], tol).unwrap();
            assert_abs_diff_eq!(remainder_fraction(a, n), q.value, epsilon = 1e-10);
        }
    }

    #[test]
    fn curvature_and_integral_bounds() {
        let disk = ball_metrics(&Ball::new(2, 1.0).unwrap()).unwrap();
        let p = SpectralParams::new(1.5, 2, 200.0).unwrap();
        let cb = curvature_bound(&p, &disk, 1.0).unwrap();
        assert!(cb.value > 0.0 && cb.value < berezin(&p, &disk).unwrap());
        assert!(curvature_bound(&p, &disk, 0.0).is_err());
        let ib = integral_remainder_bound(&p, &disk).unwrap();
        assert!(ib.remainder_term > 0.0);
    }

    #[test]
    fn product_matches_direct_formula() {
        let sq = square();
        let p = SpectralParams::new(1.5, 3, 100.0).unwrap();
        let r = product_bound(&p, &sq, 1.0, 1, ConstantChoice::Lower).unwrap();
        let c = c_lower(2.0, 2).unwrap();
        let expected_rem = c * lieb_thirring(1.5, 2).unwrap() * 4.0 * 100f64.powf(2.5);
        assert_relative_eq!(r.remainder_term, expected_rem, max_relative = 1e-13);
        assert_relative_eq!(r.leading_term, lieb_thirring(1.5, 3).unwrap() * 1e6, max_relative = 1e-13);

        // counting function (σ = 0) with a cube factor
        let p0 = SpectralParams::new(0.0, 5, 400.0).unwrap();
        let r0 = product_bound(&p0, &sq, 1.0, 3, ConstantChoice::Lower).unwrap();
        assert!(r0.remainder_term > 0.0 && r0.value < r0.leading_term);
        // exponent condition σ + n₂/2 ≥ 3/2
        let bad = SpectralParams::new(0.0, 4, 400.0).unwrap();
        assert!(product_bound(&bad, &sq, 1.0, 2, ConstantChoice::Lower).is_err());
        let low = SpectralParams::new(1.5, 3, 5.0).unwrap();
        assert_eq!(product_bound(&low, &sq, 1.0, 1, ConstantChoice::Lower).unwrap().value, 0.0);
    }
}
