//! Lower bounds for individual eigenvalues λ_k obtained by inverting
//! counting-function bounds, and the dimension-only range estimates k* and k_*.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::constants::lieb_thirring;
use crate::error::{Error, Result};
use crate::geometry::DomainMetrics;
use crate::numerics::{bessel_first_zero, gamma_pos, solve_increasing};
use crate::trace_bounds::ConstantChoice;

/// Riesz exponent used to pass from trace bounds to counting bounds.
const SIGMA: f64 = 1.5;

/// P(Λ) = (A Λ^{n/2} − B Λ^{(n−1)/2})₊, an upper bound for N(Λ).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CountingPolynomial {
    pub a: f64,
    pub b: f64,
    pub dim: usize,
}

impl CountingPolynomial {
    pub fn new(a: f64, b: f64, dim: usize) -> Result<Self> {
        if !(a > 0.0) || !a.is_finite() || !(b >= 0.0) || !b.is_finite() {
            return Err(Error::InvalidParameter(format!("need A > 0 and B >= 0, got A = {a}, B = {b}")));
        }
        if dim < 2 {
            return Err(Error::InvalidParameter(format!("dimension must be >= 2, got {dim}")));
        }
        Ok(Self { a, b, dim })
    }

    /// A Λ^{n/2} − B Λ^{(n−1)/2} without the positive part.
    pub fn eval_raw(&self, lambda: f64) -> f64 {
        let x = lambda.sqrt();
        self.in_root(x)
    }

    pub fn eval(&self, lambda: f64) -> f64 {
        self.eval_raw(lambda).max(0.0)
    }

    fn in_root(&self, x: f64) -> f64 {
        x.powi(self.dim as i32 - 1) * (self.a * x - self.b)
    }

    /// Λ₀ = (B/A)², the positive zero; P is increasing from there on.
    pub fn zero(&self) -> f64 {
        (self.b / self.a).powi(2)
    }

    /// The Λ ≥ Λ₀ with P(Λ) = k.
    pub fn inverse(&self, k: f64) -> Result<f64> {
        if !(k > 0.0) || !k.is_finite() {
            return Err(Error::InvalidParameter(format!("level must be positive, got {k}")));
        }
        let x = solve_increasing(|x| self.in_root(x), k, self.b / self.a)?;
        Ok(x * x)
    }
}

/// α = 3/(n+3), i.e. τ = 3/n, which minimises the leading coefficient.
pub fn default_alpha(dim: usize) -> f64 {
    3.0 / (dim as f64 + 3.0)
}

fn tau_from_alpha(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    Ok(alpha / (1.0 - alpha))
}

fn check_k(k: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidParameter("eigenvalue index starts at 1".into()));
    }
    Ok(k as f64)
}

/// Γ(n/2+1)^{2/n} (4πn/(n+2)) (k/|Ω|)^{2/n}.
pub fn li_yau(k: usize, metrics: &DomainMetrics) -> Result<f64> {
    let kf = check_k(k)?;
    metrics.require_dim_at_least(2)?;
    let n = metrics.dim() as f64;
    Ok(gamma_pos(0.5 * n + 1.0).powf(2.0 / n) * (4.0 * PI * n / (n + 2.0)) * (kf / metrics.volume()).powf(2.0 / n))
}

/// λ₂ of two disjoint equal balls of total volume |Ω|; bounds λ_k for k ≥ 2.
pub fn krahn_szego(metrics: &DomainMetrics) -> Result<f64> {
    metrics.require_dim_at_least(2)?;
    let n = metrics.dim() as f64;
    let j = bessel_first_zero(0.5 * n - 1.0)?;
    Ok(PI * gamma_pos(0.5 * n + 1.0).powf(-2.0 / n) * (2.0 / metrics.volume()).powf(2.0 / n) * j * j)
}

/// Counting bound N(Λ) ≤ P(Λ) from the improved σ = 3/2 trace bound with
/// the shift τ = α/(1−α). Valid for Λ ≥ π²/(4r²).
pub fn counting_bound(metrics: &DomainMetrics, alpha: f64, c: ConstantChoice) -> Result<CountingPolynomial> {
    counting_bound_tau(metrics, tau_from_alpha(alpha)?, c)
}

pub fn counting_bound_tau(metrics: &DomainMetrics, tau: f64, c: ConstantChoice) -> Result<CountingPolynomial> {
    metrics.require_dim_at_least(2)?;
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(Error::InvalidParameter(format!("tau must be positive, got {tau}")));
    }
    let dim = metrics.dim();
    let n = dim as f64;
    let c = c.resolve(SIGMA, dim)?;
    let shift = tau.powf(-SIGMA);
    let a = lieb_thirring(SIGMA, dim)? * metrics.volume() * (1.0 + tau).powf(0.5 * (n + 3.0)) * shift;
    let b = c * lieb_thirring(SIGMA, dim - 1)? * metrics.surface() * (1.0 + tau).powf(1.0 + 0.5 * n) * shift;
    CountingPolynomial::new(a, b, dim)
}

/// N(Λ) ≤ ((n+2)/(4πn))^{n/2} |Ω| Λ^{n/2} / Γ(n/2+1), equivalent to Li–Yau.
pub fn liyau_counting(metrics: &DomainMetrics) -> Result<CountingPolynomial> {
    metrics.require_dim_at_least(2)?;
    let n = metrics.dim() as f64;
    let a = ((n + 2.0) / (4.0 * PI * n)).powf(0.5 * n) * metrics.volume() / gamma_pos(0.5 * n + 1.0);
    CountingPolynomial::new(a, 0.0, metrics.dim())
}

/// λ_k ≥ P⁻¹(k), the root on the increasing branch of the counting bound.
pub fn implicit_bound(k: usize, metrics: &DomainMetrics, alpha: f64, c: ConstantChoice) -> Result<f64> {
    let kf = check_k(k)?;
    counting_bound(metrics, alpha, c)?.inverse(kf)
}

/// [`implicit_bound`] raised to the universal floor λ₁ ≥ π²/(4r²).
pub fn implicit_bound_floored(k: usize, metrics: &DomainMetrics, alpha: f64, c: ConstantChoice) -> Result<f64> {
    Ok(implicit_bound(k, metrics, alpha, c)?.max(metrics.zero_region_threshold()))
}

/// Closed-form root of the planar counting bound.
pub fn explicit_2d(k: usize, metrics: &DomainMetrics, alpha: f64, c: ConstantChoice) -> Result<f64> {
    let kf = check_k(k)?;
    if metrics.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: metrics.dim() });
    }
    tau_from_alpha(alpha)?;
    let c = c.resolve(SIGMA, 2)?;
    let m = 10.0 * PI * alpha.powf(1.5) * kf / metrics.volume();
    let q = metrics.isoperimetric_ratio();
    let cq2 = PI * PI * c * c * q * q;
    let scaled = m + 15.0 * PI * c / 8.0 * q * (m + 225.0 / 256.0 * cq2).sqrt() + 225.0 / 128.0 * cq2;
    Ok((1.0 - alpha) * scaled)
}

/// α ∈ (0, 1) maximising [`implicit_bound`] for this k, by golden-section
/// search. Returns `(alpha, bound)`.
pub fn optimize_alpha(k: usize, metrics: &DomainMetrics, c: ConstantChoice) -> Result<(f64, f64)> {
    let c = ConstantChoice::Value(c.resolve(SIGMA, metrics.dim())?);
    let f = |a: f64| implicit_bound(k, metrics, a, c);
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let (mut lo, mut hi) = (1e-4, 1.0 - 1e-4);
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let (mut f1, mut f2) = (f(x1)?, f(x2)?);
    while hi - lo > 1e-10 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = f(x2)?;
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = f(x1)?;
        }
    }
    Ok(if f1 >= f2 { (x1, f1) } else { (x2, f2) })
}

/// Level where the counting bound meets the Li–Yau counting bound:
/// Λ* = (B/(A − A_LY))².
pub fn lambda_star(metrics: &DomainMetrics, tau: f64, c: ConstantChoice) -> Result<f64> {
    let p = counting_bound_tau(metrics, tau, c)?;
    let ly = liyau_counting(metrics)?;
    let gap = p.a - ly.a;
    if !(gap > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "tau = {tau}: counting bound never exceeds Li–Yau (leading coefficient gap {gap:e})"
        )));
    }
    let star = (p.b / gap).powi(2);
    if star > 0.0 {
        let diff = |l: f64| p.eval_raw(l) - ly.eval_raw(l);
        if !(diff(0.5 * star) < 0.0 && diff(2.0 * star) > 0.0) {
            return Err(Error::NonConvergence(format!("no sign change of P − P_LY around Λ* = {star}")));
        }
    }
    Ok(star)
}

/// Dimension-only lower bound for k*, with C = C(3/2, n) supplied.
pub fn k_star_lower(dim: usize, c_value: f64) -> Result<f64> {
    if dim < 2 {
        return Err(Error::InvalidParameter(format!("dimension must be >= 2, got {dim}")));
    }
    if !(c_value >= 0.0) {
        return Err(Error::InvalidParameter(format!("C must be >= 0, got {c_value}")));
    }
    let n = dim as f64;
    let g = gamma_pos;
    let num = c_value * (n + 2.0).sqrt() * (n + 3.0).powf(2.0 + 0.5 * n) * g(n + 2.0);
    let den = 3.0 * 2f64.powi(dim as i32) * n * (n + 3.0).powf(0.5 * (n + 3.0)) * g(0.5 * n + 2.0) * g(0.5 * n)
        - 3f64.powf(1.5) * (n + 2.0).powf(0.5 * n) * g(n + 4.0);
    if !(den > 0.0) {
        return Err(Error::InvalidParameter(format!("k* denominator {den:e} not positive for n = {dim}")));
    }
    Ok(1.5f64.powi(dim as i32) * (PI * n).powi(dim as i32) / g(0.5 * n + 1.0).powi(2) * (num / den).powi(dim as i32))
}

/// Upper bound for k_*: where the Li–Yau bound overtakes Krahn–Szegő.
pub fn k_star_upper(dim: usize) -> Result<f64> {
    if dim < 2 {
        return Err(Error::InvalidParameter(format!("dimension must be >= 2, got {dim}")));
    }
    let n = dim as f64;
    let j = bessel_first_zero(0.5 * n - 1.0)?;
    Ok(((n + 2.0) / n).powf(0.5 * n) * 2f64.powi(1 - dim as i32) / gamma_pos(0.5 * n + 1.0).powi(2)
        * j.powi(dim as i32))
}

/// Smallest integer strictly larger than `x`.
pub fn next_integer_above(x: f64) -> u64 {
    x.floor() as u64 + 1
}

/// Largest k ≤ `k_max` with implicit_bound(k) > li_yau(k), or 0 if none.
pub fn crossover_scan(metrics: &DomainMetrics, k_max: usize, alpha: f64, c: ConstantChoice) -> Result<usize> {
    if k_max == 0 {
        return Err(Error::InvalidParameter("k_max must be >= 1".into()));
    }
    let p = counting_bound(metrics, alpha, c)?;
    let mut last = 0;
    for k in 1..=k_max {
        if p.inverse(k as f64)? > li_yau(k, metrics)? {
            last = k;
        }
    }
    Ok(last)
}

/// All lower bounds for one k.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenBoundRow {
    pub k: usize,
    pub liyau: f64,
    /// Bounds λ_k only for k ≥ 2.
    pub krahn_szego: f64,
    pub implicit: f64,
    pub explicit2d: Option<f64>,
}

pub fn eigen_bound_row(k: usize, metrics: &DomainMetrics, alpha: f64, c: ConstantChoice) -> Result<EigenBoundRow> {
    Ok(EigenBoundRow {
        k,
        liyau: li_yau(k, metrics)?,
        krahn_szego: krahn_szego(metrics)?,
        implicit: implicit_bound(k, metrics, alpha, c)?,
        explicit2d: if metrics.dim() == 2 { Some(explicit_2d(k, metrics, alpha, c)?) } else { None },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::c_lower;
    use crate::geometry::{ball_metrics, box_metrics, Ball, BoxDomain};
    use approx::assert_relative_eq;

    fn square() -> DomainMetrics {
        box_metrics(&BoxDomain::unit(2)).unwrap()
    }

    fn disk() -> DomainMetrics {
        ball_metrics(&Ball::new(2, 1.0).unwrap()).unwrap()
    }

    #[test]
    fn li_yau_values() {
        assert_relative_eq!(li_yau(1, &square()).unwrap(), 2.0 * PI, max_relative = 1e-14);
        assert_relative_eq!(li_yau(4, &square()).unwrap(), 8.0 * PI, max_relative = 1e-14);
        assert_relative_eq!(li_yau(1, &disk()).unwrap(), 2.0, max_relative = 1e-14);
        assert!(li_yau(0, &square()).is_err());
    }

    #[test]
    fn krahn_szego_values() {
        let j01 = 2.404825557695773f64;
        assert_relative_eq!(krahn_szego(&square()).unwrap(), 2.0 * PI * j01 * j01, max_relative = 1e-13);
        let unit3 = DomainMetrics::new(3, 1.0, 6.0, 0.5, 1.0).unwrap();
        let expected = PI * gamma_pos(2.5).powf(-2.0 / 3.0) * 2f64.powf(2.0 / 3.0) * PI * PI;
        assert_relative_eq!(krahn_szego(&unit3).unwrap(), expected, max_relative = 1e-13);
        let double = box_metrics(&BoxDomain::new(vec![2.0, 1.0]).unwrap()).unwrap();
        assert_relative_eq!(krahn_szego(&double).unwrap(), krahn_szego(&square()).unwrap() / 2.0, max_relative = 1e-13);
    }

    #[test]
    fn liyau_counting_square() {
        let p = liyau_counting(&square()).unwrap();
        assert_relative_eq!(p.a, 1.0 / (2.0 * PI), max_relative = 1e-14);
        assert_eq!(p.b, 0.0);
        assert_relative_eq!(p.eval(100.0), 100.0 / (2.0 * PI), max_relative = 1e-14);
        assert_relative_eq!(p.eval(400.0), 4.0 * p.eval(100.0), max_relative = 1e-14);
    }

    #[test]
    fn tau_prefactor_minimum() {
        for dim in 2..=8 {
            let n = dim as f64;
            let pref = |tau: f64| (1.0 + tau).powf(0.5 * (n + 3.0)) / tau.powf(1.5);
            let tau = default_alpha(dim) / (1.0 - default_alpha(dim));
            assert_relative_eq!(tau, 3.0 / n, max_relative = 1e-14);
            let min = (n + 3.0).powf(0.5 * (n + 3.0)) / (3f64.powf(1.5) * n.powf(0.5 * n));
            assert_relative_eq!(pref(tau), min, max_relative = 1e-13);
            assert!(pref(tau * 1.01) > min && pref(tau * 0.99) > min);
        }
    }

    #[test]
    fn inversion_identities() {
        let zero_c = ConstantChoice::Value(0.0);
        let p = counting_bound(&square(), 0.6, zero_c).unwrap();
        assert_relative_eq!(implicit_bound(7, &square(), 0.6, zero_c).unwrap(), 7.0 / p.a, max_relative = 1e-14);
        assert_relative_eq!(
            explicit_2d(7, &square(), 0.6, zero_c).unwrap(),
            0.4 * 10.0 * PI * 0.6f64.powf(1.5) * 7.0,
            max_relative = 1e-14
        );
        for (k, alpha) in [(1, 0.6), (5, 0.2), (40, 0.8), (200, 0.45)] {
            let i = implicit_bound(k, &disk(), alpha, ConstantChoice::Lower).unwrap();
            let e = explicit_2d(k, &disk(), alpha, ConstantChoice::Lower).unwrap();
            assert_relative_eq!(i, e, max_relative = 1e-9);
        }
        assert!(explicit_2d(1, &box_metrics(&BoxDomain::unit(3)).unwrap(), 0.5, ConstantChoice::Lower).is_err());
        assert!(counting_bound(&square(), 1.0, ConstantChoice::Lower).is_err());
    }

    #[test]
    fn square_first_eigenvalue() {
        let (alpha, best) = optimize_alpha(1, &square(), ConstantChoice::Lower).unwrap();
        assert!(alpha > 0.0 && alpha < 1.0);
        assert!(best > 2.0 * PI && best < 2.0 * PI * PI, "{best}");
        let fixed = implicit_bound(1, &square(), default_alpha(2), ConstantChoice::Lower).unwrap();
        assert!(best >= fixed);
        let floored = implicit_bound_floored(1, &square(), 0.6, ConstantChoice::Lower).unwrap();
        assert!(floored >= PI * PI);
    }

    #[test]
    fn lambda_star_fixpoint_and_scaling() {
        let m = square();
        for dim in 2..=8 {
            let tau = 3.0 / dim as f64;
            let ball = ball_metrics(&Ball::new(dim, 1.0).unwrap()).unwrap();
            let star = lambda_star(&ball, tau, ConstantChoice::Lower).unwrap();
            let p = counting_bound_tau(&ball, tau, ConstantChoice::Lower).unwrap();
            let ly = liyau_counting(&ball).unwrap();
            assert_relative_eq!(p.eval(star), ly.eval(star), max_relative = 1e-9);
            // the ball is the isoperimetric equality case of the dimension-only k*
            let k = k_star_lower(dim, c_lower(1.5, dim).unwrap()).unwrap();
            assert_relative_eq!(ly.eval(star), k, max_relative = 1e-6);
        }
        let star = lambda_star(&m, 1.5, ConstantChoice::Lower).unwrap();
        let doubled = DomainMetrics::new(2, 1.0, 8.0, 0.25, 0.5).unwrap();
        let star2 = lambda_star(&doubled, 1.5, ConstantChoice::Lower).unwrap();
        assert_relative_eq!(star2, 4.0 * star, max_relative = 1e-12);
    }

    #[test]
    fn table2_formulas() {
        assert_relative_eq!(k_star_lower(2, 0.0846).unwrap(), 40.0, max_relative = 1e-3);
        assert_relative_eq!(k_star_lower(5, 0.0305).unwrap(), 255.0, max_relative = 1e-2);
        assert_relative_eq!(k_star_upper(2).unwrap(), 2.404825557695773f64.powi(2), max_relative = 1e-13);
        assert!((k_star_upper(3).unwrap() - 9.44).abs() < 0.01);
        assert!((k_star_upper(8).unwrap() - 90.9).abs() < 0.1);
        assert_eq!(next_integer_above(40.0007), 41);
        assert_eq!(next_integer_above(39.9), 40);
    }

    #[test]
    fn crossover_on_disk() {
        let alpha = 0.6;
        assert!(crossover_scan(&disk(), 60, alpha, ConstantChoice::Lower).unwrap() >= 39);
        assert_eq!(crossover_scan(&disk(), 60, alpha, ConstantChoice::Value(0.0)).unwrap(), 0);
        // a larger isoperimetric ratio strengthens the boundary term, so the
        // disk is the worst case
        let sq = crossover_scan(&square(), 100, alpha, ConstantChoice::Lower).unwrap();
        assert!(sq >= crossover_scan(&disk(), 100, alpha, ConstantChoice::Lower).unwrap());
    }

    #[test]
    fn implicit_is_monotone_in_k() {
        let mut last = 0.0;
        for k in 1..=200 {
            let b = implicit_bound(k, &square(), 0.6, ConstantChoice::Lower).unwrap();
            assert!(b >= last);
            last = b;
        }
    }
}
