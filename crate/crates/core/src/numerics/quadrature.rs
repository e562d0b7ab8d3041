//! Adaptive 15-point Gauss–Legendre quadrature with interval bisection.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const ORDER: usize = 15;

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub value: f64,
    /// Absolute error estimate (sum of the local refinement differences).
    pub error_estimate: f64,
    pub evaluations: usize,
}

/// Accuracy request for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_depth: usize,
}

impl Tolerance {
    pub fn new(abs_tol: f64, rel_tol: f64, max_depth: usize) -> Result<Self> {
        if !(abs_tol > 0.0) || !(rel_tol > 0.0) || max_depth < 1 {
            return Err(Error::InvalidParameter(format!(
                "tolerance requires abs_tol > 0, rel_tol > 0, max_depth >= 1 (got {abs_tol}, {rel_tol}, {max_depth})"
            )));
        }
        Ok(Self { abs_tol, rel_tol, max_depth })
    }

    /// Same tolerance with a different absolute target.
    pub fn with_abs(self, abs_tol: f64) -> Result<Self> {
        Self::new(abs_tol, self.rel_tol, self.max_depth)
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { abs_tol: 1e-9, rel_tol: 1e-12, max_depth: 40 }
    }
}

/// Nodes and weights on [-1, 1], from Newton iteration on P_15.
fn gauss_legendre() -> &'static ([f64; ORDER], [f64; ORDER]) {
    static RULE: OnceLock<([f64; ORDER], [f64; ORDER])> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = ORDER;
        let mut nodes = [0.0; ORDER];
        let mut weights = [0.0; ORDER];
        for i in 0..n {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut deriv = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let kf = k as f64;
                    let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                    p0 = p1;
                    p1 = p2;
                }
                deriv = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / deriv;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * deriv * deriv);
        }
        (nodes, weights)
    })
}

fn rule<F>(f: &mut F, a: f64, b: f64, evals: &mut usize) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (nodes, weights) = gauss_legendre();
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut sum = 0.0;
    for (x, w) in nodes.iter().zip(weights) {
        sum += w * f(mid + half * x)?;
    }
    *evals += ORDER;
    Ok(sum * half)
}

struct Adaptive<'a, F> {
    f: &'a mut F,
    tol: Tolerance,
    density: f64,
    evals: usize,
    error: f64,
}

impl<F> Adaptive<'_, F>
where
    F: FnMut(f64) -> Result<f64>,
{
    fn refine(&mut self, a: f64, b: f64, whole: f64, depth: usize) -> Result<f64> {
        let mid = 0.5 * (a + b);
        let left = rule(self.f, a, mid, &mut self.evals)?;
        let right = rule(self.f, mid, b, &mut self.evals)?;
        let halves = left + right;
        let diff = (halves - whole).abs();
        let local = (self.tol.abs_tol * (b - a) * self.density).max(self.tol.rel_tol * halves.abs());
        if diff <= local || mid <= a || mid >= b {
            self.error += diff;
            return Ok(halves);
        }
        if depth >= self.tol.max_depth {
            return Err(Error::ToleranceNotMet { error: diff, requested: local });
        }
        Ok(self.refine(a, mid, left, depth + 1)? + self.refine(mid, b, right, depth + 1)?)
    }
}

/// ∫ₐᵇ f, split at `breakpoints` (points outside `[a, b]` are ignored) and
/// refined adaptively on each piece.
pub fn integrate<F>(mut f: F, a: f64, b: f64, breakpoints: &[f64], tol: Tolerance) -> Result<QuadratureResult>
where
    F: FnMut(f64) -> f64,
{
    try_integrate(|x| Ok(f(x)), a, b, breakpoints, tol)
}

/// [`integrate`] for integrands that can themselves fail (nested quadrature).
pub fn try_integrate<F>(mut f: F, a: f64, b: f64, breakpoints: &[f64], tol: Tolerance) -> Result<QuadratureResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(a <= b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidParameter(format!("integration bounds [{a}, {b}]")));
    }
    if a == b {
        return Ok(QuadratureResult { value: 0.0, error_estimate: 0.0, evaluations: 1 });
    }
    let mut cuts: Vec<f64> = breakpoints.iter().copied().filter(|&p| p > a && p < b).collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    let mut state = Adaptive { f: &mut f, tol, density: 1.0 / (b - a), evals: 0, error: 0.0 };
    let mut total = 0.0;
    let mut lo = a;
    for hi in cuts.into_iter().chain(std::iter::once(b)) {
        let whole = rule(state.f, lo, hi, &mut state.evals)?;
        total += state.refine(lo, hi, whole, 1)?;
        lo = hi;
    }
    Ok(QuadratureResult { value: total, error_estimate: state.error, evaluations: state.evals.max(1) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn rule_is_normalised() {
        let (nodes, weights) = gauss_legendre();
        assert_abs_diff_eq!(weights.iter().sum::<f64>(), 2.0, epsilon = 1e-14);
        assert!(nodes.iter().all(|x| x.abs() < 1.0));
    }

    #[test]
    fn simple_integrals() {
        let tol = Tolerance::default();
        let one = integrate(|_| 1.0, 0.0, 1.0, &[], tol).unwrap();
        assert_abs_diff_eq!(one.value, 1.0, epsilon = 1e-12);
        assert!(one.error_estimate >= 0.0 && one.evaluations >= 1);

        let sine = integrate(f64::sin, 0.0, PI, &[], tol).unwrap();
        assert_abs_diff_eq!(sine.value, 2.0, epsilon = 1e-10);

        let flat = integrate(|t: f64| t.sin().powi(0), 0.0, PI / 2.0, &[], tol).unwrap();
        assert_abs_diff_eq!(flat.value, PI / 2.0, epsilon = 1e-12);
    }

    #[test]
    fn kink_is_handled_by_breakpoint() {
        let tol = Tolerance::new(1e-12, 1e-14, 50).unwrap();
        let f = |x: f64| (x - 0.3f64).max(0.0).powf(2.5);
        let with = integrate(f, 0.0, 1.0, &[0.3], tol).unwrap();
        let exact = 0.7f64.powf(3.5) / 3.5;
        assert_abs_diff_eq!(with.value, exact, epsilon = 1e-12);
        let without = integrate(f, 0.0, 1.0, &[], tol).unwrap();
        assert_abs_diff_eq!(without.value, exact, epsilon = 1e-11);
        assert!(with.evaluations < without.evaluations);
    }

    #[test]
    fn depth_exhaustion_is_reported() {
        let tol = Tolerance::new(1e-15, 1e-15, 2).unwrap();
        let r = integrate(|x: f64| x.abs().sqrt(), -1.0, 1.0, &[], tol);
        assert!(matches!(r, Err(Error::ToleranceNotMet { .. })));
    }

    #[test]
    fn invalid_inputs() {
        assert!(Tolerance::new(0.0, 1e-9, 3).is_err());
        assert!(Tolerance::new(1e-9, 1e-9, 0).is_err());
        assert!(integrate(|x| x, 1.0, 0.0, &[], Tolerance::default()).is_err());
        let empty = integrate(|x| x, 2.0, 2.0, &[], Tolerance::default()).unwrap();
        assert_eq!(empty.value, 0.0);
    }

    proptest! {
        #[test]
        fn polynomials_are_exact(coef in prop::collection::vec(-5.0f64..5.0, 1..=13), a in -2.0f64..0.0, b in 0.0f64..3.0) {
            let tol = Tolerance::default();
            let f = |x: f64| coef.iter().rev().fold(0.0, |acc, c| acc * x + c);
            let anti = |x: f64| coef.iter().enumerate().map(|(k, c)| c * x.powi(k as i32 + 1) / (k as f64 + 1.0)).sum::<f64>();
            let r = integrate(f, a, b, &[], tol).unwrap();
            let exact = anti(b) - anti(a);
            prop_assert!((r.value - exact).abs() <= tol.abs_tol.max(1e-12 * exact.abs()));
        }
    }
}
