use crate::error::{Error, Result};

/// Residual tolerance factor: `|f(x) - target| <= RESIDUAL * max(1, |target|)`.
pub const RESIDUAL: f64 = 1e-9;

/// Solve `f(x) = target` for an increasing, unbounded `f` on `[lo, ∞)`.
///
/// The bracket is grown by doubling a step from `lo`; bisection then runs to
/// floating-point resolution so that the returned root is as sharp as the
/// arithmetic allows, not just within the residual tolerance.
pub fn solve_increasing<F>(f: F, target: f64, lo: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if !target.is_finite() || !lo.is_finite() {
        return Err(Error::InvalidParameter(format!("target {target} / bracket {lo} not finite")));
    }
    let f_lo = f(lo);
    if f_lo > target {
        return Err(Error::InvalidParameter(format!("f({lo}) = {f_lo} already exceeds target {target}")));
    }
    if f_lo == target {
        return Ok(lo);
    }

    let base = lo.abs().max(1.0);
    let limit = base * 2f64.powi(60);
    let mut step = base;
    let mut a = lo;
    let mut b = lo + step;
    while f(b) < target {
        a = b;
        step *= 2.0;
        b = lo + step;
        if step > limit {
            return Err(Error::BracketFailure { limit });
        }
    }

    for _ in 0..400 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        if f(mid) < target {
            a = mid;
        } else {
            b = mid;
        }
    }
    // f(a) < target <= f(b); pick the endpoint with the smaller residual
    let (ra, rb) = ((f(a) - target).abs(), (f(b) - target).abs());
    let (root, residual) = if ra < rb { (a, ra) } else { (b, rb) };
    if residual > RESIDUAL * target.abs().max(1.0) {
        return Err(Error::NonConvergence(format!(
            "residual {residual:e} at x = {root} (function too steep for f64 resolution)"
        )));
    }
    Ok(root)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn simple_inversions() {
        assert_relative_eq!(solve_increasing(|x| x, 5.0, 0.0).unwrap(), 5.0, max_relative = 1e-14);
        assert_relative_eq!(solve_increasing(|x| x * x, 2.0, 0.0).unwrap(), 2f64.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(solve_increasing(|x| x * x * x - x * x, 4.0, 1.0).unwrap(), 2.0, max_relative = 1e-14);
    }

    #[test]
    fn start_at_target() {
        assert_eq!(solve_increasing(|x| x, 3.0, 3.0).unwrap(), 3.0);
    }

    #[test]
    fn precondition_and_bracket_failures() {
        assert!(matches!(solve_increasing(|x| x, 1.0, 2.0), Err(Error::InvalidParameter(_))));
        // bounded function never reaches the target
        let r = solve_increasing(|x: f64| x.atan(), 2.0, 0.0);
        assert!(matches!(r, Err(Error::BracketFailure { .. })));
    }

    proptest! {
        #[test]
        fn inverts_monotone_polynomials(
            c1 in 0.1f64..5.0, c2 in 0.0f64..5.0, c3 in 0.0f64..2.0, x0 in 0.0f64..50.0
        ) {
            let f = |x: f64| c1 * x + c2 * x * x + c3 * x * x * x;
            let target = f(x0);
            let x = solve_increasing(f, target, 0.0).unwrap();
            prop_assert!((f(x) - target).abs() <= RESIDUAL * target.abs().max(1.0));
            prop_assert!((x - x0).abs() <= 1e-9 * x0.max(1.0));
        }
    }
}
