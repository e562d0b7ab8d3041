use std::f64::consts::PI;

use crate::error::{Error, Result};

// Lanczos approximation, g = 7, n = 9 (Godfrey's coefficients).
const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)] // published digits, kept verbatim
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

const SQRT_TWO_PI: f64 = 2.506_628_274_631_000_5;
const LN_SQRT_TWO_PI: f64 = 0.918_938_533_204_672_8;

/// Largest argument for which Γ(x) is finite in `f64`.
const GAMMA_OVERFLOW: f64 = 171.624_376_956_302_7;

fn lanczos_sum(z: f64) -> f64 {
    LANCZOS_COEF[1..].iter().enumerate().fold(LANCZOS_COEF[0], |acc, (i, c)| acc + c / (z + (i + 1) as f64))
}

/// Γ(x) for x > 0.
///
/// Uses the reflection formula below 1/2 so that the Lanczos series is only
/// ever evaluated on `[1/2, ∞)`.
pub fn gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("gamma requires x > 0, got {x}")));
    }
    if x > GAMMA_OVERFLOW {
        return Err(Error::Domain(format!("gamma({x}) overflows f64")));
    }
    Ok(gamma_pos(x))
}

/// Γ(x) without argument checks; callers guarantee `0 < x ≤ 171`.
pub(crate) fn gamma_pos(x: f64) -> f64 {
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma_pos(1.0 - x));
    }
    // exact for small integers, which the tables lean on heavily
    if x == x.floor() && x <= 23.0 {
        return (1..x as u64).fold(1.0, |acc, k| acc * k as f64);
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    // split the power so that t^(z+1/2) does not overflow before e^-t damps it
    let half = t.powf(0.5 * (z + 0.5));
    SQRT_TWO_PI * half * (half * (-t).exp()) * lanczos_sum(z)
}

/// ln Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("ln_gamma requires x > 0, got {x}")));
    }
    Ok(ln_gamma_pos(x))
}

pub(crate) fn ln_gamma_pos(x: f64) -> f64 {
    if x < 0.5 {
        return (PI / (PI * x).sin()).ln() - ln_gamma_pos(1.0 - x);
    }
    if x < 20.0 {
        return gamma_pos(x).ln();
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    LN_SQRT_TWO_PI + (z + 0.5) * t.ln() - t + lanczos_sum(z).ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn special_values() {
        assert_eq!(gamma(1.0).unwrap(), 1.0);
        assert_relative_eq!(gamma(0.5).unwrap(), PI.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(gamma(2.5).unwrap(), 0.75 * PI.sqrt(), max_relative = 1e-13);
        assert_relative_eq!(gamma(1.5).unwrap(), 0.5 * PI.sqrt(), max_relative = 1e-13);
    }

    #[test]
    fn factorials() {
        let mut fact = 1.0_f64;
        for k in 1..=15u32 {
            assert_relative_eq!(gamma(k as f64).unwrap(), fact, max_relative = 1e-12);
            fact *= k as f64;
        }
    }

    #[test]
    fn half_integers_match_double_factorial() {
        // Γ(k + 1/2) = (2k-1)!! √π / 2^k
        let mut val = PI.sqrt();
        for k in 0..30 {
            let x = k as f64 + 0.5;
            assert_relative_eq!(gamma(x).unwrap(), val, max_relative = 1e-12);
            val *= x;
        }
    }

    #[test]
    fn small_and_large_arguments() {
        // Γ(x) ~ 1/x - γ near zero
        let x = 1e-8;
        assert_relative_eq!(gamma(x).unwrap(), 1.0 / x - 0.577_215_664_901_532_9, max_relative = 1e-12);
        assert_relative_eq!(gamma(60.0).unwrap(), 1.386_831_185_456_898_4e80, max_relative = 1e-12);
        assert!(gamma(171.0).unwrap().is_finite());
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(gamma(0.0), Err(Error::Domain(_))));
        assert!(matches!(gamma(-1.5), Err(Error::Domain(_))));
        assert!(matches!(gamma(f64::NAN), Err(Error::Domain(_))));
        assert!(matches!(gamma(200.0), Err(Error::Domain(_))));
        assert!(ln_gamma(0.0).is_err());
    }

    #[test]
    fn ln_gamma_consistent_with_gamma() {
        for &x in &[0.1, 0.5, 1.0, 3.7, 19.9, 20.0, 20.1, 45.5, 100.0] {
            assert_relative_eq!(ln_gamma(x).unwrap().exp(), gamma(x).unwrap(), max_relative = 1e-12);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn recurrence(x in 0.5f64..30.0) {
            let lhs = gamma(x + 1.0).unwrap();
            let rhs = x * gamma(x).unwrap();
            prop_assert!(((lhs - rhs) / rhs).abs() < 1e-12);
        }
    }
}
