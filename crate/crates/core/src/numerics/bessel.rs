//! Bessel functions of the first kind for real order ν ≥ 0 and real x ≥ 0,
//! plus the zeros needed by the Krahn–Szegő bound and the ball/disk oracles.
//!
//! For x ≤ [`SERIES_SWITCH`] the ascending power series is summed directly.
//! Beyond that, J_ν is computed by Miller's backward recurrence and
//! normalised with the Neumann sum
//! `(x/2)^μ = Σ_k (μ+2k) Γ(μ+k)/k! · J_{μ+2k}(x)`, μ = frac(ν),
//! which is stable for every order/argument combination the oracles need.

use std::f64::consts::PI;

use super::gamma::{gamma_pos, ln_gamma_pos};
use crate::error::{Error, Result};

/// Argument above which the power series is abandoned.
pub const SERIES_SWITCH: f64 = 12.0;

/// Largest supported order.
pub const MAX_ORDER: f64 = 200.0;
/// Largest supported argument.
pub const MAX_ARGUMENT: f64 = 500.0;

const RESCALE: f64 = 1e250;

/// J_ν(x).
pub fn bessel_j(nu: f64, x: f64) -> Result<f64> {
    if !(0.0..=MAX_ORDER).contains(&nu) {
        return Err(Error::Domain(format!("bessel order {nu} outside [0, {MAX_ORDER}]")));
    }
    if !(0.0..=MAX_ARGUMENT).contains(&x) {
        return Err(Error::Domain(format!("bessel argument {x} outside [0, {MAX_ARGUMENT}]")));
    }
    Ok(bessel_j_unchecked(nu, x))
}

pub(crate) fn bessel_j_unchecked(nu: f64, x: f64) -> f64 {
    if x == 0.0 {
        return if nu == 0.0 { 1.0 } else { 0.0 };
    }
    if x <= SERIES_SWITCH {
        series(nu, x)
    } else {
        miller(nu, x)
    }
}

fn series(nu: f64, x: f64) -> f64 {
    let h = 0.5 * x;
    let q = -h * h;
    let prefactor = if nu == 0.0 { 1.0 } else { (nu * h.ln() - ln_gamma_pos(nu + 1.0)).exp() };
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..500 {
        let kf = k as f64;
        term *= q / (kf * (kf + nu));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs().max(1e-300) && kf > h {
            break;
        }
    }
    prefactor * sum
}

fn miller(nu: f64, x: f64) -> f64 {
    let mu = nu - nu.floor();
    let target = nu.floor() as usize;
    let scale = nu.max(x);
    let mut top = (scale + 30.0 + 6.0 * scale.sqrt()).ceil() as usize;
    if top % 2 == 1 {
        top += 1;
    }

    // Neumann weights w_j = (μ+2j) Γ(μ+j)/j!, w_0 = Γ(μ+1); built downward from
    // the ratio g_j = Γ(μ+j)/j! so the loop below can consume them in order.
    let g0 = gamma_pos(mu + 1.0);
    let weights: Vec<f64> = {
        let mut w = Vec::with_capacity(top / 2 + 1);
        w.push(g0);
        let mut g = g0; // g_1 = Γ(μ+1)/1!
        for j in 1..=top / 2 {
            if j > 1 {
                g *= (mu + j as f64 - 1.0) / j as f64;
            }
            w.push((mu + 2.0 * j as f64) * g);
        }
        w
    };

    let mut f_next = 0.0; // f_{i+1}
    let mut f_cur = 1e-30; // f_i
    let mut sum = 0.0;
    let mut at_target = 0.0;
    let mut i = top;
    loop {
        if i == target {
            at_target = f_cur;
        }
        if i.is_multiple_of(2) {
            sum += weights[i / 2] * f_cur;
        }
        if i == 0 {
            break;
        }
        let f_prev = 2.0 * (mu + i as f64) / x * f_cur - f_next;
        f_next = f_cur;
        f_cur = f_prev;
        i -= 1;
        if f_cur.abs() > RESCALE {
            f_cur /= RESCALE;
            f_next /= RESCALE;
            sum /= RESCALE;
            at_target /= RESCALE;
        }
    }
    (0.5 * x).powf(mu) * at_target / sum
}

/// dJ_ν/dx = (ν/x) J_ν − J_{ν+1}.
fn bessel_j_derivative(nu: f64, x: f64) -> f64 {
    nu / x * bessel_j_unchecked(nu, x) - bessel_j_unchecked(nu + 1.0, x)
}

/// McMahon's large-zero expansion for j_{ν,k}.
pub fn mcmahon_guess(nu: f64, k: usize) -> f64 {
    let mu = 4.0 * nu * nu;
    let beta = (k as f64 + 0.5 * nu - 0.25) * PI;
    let b8 = 8.0 * beta;
    beta - (mu - 1.0) / b8 - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * b8.powi(3))
}

/// Initial guess for the first zero: McMahon for small orders, Olver's
/// uniform expansion for larger ones.
fn first_zero_guess(nu: f64) -> f64 {
    if nu < 2.0 {
        mcmahon_guess(nu, 1)
    } else {
        let c = nu.cbrt();
        nu + 1.855_757_081_489_4 * c + 1.033_150_0 / c - 0.003_971_5 / nu
    }
}

/// Refine a simple zero of J_ν inside `[lo, hi]` (sign change required) with
/// Newton steps, falling back to bisection whenever a step leaves the bracket.
pub(crate) fn refine_zero(nu: f64, mut lo: f64, mut hi: f64, guess: f64) -> Result<f64> {
    let mut f_lo = bessel_j_unchecked(nu, lo);
    let f_hi = bessel_j_unchecked(nu, hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::NonConvergence(format!("J_{nu} has no sign change on [{lo}, {hi}]")));
    }
    let mut x = if guess > lo && guess < hi { guess } else { 0.5 * (lo + hi) };
    for _ in 0..200 {
        let fx = bessel_j_unchecked(nu, x);
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.signum() == f_lo.signum() {
            lo = x;
            f_lo = fx;
        } else {
            hi = x;
        }
        let d = bessel_j_derivative(nu, x);
        let newton = x - fx / d;
        let next = if d != 0.0 && newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        if (next - x).abs() <= 4.0 * f64::EPSILON * x.abs() || hi - lo <= 4.0 * f64::EPSILON * hi {
            return Ok(next);
        }
        x = next;
    }
    Err(Error::NonConvergence(format!("zero of J_{nu} in [{lo}, {hi}]")))
}

/// First positive zero j_{ν,1}.
pub fn bessel_first_zero(nu: f64) -> Result<f64> {
    if !(0.0..=MAX_ORDER).contains(&nu) {
        return Err(Error::Domain(format!("bessel order {nu} outside [0, {MAX_ORDER}]")));
    }
    // J_ν > 0 on (0, j_{ν,1}) and j_{ν,1} > ν; zeros are more than 2 apart,
    // so stepping by 1/2 cannot skip the first one.
    let mut lo = nu.max(1e-3);
    loop {
        let hi = lo + 0.5;
        if bessel_j_unchecked(nu, hi) <= 0.0 {
            return refine_zero(nu, lo, hi, first_zero_guess(nu));
        }
        if hi > MAX_ARGUMENT {
            return Err(Error::NonConvergence(format!("first zero of J_{nu} not bracketed")));
        }
        lo = hi;
    }
}

/// All positive zeros of J_ν not exceeding `x_max`, followed by `extra`
/// further zeros, found by a stepping scan.
pub fn bessel_zeros_scan(nu: f64, x_max: f64, extra: usize) -> Result<Vec<f64>> {
    let mut zeros = Vec::new();
    let mut lo = nu.max(1e-3);
    let mut f_lo = bessel_j_unchecked(nu, lo);
    let mut beyond = 0;
    while beyond < extra || lo <= x_max {
        let hi = lo + 0.5;
        if hi > MAX_ARGUMENT {
            return Err(Error::Domain(format!("zeros of J_{nu} beyond {MAX_ARGUMENT}")));
        }
        let f_hi = bessel_j_unchecked(nu, hi);
        if f_hi == 0.0 || f_hi.signum() != f_lo.signum() {
            let guess = mcmahon_guess(nu, zeros.len() + 1);
            let z = refine_zero(nu, lo, hi, guess)?;
            if zeros.last().is_none_or(|&last: &f64| z > last + 1e-12) {
                if z > x_max {
                    beyond += 1;
                }
                zeros.push(z);
            }
        }
        lo = hi;
        f_lo = f_hi;
        if beyond >= extra && lo > x_max {
            break;
        }
    }
    Ok(zeros)
}
