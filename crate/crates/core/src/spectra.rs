//! Exact Dirichlet spectra of boxes, disks, 3-balls and products, plus the
//! spectral functionals evaluated on them.
//!
//! Every [`Spectrum`] carries a completeness level: all eigenvalues up to
//! `lambda_max` are present, and functionals refuse to look beyond it.

use std::f64::consts::PI;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::bessel_zeros_scan;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
    lambda_max: f64,
}

impl Spectrum {
    pub fn new(eigenvalues: Vec<f64>, lambda_max: f64) -> Result<Self> {
        if !(lambda_max > 0.0) || lambda_max.is_nan() {
            return Err(Error::InvalidParameter(format!("lambda_max must be positive, got {lambda_max}")));
        }
        if eigenvalues.iter().any(|&l| !(l > 0.0) || l > lambda_max) {
            return Err(Error::InvalidParameter("eigenvalues must lie in (0, lambda_max]".into()));
        }
        if eigenvalues.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidParameter("eigenvalues must be sorted ascending".into()));
        }
        Ok(Self { eigenvalues, lambda_max })
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn lambda_max(&self) -> f64 {
        self.lambda_max
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Lower bound for the ground state: λ₁ itself, or `lambda_max` when no
    /// eigenvalue lies below the completeness level.
    fn first_or_level(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(self.lambda_max)
    }

    fn check_level(&self, lambda: f64) -> Result<()> {
        if lambda > self.lambda_max {
            return Err(Error::Incomplete { requested: lambda, available: self.lambda_max });
        }
        Ok(())
    }

    /// One eigenvalue per line, 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        for l in &self.eigenvalues {
            writeln!(out, "{l:.16e}")?;
        }
        Ok(())
    }
}

fn sorted_by_index<I: Ord>(mut tagged: Vec<(f64, I)>, lambda_max: f64) -> Result<Spectrum> {
    tagged.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
    Spectrum::new(tagged.into_iter().map(|(l, _)| l).collect(), lambda_max)
}

fn check_level(lambda_max: f64) -> Result<()> {
    if !(lambda_max > 0.0) || !lambda_max.is_finite() {
        return Err(Error::InvalidParameter(format!("lambda_max must be positive and finite, got {lambda_max}")));
    }
    Ok(())
}

/// π²k²/a², the k-th eigenvalue of the interval of length a.
fn interval_eigenvalue(a: f64, k: u64) -> f64 {
    let q = k as f64 / a;
    PI * PI * q * q
}

/// Eigenvalues Σᵢ π²kᵢ²/aᵢ² ≤ `lambda_max`. The sum runs left to right over
/// the axes, so a box agrees bit-for-bit with the product of its sub-boxes.
pub fn box_spectrum(sides: &[f64], lambda_max: f64) -> Result<Spectrum> {
    check_level(lambda_max)?;
    if sides.is_empty() || sides.iter().any(|a| !(*a > 0.0) || !a.is_finite()) {
        return Err(Error::InvalidParameter("box sides must be positive".into()));
    }
    let slack = lambda_max * (1.0 + 1e-12);
    let mut out = Vec::new();
    let mut index = Vec::with_capacity(sides.len());
    fn walk(sides: &[f64], partial: f64, slack: f64, index: &mut Vec<u64>, out: &mut Vec<(f64, Vec<u64>)>) {
        let axis = index.len();
        if axis == sides.len() {
            out.push((partial, index.clone()));
            return;
        }
        let mut k = 1;
        loop {
            let value = partial + interval_eigenvalue(sides[axis], k);
            if value > slack {
                break;
            }
            index.push(k);
            walk(sides, value, slack, index, out);
            index.pop();
            k += 1;
        }
    }
    walk(sides, 0.0, slack, &mut index, &mut out);
    out.retain(|(l, _)| *l <= lambda_max);
    sorted_by_index(out, lambda_max)
}

/// j_{m,k}²/R² with multiplicity 1 for m = 0 and 2 otherwise.
pub fn disk_spectrum(radius: f64, lambda_max: f64) -> Result<Spectrum> {
    bessel_spectrum(radius, lambda_max, 0.0, |m| if m == 0 { 1 } else { 2 })
}

/// j_{l+1/2,k}²/R² with multiplicity 2l + 1.
pub fn ball3_spectrum(radius: f64, lambda_max: f64) -> Result<Spectrum> {
    bessel_spectrum(radius, lambda_max, 0.5, |l| 2 * l + 1)
}

fn bessel_spectrum(radius: f64, lambda_max: f64, shift: f64, multiplicity: fn(usize) -> usize) -> Result<Spectrum> {
    check_level(lambda_max)?;
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::InvalidParameter(format!("radius must be positive, got {radius}")));
    }
    let x_max = radius * lambda_max.sqrt();
    let mut tagged = Vec::new();
    // j_{ν,1} > ν, so orders beyond x_max contribute nothing
    let mut m = 0;
    while (m as f64 + shift) < x_max {
        let zeros = bessel_zeros_scan(m as f64 + shift, x_max, 0)?;
        if zeros.is_empty() {
            break;
        }
        for (k, z) in zeros.iter().enumerate() {
            let l = (z / radius).powi(2);
            if l <= lambda_max {
                for copy in 0..multiplicity(m) {
                    tagged.push((l, (m, k + 1, copy)));
                }
            }
        }
        m += 1;
    }
    sorted_by_index(tagged, lambda_max)
}

/// Spectrum of Ω₁ × Ω₂: all sums η + ν up to `lambda_max`.
///
/// Completeness requires `lambda_max <= s1.lambda_max + λ₁(s2)` and
/// symmetrically.
pub fn product_spectrum(s1: &Spectrum, s2: &Spectrum, lambda_max: f64) -> Result<Spectrum> {
    check_level(lambda_max)?;
    let guaranteed = (s1.lambda_max + s2.first_or_level()).min(s2.lambda_max + s1.first_or_level());
    if lambda_max > guaranteed {
        return Err(Error::Incomplete { requested: lambda_max, available: guaranteed });
    }
    let mut tagged = Vec::new();
    for (i, eta) in s1.eigenvalues.iter().enumerate() {
        for (j, nu) in s2.eigenvalues.iter().enumerate() {
            let l = eta + nu;
            if l > lambda_max {
                break;
            }
            tagged.push((l, (i, j)));
        }
    }
    sorted_by_index(tagged, lambda_max)
}

/// Σ (Λ − λ_k)₊^σ. At σ = 0 this is N(Λ), counting eigenvalues ≤ Λ.
pub fn riesz_mean(s: &Spectrum, sigma: f64, lambda: f64) -> Result<f64> {
    if !(sigma >= 0.0) {
        return Err(Error::InvalidParameter(format!("sigma must be >= 0, got {sigma}")));
    }
    s.check_level(lambda)?;
    if sigma == 0.0 {
        return Ok(counting_function(s, lambda)? as f64);
    }
    Ok(s.eigenvalues.iter().take_while(|&&l| l < lambda).map(|&l| (lambda - l).powf(sigma)).sum())
}

/// N(Λ) = #{k : λ_k ≤ Λ}.
pub fn counting_function(s: &Spectrum, lambda: f64) -> Result<usize> {
    s.check_level(lambda)?;
    Ok(s.eigenvalues.partition_point(|&l| l <= lambda))
}

/// λ_k, counted with multiplicity (k starts at 1).
pub fn nth_eigenvalue(s: &Spectrum, k: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidParameter("eigenvalue index starts at 1".into()));
    }
    s.eigenvalues
        .get(k - 1)
        .copied()
        .ok_or(Error::Incomplete { requested: k as f64, available: s.eigenvalues.len() as f64 })
}

/// Riesz mean divided by its Weyl term L^cl_{σ,n}|Ω|Λ^{σ+n/2}. σ = 0 compares N(Λ).
pub fn weyl_ratio(s: &Spectrum, sigma: f64, dim: usize, volume: f64, lambda: f64) -> Result<f64> {
    let mean = riesz_mean(s, sigma, lambda)?;
    let weyl = crate::constants::lieb_thirring(sigma, dim)? * volume * lambda.powf(sigma + 0.5 * dim as f64);
    Ok(mean / weyl)
}
