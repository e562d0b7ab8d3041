//! Convex domain descriptors and the geometric functionals consumed by the
//! bounds: volume, surface measure, inradius and width.
//!
//! Only planar polygons carry explicit geometry. Boxes, balls and products
//! are described analytically through [`DomainMetrics`].

mod polygon;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

pub use polygon::{ConvexPolygon, InnerParallelBody, Point, PolygonFile};

use crate::error::{Error, Result};
use crate::numerics::gamma_pos;

/// Relative slack for the convexity invariants of [`DomainMetrics`].
const INVARIANT_SLACK: f64 = 1e-9;

/// Volume |Ω|, surface |∂Ω|, inradius r and width w of a convex body in ℝⁿ.
///
/// One-dimensional metrics (intervals) are representable so that product
/// domains can be assembled; the bounds themselves require `dim >= 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DomainMetrics {
    dim: usize,
    volume: f64,
    surface: f64,
    inradius: f64,
    width: f64,
}

impl DomainMetrics {
    pub fn new(dim: usize, volume: f64, surface: f64, inradius: f64, width: f64) -> Result<Self> {
        if dim < 1 {
            return Err(Error::InvalidParameter("dimension must be at least 1".into()));
        }
        for (name, v) in [("volume", volume), ("surface", surface), ("inradius", inradius), ("width", width)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} must be positive and finite, got {v}")));
            }
        }
        if width < 2.0 * inradius * (1.0 - INVARIANT_SLACK) {
            return Err(Error::InvalidParameter(format!("width {width} smaller than twice the inradius {inradius}")));
        }
        if (dim as f64) * volume < inradius * surface * (1.0 - INVARIANT_SLACK) {
            return Err(Error::InvalidParameter(format!(
                "n|Ω| = {} < r|∂Ω| = {}: not a convex body",
                dim as f64 * volume,
                inradius * surface
            )));
        }
        Ok(Self { dim, volume, surface, inradius, width })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn volume(&self) -> f64 {
        self.volume
    }
    pub fn surface(&self) -> f64 {
        self.surface
    }
    pub fn inradius(&self) -> f64 {
        self.inradius
    }
    pub fn width(&self) -> f64 {
        self.width
    }

    /// π²/(4r²): below this every Riesz mean vanishes.
    pub fn zero_region_threshold(&self) -> f64 {
        PI * PI / (4.0 * self.inradius * self.inradius)
    }

    /// |∂Ω|/|Ω|.
    pub fn isoperimetric_ratio(&self) -> f64 {
        self.surface / self.volume
    }

    /// Uniform scaling by `factor` (lengths multiply by `factor`).
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        let n = self.dim as i32;
        Self::new(
            self.dim,
            self.volume * factor.powi(n),
            self.surface * factor.powi(n - 1),
            self.inradius * factor,
            self.width * factor,
        )
    }

    /// Metrics of the Cartesian product `self × other` (convex if both are).
    pub fn product(&self, other: &DomainMetrics) -> Result<Self> {
        Self::new(
            self.dim + other.dim,
            self.volume * other.volume,
            self.surface * other.volume + self.volume * other.surface,
            self.inradius.min(other.inradius),
            self.width.min(other.width),
        )
    }

    pub(crate) fn require_dim_at_least(&self, min: usize) -> Result<()> {
        if self.dim < min {
            return Err(Error::InvalidParameter(format!(
                "operation needs dimension >= {min}, domain has {}",
                self.dim
            )));
        }
        Ok(())
    }
}

/// Axis-parallel box with the given side lengths.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxDomain {
    sides: Vec<f64>,
}

impl BoxDomain {
    pub fn new(sides: Vec<f64>) -> Result<Self> {
        if sides.is_empty() {
            return Err(Error::InvalidParameter("box needs at least one side".into()));
        }
        if let Some(bad) = sides.iter().find(|a| !(**a > 0.0) || !a.is_finite()) {
            return Err(Error::InvalidParameter(format!("box side {bad} must be positive")));
        }
        Ok(Self { sides })
    }

    pub fn unit(dim: usize) -> Self {
        Self { sides: vec![1.0; dim] }
    }

    pub fn sides(&self) -> &[f64] {
        &self.sides
    }

    pub fn dim(&self) -> usize {
        self.sides.len()
    }
}

/// Euclidean ball of the given dimension and radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    dim: usize,
    radius: f64,
}

impl Ball {
    pub fn new(dim: usize, radius: f64) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidParameter(format!("ball dimension must be >= 2, got {dim}")));
        }
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::InvalidParameter(format!("ball radius must be positive, got {radius}")));
        }
        Ok(Self { dim, radius })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }
}

pub fn box_metrics(b: &BoxDomain) -> Result<DomainMetrics> {
    let volume: f64 = b.sides.iter().product();
    let surface = 2.0 * b.sides.iter().map(|a| volume / a).sum::<f64>();
    let min = b.sides.iter().copied().fold(f64::INFINITY, f64::min);
    DomainMetrics::new(b.dim(), volume, surface, 0.5 * min, min)
}

pub fn ball_metrics(b: &Ball) -> Result<DomainMetrics> {
    let n = b.dim as f64;
    let volume = PI.powf(0.5 * n) * b.radius.powf(n) / gamma_pos(0.5 * n + 1.0);
    DomainMetrics::new(b.dim, volume, n * volume / b.radius, b.radius, 2.0 * b.radius)
}

/// Lower bound `(1 − t/r)₊^{n−1} |∂Ω|` on the surface of the inner parallel
/// body at distance `t`.
pub fn perimeter_lower_bound(metrics: &DomainMetrics, t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::InvalidParameter(format!("offset t must be >= 0, got {t}")));
    }
    let shrink = (1.0 - t / metrics.inradius).max(0.0);
    Ok(shrink.powi(metrics.dim as i32 - 1) * metrics.surface)
}
