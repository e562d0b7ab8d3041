//! One-line domain descriptions: `box:a,b[,c…]`, `disk:R`, `ball3:R`,
//! `polygon:path.json` and `product:(A)x(B)`.

use std::f64::consts::PI;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::geometry::{ball_metrics, box_metrics, Ball, BoxDomain, ConvexPolygon, DomainMetrics};
use crate::numerics::bessel_first_zero;
use crate::spectra::{ball3_spectrum, box_spectrum, disk_spectrum, product_spectrum, Spectrum};

/// Products may nest at most this deep.
pub const MAX_PRODUCT_DEPTH: usize = 2;

#[derive(Debug, Clone, PartialEq)]
pub enum DomainSpec {
    Box(Vec<f64>),
    Disk(f64),
    Ball3(f64),
    Polygon(PathBuf),
    Product(Box<DomainSpec>, Box<DomainSpec>),
}

fn parse_number(s: &str) -> Result<f64> {
    let v: f64 = s.trim().parse().map_err(|_| Error::Parse(format!("not a number: {s:?}")))?;
    if !(v > 0.0) || !v.is_finite() {
        return Err(Error::Parse(format!("expected a positive length, got {s:?}")));
    }
    Ok(v)
}

/// Split `(A)x(B)` at the `x` between the two balanced groups.
fn split_product(body: &str) -> Result<(&str, &str)> {
    let bad = || Error::Parse(format!("product must look like (A)x(B), got {body:?}"));
    if !body.starts_with('(') {
        return Err(bad());
    }
    let mut depth = 0usize;
    for (i, ch) in body.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth = depth.checked_sub(1).ok_or_else(bad)?;
                if depth == 0 {
                    let rest = &body[i + 1..];
                    let right = rest.strip_prefix('x').ok_or_else(bad)?;
                    let right = right.strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(bad)?;
                    return Ok((&body[1..i], right));
                }
            }
            _ => {}
        }
    }
    Err(bad())
}

impl DomainSpec {
    fn parse_at(s: &str, depth: usize) -> Result<Self> {
        let s = s.trim();
        let (kind, body) = s.split_once(':').ok_or_else(|| Error::Parse(format!("missing ':' in domain {s:?}")))?;
        match kind {
            "box" => {
                let sides = body.split(',').map(parse_number).collect::<Result<Vec<_>>>()?;
                Ok(DomainSpec::Box(sides))
            }
            "disk" => Ok(DomainSpec::Disk(parse_number(body)?)),
            "ball3" => Ok(DomainSpec::Ball3(parse_number(body)?)),
            "polygon" if !body.is_empty() => Ok(DomainSpec::Polygon(PathBuf::from(body))),
            "product" => {
                if depth >= MAX_PRODUCT_DEPTH {
                    return Err(Error::Parse(format!("products nest at most {MAX_PRODUCT_DEPTH} deep")));
                }
                let (a, b) = split_product(body)?;
                Ok(DomainSpec::Product(
                    Box::new(Self::parse_at(a, depth + 1)?),
                    Box::new(Self::parse_at(b, depth + 1)?),
                ))
            }
            _ => Err(Error::Parse(format!("unknown domain kind {kind:?} (box, disk, ball3, polygon, product)"))),
        }
    }
}

impl FromStr for DomainSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse_at(s, 0)
    }
}

impl fmt::Display for DomainSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DomainSpec::Box(sides) => {
                let joined: Vec<String> = sides.iter().map(|a| a.to_string()).collect();
                write!(f, "box:{}", joined.join(","))
            }
            DomainSpec::Disk(r) => write!(f, "disk:{r}"),
            DomainSpec::Ball3(r) => write!(f, "ball3:{r}"),
            DomainSpec::Polygon(p) => write!(f, "polygon:{}", p.display()),
            DomainSpec::Product(a, b) => write!(f, "product:({a})x({b})"),
        }
    }
}

/// A parsed domain with its metrics and, where available, exact spectrum.
#[derive(Debug, Clone)]
pub struct Domain {
    spec: DomainSpec,
    metrics: DomainMetrics,
    polygon: Option<ConvexPolygon>,
    factors: Option<Box<(Domain, Domain)>>,
}

impl Domain {
    pub fn new(spec: DomainSpec) -> Result<Self> {
        let (metrics, polygon, factors) = match &spec {
            DomainSpec::Box(sides) => (box_metrics(&BoxDomain::new(sides.clone())?)?, None, None),
            DomainSpec::Disk(r) => (ball_metrics(&Ball::new(2, *r)?)?, None, None),
            DomainSpec::Ball3(r) => (ball_metrics(&Ball::new(3, *r)?)?, None, None),
            DomainSpec::Polygon(path) => {
                let p = ConvexPolygon::from_json_file(path)?;
                (p.metrics()?, Some(p), None)
            }
            DomainSpec::Product(a, b) => {
                let (a, b) = (Domain::new((**a).clone())?, Domain::new((**b).clone())?);
                (a.metrics.product(&b.metrics)?, None, Some(Box::new((a, b))))
            }
        };
        Ok(Self { spec, metrics, polygon, factors })
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::new(s.parse()?)
    }

    pub fn spec(&self) -> &DomainSpec {
        &self.spec
    }

    pub fn label(&self) -> String {
        self.spec.to_string()
    }

    pub fn metrics(&self) -> &DomainMetrics {
        &self.metrics
    }

    pub fn polygon(&self) -> Option<&ConvexPolygon> {
        self.polygon.as_ref()
    }

    /// The two factors of a product domain.
    pub fn factors(&self) -> Option<(&Domain, &Domain)> {
        self.factors.as_deref().map(|(a, b)| (a, b))
    }

    /// Radius K bounding the principal curvature radii from below (disk and
    /// ball only; polygons and boxes have corners).
    pub fn curvature_radius(&self) -> Option<f64> {
        match self.spec {
            DomainSpec::Disk(r) | DomainSpec::Ball3(r) => Some(r),
            _ => None,
        }
    }

    pub fn has_oracle(&self) -> bool {
        match &self.factors {
            Some(f) => f.0.has_oracle() && f.1.has_oracle(),
            None => self.polygon.is_none(),
        }
    }

    /// Exact ground state λ₁.
    pub fn ground_state(&self) -> Result<f64> {
        match &self.spec {
            DomainSpec::Box(sides) => Ok(PI * PI * sides.iter().map(|a| 1.0 / (a * a)).sum::<f64>()),
            DomainSpec::Disk(r) => Ok((bessel_first_zero(0.0)? / r).powi(2)),
            DomainSpec::Ball3(r) => Ok((PI / r).powi(2)),
            DomainSpec::Polygon(_) => Err(no_oracle(&self.spec)),
            DomainSpec::Product(..) => {
                let (a, b) = self.factors().expect("product has factors");
                Ok(a.ground_state()? + b.ground_state()?)
            }
        }
    }

    /// Exact spectrum, complete up to `lambda_max`.
    pub fn spectrum(&self, lambda_max: f64) -> Result<Spectrum> {
        match &self.spec {
            DomainSpec::Box(sides) => box_spectrum(sides, lambda_max),
            DomainSpec::Disk(r) => disk_spectrum(*r, lambda_max),
            DomainSpec::Ball3(r) => ball3_spectrum(*r, lambda_max),
            DomainSpec::Polygon(_) => Err(no_oracle(&self.spec)),
            DomainSpec::Product(..) => {
                let (a, b) = self.factors().expect("product has factors");
                let (ga, gb) = (a.ground_state()?, b.ground_state()?);
                if lambda_max < ga + gb {
                    return Spectrum::new(Vec::new(), lambda_max);
                }
                // Pad the factor levels so (Λ − λ₁) + λ₁ cannot round below Λ.
                let pad = 1.0 + 1e-12;
                product_spectrum(
                    &a.spectrum((lambda_max - gb) * pad)?,
                    &b.spectrum((lambda_max - ga) * pad)?,
                    lambda_max,
                )
            }
        }
    }

    /// Exact spectrum holding at least `count` eigenvalues.
    pub fn spectrum_with_at_least(&self, count: usize) -> Result<Spectrum> {
        let mut level = 2.0 * self.ground_state()?;
        loop {
            let s = self.spectrum(level)?;
            if s.len() >= count {
                return Ok(s);
            }
            level *= 1.5;
        }
    }
}

fn no_oracle(spec: &DomainSpec) -> Error {
    Error::InvalidParameter(format!("no exact spectrum is available for {spec}"))
}
