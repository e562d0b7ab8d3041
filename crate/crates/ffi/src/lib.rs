//! C interface to `spectral_bounds`.
//!
//! Every fallible call returns an [`SbStatus`] and writes its result through
//! an out-pointer. On failure the message is kept per thread and can be read
//! with [`sb_last_error_message`]. Domains and spectra are opaque handles that
//! must be released with their `_free` function.
//!
//! Where a C parameter is optional (the constant C, the weight α) pass NaN to
//! get the library default.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use spectral_bounds::constants::{c_bounds, lieb_thirring, SIGMA_MIN};
use spectral_bounds::domain::Domain;
use spectral_bounds::eigen_bounds::{default_alpha, explicit_2d, implicit_bound, krahn_szego, li_yau};
use spectral_bounds::numerics::Tolerance;
use spectral_bounds::spectra::{riesz_mean, Spectrum};
use spectral_bounds::trace_bounds::{
    berezin, curvature_bound, improved, integral_remainder_bound, product_bound, ConstantChoice, Regime,
    SpectralParams, TraceBoundResult,
};
use spectral_bounds::Error;

/// Result codes. Zero is success.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SbStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidParameter = 4,
    Domain = 5,
    DimensionMismatch = 6,
    InvalidPolygon = 7,
    Incomplete = 8,
    ToleranceNotMet = 9,
    BracketFailure = 10,
    NonConvergence = 11,
    Io = 12,
    OutOfRange = 13,
    Panic = 14,
}

impl From<&Error> for SbStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Domain(_) => SbStatus::Domain,
            Error::InvalidParameter(_) => SbStatus::InvalidParameter,
            Error::ToleranceNotMet { .. } => SbStatus::ToleranceNotMet,
            Error::BracketFailure { .. } => SbStatus::BracketFailure,
            Error::NonConvergence(_) => SbStatus::NonConvergence,
            Error::InvalidPolygon(_) => SbStatus::InvalidPolygon,
            Error::DimensionMismatch { .. } => SbStatus::DimensionMismatch,
            Error::Incomplete { .. } => SbStatus::Incomplete,
            Error::Parse(_) => SbStatus::Parse,
            Error::Io(_) => SbStatus::Io,
        }
    }
}

/// A parsed domain with its metrics and, where available, its exact spectrum.
pub struct SbDomain(Domain);

/// A finite list of eigenvalues, complete up to its cutoff.
pub struct SbSpectrum(Spectrum);

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct SbMetrics {
    pub dim: usize,
    pub volume: f64,
    pub surface: f64,
    pub inradius: f64,
    pub width: f64,
    /// Lower bound on the principal curvature radii, or NaN for domains with corners.
    pub curvature_radius: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct SbConstants {
    pub lower: f64,
    pub upper: f64,
    pub quad_error: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SbTraceMethod {
    Berezin = 0,
    Improved = 1,
    Integral = 2,
    Curvature = 3,
    Product = 4,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SbEigenMethod {
    LiYau = 0,
    KrahnSzego = 1,
    Implicit = 2,
    Explicit2d = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct SbTraceBound {
    pub value: f64,
    pub leading_term: f64,
    pub remainder_term: f64,
    /// True when Λ lies below the first eigenvalue and the bound is zero.
    pub zero_region: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

/// Runs `f`, converting errors and panics into status codes.
fn guard<F: FnOnce() -> Result<(), (SbStatus, String)>>(f: F) -> SbStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            SbStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            SbStatus::Panic
        }
    }
}

fn lib<T>(r: spectral_bounds::Result<T>) -> Result<T, (SbStatus, String)> {
    r.map_err(|e| (SbStatus::from(&e), e.to_string()))
}

fn null(what: &str) -> (SbStatus, String) {
    (SbStatus::NullPointer, format!("{what} is null"))
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), (SbStatus, String)> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

unsafe fn domain_ref<'a>(d: *const SbDomain) -> Result<&'a Domain, (SbStatus, String)> {
    d.as_ref().map(|d| &d.0).ok_or_else(|| null("domain"))
}

fn constant(c: f64, sigma: f64, dim: usize) -> spectral_bounds::Result<ConstantChoice> {
    let choice = if c.is_nan() { ConstantChoice::Lower } else { ConstantChoice::Value(c) };
    choice.resolve(sigma, dim)?;
    Ok(choice)
}

/// Parses a domain description such as `box:1,2`, `disk:1`, `ball3:1`,
/// `polygon:path.json` or `product:(box:1,1)x(box:2)`.
///
/// # Safety
/// `spec` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sb_domain_parse(spec: *const c_char, out: *mut *mut SbDomain) -> SbStatus {
    guard(|| {
        if spec.is_null() {
            return Err(null("spec"));
        }
        let text = CStr::from_ptr(spec).to_str().map_err(|e| (SbStatus::InvalidUtf8, e.to_string()))?;
        let domain = lib(Domain::parse(text))?;
        write(out, Box::into_raw(Box::new(SbDomain(domain))))
    })
}

/// # Safety
/// `d` must come from [`sb_domain_parse`] and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn sb_domain_free(d: *mut SbDomain) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// # Safety
/// `d` must be a live domain handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sb_domain_metrics(d: *const SbDomain, out: *mut SbMetrics) -> SbStatus {
    guard(|| {
        let d = domain_ref(d)?;
        let m = d.metrics();
        write(
            out,
            SbMetrics {
                dim: m.dim(),
                volume: m.volume(),
                surface: m.surface(),
                inradius: m.inradius(),
                width: m.width(),
                curvature_radius: d.curvature_radius().unwrap_or(f64::NAN),
            },
        )
    })
}

/// The semiclassical constant L_{σ,n}.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sb_lieb_thirring(sigma: f64, dim: usize, out: *mut f64) -> SbStatus {
    guard(|| write(out, lib(lieb_thirring(sigma, dim))?))
}

/// Rigorous lower and upper bounds on the boundary constant C(σ, n).
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sb_c_bounds(sigma: f64, dim: usize, out: *mut SbConstants) -> SbStatus {
    guard(|| {
        let b = lib(c_bounds(sigma, dim, Tolerance::default()))?;
        write(out, SbConstants { lower: b.lower, upper: b.upper, quad_error: b.quad_error })
    })
}

/// Upper bound on the Riesz mean Σ(Λ − λ_k)₊^σ.
///
/// `c` is only read by the improved and product methods. The curvature method
/// uses the domain's own curvature radius.
///
/// # Safety
/// `d` must be a live domain handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sb_trace_bound(
    d: *const SbDomain,
    method: SbTraceMethod,
    sigma: f64,
    lambda: f64,
    c: f64,
    out: *mut SbTraceBound,
) -> SbStatus {
    guard(|| {
        let d = domain_ref(d)?;
        let m = d.metrics();
        let params = lib(SpectralParams::new(sigma, m.dim(), lambda))?;
        let r = lib(match method {
            SbTraceMethod::Berezin => berezin(&params, m).map(|v| TraceBoundResult {
                value: v,
                regime: Regime::Bounded,
                leading_term: v,
                remainder_term: 0.0,
            }),
            SbTraceMethod::Improved => constant(c, sigma, m.dim()).and_then(|c| improved(&params, m, c)),
            SbTraceMethod::Integral => integral_remainder_bound(&params, m),
            SbTraceMethod::Curvature => match d.curvature_radius() {
                Some(k) => curvature_bound(&params, m, k),
                None => Err(Error::InvalidParameter("domain has no curvature radius".into())),
            },
            SbTraceMethod::Product => match d.factors() {
                Some((f1, f2)) => {
                    let (convex, other) = if f1.metrics().dim() >= 2 { (f1, f2) } else { (f2, f1) };
                    let om = other.metrics();
                    constant(c, sigma + 0.5 * om.dim() as f64, convex.metrics().dim())
                        .and_then(|c| product_bound(&params, convex.metrics(), om.volume(), om.dim(), c))
                }
                None => Err(Error::InvalidParameter("the product method needs a product domain".into())),
            },
        })?;
        write(
            out,
            SbTraceBound {
                value: r.value,
                leading_term: r.leading_term,
                remainder_term: r.remainder_term,
                zero_region: r.regime == Regime::ZeroRegion,
            },
        )
    })
}

/// Lower bound on the k-th eigenvalue (k ≥ 1).
///
/// `alpha` and `c` are only read by the implicit and explicit methods.
///
/// # Safety
/// `d` must be a live domain handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sb_eigen_bound(
    d: *const SbDomain,
    method: SbEigenMethod,
    k: usize,
    alpha: f64,
    c: f64,
    out: *mut f64,
) -> SbStatus {
    guard(|| {
        let m = domain_ref(d)?.metrics();
        let alpha = if alpha.is_nan() { default_alpha(m.dim()) } else { alpha };
        let value = lib(match method {
            SbEigenMethod::LiYau => li_yau(k, m),
            SbEigenMethod::KrahnSzego => krahn_szego(m),
            SbEigenMethod::Implicit => constant(c, SIGMA_MIN, m.dim()).and_then(|c| implicit_bound(k, m, alpha, c)),
            SbEigenMethod::Explicit2d => constant(c, SIGMA_MIN, m.dim()).and_then(|c| explicit_2d(k, m, alpha, c)),
        })?;
        write(out, value)
    })
}

/// Exact eigenvalues up to `lambda_max`, for boxes, balls and their products.
///
/// # Safety
/// `d` must be a live domain handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sb_domain_spectrum(
    d: *const SbDomain,
    lambda_max: f64,
    out: *mut *mut SbSpectrum,
) -> SbStatus {
    guard(|| {
        let s = lib(domain_ref(d)?.spectrum(lambda_max))?;
        write(out, Box::into_raw(Box::new(SbSpectrum(s))))
    })
}

/// Number of eigenvalues (with multiplicity), or 0 for a null handle.
///
/// # Safety
/// `s` must be null or a live spectrum handle.
#[no_mangle]
pub unsafe extern "C" fn sb_spectrum_len(s: *const SbSpectrum) -> usize {
    s.as_ref().map_or(0, |s| s.0.len())
}

/// The eigenvalue at zero-based position `index`, in increasing order.
///
/// # Safety
/// `s` must be a live spectrum handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sb_spectrum_get(s: *const SbSpectrum, index: usize, out: *mut f64) -> SbStatus {
    guard(|| {
        let s = s.as_ref().ok_or_else(|| null("spectrum"))?;
        let v = s.0.eigenvalues().get(index).copied().ok_or_else(|| {
            (SbStatus::OutOfRange, format!("index {index} outside a spectrum of length {}", s.0.len()))
        })?;
        write(out, v)
    })
}

/// # Safety
/// `s` must be a live spectrum handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sb_spectrum_riesz_mean(
    s: *const SbSpectrum,
    sigma: f64,
    lambda: f64,
    out: *mut f64,
) -> SbStatus {
    guard(|| {
        let s = s.as_ref().ok_or_else(|| null("spectrum"))?;
        write(out, lib(riesz_mean(&s.0, sigma, lambda))?)
    })
}

/// # Safety
/// `s` must come from [`sb_domain_spectrum`] and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn sb_spectrum_free(s: *mut SbSpectrum) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Message for the last failed call on this thread, or null after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn sb_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sb_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
