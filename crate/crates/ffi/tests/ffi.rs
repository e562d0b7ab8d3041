use std::ffi::{CStr, CString};
use std::ptr;

use spectral_bounds_ffi::*;

fn parse(spec: &str) -> *mut SbDomain {
    let spec = CString::new(spec).unwrap();
    let mut d = ptr::null_mut();
    assert_eq!(unsafe { sb_domain_parse(spec.as_ptr(), &mut d) }, SbStatus::Ok);
    d
}

fn last_error() -> String {
    let p = sb_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn constants_through_the_c_interface() {
    let mut c = SbConstants::default();
    assert_eq!(unsafe { sb_c_bounds(1.5, 2, &mut c) }, SbStatus::Ok);
    assert!((c.lower - 0.0846).abs() < 5e-5);
    assert!((c.upper - 2.0 / 15.0).abs() < 1e-12);
    let mut l = 0.0;
    assert_eq!(unsafe { sb_lieb_thirring(0.0, 2, &mut l) }, SbStatus::Ok);
    assert!((l - 1.0 / (4.0 * std::f64::consts::PI)).abs() < 1e-13);
    assert!(sb_last_error_message().is_null());
}

#[test]
fn domain_metrics_and_bounds() {
    let d = parse("box:1,1");
    let mut m = SbMetrics::default();
    assert_eq!(unsafe { sb_domain_metrics(d, &mut m) }, SbStatus::Ok);
    assert_eq!((m.dim, m.volume, m.surface, m.inradius, m.width), (2, 1.0, 4.0, 0.5, 1.0));
    assert!(m.curvature_radius.is_nan());

    let mut t = SbTraceBound::default();
    assert_eq!(unsafe { sb_trace_bound(d, SbTraceMethod::Improved, 1.5, 9.0, f64::NAN, &mut t) }, SbStatus::Ok);
    assert!(t.zero_region);
    assert_eq!(t.value, 0.0);

    let mut s = ptr::null_mut();
    assert_eq!(unsafe { sb_domain_spectrum(d, 400.0, &mut s) }, SbStatus::Ok);
    let mut first = 0.0;
    assert_eq!(unsafe { sb_spectrum_get(s, 0, &mut first) }, SbStatus::Ok);
    assert!((first - 2.0 * std::f64::consts::PI.powi(2)).abs() < 1e-12);
    let mut exact = 0.0;
    assert_eq!(unsafe { sb_spectrum_riesz_mean(s, 1.5, 400.0, &mut exact) }, SbStatus::Ok);
    for method in [SbTraceMethod::Berezin, SbTraceMethod::Improved, SbTraceMethod::Integral] {
        assert_eq!(unsafe { sb_trace_bound(d, method, 1.5, 400.0, f64::NAN, &mut t) }, SbStatus::Ok);
        assert!(exact <= t.value, "{method:?}: {exact} > {}", t.value);
    }

    let k = unsafe { sb_spectrum_len(s) };
    let mut lambda_k = 0.0;
    assert_eq!(unsafe { sb_spectrum_get(s, k - 1, &mut lambda_k) }, SbStatus::Ok);
    let mut lower = 0.0;
    for method in [SbEigenMethod::LiYau, SbEigenMethod::Implicit, SbEigenMethod::Explicit2d] {
        assert_eq!(unsafe { sb_eigen_bound(d, method, k, f64::NAN, f64::NAN, &mut lower) }, SbStatus::Ok);
        assert!(lower <= lambda_k, "{method:?}");
    }
    assert_eq!(unsafe { sb_spectrum_get(s, k, &mut lower) }, SbStatus::OutOfRange);
    unsafe {
        sb_spectrum_free(s);
        sb_domain_free(d);
    }
}

#[test]
fn curvature_and_product_methods() {
    let disk = parse("disk:1");
    let mut t = SbTraceBound::default();
    assert_eq!(unsafe { sb_trace_bound(disk, SbTraceMethod::Curvature, 2.0, 100.0, f64::NAN, &mut t) }, SbStatus::Ok);
    assert!(t.value > 0.0);
    assert_eq!(
        unsafe { sb_trace_bound(disk, SbTraceMethod::Product, 2.0, 100.0, f64::NAN, &mut t) },
        SbStatus::InvalidParameter
    );

    let prod = parse("product:(box:1,1)x(box:2)");
    assert_eq!(unsafe { sb_trace_bound(prod, SbTraceMethod::Product, 1.5, 100.0, f64::NAN, &mut t) }, SbStatus::Ok);
    assert!(t.value > 0.0);
    unsafe {
        sb_domain_free(disk);
        sb_domain_free(prod);
    }
}

#[test]
fn errors_map_to_codes_and_messages() {
    let bad = CString::new("blob:1").unwrap();
    let mut d = ptr::null_mut();
    assert_eq!(unsafe { sb_domain_parse(bad.as_ptr(), &mut d) }, SbStatus::Parse);
    assert!(d.is_null());
    assert!(last_error().contains("blob"));

    assert_eq!(unsafe { sb_domain_parse(ptr::null(), &mut d) }, SbStatus::NullPointer);
    let invalid = [0xffu8, 0];
    assert_eq!(unsafe { sb_domain_parse(invalid.as_ptr().cast(), &mut d) }, SbStatus::InvalidUtf8);

    let sq = parse("box:1,1");
    let mut t = SbTraceBound::default();
    assert_eq!(
        unsafe { sb_trace_bound(sq, SbTraceMethod::Improved, 1.0, 50.0, f64::NAN, &mut t) },
        SbStatus::InvalidParameter
    );
    assert_eq!(
        unsafe { sb_trace_bound(sq, SbTraceMethod::Improved, 1.5, 50.0, 1.0, &mut t) },
        SbStatus::InvalidParameter
    );
    assert!(last_error().contains("outside"));
    assert_eq!(
        unsafe { sb_trace_bound(sq, SbTraceMethod::Curvature, 1.5, 50.0, f64::NAN, &mut t) },
        SbStatus::InvalidParameter
    );
    assert_eq!(
        unsafe { sb_trace_bound(sq, SbTraceMethod::Berezin, 1.5, 50.0, f64::NAN, ptr::null_mut()) },
        SbStatus::NullPointer
    );
    let mut x = 0.0;
    assert_eq!(
        unsafe { sb_eigen_bound(sq, SbEigenMethod::LiYau, 0, f64::NAN, f64::NAN, &mut x) },
        SbStatus::InvalidParameter
    );
    assert_eq!(
        unsafe { sb_eigen_bound(ptr::null(), SbEigenMethod::LiYau, 1, f64::NAN, f64::NAN, &mut x) },
        SbStatus::NullPointer
    );

    let missing = CString::new("polygon:/nonexistent/shape.json").unwrap();
    assert_eq!(unsafe { sb_domain_parse(missing.as_ptr(), &mut d) }, SbStatus::Io);
    assert_eq!(unsafe { sb_spectrum_len(ptr::null()) }, 0);
    unsafe {
        sb_domain_free(sq);
        sb_domain_free(ptr::null_mut());
        sb_spectrum_free(ptr::null_mut());
    }
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(sb_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}
