use std::ffi::{CStr, CString};
use std::ptr;

use spin2_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(spin2_last_error()) }
        .to_string_lossy()
        .into_owned()
}

fn chart(name: &str, params: &[(&str, f64)]) -> Result<*mut Spin2Chart, Spin2Status> {
    let name = CString::new(name).unwrap();
    let keys: Vec<CString> = params.iter().map(|(k, _)| CString::new(*k).unwrap()).collect();
    let key_ptrs: Vec<_> = keys.iter().map(|k| k.as_ptr()).collect();
    let values: Vec<f64> = params.iter().map(|(_, v)| *v).collect();
    let mut out = ptr::null_mut();
    let status = unsafe {
        spin2_chart_new(
            name.as_ptr(),
            key_ptrs.as_ptr(),
            values.as_ptr(),
            params.len(),
            &mut out,
        )
    };
    if status == Spin2Status::Ok {
        Ok(out)
    } else {
        Err(status)
    }
}

#[test]
fn version_is_the_crate_version() {
    let v = unsafe { CStr::from_ptr(spin2_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn schwarzschild_curvature_through_the_abi() {
    let c = chart("schwarzschild", &[("M", 1.0)]).unwrap();
    let p = [0.0, 4.0, 1.2, 0.5];
    let mut ricci = [f64::NAN; 16];
    let mut riemann = [f64::NAN; 256];
    let mut gamma = [f64::NAN; 64];
    unsafe {
        assert_eq!(spin2_ricci(c, p.as_ptr(), ricci.as_mut_ptr()), Spin2Status::Ok);
        assert_eq!(spin2_riemann(c, p.as_ptr(), riemann.as_mut_ptr()), Spin2Status::Ok);
        assert_eq!(spin2_christoffel(c, p.as_ptr(), gamma.as_mut_ptr()), Spin2Status::Ok);
    }
    assert!(ricci.iter().all(|r| r.abs() < 1e-12));
    // R^t_{rtr} = 2M / (r^2 (r - 2M))
    let (t, r) = (0, 1);
    let idx = t * 64 + r * 16 + t * 4 + r;
    assert!((riemann[idx] - 2.0 / (16.0 * 2.0)).abs() < 1e-12, "{}", riemann[idx]);
    // Γ^r_{tt} = M (r - 2M) / r^3
    assert!((gamma[16 * r] - 2.0 / 64.0).abs() < 1e-12);
    unsafe { spin2_chart_free(c) };
}

#[test]
fn errors_map_to_status_codes() {
    assert_eq!(chart("anti_de_sitter", &[]).unwrap_err(), Spin2Status::Config);
    assert!(last_error().contains("anti_de_sitter"));
    assert_eq!(chart("frw", &[("mass", 1.0)]).unwrap_err(), Spin2Status::Config);

    let c = chart("schwarzschild", &[]).unwrap();
    let inside_horizon = [0.0, 1.5, 1.0, 0.0];
    let mut out = [0.0; 16];
    unsafe {
        assert_eq!(
            spin2_ricci(c, inside_horizon.as_ptr(), out.as_mut_ptr()),
            Spin2Status::Domain
        );
        assert_eq!(spin2_ricci(c, ptr::null(), out.as_mut_ptr()), Spin2Status::NullPointer);
        assert_eq!(
            spin2_ricci(ptr::null(), inside_horizon.as_ptr(), out.as_mut_ptr()),
            Spin2Status::NullPointer
        );
        spin2_chart_free(c);
        spin2_chart_free(ptr::null_mut());
    }
    let mut g = ptr::null_mut();
    assert_eq!(
        unsafe { spin2_generator_random(1, 9, false, &mut g) },
        Spin2Status::InvalidArgument
    );
}

#[test]
fn gauge_evaluation_matches_the_core() {
    let c = chart("schwarzschild", &[]).unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { spin2_generator_random(5, 4, false, &mut g) }, Spin2Status::Ok);
    let p = [0.3, 5.0, 1.0, 2.0];
    for (a, restored) in [(0.5, true), (0.0, false)] {
        let mut r = Spin2GaugeResult::default();
        assert_eq!(
            unsafe { spin2_evaluate_gauge(c, g, p.as_ptr(), a, &mut r) },
            Spin2Status::Ok
        );
        assert!(r.scalar_deviation < 1e-9 && r.rank2_deviation < 1e-9 && r.nonminimal_deviation < 1e-9);
        assert!(r.structural < 1e-12);
        assert!(r.scalar_magnitude < 1e-9);
        assert_eq!(
            r.nonminimal_magnitude < 1e-9,
            restored,
            "A={a}: {}",
            r.nonminimal_magnitude
        );
    }
    let mut r = Spin2GaugeResult::default();
    assert_eq!(
        unsafe { spin2_evaluate_gauge(c, g, p.as_ptr(), f64::NAN, &mut r) },
        Spin2Status::InvalidArgument
    );
    unsafe {
        spin2_generator_free(g);
        spin2_chart_free(c);
    }
}

#[test]
fn run_config_returns_a_report() {
    let cfg =
        CString::new(r#"{"metric": {"name": "minkowski"}, "n_points": 2, "couplings": [0.0], "checks": ["flat"]}"#)
            .unwrap();
    let mut json = ptr::null_mut();
    let mut passed = false;
    assert_eq!(
        unsafe { spin2_run_config(cfg.as_ptr(), &mut json, &mut passed) },
        Spin2Status::Ok
    );
    assert!(passed);
    let text = unsafe { CStr::from_ptr(json) }.to_str().unwrap().to_owned();
    unsafe { spin2_string_free(json) };
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["records"].as_array().unwrap().len(), 2);

    let bad = CString::new(r#"{"metric": {"name": "frw"}, "checks": ["flat"]}"#).unwrap();
    assert_eq!(
        unsafe { spin2_run_config(bad.as_ptr(), &mut json, &mut passed) },
        Spin2Status::Config
    );
    assert!(last_error().contains("flat"));
}
