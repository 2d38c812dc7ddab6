//! C ABI over `spin2-core`.
//!
//! Every fallible function returns a [`Spin2Status`]; on failure the message
//! is available from [`spin2_last_error`] on the same thread. Handles are
//! opaque and must be released with their matching `_free` function.
//! Output arrays use row-major index order, first index slowest.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use spin2_core::field_equations::GaugePoint;
use spin2_core::geometry::{curvature, MetricChart};
use spin2_core::spin2_fields::{GaugeGenerator, GeneratorFamily};
use spin2_core::verify::{run, ScenarioConfig};
use spin2_core::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Spin2Status {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// Point outside the chart's valid region, or a degenerate metric.
    Domain = 3,
    JetDepth = 4,
    /// Unknown metric, bad parameter or invalid scenario config.
    Config = 5,
    Panic = 6,
}

/// Per-point gauge residual summary. Deviations and magnitudes are relative
/// to the summand scale.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Spin2GaugeResult {
    pub scalar_deviation: f64,
    pub scalar_magnitude: f64,
    pub rank2_deviation: f64,
    pub rank2_magnitude: f64,
    /// Residual at the requested coupling against its closed form.
    pub nonminimal_deviation: f64,
    pub nonminimal_magnitude: f64,
    /// Worst structural invariant of the gauge multiplet.
    pub structural: f64,
}

pub struct Spin2Chart(MetricChart);

pub struct Spin2Generator(GaugeGenerator);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

struct Failure(Spin2Status, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Domain { .. } | Error::DegenerateMetric { .. } => Spin2Status::Domain,
            Error::JetDepth { .. } | Error::PointMismatch { .. } => Spin2Status::JetDepth,
            Error::UnknownMetric(_) | Error::InvalidParameter { .. } => Spin2Status::Config,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(Spin2Status::NullPointer, format!("{what} is null"))
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> Spin2Status {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => Spin2Status::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            Spin2Status::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(Spin2Status::InvalidArgument, format!("{what} is not valid UTF-8")))
}

unsafe fn point_arg(p: *const f64) -> Result<[f64; 4], Failure> {
    if p.is_null() {
        return Err(null("point"));
    }
    Ok(std::ptr::read(p as *const [f64; 4]))
}

unsafe fn ref_arg<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

/// Message of the last failed call on this thread, or an empty string. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn spin2_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn spin2_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Creates a catalog chart. `keys` and `values` hold `n_params` metric
/// parameters and may be null when `n_params` is 0.
///
/// # Safety
/// `name` must be a NUL-terminated string; `keys` and `values` must point to
/// `n_params` entries; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn spin2_chart_new(
    name: *const c_char,
    keys: *const *const c_char,
    values: *const f64,
    n_params: usize,
    out: *mut *mut Spin2Chart,
) -> Spin2Status {
    guard(|| {
        let name = str_arg(name, "name")?;
        let mut params = BTreeMap::new();
        if n_params > 0 {
            if keys.is_null() || values.is_null() {
                return Err(null("keys/values"));
            }
            for i in 0..n_params {
                params.insert(str_arg(*keys.add(i), "parameter key")?.to_string(), *values.add(i));
            }
        }
        let chart = MetricChart::from_name(name, &params)?;
        write_out(out, Box::into_raw(Box::new(Spin2Chart(chart))), "out")
    })
}

/// # Safety
/// `chart` must come from [`spin2_chart_new`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn spin2_chart_free(chart: *mut Spin2Chart) {
    if !chart.is_null() {
        drop(Box::from_raw(chart));
    }
}

/// Seeded random generator of total degree `degree` (at most 4). With
/// `trig` set, each component is multiplied by a shared trigonometric factor.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn spin2_generator_random(
    seed: u64,
    degree: u32,
    trig: bool,
    out: *mut *mut Spin2Generator,
) -> Spin2Status {
    guard(|| {
        if degree > spin2_core::spin2_fields::MAX_DEGREE {
            return Err(Failure(
                Spin2Status::InvalidArgument,
                format!("degree {degree} exceeds 4"),
            ));
        }
        let family = if trig {
            GeneratorFamily::PolynomialTrig
        } else {
            GeneratorFamily::Polynomial
        };
        let g = GaugeGenerator::random(seed, degree, family);
        write_out(out, Box::into_raw(Box::new(Spin2Generator(g))), "out")
    })
}

/// # Safety
/// `generator` must come from [`spin2_generator_random`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn spin2_generator_free(generator: *mut Spin2Generator) {
    if !generator.is_null() {
        drop(Box::from_raw(generator));
    }
}

unsafe fn copy_values(values: Vec<f64>, out: *mut f64) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    std::ptr::copy_nonoverlapping(values.as_ptr(), out, values.len());
    Ok(())
}

/// `Γ^λ_{μν}` at `point[4]` into `out[64]`, index `λ*16 + μ*4 + ν`.
///
/// # Safety
/// `chart` must be a live handle, `point` must hold 4 and `out` 64 doubles.
#[no_mangle]
pub unsafe extern "C" fn spin2_christoffel(chart: *const Spin2Chart, point: *const f64, out: *mut f64) -> Spin2Status {
    guard(|| {
        let b = curvature(&ref_arg(chart, "chart")?.0, point_arg(point)?)?;
        copy_values(b.frame().christoffel().values(), out)
    })
}

/// `R^ρ_{σμν}` into `out[256]`, index `ρ*64 + σ*16 + μ*4 + ν`.
///
/// # Safety
/// `chart` must be a live handle, `point` must hold 4 and `out` 256 doubles.
#[no_mangle]
pub unsafe extern "C" fn spin2_riemann(chart: *const Spin2Chart, point: *const f64, out: *mut f64) -> Spin2Status {
    guard(|| {
        let b = curvature(&ref_arg(chart, "chart")?.0, point_arg(point)?)?;
        copy_values(b.riemann_tensor().values(), out)
    })
}

/// `R_{αβ}` into `out[16]`, index `α*4 + β`.
///
/// # Safety
/// `chart` must be a live handle, `point` must hold 4 and `out` 16 doubles.
#[no_mangle]
pub unsafe extern "C" fn spin2_ricci(chart: *const Spin2Chart, point: *const f64, out: *mut f64) -> Spin2Status {
    guard(|| {
        let b = curvature(&ref_arg(chart, "chart")?.0, point_arg(point)?)?;
        copy_values(b.ricci_tensor().values(), out)
    })
}

/// Builds the gauge multiplet of `generator` at `point` and compares each
/// field-equation residual with its closed-form obstruction.
///
/// # Safety
/// Handles must be live, `point` must hold 4 doubles, `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn spin2_evaluate_gauge(
    chart: *const Spin2Chart,
    generator: *const Spin2Generator,
    point: *const f64,
    coupling: f64,
    out: *mut Spin2GaugeResult,
) -> Spin2Status {
    guard(|| {
        if !coupling.is_finite() {
            return Err(Failure(Spin2Status::InvalidArgument, "coupling must be finite".into()));
        }
        let chart = &ref_arg(chart, "chart")?.0;
        let generator = &ref_arg(generator, "generator")?.0;
        let gp = GaugePoint::new(chart, point_arg(point)?, generator)?;
        let s = gp.scalar_chain()?;
        let r = gp.rank2_chain()?;
        let n = gp.nonminimal_chain(coupling)?;
        let result = Spin2GaugeResult {
            scalar_deviation: s.deviation.relative(),
            scalar_magnitude: s.magnitude(),
            rank2_deviation: r.deviation.relative(),
            rank2_magnitude: r.magnitude(),
            nonminimal_deviation: n.deviation.relative(),
            nonminimal_magnitude: n.magnitude(),
            structural: gp.structural()?.relative(),
        };
        write_out(out, result, "out")
    })
}

/// Runs a JSON scenario config. On success `*out_json` receives the report,
/// to be released with [`spin2_string_free`], and `*out_passed` the overall
/// verdict.
///
/// # Safety
/// `config_json` must be a NUL-terminated string; both outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn spin2_run_config(
    config_json: *const c_char,
    out_json: *mut *mut c_char,
    out_passed: *mut bool,
) -> Spin2Status {
    guard(|| {
        let text = str_arg(config_json, "config_json")?;
        if out_json.is_null() || out_passed.is_null() {
            return Err(null("out_json/out_passed"));
        }
        let report = run(&ScenarioConfig::from_json(text)?)?;
        let json = CString::new(report.to_json()).map_err(|e| Failure(Spin2Status::Panic, e.to_string()))?;
        out_passed.write(report.passed());
        out_json.write(json.into_raw());
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn spin2_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
