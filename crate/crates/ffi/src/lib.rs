//! C ABI over `replenish-core`.
//!
//! Scenarios and reports are opaque handles owned by the caller and released with the matching
//! `*_free` function. Every fallible call returns a [`ReplenishStatus`]; on failure a message is
//! available from [`replenish_last_error`] until the next call on the same thread. Strings
//! returned through `char **` out-parameters are released with [`replenish_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use replenish_core::engine::{run, AgentToggles, RunConfig, RunReport};
use replenish_core::output::write_run;
use replenish_core::{PolicyKind, Scenario};

/// Result codes. Zero is success.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReplenishStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidScenario = 4,
    UnknownPolicy = 5,
    UnknownBundled = 6,
    RunFailed = 7,
    Io = 8,
    Panic = 9,
}

/// Opaque parsed and validated scenario.
pub struct ReplenishScenario(Scenario);

/// Opaque result of one simulation run.
pub struct ReplenishReport(RunReport);

/// Headline metrics of a run. Money fields are integer cents.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ReplenishMetrics {
    pub stockout_rate: f64,
    pub fill_rate: f64,
    pub avg_inventory_value: f64,
    pub inventory_turnover: f64,
    pub total_cost_cents: i64,
    pub purchase_cost_cents: i64,
    pub holding_cost_cents: i64,
    pub stockout_cost_cents: i64,
    pub spoilage_cost_cents: i64,
    pub demand_units: u64,
    pub sales_units: u64,
    pub stockout_units: u64,
    pub spoiled_units: u64,
    pub orders_placed: u64,
    pub adopted: u64,
    pub trend_roi: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

type FfiResult<T> = Result<T, (ReplenishStatus, String)>;

/// Runs `f`, records any error or panic, and maps it to a status.
fn guard(f: impl FnOnce() -> FfiResult<()>) -> ReplenishStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ReplenishStatus::Ok,
        Ok(Err((status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic");
            ReplenishStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> FfiResult<&'a str> {
    if p.is_null() {
        return Err((ReplenishStatus::NullPointer, format!("{name} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| (ReplenishStatus::InvalidUtf8, format!("{name} is not valid UTF-8")))
}

fn null(name: &str) -> (ReplenishStatus, String) {
    (ReplenishStatus::NullPointer, format!("{name} is null"))
}

fn scenario_error(e: replenish_core::scenario::ScenarioError) -> (ReplenishStatus, String) {
    use replenish_core::scenario::ScenarioError as E;
    let status = match e {
        E::Io { .. } => ReplenishStatus::Io,
        E::Parse(_) => ReplenishStatus::ParseError,
        E::Invalid(_) => ReplenishStatus::InvalidScenario,
        E::UnknownBundled(_) => ReplenishStatus::UnknownBundled,
    };
    (status, e.to_string())
}

unsafe fn put_scenario(out: *mut *mut ReplenishScenario, sc: Scenario) -> FfiResult<()> {
    *out = Box::into_raw(Box::new(ReplenishScenario(sc)));
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> FfiResult<()> {
    let c = CString::new(s).map_err(|_| (ReplenishStatus::InvalidUtf8, "string contains NUL".to_string()))?;
    *out = c.into_raw();
    Ok(())
}

/// Message for the last failed call on this thread, or null. Valid until the next call.
#[no_mangle]
pub extern "C" fn replenish_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn replenish_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses and validates TOML scenario text.
///
/// # Safety
/// `toml` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn replenish_scenario_from_toml(toml: *const c_char, out: *mut *mut ReplenishScenario) -> ReplenishStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let text = str_arg(toml, "toml")?;
        put_scenario(out, Scenario::from_toml_str(text).map_err(scenario_error)?)
    })
}

/// Loads and validates a scenario file.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn replenish_scenario_load(path: *const c_char, out: *mut *mut ReplenishScenario) -> ReplenishStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let path = str_arg(path, "path")?;
        put_scenario(out, Scenario::load(path).map_err(scenario_error)?)
    })
}

/// One of the bundled benchmarks: `B0`, `B1` or `B2`.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn replenish_scenario_bundled(name: *const c_char, out: *mut *mut ReplenishScenario) -> ReplenishStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let name = str_arg(name, "name")?;
        put_scenario(out, Scenario::bundled(name).map_err(scenario_error)?)
    })
}

/// SHA-256 of the scenario as lowercase hex. Free with [`replenish_string_free`].
///
/// # Safety
/// `scenario` must come from this library and `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn replenish_scenario_hash(scenario: *const ReplenishScenario, out: *mut *mut c_char) -> ReplenishStatus {
    guard(|| {
        let sc = scenario.as_ref().ok_or_else(|| null("scenario"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        put_string(out, sc.0.hash())
    })
}

/// # Safety
/// `scenario` must come from this library or be null; it must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn replenish_scenario_free(scenario: *mut ReplenishScenario) {
    if !scenario.is_null() {
        drop(Box::from_raw(scenario));
    }
}

unsafe fn run_inner(
    scenario: *const ReplenishScenario,
    policy: *const c_char,
    seed: u64,
    toggles: Option<AgentToggles>,
    out: *mut *mut ReplenishReport,
) -> ReplenishStatus {
    guard(|| {
        let sc = scenario.as_ref().ok_or_else(|| null("scenario"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let kind: PolicyKind = str_arg(policy, "policy")?.parse().map_err(|e: replenish_core::policies::PolicyError| (ReplenishStatus::UnknownPolicy, e.to_string()))?;
        let mut config = RunConfig::new(kind, seed);
        if let Some(t) = toggles {
            config = config.with_toggles(t);
        }
        let report = run(&sc.0, &config).map_err(|e| (ReplenishStatus::RunFailed, e.to_string()))?;
        *out = Box::into_raw(Box::new(ReplenishReport(report)));
        Ok(())
    })
}

/// Runs `policy` (e.g. `"agentic"`) with its default agent toggles.
///
/// # Safety
/// `scenario` must come from this library, `policy` must be a NUL-terminated string and `out` a
/// valid pointer.
#[no_mangle]
pub unsafe extern "C" fn replenish_run(
    scenario: *const ReplenishScenario,
    policy: *const c_char,
    seed: u64,
    out: *mut *mut ReplenishReport,
) -> ReplenishStatus {
    run_inner(scenario, policy, seed, None, out)
}

/// Runs `policy` with explicit negotiation, supplier-selection and trend toggles.
///
/// # Safety
/// Same as [`replenish_run`].
#[no_mangle]
pub unsafe extern "C" fn replenish_run_with_toggles(
    scenario: *const ReplenishScenario,
    policy: *const c_char,
    seed: u64,
    negotiation: bool,
    supplier_selection: bool,
    trend: bool,
    out: *mut *mut ReplenishReport,
) -> ReplenishStatus {
    run_inner(scenario, policy, seed, Some(AgentToggles { negotiation, supplier_selection, trend }), out)
}

/// # Safety
/// `report` must come from this library and `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn replenish_report_metrics(report: *const ReplenishReport, out: *mut ReplenishMetrics) -> ReplenishStatus {
    guard(|| {
        let r = report.as_ref().ok_or_else(|| null("report"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let m = &r.0.metrics;
        *out = ReplenishMetrics {
            stockout_rate: m.stockout_rate,
            fill_rate: m.fill_rate,
            avg_inventory_value: m.avg_inventory_value,
            inventory_turnover: m.inventory_turnover,
            total_cost_cents: m.total_cost.0,
            purchase_cost_cents: m.purchase_cost.0,
            holding_cost_cents: m.holding_cost.0,
            stockout_cost_cents: m.stockout_cost.0,
            spoilage_cost_cents: m.spoilage_cost.0,
            demand_units: m.demand_units,
            sales_units: m.sales_units,
            stockout_units: m.stockout_units,
            spoiled_units: m.spoiled_units,
            orders_placed: m.orders_placed,
            adopted: m.adopted,
            trend_roi: m.trend_roi(),
        };
        Ok(())
    })
}

/// Full report as JSON. Free with [`replenish_string_free`].
///
/// # Safety
/// `report` must come from this library and `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn replenish_report_to_json(report: *const ReplenishReport, out: *mut *mut c_char) -> ReplenishStatus {
    guard(|| {
        let r = report.as_ref().ok_or_else(|| null("report"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let json = serde_json::to_string(&r.0).map_err(|e| (ReplenishStatus::RunFailed, e.to_string()))?;
        put_string(out, json)
    })
}

/// Writes the run's CSV files and summary into `dir`, creating it if needed.
///
/// # Safety
/// `report` must come from this library and `dir` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn replenish_report_write(report: *const ReplenishReport, dir: *const c_char) -> ReplenishStatus {
    guard(|| {
        let r = report.as_ref().ok_or_else(|| null("report"))?;
        let dir = str_arg(dir, "dir")?;
        write_run(&r.0, Path::new(dir)).map_err(|e| (ReplenishStatus::Io, format!("{dir}: {e}")))
    })
}

/// # Safety
/// `report` must come from this library or be null; it must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn replenish_report_free(report: *mut ReplenishReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// # Safety
/// `s` must be a string returned by this library or null.
#[no_mangle]
pub unsafe extern "C" fn replenish_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
