//! The C ABI exercised from Rust.

use std::ffi::{CStr, CString};
use std::ptr;

use replenish_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    let p = replenish_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

fn bundled(name: &str) -> *mut ReplenishScenario {
    let mut sc = ptr::null_mut();
    assert_eq!(unsafe { replenish_scenario_bundled(c(name).as_ptr(), &mut sc) }, ReplenishStatus::Ok);
    sc
}

#[test]
fn run_and_read_metrics() {
    let sc = bundled("B0");
    let mut report = ptr::null_mut();
    assert_eq!(unsafe { replenish_run(sc, c("agentic").as_ptr(), 7, &mut report) }, ReplenishStatus::Ok);
    let mut m = ReplenishMetrics::default();
    assert_eq!(unsafe { replenish_report_metrics(report, &mut m) }, ReplenishStatus::Ok);
    assert_eq!(
        m.total_cost_cents,
        m.purchase_cost_cents + m.holding_cost_cents + m.stockout_cost_cents + m.spoilage_cost_cents
    );
    assert!(m.demand_units > 0 && (0.0..=1.0).contains(&m.fill_rate));

    let mut json = ptr::null_mut();
    assert_eq!(unsafe { replenish_report_to_json(report, &mut json) }, ReplenishStatus::Ok);
    let text = unsafe { CStr::from_ptr(json) }.to_str().unwrap().to_string();
    assert!(text.contains("\"policy\":\"agentic\""));
    unsafe {
        replenish_string_free(json);
        replenish_report_free(report);
        replenish_scenario_free(sc);
    }
}

#[test]
fn toggles_reach_the_engine() {
    let sc = bundled("B1");
    let mut on = ptr::null_mut();
    let mut off = ptr::null_mut();
    unsafe {
        assert_eq!(replenish_run_with_toggles(sc, c("agentic").as_ptr(), 3, true, true, true, &mut on), ReplenishStatus::Ok);
        assert_eq!(replenish_run_with_toggles(sc, c("agentic").as_ptr(), 3, false, true, true, &mut off), ReplenishStatus::Ok);
    }
    let (mut a, mut b) = (ReplenishMetrics::default(), ReplenishMetrics::default());
    unsafe {
        replenish_report_metrics(on, &mut a);
        replenish_report_metrics(off, &mut b);
    }
    assert!(b.purchase_cost_cents >= a.purchase_cost_cents);
    unsafe {
        replenish_report_free(on);
        replenish_report_free(off);
        replenish_scenario_free(sc);
    }
}

#[test]
fn errors_set_codes_and_messages() {
    let mut sc = ptr::null_mut();
    assert_eq!(unsafe { replenish_scenario_from_toml(c("schema_version = 1\nbogus = 3").as_ptr(), &mut sc) }, ReplenishStatus::ParseError);
    assert!(last_error().contains("bogus"));
    assert!(sc.is_null());

    assert_eq!(unsafe { replenish_scenario_bundled(c("B9").as_ptr(), &mut sc) }, ReplenishStatus::UnknownBundled);
    assert_eq!(unsafe { replenish_scenario_bundled(ptr::null(), &mut sc) }, ReplenishStatus::NullPointer);
    assert_eq!(unsafe { replenish_scenario_load(c("/nonexistent.toml").as_ptr(), &mut sc) }, ReplenishStatus::Io);

    let good = bundled("B0");
    let mut report = ptr::null_mut();
    assert_eq!(unsafe { replenish_run(good, c("magic").as_ptr(), 1, &mut report) }, ReplenishStatus::UnknownPolicy);
    assert!(last_error().contains("static_rop"));
    assert_eq!(unsafe { replenish_run(ptr::null(), c("agentic").as_ptr(), 1, &mut report) }, ReplenishStatus::NullPointer);
    assert!(report.is_null());

    let mut hash = ptr::null_mut();
    assert_eq!(unsafe { replenish_scenario_hash(good, &mut hash) }, ReplenishStatus::Ok);
    assert!(replenish_last_error().is_null());
    assert_eq!(unsafe { CStr::from_ptr(hash) }.to_bytes().len(), 64);
    unsafe {
        replenish_string_free(hash);
        replenish_scenario_free(good);
        replenish_scenario_free(ptr::null_mut());
    }
}

#[test]
fn write_report_files() {
    let dir = tempfile::tempdir().unwrap();
    let sc = bundled("B0");
    let mut report = ptr::null_mut();
    unsafe {
        assert_eq!(replenish_run(sc, c("newsvendor").as_ptr(), 1, &mut report), ReplenishStatus::Ok);
        let d = c(dir.path().to_str().unwrap());
        assert_eq!(replenish_report_write(report, d.as_ptr()), ReplenishStatus::Ok);
        replenish_report_free(report);
        replenish_scenario_free(sc);
    }
    assert!(dir.path().join("summary.txt").exists());
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(replenish_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}
