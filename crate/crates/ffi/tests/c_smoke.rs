//! Compiles a small C program against the generated header and the static library.

use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include "replenish_sim.h"

int main(void) {
    ReplenishScenario *sc = NULL;
    ReplenishReport *report = NULL;
    ReplenishMetrics m;
    if (replenish_scenario_bundled("B0", &sc) != REPLENISH_STATUS_OK) return 10;
    if (replenish_run(sc, "oracle", 1, &report) != REPLENISH_STATUS_OK) return 11;
    if (replenish_report_metrics(report, &m) != REPLENISH_STATUS_OK) return 12;
    if (m.total_cost_cents != m.purchase_cost_cents + m.holding_cost_cents + m.stockout_cost_cents + m.spoilage_cost_cents) return 13;
    if (replenish_run(sc, "nope", 1, &report) != REPLENISH_STATUS_UNKNOWN_POLICY) return 14;
    printf("%s %lld\n", replenish_version(), (long long)m.total_cost_cents);
    replenish_report_free(report);
    replenish_scenario_free(sc);
    return 0;
}
"#;

#[test]
fn c_program_links_and_runs() {
    let Ok(cc) = which_cc() else {
        eprintln!("no C compiler found; skipping");
        return;
    };
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(|p| p.parent()).unwrap().to_path_buf();
    let lib = profile_dir.join("libreplenish_ffi.a");
    assert!(lib.exists(), "static library missing at {}", lib.display());
    let include = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include");
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    let bin = dir.path().join("smoke");
    std::fs::write(&src, PROGRAM).unwrap();
    let status = Command::new(cc)
        .arg(&src)
        .arg("-I")
        .arg(&include)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success(), "C compilation failed");
    let out = Command::new(&bin).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with(env!("CARGO_PKG_VERSION")));
}

fn which_cc() -> Result<&'static str, ()> {
    ["cc", "gcc", "clang"]
        .into_iter()
        .find(|c| Command::new(c).arg("--version").output().is_ok_and(|o| o.status.success()))
        .ok_or(())
}
