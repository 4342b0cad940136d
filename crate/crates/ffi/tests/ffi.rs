use std::ffi::{CStr, CString};
use std::path::Path;
use std::ptr;

use noma_ffi::*;

fn last_error() -> String {
    let p = noma_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn simulate_round_trip() {
    unsafe {
        let cfg = noma_config_default();
        assert_eq!(noma_config_set_trials(cfg, 3), NomaStatus::Ok);
        assert_eq!(noma_config_set_seed(cfg, 7), NomaStatus::Ok);
        assert_eq!(noma_config_set_workers(cfg, 1), NomaStatus::Ok);
        let list = CString::new("NOMA-CB,oma").unwrap();
        assert_eq!(noma_config_set_schemes(cfg, list.as_ptr()), NomaStatus::Ok);

        let mut res = ptr::null_mut();
        assert_eq!(noma_simulate(cfg, &mut res), NomaStatus::Ok);
        assert_eq!(noma_results_scheme_count(res), 2);
        assert_eq!(noma_results_skipped(res), 0);
        let name = CStr::from_ptr(noma_results_scheme_name(res, 0)).to_str().unwrap();
        assert_eq!(name, "NOMA-CB");
        assert!(noma_results_scheme_name(res, 2).is_null());

        let (mut mean, mut p05, mut n) = (0.0, 0.0, 0usize);
        assert_eq!(noma_results_summary(res, 1, &mut mean, &mut p05, &mut n), NomaStatus::Ok);
        assert_eq!(n, 3 * 16);
        assert!(p05 <= mean && mean > 0.0);
        assert_eq!(noma_results_summary(res, 5, &mut mean, ptr::null_mut(), ptr::null_mut()), NomaStatus::OutOfRange);

        noma_results_free(res);
        noma_config_free(cfg);
    }
}

#[test]
fn same_seed_same_summary() {
    let run = || unsafe {
        let cfg = noma_config_default();
        noma_config_set_trials(cfg, 2);
        let mut res = ptr::null_mut();
        assert_eq!(noma_simulate(cfg, &mut res), NomaStatus::Ok);
        let mut mean = 0.0;
        noma_results_summary(res, 0, &mut mean, ptr::null_mut(), ptr::null_mut());
        noma_results_free(res);
        noma_config_free(cfg);
        mean
    };
    assert_eq!(run().to_bits(), run().to_bits());
}

#[test]
fn errors_set_status_and_message() {
    unsafe {
        let cfg = noma_config_default();
        let bad = CString::new("NOMA-XX").unwrap();
        assert_eq!(noma_config_set_schemes(cfg, bad.as_ptr()), NomaStatus::UnknownScheme);
        assert!(last_error().contains("NOMA-XX"));
        assert_eq!(noma_config_set_trials(cfg, 0), NomaStatus::Config);
        assert_eq!(noma_config_set_schemes(cfg, ptr::null()), NomaStatus::NullPointer);
        assert_eq!(noma_simulate(ptr::null(), ptr::null_mut()), NomaStatus::NullPointer);
        noma_config_free(cfg);
        noma_config_free(ptr::null_mut());
        noma_results_free(ptr::null_mut());

        let mut out = ptr::null_mut();
        let toml = CString::new("[harness]\ntrials = 0\n").unwrap();
        assert_eq!(noma_config_from_toml(toml.as_ptr(), &mut out), NomaStatus::Config);
        assert!(out.is_null());
        let toml = CString::new("[harness]\ntrials = 2\n").unwrap();
        assert_eq!(noma_config_from_toml(toml.as_ptr(), &mut out), NomaStatus::Ok);
        assert!(noma_last_error().is_null());
        noma_config_free(out);
    }
}

#[test]
fn scalar_helpers() {
    assert!((noma_capacity(1.0) - 0.5).abs() < 1e-15);
    assert!(noma_capacity(-1.0).is_nan());
    let g = [1.0, 0.0, 0.0, 1.0, 1.0, 1.0];
    let (mut r1, mut r2, mut rc) = (0.0, 0.0, 0.0);
    unsafe {
        assert_eq!(noma_jt(g.as_ptr(), 2.0, 1.0, &mut r1, &mut r2, &mut rc), NomaStatus::Ok);
    }
    assert!((r1 - 0.5 * 3f64.log2()).abs() < 1e-12);
    assert!((r2 - r1).abs() < 1e-15);
    assert!(rc > 0.0);
    let bad = [1.0, -1.0, 0.0, 1.0, 1.0, 1.0];
    unsafe {
        assert_eq!(noma_jt(bad.as_ptr(), 2.0, 1.0, &mut r1, &mut r2, &mut rc), NomaStatus::Domain);
    }

    let mut n = 0i64;
    for (name, want) in [("NOMA-CB", 12), ("NOMA-DCS", 12), ("NOMA-JT", 12), ("NOMA-CS", -1)] {
        let s = CString::new(name).unwrap();
        unsafe {
            assert_eq!(noma_supported_users(s.as_ptr(), 4, false, &mut n), NomaStatus::Ok);
        }
        assert_eq!(n, want, "{name}");
    }
}

#[test]
fn header_is_generated_and_compiles() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let header = dir.join("include/noma_ffi.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for sym in ["noma_simulate", "noma_results_free", "noma_last_error", "NOMA_STATUS_OK", "typedef struct NomaConfig"] {
        assert!(text.contains(sym), "{sym}");
    }
    let Ok(status) = std::process::Command::new("cc")
        .args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c"])
        .arg(&header)
        .status()
    else {
        eprintln!("no C compiler found; skipping compile check");
        return;
    };
    assert!(status.success());
}
