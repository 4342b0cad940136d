use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn noma(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_noma")).args(args).output().expect("run noma")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

#[test]
fn simulate_matches_golden() {
    let text = stdout(&noma(&["simulate", "--seed", "42", "--trials", "10"]));
    assert_eq!(text, std::fs::read_to_string(golden("simulate_seed42_trials10.csv")).unwrap());
}

#[test]
fn sweep_matches_golden() {
    let text = stdout(&noma(&["sweep", "--seed", "42", "--trials", "10"]));
    assert_eq!(text, std::fs::read_to_string(golden("sweep_seed42_trials10.csv")).unwrap());
}

#[test]
fn simulate_layout() {
    let text = stdout(&noma(&["simulate", "--trials", "3", "--schemes", "NOMA,NOMA-TDM"]));
    let (samples, summary) = text.split_once("\n\n").unwrap();
    let mut lines = samples.lines();
    assert_eq!(lines.next(), Some("scheme,user_class,rate_bps_hz"));
    assert_eq!(lines.count(), 2 * 3 * 16);
    let mut rows = summary.lines();
    assert_eq!(rows.next(), Some("scheme,mean,p05"));
    for row in rows {
        let f: Vec<&str> = row.split(',').collect();
        let (mean, p05): (f64, f64) = (f[1].parse().unwrap(), f[2].parse().unwrap());
        assert!(p05 <= mean, "{row}");
    }
}

#[test]
fn sweep_locations_are_sorted() {
    let text = stdout(&noma(&["sweep", "--trials", "2", "--schemes", "OMA"]));
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("location_km,scheme,center_rate,edge_rate"));
    let locs: Vec<f64> = lines.map(|l| l.split(',').next().unwrap().parse().unwrap()).collect();
    assert_eq!(locs.len(), 6);
    assert!(locs.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn mac_region_has_sic_corner() {
    let text = stdout(&noma(&["region", "--kind", "mac"]));
    assert!(text.starts_with("channel_id,scheme,r1,r2\n"));
    assert!(text.lines().any(|l| l == "mac-sym,NOMA,0.5,0.29248125"), "corner missing");
    assert!(!text.contains(",TS,"));
}

#[test]
fn region_is_reproducible_and_filterable() {
    let a = stdout(&noma(&["region", "--kind", "bc"]));
    let b = stdout(&noma(&["region", "--kind", "bc", "--schemes", ""]));
    assert_eq!(a, b);
    let only = stdout(&noma(&["region", "--kind", "bc", "--schemes", "noma"]));
    assert!(only.lines().skip(1).all(|l| l.contains(",NOMA,")));
    assert!(!noma(&["region", "--schemes", "HK"]).status.success());
}

#[test]
fn ic_region_emits_three_schemes() {
    let cfg = tempfile::NamedTempFile::new().unwrap();
    std::fs::write(
        cfg.path(),
        "[region]\nsplit_grid = 11\nweight_grid = 9\ngrid = 101\n\
         [[region.channels]]\nkind = \"ic\"\nid = \"s\"\na1 = 1.0\na2 = 1.0\nb1 = 10.0\nb2 = 10.0\n",
    )
    .unwrap();
    let text = stdout(&noma(&["region", "--config", cfg.path().to_str().unwrap()]));
    for s in ["OMA", "NOMA", "TS"] {
        assert!(text.contains(&format!("s,{s},")), "{s}");
    }
}

#[test]
fn config_file_overrides_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cfg.toml");
    let text = noma_core::config::Config::default().to_toml().unwrap();
    std::fs::write(&path, text).unwrap();
    let p = path.to_str().unwrap();
    let with = stdout(&noma(&["simulate", "--config", p, "--trials", "2", "--seed", "5"]));
    let without = stdout(&noma(&["simulate", "--trials", "2", "--seed", "5"]));
    assert_eq!(with, without);
    let out = dir.path().join("o.csv");
    stdout(&noma(&["simulate", "--trials", "2", "--seed", "5", "--out", out.to_str().unwrap()]));
    assert_eq!(std::fs::read_to_string(out).unwrap(), without);
}

#[test]
fn users_table_and_warnings() {
    let text = stdout(&noma(&["users"]));
    assert!(text.lines().any(|l| l.starts_with("NOMA-CB") && l.ends_with(" 12")));
    let out = noma(&["users", "-k", "1"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
    assert!(String::from_utf8_lossy(&out.stdout).lines().any(|l| l.starts_with("NOMA-CB") && l.ends_with(" 0")));
    let jt = stdout(&noma(&["users", "--jt-4k"]));
    assert!(jt.lines().any(|l| l.starts_with("NOMA-JT") && l.ends_with(" 16")));
}

#[test]
fn errors_exit_nonzero_with_message() {
    for args in [
        vec!["users", "--schemes", "NOMA-XX"],
        vec!["simulate", "--trials", "0"],
        vec!["simulate", "--config", "/nonexistent/cfg.toml"],
        vec!["frobnicate"],
    ] {
        let out = noma(&args);
        assert!(!out.status.success(), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
    let bad = tempfile::NamedTempFile::new().unwrap();
    std::fs::write(bad.path(), "[[region.channels]]\nkind = \"xyz\"\nid = \"q\"\n").unwrap();
    let out = noma(&["region", "--config", bad.path().to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("invalid configuration"));
}

#[test]
fn worker_count_does_not_change_output() {
    let one = stdout(&noma(&["simulate", "--trials", "20", "--workers", "1"]));
    let many = stdout(&noma(&["simulate", "--trials", "20", "--workers", "8"]));
    assert_eq!(one, many);
}
