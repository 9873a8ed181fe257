//! Integration tests of the `li` binary and the dump/config layers.

use std::path::Path;
use std::process::{Command, Output};

use li_cli::checks::{self, SolitonType};
use li_cli::dump;
use li_core::lattice::SpaceBc;

fn li(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_li")).args(args).env_remove("LI_SEED").output().expect("run li")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json_without_timing(o: &Output) -> serde_json::Value {
    let mut v: serde_json::Value = serde_json::from_slice(&o.stdout).expect("json report");
    for r in v.as_array_mut().expect("array") {
        r.as_object_mut().expect("object").remove("wall_time");
    }
    v
}

// ═══════════════════════════════════════════════════════════════════════════
// CSV dumps
// ═══════════════════════════════════════════════════════════════════════════

#[test]
fn soliton_dump_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sol.csv");
    let lat = checks::soliton_lattice(SolitonType::One, 12, 12, 12).unwrap();
    dump::dump_lattice(&path, &[("X", lat.x()), ("Y", lat.y())]).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 2 * 144 + 1);
    assert_eq!(text.lines().next().unwrap(), "field,n,a,re,im");
    let back = dump::load_lattice(&path, SpaceBc::Periodic).unwrap();
    assert_eq!(dump::field(&back, "X").unwrap().max_diff(lat.x()).unwrap(), 0.0);
    assert_eq!(dump::field(&back, "Y").unwrap().max_diff(lat.y()).unwrap(), 0.0);
    assert!(dump::field(&back, "Z").is_err());
}

#[test]
fn empty_and_incomplete_dumps_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.csv");
    std::fs::write(&empty, "").unwrap();
    assert!(dump::load_lattice(&empty, SpaceBc::Periodic).is_err());
    let header_only = dir.path().join("header.csv");
    std::fs::write(&header_only, "field,n,a,re,im\n").unwrap();
    assert!(dump::load_lattice(&header_only, SpaceBc::Periodic).is_err());
    let holes = dir.path().join("holes.csv");
    std::fs::write(&holes, "field,n,a,re,im\nX,0,0,1,0\nX,1,1,1,0\n").unwrap();
    assert!(dump::load_lattice(&holes, SpaceBc::Periodic).is_err());
    let dup = dir.path().join("dup.csv");
    std::fs::write(&dup, "field,n,a,re,im\nX,0,0,1,0\nX,0,0,2,0\n").unwrap();
    assert!(dump::load_lattice(&dup, SpaceBc::Periodic).is_err());
}

#[test]
fn cli_dump_verifies_and_corruption_fails() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sol.csv");
    let p = path.to_str().unwrap();
    let gen = li(&["dnls", "soliton", "--type", "II", "--csv", p]);
    assert_eq!(gen.status.code(), Some(0), "{}", stdout(&gen));
    let ok = li(&["dnls", "verify", "--input", p]);
    assert_eq!(ok.status.code(), Some(0), "{}", stdout(&ok));
    assert!(stdout(&ok).contains("PASS dnls.verify.equations"));

    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines: Vec<String> = text.lines().map(str::to_owned).collect();
    lines[40] = {
        let mut cols: Vec<&str> = lines[40].split(',').collect();
        cols[3] = "0.5";
        cols.join(",")
    };
    std::fs::write(&path, lines.join("\n") + "\n").unwrap();
    let bad = li(&["dnls", "verify", "--input", p]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stdout(&bad).contains("FAIL"));
}

// ═══════════════════════════════════════════════════════════════════════════
// Exit codes, configuration and determinism
// ═══════════════════════════════════════════════════════════════════════════

#[test]
fn usage_errors_exit_two() {
    assert_eq!(li(&["ybe", "--bogus"]).status.code(), Some(2));
    assert_eq!(li(&["ybe", "--kind", "nonsense"]).status.code(), Some(2));
    assert_eq!(li(&["dnls", "soliton", "--N", "0"]).status.code(), Some(2));
    assert_eq!(li(&["--help"]).status.code(), Some(0));
    let missing = li(&["dnls", "verify", "--input", "/nonexistent/x.csv"]);
    assert_eq!(missing.status.code(), Some(1));
    let err: serde_json::Value = serde_json::from_slice(&missing.stderr).expect("json error on stderr");
    assert_eq!(err["error"], "io");
}

#[test]
fn malformed_config_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    for (name, body) in [
        ("unknown.cfg", "colour = blue\n"),
        ("noeq.cfg", "samples 10\n"),
        ("dup.cfg", "seed = 1\nseed = 2\n"),
        ("type.cfg", "samples = many\n"),
    ] {
        let path = dir.path().join(name);
        std::fs::write(&path, body).unwrap();
        let o = li(&["--config", path.to_str().unwrap(), "ybe"]);
        assert_eq!(o.status.code(), Some(2), "{name}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn config_values_apply_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.cfg");
    std::fs::write(&path, "# sweep\nsamples = 7\nseed = 11\nreport = json\n").unwrap();
    let cfg = path.to_str().unwrap();
    let o = li(&["--config", cfg, "ybe", "--kind", "xxz_quantum"]);
    let v = json_without_timing(&o);
    assert_eq!(v[0]["params"]["samples"], "7");
    assert_eq!(v[0]["params"]["seed"], "11");
    let o = li(&["--config", cfg, "--seed", "12", "ybe", "--kind", "xxz_quantum", "--samples", "3"]);
    let v = json_without_timing(&o);
    assert_eq!(v[0]["params"]["samples"], "3");
    assert_eq!(v[0]["params"]["seed"], "12");
}

#[test]
fn seeded_runs_are_deterministic() {
    let args = ["--seed", "5", "--report", "json", "dnls", "darboux", "--samples", "4"];
    let a = json_without_timing(&li(&args));
    let b = json_without_timing(&li(&args));
    assert_eq!(a, b);
    let c = json_without_timing(&li(&["--seed", "6", "--report", "json", "dnls", "darboux", "--samples", "4"]));
    assert_ne!(a[0]["max_residual"], c[0]["max_residual"]);
}

#[test]
fn env_seed_is_used_without_flag() {
    let run = |seed: &str| {
        let o = Command::new(env!("CARGO_BIN_EXE_li"))
            .args(["--report", "json", "ybe", "--kind", "rational_classical", "--samples", "3"])
            .env("LI_SEED", seed)
            .output()
            .unwrap();
        json_without_timing(&o)[0]["params"]["seed"].clone()
    };
    assert_eq!(run("42"), "42");
}

#[test]
fn reports_are_sorted_and_written_to_out() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = li(&["--out", out.to_str().unwrap(), "quantum", "weyl"]);
    assert_eq!(o.status.code(), Some(0));
    let names: Vec<String> = stdout(&o).lines().map(|l| l.split(':').next().unwrap().to_owned()).collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
    let file: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(file.as_array().unwrap().len(), names.len());
    assert!(file.as_array().unwrap().iter().all(|r| r["schema"] == 1));
}

#[test]
fn al_dump_round_trip_through_cli() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("al.csv");
    let o = li(&["al", "step", "--seeds", "2", "--csv", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(Path::new(&path).exists());
    let v = li(&["al", "verify", "--input", path.to_str().unwrap(), "--case", "C"]);
    assert_eq!(v.status.code(), Some(0), "{}", stdout(&v));
}
