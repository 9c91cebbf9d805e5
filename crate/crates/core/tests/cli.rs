//! End-to-end runs of the `ternary` binary.

use std::process::{Command, Output};

fn ternary(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ternary")).args(args).output().expect("binary runs")
}

#[test]
fn seeded_runs_are_byte_identical() {
    for args in [
        &["thermal", "--L", "5", "--seed", "11"][..],
        &["verify", "--L", "4", "--seed", "11"][..],
        &["sweep", "curie"][..],
    ] {
        let (a, b) = (ternary(args), ternary(args));
        assert!(a.status.success(), "{args:?}: {}", String::from_utf8_lossy(&a.stderr));
        assert!(!a.stdout.is_empty());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn different_seeds_change_thermal_phases() {
    let a = ternary(&["thermal", "--L", "5", "--seed", "1"]);
    let b = ternary(&["thermal", "--L", "5", "--seed", "2"]);
    assert_ne!(a.stdout, b.stdout);
}

#[test]
fn oversized_chain_is_refused() {
    let out = ternary(&["verify", "--L", "20"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn unknown_observable_is_an_error() {
    let out = ternary(&["sweep", "magnetization"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn toml_config_drives_a_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    let csv = dir.path().join("dc.csv");
    std::fs::write(
        &cfg,
        format!(
            "suite = \"transport\"\nL = 4\nseed = 3\nobservable = \"dc\"\nout = {:?}\n\n\
             [grid]\nlambda = [1.0]\nphi = [0.0, 1.5707963267948966]\nalpha = [0.0]\n",
            csv
        ),
    )
    .unwrap();
    let out = ternary(&["--config", cfg.to_str().unwrap(), "sweep"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("# observable"));
    assert!(text.lines().any(|l| l.ends_with("5.00000000000e-1")), "{text}");
}

#[test]
fn unknown_config_keys_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "suite = \"x\"\nsites = 4\n").unwrap();
    let out = ternary(&["--config", cfg.to_str().unwrap(), "verify"]);
    assert_eq!(out.status.code(), Some(2));
}
