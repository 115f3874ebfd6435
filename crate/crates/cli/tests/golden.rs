//! Golden-file tests for the `bosecrit` binary. Run with `BLESS=1` to
//! rewrite the expected files.

mod support;

use std::process::Command;

use support::{check_case, golden_dir, CASES};

#[test]
fn golden_files_and_determinism() {
    if std::env::var_os("BLESS").is_some() {
        std::fs::create_dir_all(golden_dir().join("expected")).unwrap();
    }
    let failures: Vec<String> = CASES.iter().filter_map(|c| check_case(c).err()).collect();
    assert!(failures.is_empty(), "{}", failures.join("\n\n"));
}

#[test]
fn help_exits_zero() {
    let out = Command::new(env!("CARGO_BIN_EXE_bosecrit"))
        .arg("--help")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn unknown_command_exits_one() {
    let out = Command::new(env!("CARGO_BIN_EXE_bosecrit"))
        .args(["warp", "--scenario", "rb87-paper"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn builtin_scenario_matches_file() {
    let run = |scenario: &str| {
        Command::new(env!("CARGO_BIN_EXE_bosecrit"))
            .args(["kappa", "--scenario", scenario])
            .output()
            .unwrap()
            .stdout
    };
    let builtin = String::from_utf8(run("rb87-paper")).unwrap();
    let file = String::from_utf8(run(golden_dir().join("rb87.scn").to_str().unwrap())).unwrap();
    let body = |s: &str| s.lines().skip(1).collect::<Vec<_>>().join("\n");
    assert_eq!(body(&builtin), body(&file));
}
