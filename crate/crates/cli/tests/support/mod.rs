//! Shared runner for the golden-file cases.

use std::path::{Path, PathBuf};
use std::process::Command;

pub struct Case {
    pub name: &'static str,
    args: &'static [&'static str],
    scenario: &'static str,
    env: Option<(&'static str, &'static str)>,
    pub exit: i32,
    table: bool,
}

const fn case(name: &'static str, args: &'static [&'static str], scenario: &'static str, exit: i32) -> Case {
    Case {
        name,
        args,
        scenario,
        env: None,
        exit,
        table: false,
    }
}

const fn with_table(c: Case) -> Case {
    Case { table: true, ..c }
}

pub const CASES: &[Case] = &[
    case("ideal_tsb", &["tsb"], "ideal.scn", 0),
    case("ideal_t0", &["t0"], "ideal.scn", 0),
    case("ideal_shift", &["shift"], "ideal.scn", 0),
    case("ideal_tc_numeric", &["tc-numeric"], "ideal.scn", 0),
    with_table(case("ideal_density", &["density"], "ideal.scn", 0)),
    case("ideal_verify", &["verify"], "ideal.scn", 0),
    case("rb87_tsb", &["tsb"], "rb87.scn", 0),
    case("rb87_t0", &["t0"], "rb87.scn", 0),
    case("rb87_shift", &["shift"], "rb87.scn", 0),
    case(
        "rb87_shift_verbatim",
        &["shift", "--mode", "paper-verbatim"],
        "rb87.scn",
        0,
    ),
    case("rb87_tc_numeric", &["tc-numeric"], "rb87.scn", 0),
    with_table(case("rb87_kappa", &["kappa"], "rb87.scn", 0)),
    with_table(case("rb87_density", &["density"], "rb87.scn", 0)),
    case("rb87_verify", &["verify"], "rb87.scn", 0),
    with_table(case("rb87_sweep_shift", &["shift"], "rb87_sweep.scn", 0)),
    with_table(case("rb87_sweep_tc_numeric", &["tc-numeric"], "rb87_sweep.scn", 0)),
    case("stiff_tc_numeric", &["tc-numeric"], "stiff.scn", 2),
    with_table(case("stiff_density", &["density"], "stiff.scn", 2)),
    case("strong_verify", &["verify"], "strong.scn", 3),
    case("malformed", &["t0"], "malformed.scn", 1),
    case("missing_file", &["t0"], "does-not-exist.scn", 1),
    Case {
        env: Some(("BOSECRIT_TOL", "0.5")),
        ..case("bad_tolerance", &["t0"], "ideal.scn", 1)
    },
];

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

struct Run {
    stdout: String,
    table: Option<String>,
    exit: i32,
}

fn execute(c: &Case) -> Run {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("table.csv");
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_bosecrit"));
    cmd.args(c.args)
        .arg("--scenario")
        .arg(golden_dir().join(c.scenario))
        .env_remove("BOSECRIT_TOL");
    if c.table {
        cmd.arg("--out").arg(&out);
    }
    if let Some((k, v)) = c.env {
        cmd.env(k, v);
    }
    let output = cmd.output().unwrap();
    Run {
        stdout: String::from_utf8(output.stdout).unwrap(),
        table: c.table.then(|| std::fs::read_to_string(&out).unwrap_or_default()),
        exit: output.status.code().unwrap_or(-1),
    }
}

fn compare(path: &Path, actual: &str) -> Result<(), String> {
    if std::env::var_os("BLESS").is_some() {
        std::fs::write(path, actual).unwrap();
        return Ok(());
    }
    let expected = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    if expected == actual {
        Ok(())
    } else {
        Err(format!(
            "{} differs:\n--- expected\n{expected}\n--- actual\n{actual}",
            path.display()
        ))
    }
}

/// Checks one case against its golden files and against a second run.
pub fn check_case(c: &Case) -> Result<(), String> {
    let first = execute(c);
    if first.exit != c.exit {
        return Err(format!(
            "{}: exit {} (expected {})\n{}",
            c.name, first.exit, c.exit, first.stdout
        ));
    }
    let expected = golden_dir().join("expected");
    compare(&expected.join(format!("{}.stdout", c.name)), &first.stdout)?;
    if let Some(table) = &first.table {
        compare(&expected.join(format!("{}.csv", c.name)), table)?;
    }
    let second = execute(c);
    if second.stdout != first.stdout || second.table != first.table || second.exit != first.exit {
        return Err(format!("{}: second run differs", c.name));
    }
    Ok(())
}
