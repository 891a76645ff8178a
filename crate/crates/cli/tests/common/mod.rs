#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn manifest_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

/// A scratch directory holding copies of the matrix fixtures.
pub fn workdir() -> tempfile::TempDir {
    let dir = tempfile::tempdir().expect("temp dir");
    for entry in fs::read_dir(manifest_dir().join("tests/fixtures")).expect("fixtures") {
        let path = entry.expect("fixture entry").path();
        fs::copy(&path, dir.path().join(path.file_name().unwrap())).expect("copy fixture");
    }
    dir
}

pub fn objcheck(dir: &Path, args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_objcheck"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("run objcheck");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).expect("utf-8 stdout"),
        stderr: String::from_utf8(out.stderr).expect("utf-8 stderr"),
    }
}

pub struct Case {
    pub name: &'static str,
    pub args: &'static [&'static str],
    pub code: i32,
}

const fn case(name: &'static str, args: &'static [&'static str], code: i32) -> Case {
    Case { name, args, code }
}

pub const CASES: &[Case] = &[
    case(
        "make_rotation_plane",
        &["make-rotation", "--u", "1 0", "--v", "0 1"],
        0,
    ),
    case(
        "make_rotation_order_one",
        &["make-rotation", "--u", "1", "--v", "1"],
        0,
    ),
    case(
        "make_rotation_reversal",
        &["make-rotation", "--u", "1", "--v", "-1"],
        1,
    ),
    case(
        "make_rotation_space",
        &["make-rotation", "--u", "1,0,0", "--v", "0,0,1"],
        0,
    ),
    case(
        "make_rotation_not_unit",
        &["make-rotation", "--u", "2 0", "--v", "0 1"],
        2,
    ),
    case(
        "make_rotation_mismatch",
        &["make-rotation", "--u", "1 0", "--v", "0 0 1"],
        2,
    ),
    case(
        "check_quadratic_identity",
        &["check-quadratic", "identity3.txt"],
        0,
    ),
    case(
        "check_quadratic_identity_json",
        &["check-quadratic", "identity3.txt", "--json"],
        0,
    ),
    case(
        "check_quadratic_antisymmetric",
        &["check-quadratic", "antisymmetric.txt"],
        0,
    ),
    case(
        "check_quadratic_diagonal",
        &["check-quadratic", "diag12.txt"],
        1,
    ),
    case(
        "check_quadratic_diagonal_json",
        &["check-quadratic", "diag12.txt", "--json"],
        1,
    ),
    case(
        "check_quadratic_malformed",
        &["check-quadratic", "malformed.txt"],
        2,
    ),
    case(
        "check_quadratic_missing",
        &["check-quadratic", "absent.txt"],
        2,
    ),
    case(
        "check_function_radial",
        &["check-function", "norm(x)^2 + sin(norm(x))", "--dim", "3"],
        3,
    ),
    case(
        "check_function_radial_json",
        &[
            "check-function",
            "norm(x)^2 + sin(norm(x))",
            "--dim",
            "3",
            "--json",
            "--seed",
            "5",
        ],
        3,
    ),
    case(
        "check_function_linear",
        &["check-function", "x1", "--dim", "2"],
        1,
    ),
    case(
        "check_function_linear_json",
        &["check-function", "x1", "--dim", "2", "--json"],
        1,
    ),
    case(
        "check_function_one_dim",
        &["check-function", "x1^2", "--dim", "1"],
        0,
    ),
    case(
        "check_function_parameter",
        &["check-function", "t^2", "--dim", "2"],
        2,
    ),
    case(
        "check_function_index",
        &["check-function", "x3", "--dim", "2"],
        2,
    ),
    case(
        "check_function_syntax",
        &["check-function", "2 +", "--dim", "2"],
        2,
    ),
    case(
        "check_function_domain",
        &["check-function", "log(x1)", "--dim", "2"],
        2,
    ),
    case(
        "profile_square",
        &["profile", "norm(x)^2", "--dim", "5", "--radii", "0,1,2"],
        0,
    ),
    case(
        "profile_linear",
        &["profile", "x1", "--dim", "2", "--radii", "1"],
        0,
    ),
    case(
        "profile_log",
        &["profile", "log(norm(x))", "--dim", "2", "--radii", "0,1"],
        2,
    ),
    case(
        "profile_negative",
        &["profile", "norm(x)", "--dim", "2", "--radii", "1,-1"],
        2,
    ),
    case(
        "sample_rotation_one_dim",
        &[
            "sample-rotation",
            "--dim",
            "1",
            "--count",
            "3",
            "--out",
            "rot",
        ],
        0,
    ),
    case(
        "sample_rotation_zero",
        &[
            "sample-rotation",
            "--dim",
            "2",
            "--count",
            "0",
            "--out",
            "rot",
        ],
        2,
    ),
    case("usage_unknown", &["transmogrify"], 2),
];

pub fn golden_path(name: &str) -> PathBuf {
    manifest_dir()
        .join("tests/golden")
        .join(format!("{name}.stdout"))
}

/// Runs a case and compares it with its golden file. Setting OBJCHECK_BLESS
/// rewrites the golden file instead.
pub fn check_case(case: &Case) -> Result<(), String> {
    let dir = workdir();
    let run = objcheck(dir.path(), case.args);
    if run.code != case.code {
        return Err(format!(
            "{}: exit {} (expected {}), stderr: {}",
            case.name, run.code, case.code, run.stderr
        ));
    }
    let silent_failure = case.code == 2 || (case.code == 1 && run.stdout.is_empty());
    if silent_failure && !run.stderr.starts_with("error:") {
        return Err(format!(
            "{}: expected a diagnostic, got {:?}",
            case.name, run.stderr
        ));
    }
    let path = golden_path(case.name);
    if std::env::var_os("OBJCHECK_BLESS").is_some() {
        fs::write(&path, &run.stdout).expect("write golden");
        return Ok(());
    }
    let expected = fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    if run.stdout != expected {
        return Err(format!(
            "{}: stdout differs from golden\n--- got\n{}--- expected\n{}",
            case.name, run.stdout, expected
        ));
    }
    Ok(())
}
