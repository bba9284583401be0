//! CLI golden cases shared by the golden-file tests and the acceptance gate.

#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

pub struct Case {
    pub name: &'static str,
    pub args: &'static [&'static str],
    pub exit: i32,
    /// Extra file written by the command, compared against `golden/<name>.<ext>`.
    pub artifact: Option<&'static str>,
}


macro_rules! case {
    ($name:expr, $exit:expr, [$($arg:expr),*]) => {
        Case { name: $name, args: &[$($arg),*], exit: $exit, artifact: None }
    };
}

pub fn cases() -> Vec<Case> {
    vec![
        case!("fusion_fpdim_fib", 0, ["fusion", "fpdim", "tests/fixtures/fib.json"]),
        case!("fusion_fpdim_reps3", 0, ["fusion", "fpdim", "tests/fixtures/reps3.json"]),
        case!("fusion_validate_rank1", 0, ["fusion", "validate", "tests/fixtures/rank1.json"]),
        case!("fusion_validate_broken_reps3", 2, ["fusion", "validate", "tests/fixtures/broken_reps3.json"]),
        case!("fusion_validate_missing_file", 1, ["fusion", "validate", "tests/fixtures/no_such_file.json"]),
        case!("fusion_validate_malformed", 1, ["fusion", "validate", "tests/fixtures/a4.json"]),
        case!("mckay_s3_std_separated_dot", 0, ["mckay", "--builtin", "S3", "--rep", "std", "--separated", "--dot"]),
        case!("mckay_s3_std", 0, ["mckay", "--builtin", "S3", "--rep", "std"]),
        case!("mckay_c2_triv", 0, ["mckay", "--builtin", "C2", "--rep", "triv"]),
        case!("mckay_c2_kronecker_separated", 0, ["mckay", "--builtin", "C2", "--rep", "triv+sign", "--separated"]),
        case!("mckay_s4_std3_separated", 0, ["mckay", "--builtin", "S4", "--rep", "std3", "--separated"]),
        case!("mckay_s3_table_file", 0, ["mckay", "--table", "tests/fixtures/s3.chartable.json", "--rep", "std", "--separated"]),
        case!("mckay_unknown_irrep", 1, ["mckay", "--builtin", "S3", "--rep", "nope"]),
        case!("charge_solve_fib_a4", 0, ["charge", "solve", "tests/fixtures/fib_a4.action.json"]),
        case!("charge_solve_trivial_vecg_rank2", 0, ["charge", "solve", "tests/fixtures/trivial_vecG_rank2.action.json"]),
        case!("charge_check_pentagon", 0, ["charge", "check", "tests/fixtures/pentagon.charge.json", "tests/fixtures/fib_a4.action.json"]),
        case!("charge_check_nonequivariant", 2, ["charge", "check", "tests/fixtures/nonequivariant.charge.json", "tests/fixtures/fib_a4.action.json"]),
        Case {
            name: "hn_pentagon_all_intervals",
            args: &["hn", "tests/fixtures/a4.json", "tests/fixtures/all_intervals.json", "tests/fixtures/pentagon.charge.json", "--svg", "{artifact}"],
            exit: 0,
            artifact: Some("svg"),
        },
        case!("hn_a1_single", 0, ["hn", "tests/fixtures/a1.json", "tests/fixtures/single.json", "tests/fixtures/any.json"]),
        case!("hn_fixture_witness", 0, ["hn", "tests/fixtures/a4.json", "tests/fixtures/fixture_rep.json", "tests/fixtures/fixture_charge.json"]),
        case!("hn_invalid_region", 2, ["hn", "tests/fixtures/a4.json", "tests/fixtures/single.json", "tests/fixtures/invalid_region.charge.json"]),
        case!("duality_c2_kronecker", 0, ["duality", "tests/fixtures/c2_kronecker.bundle.json"]),
        case!("duality_s3_mckay", 0, ["duality", "tests/fixtures/s3_mckay.bundle.json"]),
        case!("duality_trivial_group", 0, ["duality", "tests/fixtures/trivial_group.bundle.json"]),
        case!("duality_c2_scaled_induction", 2, ["duality", "tests/fixtures/c2_scaled.bundle.json"]),
    ]
}

pub fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn golden_dir() -> PathBuf {
    crate_dir().join("tests/golden")
}

/// Output of one run, rendered as the golden-file text, plus the artifact if any.
pub struct RunResult {
    pub exit: i32,
    pub text: String,
    pub artifact: Option<Vec<u8>>,
}

pub fn run_case(case: &Case, scratch: &Path, attempt: usize) -> RunResult {
    let artifact_path = case.artifact.map(|ext| scratch.join(format!("{}.{attempt}.{ext}", case.name)));
    let args: Vec<String> = case
        .args
        .iter()
        .map(|a| match (&artifact_path, *a) {
            (Some(p), "{artifact}") => p.display().to_string(),
            _ => a.to_string(),
        })
        .collect();
    let out = Command::new(env!("CARGO_BIN_EXE_fusionstab"))
        .args(&args)
        .current_dir(crate_dir())
        .output()
        .expect("binary runs");
    let exit = out.status.code().unwrap_or(-1);
    let text = format!(
        "exit: {exit}\n--- stdout ---\n{}--- stderr ---\n{}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    let artifact = artifact_path.map(|p| fs::read(&p).expect("artifact written"));
    RunResult { exit, text, artifact }
}

/// Compares a run against the golden files, or rewrites them when `UPDATE_GOLDEN` is set.
pub fn check_case(case: &Case, scratch: &Path) -> Result<(), String> {
    let first = run_case(case, scratch, 0);
    let second = run_case(case, scratch, 1);
    if first.text != second.text || first.artifact != second.artifact {
        return Err(format!("{}: reruns differ", case.name));
    }
    if first.exit != case.exit {
        return Err(format!("{}: exit {} expected {}\n{}", case.name, first.exit, case.exit, first.text));
    }
    let golden = golden_dir().join(format!("{}.out", case.name));
    let golden_artifact = case.artifact.map(|ext| golden_dir().join(format!("{}.{ext}", case.name)));
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::write(&golden, &first.text).unwrap();
        if let (Some(p), Some(bytes)) = (&golden_artifact, &first.artifact) {
            fs::write(p, bytes).unwrap();
        }
        return Ok(());
    }
    let expected = fs::read_to_string(&golden).map_err(|e| format!("{}: {e}", golden.display()))?;
    if expected != first.text {
        return Err(format!("{}: output differs from golden\n--- got ---\n{}--- expected ---\n{expected}", case.name, first.text));
    }
    if let (Some(p), Some(bytes)) = (&golden_artifact, &first.artifact) {
        let expected = fs::read(p).map_err(|e| format!("{}: {e}", p.display()))?;
        if &expected != bytes {
            return Err(format!("{}: artifact differs from {}", case.name, p.display()));
        }
    }
    Ok(())
}
