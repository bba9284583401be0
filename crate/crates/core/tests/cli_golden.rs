mod common;

use std::path::PathBuf;

use common::{cases, check_case};

fn scratch() -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli_golden");
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn golden_outputs_are_reproduced() {
    let dir = scratch();
    let failures: Vec<String> = cases().iter().filter_map(|c| check_case(c, &dir).err()).collect();
    assert!(failures.is_empty(), "{}", failures.join("\n\n"));
}

#[test]
fn every_subcommand_is_covered() {
    for sub in ["fusion", "mckay", "charge", "hn", "duality"] {
        assert!(cases().iter().any(|c| c.args[0] == sub), "{sub}");
    }
}

#[test]
fn emitted_json_reparses() {
    use fusionstab::formats::{load_charge, ChargeJson};
    let dir = scratch();
    for c in cases().iter().filter(|c| c.exit == 0) {
        let r = common::run_case(c, &dir, 2);
        let stdout = r.text.split("--- stdout ---\n").nth(1).unwrap().split("--- stderr ---").next().unwrap();
        if c.args[0] == "charge" && c.args[1] == "solve" {
            for line in stdout.lines().skip(1) {
                let z = load_charge(line).unwrap();
                let back = serde_json::to_string(&ChargeJson::from(&z)).unwrap();
                assert_eq!(back, line);
            }
        } else if stdout.trim_start().starts_with('{') {
            let v: serde_json::Value = serde_json::from_str(stdout).unwrap_or_else(|e| panic!("{}: {e}", c.name));
            assert_eq!(fusionstab::formats::render(&v), stdout, "{}", c.name);
        }
    }
}

#[test]
fn hn_output_reparses_as_pieces() {
    use fusionstab::quiver_stability::{HnPiece, Interval};
    let dir = scratch();
    let case = cases().into_iter().find(|c| c.name == "hn_fixture_witness").unwrap();
    let r = common::run_case(&case, &dir, 3);
    let stdout = r.text.split("--- stdout ---\n").nth(1).unwrap().split("--- stderr ---").next().unwrap();
    let v: serde_json::Value = serde_json::from_str(stdout).unwrap();
    let pieces: Vec<HnPiece> = v["pieces"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| HnPiece {
            phase: p["phase"].as_f64().unwrap(),
            intervals: p["intervals"]
                .as_array()
                .unwrap()
                .iter()
                .map(|i| Interval { a: i[0].as_u64().unwrap() as usize, b: i[1].as_u64().unwrap() as usize })
                .collect(),
        })
        .collect();
    assert_eq!(pieces.len(), 2);
    assert_eq!(pieces[0].phase, 1.0);
}
