use std::path::Path;
use std::process::{Command, Output};

use g1rad::ineq::InequalityReport;
use g1rad::suite::Batch;

fn wrad(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wrad"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

const SMALL: [&str; 7] = [
    "verify",
    "--suites",
    "lemma21b,thm22,rem25",
    "--dims",
    "2,3",
    "--trials",
    "3",
];

#[test]
fn verify_writes_json_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let mut args = SMALL.to_vec();
    args.extend(["--out", out.to_str().unwrap()]);
    let run = wrad(&args);
    assert_eq!(
        run.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&run.stderr)
    );

    let batch: Batch = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(batch.suites.len(), 3);
    assert!(batch.suites.iter().all(|s| s.total == 6 && s.passed == 6));
    assert_eq!(batch.details.len(), 3 * 6 * 2);
    assert_eq!(batch.config.dims, vec![2, 3]);
}

#[test]
fn verify_report_round_trips() {
    let run = wrad(&SMALL);
    let text = String::from_utf8(run.stdout).unwrap();
    let batch: Batch = serde_json::from_str(&text).unwrap();
    let again = g1rad::suite::render_report(
        &batch.config,
        &batch.suites,
        &batch.details,
        g1rad::suite::ReportFormat::Json,
    )
    .unwrap();
    assert_eq!(again, text);
}

#[test]
fn verify_csv() {
    let mut args = SMALL.to_vec();
    args.extend(["--format", "csv"]);
    let run = wrad(&args);
    assert_eq!(run.status.code(), Some(0));
    let text = String::from_utf8(run.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "name,lhs,rhs,ratio,pass,seed,dim");
    assert_eq!(lines.len(), 1 + 36);
    assert!(lines[1..].iter().all(|l| l.split(',').count() == 7));
}

#[test]
fn replay_matches_batch_row() {
    let batch: Batch = serde_json::from_slice(&wrad(&SMALL).stdout).unwrap();
    let mut args = SMALL.to_vec();
    args.extend(["--replay", "thm22:3:1"]);
    let run = wrad(&args);
    assert_eq!(run.status.code(), Some(0));
    let replayed: Vec<InequalityReport> = serde_json::from_slice(&run.stdout).unwrap();
    // thm22 follows lemma21b; trial 1 of dim 3 is the fifth of six trials
    let offset = 6 * 2 + 4 * 2;
    assert_eq!(replayed, batch.details[offset..offset + 2].to_vec());
}

#[test]
fn configuration_errors_exit_2() {
    for args in [
        vec!["verify", "--rho-max", "1.5"],
        vec!["verify", "--suites", "lemma99"],
        vec!["verify", "--trials", "0"],
        vec!["verify", "--format", "xml"],
        vec!["verify", "--replay", "thm22:2"],
        vec!["verify", "--replay", "thm22:2:500"],
        vec!["verify", "--dims", "two"],
        vec!["frobnicate"],
    ] {
        assert_eq!(wrad(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn invalid_thread_count_exits_2() {
    let run = Command::new(env!("CARGO_BIN_EXE_wrad"))
        .args(["verify", "--suites", "cor23", "--trials", "1"])
        .env("WRAD_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(run.status.code(), Some(2));
}

#[test]
fn certify_outcomes() {
    let dir = tempfile::tempdir().unwrap();
    let zero = write(
        dir.path(),
        "zero.json",
        r#"{"n":2,"re":[[0,0],[0,0]],"im":[[0,0],[0,0]],"spectrum":[[0,0],[0,0]]}"#,
    );
    let run = wrad(&["certify", "--input", &zero]);
    assert_eq!(run.status.code(), Some(0));
    let summary: serde_json::Value = serde_json::from_slice(&run.stdout).unwrap();
    assert_eq!(summary["d"], 1.0);

    let jordan = write(
        dir.path(),
        "jordan.json",
        r#"{"n":2,"re":[[0.5,1],[0,0.5]],"im":[[0,0],[0,0]],"spectrum":[[0.5,0],[0.5,0]]}"#,
    );
    let run = wrad(&["certify", "--input", &jordan, "--samples", "32"]);
    assert_eq!(run.status.code(), Some(1));

    let boundary = write(
        dir.path(),
        "boundary.json",
        r#"{"n":1,"re":[[1.0]],"im":[[0.0]],"spectrum":[[1.0,0.0]]}"#,
    );
    assert_eq!(
        wrad(&["certify", "--input", &boundary]).status.code(),
        Some(1)
    );

    let broken = write(dir.path(), "broken.json", r#"{"n":2,"re":[[0]]"#);
    assert_eq!(
        wrad(&["certify", "--input", &broken]).status.code(),
        Some(2)
    );
    let missing = dir.path().join("absent.json");
    assert_eq!(
        wrad(&["certify", "--input", missing.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn wrad_prints_numerical_radius() {
    let dir = tempfile::tempdir().unwrap();
    let nil = write(
        dir.path(),
        "nil.json",
        r#"{"n":2,"re":[[0,1],[0,0]],"im":[[0,0],[0,0]]}"#,
    );
    let run = wrad(&["wrad", "--input", &nil]);
    assert_eq!(run.status.code(), Some(0));
    let summary: serde_json::Value = serde_json::from_slice(&run.stdout).unwrap();
    assert!((summary["value"].as_f64().unwrap() - 0.5).abs() < 1e-10);

    let ragged = write(
        dir.path(),
        "ragged.json",
        r#"{"n":2,"re":[[0,1]],"im":[[0,0],[0,0]]}"#,
    );
    assert_eq!(wrad(&["wrad", "--input", &ragged]).status.code(), Some(2));
    assert_eq!(
        wrad(&["wrad", "--input", &nil, "--grid", "4"])
            .status
            .code(),
        Some(2)
    );
}
