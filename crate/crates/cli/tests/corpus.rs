use std::path::{Path, PathBuf};
use std::process::Command;

use shortcalc_cli::problem::{parse_json, parse_problem};

fn corpus() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/corpus")
}

fn shortcalc(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_shortcalc"))
        .args(args)
        .current_dir(corpus())
        .env_remove("SHORTCALC_TOL")
        .output()
        .expect("binary runs")
}

fn files_in(dir: &str) -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = std::fs::read_dir(corpus().join(dir))
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    v.sort();
    assert!(!v.is_empty(), "empty corpus dir {dir}");
    v
}

#[test]
fn well_formed_corpus_round_trips_byte_for_byte() {
    for path in files_in("pass").into_iter().chain(files_in("fail")) {
        let text = std::fs::read_to_string(&path).unwrap();
        let p = parse_problem(&path).unwrap();
        assert_eq!(p.to_json(), text, "{}", path.display());
        assert_eq!(parse_json(&p.to_json(), &path).unwrap(), p);
    }
}

/// (arguments, expected exit status, golden report under `expected/`)
const CASES: &[(&[&str], i32, &str)] = &[
    (&["short", "pass/running_example.json"], 0, "running_example.short.json"),
    (&["compat", "pass/running_example.json"], 0, "running_example.compat.json"),
    (&["order", "--rel", "minus", "pass/running_example.json"], 0, "running_example.order-minus.json"),
    (
        &["order", "--rel", "wstar-left", "--C", "C", "pass/weighted_star.json"],
        0,
        "weighted_star.order-wstar-left.json",
    ),
    (&["minimize", "fail/minimize_hypothesis.json"], 1, "minimize_hypothesis.minimize.json"),
];

#[test]
fn golden_reports_and_exit_statuses() {
    let dir = std::env::temp_dir().join(format!("shortcalc-corpus-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    for (i, (args, status, golden)) in CASES.iter().enumerate() {
        let out_path = dir.join(format!("{i}.json"));
        let mut full: Vec<&str> = args.to_vec();
        let out_str = out_path.to_str().unwrap();
        full.extend(["--json", out_str]);
        let out = shortcalc(&full);
        assert_eq!(out.status.code(), Some(*status), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        let got = std::fs::read_to_string(&out_path).unwrap();
        let want = std::fs::read_to_string(corpus().join("expected").join(golden)).unwrap();
        assert_eq!(got, want, "report for {args:?} drifted from {golden}");

        // reports are byte-stable across runs
        shortcalc(&full);
        assert_eq!(std::fs::read_to_string(&out_path).unwrap(), want);
    }
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn malformed_inputs_exit_with_status_2() {
    for path in files_in("malformed") {
        let p = path.to_str().unwrap();
        let out = shortcalc(&["order", "--rel", "minus", p]);
        assert_eq!(out.status.code(), Some(2), "{p}");
        assert!(!out.stderr.is_empty());
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn usage_errors_exit_with_status_2() {
    let running = "pass/running_example.json";
    for args in [
        vec!["order", "--rel", "bogus", running],
        vec!["order", "--rel", "minus", "--A", "Missing", running],
        vec!["short", "--S", "W", running],
        vec!["short"],
        vec!["verify", "--suite", "nope"],
        vec!["minimize", "--p", "0.5", running],
        vec!["short", "no_such_file.json"],
    ] {
        assert_eq!(shortcalc(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn false_verdict_is_not_a_failure() {
    let out = shortcalc(&["order", "--rel", "minus", "pass/running_example.json"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("holds = false"));
    assert!(text.contains("reason = range_sum_not_direct"));
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn environment_tolerance_and_flag_precedence() {
    let run = |env: Option<&str>, extra: &[&str]| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_shortcalc"));
        cmd.current_dir(corpus()).args(["compat", "pass/running_example.json"]).args(extra);
        match env {
            Some(v) => cmd.env("SHORTCALC_TOL", v),
            None => cmd.env_remove("SHORTCALC_TOL"),
        };
        let out = cmd.output().unwrap();
        (out.status.code(), String::from_utf8(out.stdout).unwrap())
    };
    let (code, text) = run(Some("1e-6"), &[]);
    assert_eq!(code, Some(0));
    assert!(text.contains("cmp_abs 1e-6"), "{text}");
    let (_, text) = run(Some("1e-6"), &["--tol", "1e-7"]);
    assert!(text.contains("cmp_abs 1e-7"), "{text}");
    let (code, _) = run(Some("loose"), &[]);
    assert_eq!(code, Some(2));
}

#[test]
fn csv_inputs_combine_with_json() {
    let dir = std::env::temp_dir().join(format!("shortcalc-csv-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let a = dir.join("A.csv");
    let b = dir.join("B.csv");
    std::fs::write(&a, "1, 0\n0, 0\n").unwrap();
    std::fs::write(&b, "1, 0\n0, 1\n").unwrap();
    let out = shortcalc(&["order", "--rel", "minus", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().contains("holds = true"));
    // a clash with the JSON file's A is an input error
    let out = shortcalc(&["order", "--rel", "minus", "pass/running_example.json", a.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn verify_reports_every_suite() {
    let out = shortcalc(&["verify", "--n", "4", "--trials", "10", "--seed", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    for s in shortcalc::suites::SUITES {
        assert!(text.contains(&format!("{s} = true")), "{s} missing");
    }
}
