//! End-to-end tests of the `coincidence` binary.

use std::io::Write;
use std::process::{Command, Output};

use coincidence_iterates::report::Report;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coincidence"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).expect("utf-8 stderr")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(args: &[&str]) -> (Report, String) {
    let mut full = args.to_vec();
    full.push("--json");
    let o = run(&full);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = stdout(&o);
    (Report::from_json(&text).expect("valid report"), text)
}

fn level(r: &Report, m: u64) -> &coincidence_iterates::report::LevelRow {
    r.levels.iter().find(|l| l.m == m).expect("level present")
}

#[test]
fn circle_row_values() {
    let (r, _) = json(&["compute", "circle", "--a", "6", "--b", "2", "--n", "6"]);
    assert_eq!(r.space, "circle");
    let row = level(&r, 6);
    assert_eq!(row.r, "46592");
    assert_eq!(row.n, "46592");
    assert_eq!(row.np, "46368");
    assert_eq!(row.nphi, "46604");
    assert_eq!(r.levels.iter().map(|l| l.m).collect::<Vec<_>>(), [1, 2, 3, 6]);
}

#[test]
fn json_round_trip_is_byte_identical() {
    for args in [
        &["compute", "circle", "--a", "6", "--b", "2", "--n", "6"][..],
        &["compute", "klein", "--f", "2,3", "--g", "3,5", "--n", "6"][..],
        &[
            "compute",
            "torus",
            "--f",
            "[[1,4],[2,9]]",
            "--g",
            "[[7,8],[4,23]]",
            "--n",
            "6",
        ][..],
        &["cyclotomic", "--k", "2", "--m", "5"][..],
        &["oracle", "--a", "4", "--b", "-3", "--n", "3"][..],
    ] {
        let (report, text) = json(args);
        assert_eq!(report.to_json(), text, "{args:?}");
    }
}

#[test]
fn big_values_are_decimal_strings() {
    let o = run(&[
        "compute",
        "torus",
        "--f",
        "[[-2,2],[1,2]]",
        "--g",
        "[[-1,0],[1,1]]",
        "--n",
        "30",
        "--force-unsafe",
        "--json",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("\"221073919719322744136580\""));
    assert!(text.contains("\"unsafe\""));
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    for key in ["space", "inputs", "levels", "checks"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    let row = &v["levels"][0];
    for key in ["m", "R", "N", "NP", "NPhi", "flags"] {
        assert!(row.get(key).is_some(), "missing level field {key}");
    }
}

#[test]
fn non_commuting_torus_is_rejected_by_default() {
    let o = run(&[
        "compute",
        "torus",
        "--f",
        "[[-2,2],[1,2]]",
        "--g",
        "[[-1,0],[1,1]]",
        "--n",
        "30",
    ]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).to_lowercase().contains("commut"), "{}", stderr(&o));
}

#[test]
fn force_unsafe_prints_banner() {
    let o = run(&[
        "compute",
        "circle",
        "--a",
        "6",
        "--b",
        "2",
        "--n",
        "6",
        "--force-unsafe",
    ]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("UNSAFE") && out.contains("46356"), "{out}");
    let plain = stdout(&run(&["compute", "circle", "--a", "6", "--b", "2", "--n", "6"]));
    assert!(!plain.contains("46356"));
}

#[test]
fn klein_values_and_refusal() {
    let (r, _) = json(&["compute", "klein", "--f", "2,3", "--g", "3,5", "--n", "6"]);
    let row = level(&r, 6);
    assert_eq!(row.np, "10856400");
    assert_eq!(row.nphi, "10859184");
    let refused = run(&["compute", "klein", "--f", "2,3", "--g", "4,5", "--n", "2"]);
    assert_eq!(code(&refused), 2);
    let forced = run(&[
        "compute",
        "klein",
        "--f",
        "2,3",
        "--g",
        "4,5",
        "--n",
        "2",
        "--force-unsafe",
    ]);
    assert_eq!(code(&forced), 0);
    assert!(stdout(&forced).contains("UNSAFE"));
}

#[test]
fn csv_output() {
    let o = run(&["compute", "circle", "--a", "6", "--b", "2", "--n", "6", "--csv"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("m,R,N,NP,NPhi,flags"));
    assert_eq!(out.lines().count(), 5);
    assert!(out.contains("6,46592,46592,46368,46604"));
}

#[test]
fn malformed_input_exits_one() {
    for args in [
        &["compute", "circle", "--a", "x", "--b", "2", "--n", "6"][..],
        &["compute", "torus", "--f", "[[1,2]]", "--g", "[[1,0],[0,1]]", "--n", "2"][..],
        &["compute", "klein", "--f", "1,2", "--g", "3,5", "--n", "2"][..],
        &["compute", "circle", "--a", "6", "--b", "2", "--n", "0"][..],
        &["compute", "circle", "--a", "6", "--b", "2"][..],
        &["no-such-command"][..],
    ] {
        assert_eq!(code(&run(args)), 1, "{args:?}");
    }
    assert_eq!(code(&run(&["--help"])), 0);
}

#[test]
fn config_files() {
    let dir = tempfile::tempdir().unwrap();
    let toml_path = dir.path().join("job.toml");
    std::fs::File::create(&toml_path)
        .unwrap()
        .write_all(b"space = \"circle\"\na = 6\nb = 2\nn = 6\noutput = \"json\"\n")
        .unwrap();
    let o = run(&["compute", "--config", toml_path.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r = Report::from_json(&stdout(&o)).unwrap();
    assert_eq!(level(&r, 6).np, "46368");

    let json_path = dir.path().join("job.json");
    std::fs::write(
        &json_path,
        r#"{"space": "klein", "f": "2,3", "g": "3,5", "n": 6, "output": "json"}"#,
    )
    .unwrap();
    let o = run(&["compute", "--config", json_path.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r = Report::from_json(&stdout(&o)).unwrap();
    assert_eq!(level(&r, 6).np, "10856400");

    // flags override the file
    let o = run(&["compute", "--config", toml_path.to_str().unwrap(), "--n", "3"]);
    let r = Report::from_json(&stdout(&o)).unwrap();
    assert_eq!(r.levels.last().unwrap().m, 3);

    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "space = \"circle\"\nbogus = 1\n").unwrap();
    assert_eq!(code(&run(&["compute", "--config", bad.to_str().unwrap()])), 1);
}

#[test]
fn cyclotomic_command() {
    let o = run(&["cyclotomic", "--k", "2", "--m", "3"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("x^2 - x + 1"), "{}", stdout(&o));
    let o = run(&["cyclotomic", "--k", "2", "--m", "5"]);
    assert!(stdout(&o).contains("x^4 - x^3 + x^2 - x + 1"));
    let o = run(&["cyclotomic", "--k", "1", "--m", "4"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).to_lowercase().contains("degenerate"), "{}", stdout(&o));
    assert_eq!(code(&run(&["cyclotomic", "--k", "2", "--m", "4"])), 2);
}

#[test]
fn oracle_command() {
    for (a, b, n) in [("6", "2", "6"), ("4", "-3", "3")] {
        let o = run(&["oracle", "--a", a, "--b", b, "--n", n]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        assert!(stdout(&o).contains("MATCH"));
        assert!(!stdout(&o).contains("MISMATCH"));
    }
    assert_eq!(code(&run(&["oracle", "--a", "2", "--b", "2", "--n", "3"])), 2);
}

#[test]
fn verify_command_passes() {
    let o = run(&["verify-paper"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.contains("paper prints 266; formula gives 2646; NP\u{2086} consistent with 2646"));
    assert!(out.contains("46352"));
    assert!(out.contains("221073919719792987930625"));
    assert!(out.lines().filter(|l| l.starts_with("[FAIL]")).count() == 0);
    assert_eq!(out, stdout(&run(&["verify-paper"])), "output is deterministic");
}
