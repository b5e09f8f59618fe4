use std::process::{Command, Output};

fn zerosum(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zerosum")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn davenport_and_friends() {
    let o = zerosum(&["davenport", "3,3"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "5\n");
    assert_eq!(stdout(&zerosum(&["dm", "3,3", "3"])), "11\n");
    assert_eq!(stdout(&zerosum(&["dk", "3^2", "3"])), "7\n");
}

#[test]
fn solve_mod() {
    let o = zerosum(&["solve-mod", "2", "1", "--n", "4"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "unsolvable\n");
    assert_eq!(stdout(&zerosum(&["solve-mod", "2", "1", "--n", "5"])), "solvable\n");
    assert_eq!(stdout(&zerosum(&["solve-mod", "2", "1"])), "cofinite d=2 T={1}\n");
}

#[test]
fn structured_output_has_versioned_header() {
    let o = zerosum(&["--format", "structured", "snf", "2 4; 6 8"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<serde_json::Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines[0]["schema"], "zerosum-cli");
    assert_eq!(lines[0]["version"], 1);
    assert_eq!(lines[0]["command"], "snf");
    assert_eq!(lines[1]["diagonal"], serde_json::json!(["2", "4"]));
    assert_eq!(lines[1]["verified"], true);
}

#[test]
fn distinct_exit_codes() {
    assert_eq!(zerosum(&["davenport", "3,x"]).status.code(), Some(3));
    assert_eq!(zerosum(&["--budget", "10", "davenport", "3^3"]).status.code(), Some(4));
    assert_eq!(zerosum(&["solve-mod", "1 2", "1; 2"]).status.code(), Some(5));
    assert_eq!(zerosum(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(zerosum(&["verify-cert", "/nonexistent/file.cert"]).status.code(), Some(6));
}

#[test]
fn output_does_not_depend_on_workers() {
    let a = zerosum(&["--workers", "1", "enumerate-a13"]);
    let b = zerosum(&["--workers", "4", "enumerate-a13"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).ends_with("representatives 15\n"));
}

#[test]
fn enumerate_matches_fixture() {
    let fixture = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/a13_grids.txt");
    let o = zerosum(&["enumerate-a13", "--fixture", fixture]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("fixture 15 grids, match true"));
}

#[test]
fn certificates_written_and_replayed() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = zerosum(&["--out", out, "prove-nofunc2"]);
    assert!(o.status.success());
    assert!(stdout(&o).ends_with("refuted 45/45\n"));
    let mut files: Vec<_> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    assert_eq!(files.len(), 45);

    // replay only the fast C1 and C3 files here; the acceptance run covers all
    let quick: Vec<String> = files
        .iter()
        .filter(|f| !f.to_string_lossy().ends_with("C2.cert"))
        .map(|f| f.display().to_string())
        .collect();
    let mut args = vec!["verify-cert"];
    args.extend(quick.iter().map(String::as_str));
    let v = zerosum(&args);
    assert!(v.status.success(), "{}", stdout(&v));
    assert!(stdout(&v).ends_with("verified 30/30\n"));

    // multiply the first witness by 5
    let victim = files.iter().find(|f| f.to_string_lossy().ends_with("C3.cert")).unwrap();
    let text = std::fs::read_to_string(victim).unwrap();
    let mut lines: Vec<String> = text.lines().map(str::to_string).collect();
    let i = lines.iter().position(|l| l.starts_with("R ")).unwrap();
    let g: u128 = lines[i][2..].parse().unwrap();
    lines[i] = format!("R {}", g * 5);
    let bad = dir.path().join("tampered.cert");
    std::fs::write(&bad, lines.join("\n") + "\n").unwrap();
    let v = zerosum(&["verify-cert", bad.to_str().unwrap()]);
    assert_eq!(v.status.code(), Some(1));
    assert!(stdout(&v).contains("INVALID"));

    std::fs::write(&bad, "zerosum-certificate 2\n").unwrap();
    assert_eq!(zerosum(&["verify-cert", bad.to_str().unwrap()]).status.code(), Some(7));
}

#[test]
fn property_b_and_constants() {
    let o = zerosum(&["property-b", "5"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("true\n"));
    let o = zerosum(&["constants", "3", "3", "4"]);
    assert!(o.status.success());
    assert!(!stdout(&o).contains(": false"));
}

#[test]
fn completions_single_base() {
    let o = zerosum(&["completions", "5", "--base", "(1,0)^3 (0,1)^3"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("classification C2"));
    assert!(text.contains("exceptional true"));
}

#[test]
fn help_lists_examples() {
    let o = zerosum(&["solve-mod", "--help"]);
    assert!(stdout(&o).contains(r#"zerosum solve-mod "2" "1" --n 4"#));
    let o = zerosum(&["davenport", "--help"]);
    assert!(stdout(&o).contains("zerosum davenport 3,3"));
}
