use std::fs;
use std::process::{Command, Output};

fn forge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_forge")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn generate_is_deterministic() {
    let args = ["generate", "--method", "orders", "--K", "3", "--n", "30", "--seed", "5", "--count", "3"];
    let first = stdout(&forge(&args));
    assert_eq!(first, stdout(&forge(&args)));
    assert_eq!(first.matches("# instance").count(), 3);
}

#[test]
fn generate_writes_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("dags");
    let args = ["generate", "--method", "layer", "--layers", "4", "--p", "0.5", "--n", "20", "--count", "2"];
    let mut args: Vec<&str> = args.to_vec();
    args.extend(["--out-format", "stg", "--out", out.to_str().unwrap()]);
    stdout(&forge(&args));
    let text = fs::read_to_string(out.join("dag-00001.stg")).unwrap();
    assert!(text.starts_with("20\n0 0 0\n"));
}

#[test]
fn missing_parameter_is_a_validation_failure() {
    let out = forge(&["generate", "--method", "er", "--n", "10"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--p"));
    assert_eq!(forge(&["generate", "--method", "er", "--n", "10", "--p", "1.5"]).status.code(), Some(2));
}

#[test]
fn special_sizes() {
    let out = forge(&["special", "--kind", "square", "--n", "10"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains('9'));
    let text = stdout(&forge(&["special", "--kind", "square", "--n", "10", "--nearest"]));
    assert!(text.starts_with("9\n"));
    assert_eq!(forge(&["special", "--kind", "star", "--n", "10"]).status.code(), Some(2));
}

#[test]
fn analyze_and_schedule() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("diamond.txt");
    fs::write(&path, "4\n1 2\n1 3\n2 4\n3 4\n").unwrap();
    let csv = stdout(&forge(&["analyze", path.to_str().unwrap()]));
    let lines: Vec<&str> = csv.lines().collect();
    let header: Vec<&str> = lines[0].split(',').collect();
    let row: Vec<&str> = lines[1].split(',').collect();
    let get = |c: &str| row[header.iter().position(|h| *h == c).unwrap()];
    assert_eq!((get("n"), get("m"), get("len"), get("width")), ("4", "4", "3", "2"));

    let s = stdout(&forge(&["schedule", path.to_str().unwrap(), "--procs", "1", "--heuristic", "exact"]));
    assert!(s.starts_with("# makespan 4 lower_bound 4"));
    assert_eq!(s.lines().count(), 2 + 4);
}

#[test]
fn parse_errors_exit_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.txt");
    fs::write(&path, "3\n1 2\n1 x\n").unwrap();
    let out = forge(&["analyze", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));

    fs::write(&path, "2\n1 2\n2 1\n").unwrap();
    assert_eq!(forge(&["analyze", path.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(forge(&["analyze", "/nonexistent/dag.txt"]).status.code(), Some(1));
}

#[test]
fn convert_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("in.txt");
    let dot = dir.path().join("g.dot");
    let back = dir.path().join("back.txt");
    let edges = "6\n1 3\n2 3\n3 5\n4 6\n";
    fs::write(&src, edges).unwrap();
    let p = |path: &std::path::Path| path.to_str().unwrap().to_string();
    stdout(&forge(&["convert", &p(&src), "--from", "edgelist", "--to", "dot", "--out", &p(&dot)]));
    stdout(&forge(&["convert", &p(&dot), "--from", "dot", "--to", "edgelist", "--out", &p(&back)]));
    assert_eq!(fs::read_to_string(&back).unwrap(), edges);

    let stg = stdout(&forge(&["convert", &p(&src), "--from", "edgelist", "--to", "stg"]));
    let stg_path = dir.path().join("g.stg");
    fs::write(&stg_path, stg).unwrap();
    let out = forge(&["convert", &p(&stg_path), "--from", "stg", "--to", "edgelist"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("dummy"));
    assert_eq!(stdout(&out), edges);
}

#[test]
fn experiment_from_preset_and_config() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fig7.csv");
    stdout(&forge(&["experiment", "--preset", "fig7", "--seed", "4", "--out", out.to_str().unwrap()]));
    let csv = fs::read_to_string(&out).unwrap();
    assert!(csv.starts_with("# dagforge experiment=fig7 schema=v1 seed=4\n"));
    assert_eq!(csv.lines().count(), 2 + 191);

    let config = dir.path().join("grid.conf");
    fs::write(&config, "method = er\np = 0.2, 0.4\nn = 10..12\nreplications = 2\nseed = 3\n").unwrap();
    let csv = stdout(&forge(&["experiment", "--config", config.to_str().unwrap()]));
    assert_eq!(csv.lines().count(), 2 + 2 * 3 * 2);

    fs::write(&config, "method = er\np 0.2\n").unwrap();
    assert_eq!(forge(&["experiment", "--config", config.to_str().unwrap()]).status.code(), Some(3));
    assert_eq!(forge(&["experiment", "--preset", "fig99"]).status.code(), Some(2));
}

#[test]
fn audit_reports_chi_square() {
    let csv = stdout(&forge(&["audit", "--method", "uniform", "--n", "3", "--samples", "20000"]));
    let row: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[0], "labeled");
    assert_eq!(row[1], "25");
    let p: f64 = row[5].parse().unwrap();
    assert!(p > 1e-4, "{csv}");
    assert_eq!(forge(&["audit", "--method", "uniform", "--n", "7"]).status.code(), Some(2));
}
