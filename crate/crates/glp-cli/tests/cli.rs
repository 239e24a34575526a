use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn glp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_glp")).args(args).output().expect("run glp")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn ydet_prints_the_five_vertex_example() {
    let tree = data("five_vertex.json");
    let o = glp(&["ydet", "--tree", tree.to_str().unwrap(), "--set", "3,5"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "(A3*A5 + A3*X3 + A5*X2 + A5*X4 + A5*X5 + X2*X3 + X3*X4)/(X3*X5)");
}

#[test]
fn ppoly_on_the_grid() {
    let tree = data("grid.json");
    let o = glp(&["ppoly", "--tree", tree.to_str().unwrap(), "--set", "1,2,3,4", "--i", "6", "--j", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("P = Y{1,2} + 1\n"));
}

#[test]
fn expand_singleton_and_x() {
    let tree = data("eight_vertex.json");
    let o = glp(&["expand", "--tree", tree.to_str().unwrap(), "--set", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("terms 4\n"));
    assert!(out.contains("positive true"));
    let o = glp(&["expand", "--tree", tree.to_str().unwrap(), "--x", "4", "--root", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("X4 = "));
}

#[test]
fn tpaths_lists_paths_and_writes_dot() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("out.dot");
    let tree = data("eight_vertex.json");
    let o = glp(&["tpaths", "--tree", tree.to_str().unwrap(), "--set", "2", "--dot", dot.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert_eq!(out.lines().filter(|l| l.starts_with("path ")).count(), 4);
    assert!(out.contains("count 4\n"));
    assert!(out.contains("match true"));
    let text = std::fs::read_to_string(&dot).unwrap();
    assert_eq!(text.matches("graph path").count(), 4);
}

#[test]
fn cluster_and_export_dot() {
    let tree = data("forked.json");
    let o = glp(&["cluster", "--tree", tree.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("root 3\n"));
    assert!(out.contains("I2 = {1,2,5}"));
    assert!(out.contains("maximal-nested true"));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h.dot");
    let o = glp(&["export-dot", "--tree", tree.to_str().unwrap(), "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("graph hypergraph {"));
    assert_eq!(text.matches("xlabel=\"I").count(), 5);
}

#[test]
fn input_errors_exit_two() {
    let tree = data("grid.json");
    let t = tree.to_str().unwrap();
    for args in [
        vec!["ydet", "--tree", t, "--set", "1,9"],
        vec!["ydet", "--tree", t, "--set", "x"],
        vec!["ydet", "--tree", "/nonexistent.json", "--set", "1"],
        vec!["expand", "--tree", t, "--set", "1"],
        vec!["ppoly", "--tree", t, "--set", "1", "--i", "0", "--j", "2"],
        vec!["verify", "--suite", "nonsense"],
    ] {
        let o = glp(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(stderr(&o).starts_with("error: "), "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn star_conjecture_reports_a_finding() {
    let o = glp(&["star-conjecture", "--n", "4"]);
    assert_eq!(o.status.code(), Some(3));
    let out = stdout(&o);
    assert!(out.contains("DIFFER S={1,2}"));
    assert!(out.contains("EQUAL S={2}"));
}

#[test]
fn small_verify_run_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.txt");
    let json = dir.path().join("summary.json");
    let o = glp(&[
        "verify",
        "--exhaustive-n",
        "3",
        "--random",
        "4",
        "5",
        "7",
        "--suite",
        "tpath-vs-formula",
        "--report",
        report.to_str().unwrap(),
        "--json",
        json.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("suite tpath-vs-formula: "));
    let lines = std::fs::read_to_string(&report).unwrap();
    assert!(lines.lines().count() > 10);
    assert!(lines.lines().all(|l| l.starts_with("PASS tpath-vs-formula ")));
    let summary: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(summary["failed"], false);
}

#[test]
fn output_is_deterministic() {
    let tree = data("seven_vertex.json");
    let args = ["tpaths", "--tree", tree.to_str().unwrap(), "--set", "1,3"];
    let first = glp(&args);
    assert_eq!(first.stdout, glp(&args).stdout);
    let o = glp(&["verify", "--exhaustive-n", "4", "--random", "3", "6", "11", "--suite", "exchange"]);
    assert_eq!(o.stdout, glp(&["verify", "--exhaustive-n", "4", "--random", "3", "6", "11", "--suite", "exchange"]).stdout);
}
