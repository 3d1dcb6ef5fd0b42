use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn subsample(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_subsample"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const FIGURE: &str = "n 3\nedge 1 1\nedge 1 2\nedge 2 3\nedge 3 1\n";

#[test]
fn subsample_then_solve_recovers_the_figure_graph() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(&dir, "g.txt", FIGURE);
    let m = dir.path().join("m.txt");
    let o = subsample(&["subsample", s(&g), "--u", "2", "--out", s(&m)]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&m).unwrap();
    assert!(text.contains("biedge 1 2"));
    assert!(!text.contains("biedge 2 3"));

    let o = subsample(&["solve", s(&m), "--u", "2", "--closed"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("u 2"));
    for line in FIGURE.lines().skip(1) {
        assert!(out.contains(line), "missing {line}");
    }
    assert_eq!(out.matches("---").count(), 0);

    let o = subsample(&["solve", s(&m), "--u", "2", "--closed", "--count"]);
    assert_eq!(stdout(&o).trim(), "1");
}

#[test]
fn open_structure_has_more_solutions_than_closed() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(&dir, "m.txt", "n 2\nedge 1 2\n");
    let open = subsample(&["solve", s(&m), "--u", "2", "--count"]);
    let closed = subsample(&["solve", s(&m), "--u", "2", "--count", "--closed"]);
    let open: u64 = stdout(&open).trim().parse().unwrap();
    let closed: u64 = stdout(&closed).trim().parse().unwrap();
    assert!(open > closed);
}

#[test]
fn gen_estimate_optimize_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.txt");
    let data = dir.path().join("data.csv");
    let o = subsample(&[
        "gen",
        "--nodes",
        "4",
        "--degree",
        "2",
        "--seed",
        "3",
        "--out",
        s(&g),
        "--samples",
        "500",
        "--u",
        "2",
        "--data",
        s(&data),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(&data).unwrap();
    assert_eq!(csv.lines().count(), 500);

    let w = dir.path().join("w.txt");
    let o = subsample(&[
        "estimate",
        s(&data),
        "--scheme",
        "pb",
        "--param",
        "0.4",
        "--out",
        s(&w),
    ]);
    assert!(o.status.success());

    let o = subsample(&["optimize", s(&w), "--u", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("# cost"));

    let o = subsample(&["encode", s(&w), "--weighted", "--u", "2"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains(":~"));
}

#[test]
fn gen_is_reproducible() {
    let a = subsample(&["gen", "--nodes", "6", "--density", "0.3", "--seed", "9"]);
    let b = subsample(&["gen", "--nodes", "6", "--density", "0.3", "--seed", "9"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn series_subsampling_keeps_every_uth_row() {
    let dir = tempfile::tempdir().unwrap();
    let csv = write(
        &dir,
        "x.csv",
        "1.0,2.0\n3.0,4.0\n5.0,6.0\n7.0,8.0\n9.0,10.0\n",
    );
    let o = subsample(&["subsample", s(&csv), "--u", "2"]);
    assert_eq!(stdout(&o), "1.0,2.0\n5.0,6.0\n9.0,10.0\n");
}

#[test]
fn encode_emits_a_program() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(&dir, "m.txt", "n 2\nedge 1 2\nnobiedge 1 2\n");
    let o = subsample(&["encode", s(&m), "--u-range", "1:3"]);
    assert!(o.status.success());
    assert!(!stdout(&o).is_empty());
}

#[test]
fn bench_writes_three_tables() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let o = subsample(&[
        "bench",
        "fig2-density",
        "--instances",
        "2",
        "--nodes",
        "5",
        "--density",
        "0.3",
        "--out",
        s(&out),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["records.csv", "timings.csv", "summary.csv"] {
        let text = std::fs::read_to_string(out.join(f)).unwrap();
        assert!(text.lines().count() >= 2, "{f} is empty");
    }
}

#[test]
fn usage_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(&dir, "g.txt", FIGURE);
    assert_eq!(
        subsample(&["subsample", s(&g), "--u", "0"]).status.code(),
        Some(1)
    );
    assert_eq!(
        subsample(&["solve", s(&g), "--u", "2", "--u-range", "1:3"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(subsample(&["bench", "fig9"]).status.code(), Some(1));
    assert_eq!(subsample(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(subsample(&["--help"]).status.code(), Some(0));
}

#[test]
fn bad_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(&dir, "bad.txt", "n 2\nedge 1 7\n");
    assert_eq!(
        subsample(&["solve", s(&bad), "--u", "2"]).status.code(),
        Some(2)
    );
    assert_eq!(
        subsample(&["solve", "/does/not/exist", "--u", "2"])
            .status
            .code(),
        Some(2)
    );
    let partial = write(&dir, "w.txt", "n 2\nedge 1 2 1.0\n");
    assert_eq!(
        subsample(&["optimize", s(&partial), "--u", "2"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn timeout_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let open = write(&dir, "open.txt", "n 8\n");
    let out = dir.path().join("sol.txt");
    let o = subsample(&[
        "solve",
        s(&open),
        "--u",
        "2",
        "--max-solutions",
        "0",
        "--timeout",
        "0.05",
        "--out",
        s(&out),
    ]);
    assert_eq!(o.status.code(), Some(3));
}
