use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn rankopt(args: &[&str], files: &[&Path]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rankopt"))
        .args(args)
        .args(files)
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn lines(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

const COLLINEAR: &str = "y,x\n1,1\n2,2\n3,3\n";

#[test]
fn fit_collinear_with_every_method() {
    let dir = TempDir::new().unwrap();
    let data = write(&dir, "collinear.csv", COLLINEAR);
    for args in [
        vec!["fit", "--method", "ccc", "--score", "wilcoxon"],
        vec!["fit", "--method", "ccc", "--fast"],
        vec!["fit", "--method", "gen", "--score", "sign"],
        vec!["fit", "--method", "brute", "--score", "vdw"],
    ] {
        let out = rankopt(&args, &[&data]);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        let v = json(&out);
        assert_eq!(v["status"], "minimum");
        assert_eq!(v["t0"]["exact"], "0/1");
        assert_eq!(v["beta0"][0]["exact"], "1/1");
        assert_eq!(v["beta0"][0]["decimal"], "1.00000000000000000000");
    }
}

#[test]
fn output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let data = write(&dir, "d.txt", "0.5 1 2\n-1 3 1/2\n2 -1 1\n1.25 0 0\n");
    let a = rankopt(&["fit", "--method", "ccc", "--score", "sign"], &[&data]);
    let b = rankopt(&["fit", "--method", "ccc", "--score", "sign"], &[&data]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let gen = rankopt(&["fit", "--method", "gen", "--score", "sign", "--output", "compact"], &[&data]);
    assert_eq!(json(&gen)["t0"], json(&a)["t0"]);
}

#[test]
fn table_oracle_and_unbounded_exit() {
    let dir = TempDir::new().unwrap();
    let data = write(&dir, "d.txt", "0 1\n0 2\n");
    let table = write(&dir, "t.tsv", "1 2 | 1 2\n2 1\t|\t2 1\n");
    let out = rankopt(&["fit", "--method", "gen", "--coeffs"], &[&table, &data]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["status"], "unbounded");

    let partial = write(&dir, "p.tsv", "1 2 | 1 2\n");
    let out = rankopt(&["fit", "--method", "gen", "--coeffs"], &[&partial, &data]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no coefficients for permutation 2 1"));

    let out = rankopt(&["fit", "--method", "ccc", "--coeffs"], &[&table, &data]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn table_with_fractions_matches_scores() {
    let dir = TempDir::new().unwrap();
    let data = write(&dir, "d.txt", COLLINEAR);
    // sign scores written out per permutation
    let mut table = String::new();
    for perm in [[1, 2, 3], [1, 3, 2], [2, 1, 3], [2, 3, 1], [3, 1, 2], [3, 2, 1]] {
        let mut a = ["0"; 3];
        a[perm[0] - 1] = "-2/2";
        a[perm[2] - 1] = "1.0";
        table.push_str(&format!("{} {} {} | {} {} {}\n", perm[0], perm[1], perm[2], a[0], a[1], a[2]));
    }
    let table = write(&dir, "t.txt", &table);
    let out = rankopt(&["fit", "--method", "gen", "--coeffs"], &[&table, &data]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["t0"]["exact"], "0/1");
}

#[test]
fn duplicate_rows_are_input_errors() {
    let dir = TempDir::new().unwrap();
    let rows = ["1 2", "2 5", "0 1", "4 4", "3 1", "6 0", "0 1"];
    let data = write(&dir, "dup.txt", &rows.join("\n"));
    let out = rankopt(&["fit"], &[&data]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("duplicate rows 3 and 7"));
}

#[test]
fn malformed_input_is_rejected() {
    let dir = TempDir::new().unwrap();
    let ragged = write(&dir, "r.txt", "1 2\n3 4 5\n");
    assert_eq!(rankopt(&["fit"], &[&ragged]).status.code(), Some(2));
    let garbage = write(&dir, "g.txt", "y x\n1 2\n3 abc\n");
    assert_eq!(rankopt(&["cells"], &[&garbage]).status.code(), Some(2));
    let missing = dir.path().join("nope.txt");
    assert_eq!(rankopt(&["fit"], &[&missing]).status.code(), Some(2));
    assert_eq!(rankopt(&["fit", "--method", "simplex"], &[&ragged]).status.code(), Some(2));
}

#[test]
fn brute_force_refuses_large_inputs() {
    let dir = TempDir::new().unwrap();
    let rows: Vec<String> = (0..8).map(|i| format!("{} {}", i * i % 5, i)).collect();
    let data = write(&dir, "big.txt", &rows.join("\n"));
    let out = rankopt(&["fit", "--method", "brute"], &[&data]);
    assert_eq!(out.status.code(), Some(2));
    let out = rankopt(&["fit", "--method", "gen"], &[&data]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn cells_on_collinear_example() {
    let dir = TempDir::new().unwrap();
    let data = write(&dir, "collinear.csv", COLLINEAR);
    let out = rankopt(&["cells"], &[&data]);
    assert_eq!(out.status.code(), Some(0));
    let records = lines(&out);
    assert_eq!(records.len(), 3);
    let perms: Vec<&Value> = records[..2].iter().map(|r| &r["permutation"]).collect();
    assert!(perms.contains(&&serde_json::json!([1, 2, 3])));
    assert!(perms.contains(&&serde_json::json!([3, 2, 1])));
    assert_eq!(records[0]["neighbors"], 1);
    let stats = &records[2]["statistics"];
    assert_eq!(stats["cells"], 2);
    assert_eq!(stats["redundant"], serde_json::json!([[1, 3], [2, 3]]));
}

#[test]
fn cells_without_hyperplanes() {
    let dir = TempDir::new().unwrap();
    let data = write(&dir, "flat.txt", "1 2\n2 2\n5 2\n");
    let records = lines(&rankopt(&["cells"], &[&data]));
    assert_eq!(records.len(), 2);
    assert_eq!(records[0]["neighbors"], 0);
    assert_eq!(records[1]["statistics"]["cells"], 1);
}

#[test]
fn plot_segments_for_planar_instance() {
    let dir = TempDir::new().unwrap();
    let data = write(&dir, "p2.txt", "1 0 0\n3 1 0\n-2 0 1\n5 2 3\n0 -1 2\n");
    let out = rankopt(&["cells", "--plot2d", "--seed", "3"], &[&data]);
    assert_eq!(out.status.code(), Some(0));
    let records = lines(&out);
    let cells = records.iter().filter(|r| r.get("permutation").is_some()).count();
    let segments = records.iter().filter(|r| r.get("segment").is_some()).count();
    assert!(cells <= 56);
    assert_eq!(segments, 10);
    let stats = &records.last().unwrap()["statistics"];
    assert_eq!(stats["cells"], cells);
    assert_eq!(stats["cell_bound"], "56");

    let one_d = write(&dir, "p1.txt", COLLINEAR);
    assert_eq!(rankopt(&["cells", "--plot2d"], &[&one_d]).status.code(), Some(2));
}
