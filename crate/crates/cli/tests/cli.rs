use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_phasesearch"))
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    bin()
        .current_dir(dir)
        .args(args)
        .output()
        .expect("spawn phasesearch")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// Data rows of a CSV written by the tool, after the `#` line and header.
fn csv_body(path: &Path) -> (String, Vec<Vec<String>>) {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let first = lines.next().unwrap();
    assert!(first.starts_with("# phasesearch "), "{first}");
    let rest: String = lines.map(|l| format!("{l}\n")).collect();
    let mut rdr = csv::Reader::from_reader(rest.as_bytes());
    let header = rdr.headers().unwrap().iter().collect::<Vec<_>>().join(",");
    let rows = rdr
        .records()
        .map(|r| r.unwrap().iter().map(String::from).collect())
        .collect();
    (header, rows)
}

#[test]
fn params_prints_schedule() {
    let dir = TempDir::new().unwrap();
    let o = run_in(dir.path(), &["params", "-n", "5", "-t", "00101,10111"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let s = stdout(&o);
    assert!(s.contains("J           2"), "{s}");
    assert!(s.contains("phi         2.1951"), "{s}");
    assert!(s.contains("iterations  3"), "{s}");

    let o = run_in(dir.path(), &["params", "--preset", "6q3t", "--json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v.to_string().contains("\"j_min\""), "{v}");
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    assert_eq!(run_in(dir.path(), &["--version"]).status.code(), Some(0));
    assert_eq!(
        run_in(dir.path(), &["params", "--bogus"]).status.code(),
        Some(1)
    );
    assert_eq!(
        run_in(dir.path(), &["params", "-n", "3", "-t", "0101"])
            .status
            .code(),
        Some(1)
    );
    // J below the minimum slack is a numerical failure.
    assert_eq!(
        run_in(dir.path(), &["params", "-n", "4", "-t", "0000", "-j", "0"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn unknown_preset_lists_choices() {
    let dir = TempDir::new().unwrap();
    let o = run_in(dir.path(), &["run", "--preset", "7q1t"]);
    assert_eq!(o.status.code(), Some(1));
    let e = stderr(&o);
    assert!(
        e.contains("7q1t") && e.contains("2q2t, 5q2t, 5q4t, 6q3t"),
        "{e}"
    );
}

#[test]
fn run_small_preset() {
    let dir = TempDir::new().unwrap();
    let o = run_in(dir.path(), &["run", "--preset", "2q2t", "--out", "res"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let res = dir.path().join("res");
    for f in [
        "probabilities.csv",
        "histogram.csv",
        "report.json",
        "circuit.txt",
    ] {
        assert!(res.join(format!("2q2t_optimized_{f}")).exists(), "{f}");
    }

    let (header, rows) = csv_body(&res.join("2q2t_optimized_histogram.csv"));
    assert_eq!(header, "bitstring,count");
    let total: u64 = rows.iter().map(|r| r[1].parse::<u64>().unwrap()).sum();
    assert_eq!(total, 1000);
    assert!(
        rows.iter().all(|r| r[0] == "00" || r[0] == "01"),
        "{rows:?}"
    );

    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(res.join("2q2t_optimized_report.json")).unwrap())
            .unwrap();
    assert_eq!(report["tool"], "phasesearch");
    assert_eq!(report["config"]["shots"], 1000);
    let p = report["result"]["success"]["simulated"].as_f64().unwrap();
    assert!((p - 1.0).abs() < 1e-9, "{p}");
}

#[test]
fn probabilities_sum_to_one() {
    let dir = TempDir::new().unwrap();
    let o = run_in(
        dir.path(),
        &[
            "run",
            "--preset",
            "6q3t",
            "--variant",
            "modified",
            "--shots",
            "200",
        ],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let (header, rows) = csv_body(&dir.path().join("6q3t_modified_probabilities.csv"));
    assert_eq!(header, "bitstring,probability");
    assert_eq!(rows.len(), 64);
    let mass: f64 = rows.iter().map(|r| r[1].parse::<f64>().unwrap()).sum();
    assert!((mass - 1.0).abs() < 1e-9, "{mass}");
    let hit: f64 = rows
        .iter()
        .filter(|r| ["100010", "110011", "111010"].contains(&r[0].as_str()))
        .map(|r| r[1].parse::<f64>().unwrap())
        .sum();
    assert!((hit - 1.0).abs() < 1e-9, "{hit}");
}

#[test]
fn same_config_same_bytes() {
    let dir = TempDir::new().unwrap();
    for out in ["a", "b"] {
        let o = run_in(
            dir.path(),
            &[
                "run",
                "--preset",
                "5q4t",
                "--variant",
                "grover",
                "--seed",
                "17",
                "--out",
                out,
            ],
        );
        assert!(o.status.success(), "{}", stderr(&o));
    }
    for f in [
        "probabilities.csv",
        "histogram.csv",
        "report.json",
        "circuit.txt",
    ] {
        let name = format!("5q4t_grover_{f}");
        let a = fs::read(dir.path().join("a").join(&name)).unwrap();
        let b = fs::read(dir.path().join("b").join(&name)).unwrap();
        assert_eq!(a, b, "{name}");
    }

    let o = run_in(
        dir.path(),
        &[
            "run",
            "--preset",
            "5q4t",
            "--variant",
            "grover",
            "--seed",
            "18",
            "--out",
            "c",
        ],
    );
    assert!(o.status.success());
    let a = fs::read(dir.path().join("a/5q4t_grover_histogram.csv")).unwrap();
    let c = fs::read(dir.path().join("c/5q4t_grover_histogram.csv")).unwrap();
    assert_ne!(a, c);
}

#[test]
fn compare_all_presets() {
    let dir = TempDir::new().unwrap();
    let o = run_in(dir.path(), &["compare", "--out", "cmp"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let (header, rows) = csv_body(&dir.path().join("cmp/compare.csv"));
    assert!(
        header.starts_with("instance,n,m,targets,variant,"),
        "{header}"
    );
    assert!(!header.contains("lowered"));
    assert_eq!(rows.len(), 12);

    let col = |name: &str| header.split(',').position(|h| h == name).unwrap();
    let (inst, var, gates, depth) = (
        col("instance"),
        col("variant"),
        col("gates"),
        col("depth_blocked"),
    );
    let find = |i: &str, v: &str| rows.iter().find(|r| r[inst] == i && r[var] == v).unwrap();
    let r = find("5q2t", "optimized");
    assert_eq!((r[gates].as_str(), r[depth].as_str()), ("68", "28"));
    let r = find("2q2t", "modified");
    assert_eq!((r[gates].as_str(), r[depth].as_str()), ("19", "12"));

    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("cmp/compare.json")).unwrap())
            .unwrap();
    assert_eq!(json["config"]["command"], "compare");
}

#[test]
fn compare_lowered_columns() {
    let dir = TempDir::new().unwrap();
    let o = run_in(
        dir.path(),
        &["compare", "--preset", "5q2t", "--lowered", "--out", "."],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let (header, rows) = csv_body(&dir.path().join("compare.csv"));
    assert_eq!(rows.len(), 3);
    assert!(header.contains("lowered"), "{header}");
}

#[test]
fn compare_custom_instance() {
    let dir = TempDir::new().unwrap();
    let o = run_in(
        dir.path(),
        &["compare", "-n", "4", "-t", "0011,1110", "--out", "."],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let (_, rows) = csv_body(&dir.path().join("compare.csv"));
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0][0], "n4m2");
}

#[test]
fn config_file_with_flag_override() {
    let dir = TempDir::new().unwrap();
    fs::write(
        dir.path().join("cfg.toml"),
        "n = 3\ntargets = [\"011\", \"110\"]\nvariant = \"grover\"\nshots = 64\nseed = 5\nout = \"from_file\"\n",
    )
    .unwrap();
    let o = run_in(
        dir.path(),
        &[
            "run",
            "--config",
            "cfg.toml",
            "--variant",
            "optimized",
            "--shots",
            "32",
        ],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let report: serde_json::Value = serde_json::from_str(
        &fs::read_to_string(dir.path().join("from_file/n3m2_optimized_report.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(report["config"]["shots"], 32);
    assert_eq!(report["config"]["seed"], 5);
    assert_eq!(report["config"]["variant"], "optimized_merged");

    fs::write(dir.path().join("bad.toml"), "colour = \"red\"\n").unwrap();
    assert_eq!(
        run_in(dir.path(), &["run", "--config", "bad.toml"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn lower_round_trip() {
    let dir = TempDir::new().unwrap();
    let o = run_in(
        dir.path(),
        &[
            "run",
            "--preset",
            "5q2t",
            "--variant",
            "modified",
            "--shots",
            "10",
        ],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let o = run_in(
        dir.path(),
        &[
            "lower",
            "5q2t_modified_circuit.txt",
            "--merge",
            "--out",
            "low",
        ],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(
        stdout(&o).contains("trace overlap 1.000000"),
        "{}",
        stdout(&o)
    );

    let text =
        fs::read_to_string(dir.path().join("low/5q2t_modified_circuit_lowered.txt")).unwrap();
    assert!(text.starts_with("# phasesearch"));
    assert!(
        !text.contains("_multi"),
        "lowered circuit still has multi-controlled gates"
    );

    // The lowered file is itself valid input.
    let o = run_in(
        dir.path(),
        &[
            "lower",
            "low/5q2t_modified_circuit_lowered.txt",
            "--out",
            "again",
        ],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let pass: serde_json::Value = serde_json::from_str(
        &fs::read_to_string(dir.path().join("low/5q2t_modified_circuit_pass.json")).unwrap(),
    )
    .unwrap();
    assert!(pass["result"].is_array() || pass["result"].is_object());

    fs::write(dir.path().join("junk.txt"), "qubits 2\nFOO -> 0\n").unwrap();
    assert_eq!(
        run_in(dir.path(), &["lower", "junk.txt"]).status.code(),
        Some(1)
    );
}

#[test]
fn sweep_rows() {
    let dir = TempDir::new().unwrap();
    let o = run_in(
        dir.path(),
        &[
            "sweep",
            "--n",
            "2,3",
            "--m",
            "1,2,8",
            "--j-extra",
            "0,1",
            "--out",
            "s.csv",
        ],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let (header, rows) = csv_body(&dir.path().join("s.csv"));
    assert!(header.starts_with("n,m,targets,variant,j,"), "{header}");
    // m = 8 does not fit n = 2 and is skipped there.
    assert!(rows
        .iter()
        .all(|r| r[1].parse::<u64>().unwrap() <= 1 << r[0].parse::<u32>().unwrap()));
    let s = header
        .split(',')
        .position(|h| h == "success_simulated")
        .unwrap();
    let v = header.split(',').position(|h| h == "variant").unwrap();
    for r in rows.iter().filter(|r| r[v] != "grover") {
        let p: f64 = r[s].parse().unwrap();
        assert!((p - 1.0).abs() < 1e-6, "{r:?}");
    }
}
