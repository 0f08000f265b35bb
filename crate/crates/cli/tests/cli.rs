use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

const EXAMPLE_1: &str = "01 01 00 00 00 00 01 01 11 11 10 10 10 10 11 11\n";

fn sefcc(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sefcc"))
        .args(args)
        .current_dir(dir)
        .env_remove("SEFCC_WORKERS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn construct_defaults_give_the_worked_example() {
    let dir = TempDir::new().unwrap();
    let o = sefcc(dir.path(), &["construct", "max-sum", "--out", "c1.txt"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(fs::read_to_string(dir.path().join("c1.txt")).unwrap(), EXAMPLE_1);
    assert!(stdout(&o).contains("sum=73728 dmin=2 n2=960"));
    assert!(dir.path().join("c1.txt.manifest.json").exists());

    let o = sefcc(dir.path(), &["construct", "max-sum"]);
    assert_eq!(stdout(&o), EXAMPLE_1);
}

#[test]
fn construct_optimal_fer_sets_codewords_to_complement() {
    let dir = TempDir::new().unwrap();
    let o = sefcc(dir.path(), &["construct", "optimal-fer"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), vec!["11"; 16].join(" "));
    assert!(stderr(&o).contains("dmin=1"));
}

#[test]
fn construct_rejects_bad_subsets() {
    let dir = TempDir::new().unwrap();
    let o = sefcc(dir.path(), &["construct", "max-sum", "--odd", "1,2,3,4"]);
    assert_eq!(o.status.code(), Some(2));
    let o = sefcc(dir.path(), &["construct", "max-sum", "--odd", "3,4,5,17"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn validate_reports_validity_and_exit_codes() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("c1.txt"), EXAMPLE_1).unwrap();
    let o = sefcc(dir.path(), &["validate", "c1.txt"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("valid=true\ndmin=2\nsum=73728\ncross_class_min=3\nd,count\n"));
    assert!(out.contains("\n2,960\n"));

    // codewords 2 and 3 (1-based) are at distance 3
    fs::write(dir.path().join("bad.txt"), format!("00 11 00{}\n", " 00".repeat(13))).unwrap();
    let o = sefcc(dir.path(), &["validate", "bad.txt"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("valid=false\nviolation=c2:11 c3:00\n"));

    fs::write(dir.path().join("zero.txt"), format!("00{}\n", " 00".repeat(15))).unwrap();
    let o = sefcc(dir.path(), &["validate", "zero.txt"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("valid=true\ndmin=1\n"));
}

#[test]
fn parse_errors_exit_2_with_location() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("p.txt"), "00 01 00 00\n00 00 0x 00\n").unwrap();
    let o = sefcc(dir.path(), &["validate", "p.txt"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("p.txt:2: token 7"), "{}", stderr(&o));

    fs::write(dir.path().join("short.txt"), "00 01\n").unwrap();
    let o = sefcc(dir.path(), &["spectrum", "short.txt"]);
    assert_eq!(o.status.code(), Some(2));

    let o = sefcc(dir.path(), &["certify", "--strategy", "greedy"]);
    assert_eq!(o.status.code(), Some(2));
    let o = sefcc(dir.path(), &["validate", "missing.txt"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn spectrum_is_d_count_csv() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("c1.txt"), EXAMPLE_1).unwrap();
    let o = sefcc(dir.path(), &["spectrum", "c1.txt", "--out", "s.csv"]);
    assert!(o.status.success());
    assert_eq!(
        fs::read_to_string(dir.path().join("s.csv")).unwrap(),
        "d,count\n0,0\n1,0\n2,960\n3,704\n4,2944\n5,832\n6,2176\n7,256\n8,256\n9,0\n"
    );
}

#[test]
fn certify_is_independent_of_strategy_and_workers() {
    let dir = TempDir::new().unwrap();
    let mut reports = Vec::new();
    for (strategy, workers) in [("backtracking", "1"), ("backtracking", "3"), ("full-sweep", "2")] {
        let o = sefcc(dir.path(), &["certify", "--strategy", strategy, "--workers", workers]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        let out = stdout(&o);
        assert!(out.contains("census.max_sum_count=9800\n"));
        assert!(out.contains("census.min_N2_over_valid_dmin2=960\n"));
        assert!(out.ends_with("result=pass\n"));
        // the mode line and the examined count legitimately differ
        let body: Vec<String> = out
            .lines()
            .filter(|l| !l.starts_with("census.mode=") && !l.starts_with("census.total_assignments_examined="))
            .map(String::from)
            .collect();
        reports.push(body);
    }
    assert_eq!(reports[0], reports[1]);
    assert_eq!(reports[0], reports[2]);
}

#[test]
fn workers_default_comes_from_the_environment() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("c1.txt"), EXAMPLE_1).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_sefcc"))
        .args(["simulate", "c1.txt", "--trials", "100", "--snr-stop", "0"])
        .current_dir(dir.path())
        .env("SEFCC_WORKERS", "3")
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("# workers=3\n"));
}

#[test]
fn simulate_compare_writes_joined_csv_and_replays() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    assert!(sefcc(d, &["construct", "max-sum", "--out", "c1.txt"]).status.success());
    assert!(sefcc(d, &["construct", "optimal-fer", "--out", "c2.txt"]).status.success());
    let args = [
        "simulate", "c1.txt", "c2.txt", "--compare", "--snr-start", "0", "--snr-stop", "4", "--snr-step", "2",
        "--trials", "3000", "--seed", "11", "--workers", "2", "--out", "cmp.csv",
    ];
    let o = sefcc(d, &args);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = fs::read_to_string(d.join("cmp.csv")).unwrap();
    let header = csv.lines().find(|l| !l.starts_with('#')).unwrap();
    assert!(header.starts_with("ebn0_db,c1_trials,"));
    assert!(header.contains(",c2_fer,"));
    assert_eq!(header.split(',').count(), 19);
    let rows: Vec<&str> = csv.lines().filter(|l| !l.starts_with('#')).skip(1).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r.split(',').count() == 19));

    // rerunning the same command is byte-identical
    fs::rename(d.join("cmp.csv"), d.join("first.csv")).unwrap();
    assert!(sefcc(d, &args).status.success());
    assert_eq!(fs::read(d.join("first.csv")).unwrap(), fs::read(d.join("cmp.csv")).unwrap());

    // so is replaying from the manifest, after the output is removed
    fs::remove_file(d.join("cmp.csv")).unwrap();
    let o = sefcc(d, &["replay", "cmp.csv.manifest.json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(fs::read(d.join("first.csv")).unwrap(), fs::read(d.join("cmp.csv")).unwrap());

    // a changed input is detected
    fs::write(d.join("c1.txt"), "01 01 00 00 00 00 01 01 11 11 10 10 10 10 11 10\n").unwrap();
    let o = sefcc(d, &["replay", "cmp.csv.manifest.json"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn simulate_is_deterministic_per_seed() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    fs::write(d.join("c1.txt"), EXAMPLE_1).unwrap();
    let base = ["simulate", "c1.txt", "--trials", "2000", "--snr-stop", "2", "--seed", "5"];
    let a = sefcc(d, &base);
    let b = sefcc(d, &base);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let other = sefcc(d, &["simulate", "c1.txt", "--trials", "2000", "--snr-stop", "2", "--seed", "6"]);
    assert_ne!(a.stdout, other.stdout);
}

#[test]
fn simulate_rejects_invalid_codes_unless_allowed() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    fs::write(d.join("bad.txt"), format!("00 11 00{}\n", " 00".repeat(13))).unwrap();
    let o = sefcc(d, &["simulate", "bad.txt", "--trials", "100", "--snr-stop", "0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("--allow-invalid"));
    let o = sefcc(d, &["simulate", "bad.txt", "--trials", "100", "--snr-stop", "0", "--allow-invalid"]);
    assert!(o.status.success());
}

#[test]
fn simulate_several_files_into_a_directory() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    fs::write(d.join("c1.txt"), EXAMPLE_1).unwrap();
    fs::write(d.join("c2.txt"), format!("11{}\n", " 11".repeat(15))).unwrap();
    let args = ["simulate", "c1.txt", "c2.txt", "--trials", "500", "--snr-stop", "1", "--out", "runs"];
    let o = sefcc(d, &args);
    assert!(o.status.success(), "{}", stderr(&o));
    let c1 = fs::read(d.join("runs/c1.csv")).unwrap();
    assert!(d.join("runs/c2.csv").exists());
    fs::remove_file(d.join("runs/c1.csv")).unwrap();
    let o = sefcc(d, &["replay", "runs/manifest.json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(fs::read(d.join("runs/c1.csv")).unwrap(), c1);

    let o = sefcc(d, &["simulate", "c1.txt", "c2.txt", "--trials", "10"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn replay_of_construct_and_validate() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    assert!(sefcc(d, &["construct", "max-sum", "--swap", "--out", "s.txt"]).status.success());
    assert!(sefcc(d, &["validate", "s.txt", "--out", "v.txt"]).status.success());
    for m in ["s.txt.manifest.json", "v.txt.manifest.json"] {
        let o = sefcc(d, &["replay", m]);
        assert_eq!(o.status.code(), Some(0), "{m}: {}", stderr(&o));
    }
    fs::write(d.join("v.txt"), "tampered").unwrap();
    assert!(sefcc(d, &["replay", "v.txt.manifest.json"]).status.success());
    assert!(fs::read_to_string(d.join("v.txt")).unwrap().starts_with("valid=true"));
}
