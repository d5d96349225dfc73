use std::process::Command;

use randproj_bench::io::{load_triplet_file, save_triplet_file};
use randproj_bench::parse_csv;
use randproj_core::linop::CsrOperator;

fn bench() -> Command {
    Command::new(env!("CARGO_BIN_EXE_randproj-bench"))
}

#[test]
fn writes_csv_report_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.csv");
    let status = bench()
        .args([
            "--m", "8", "--n", "64", "--kappa", "1e4,1e6", "--trials", "3", "--format", "csv",
        ])
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let rows = parse_csv(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0].l, 12);
    assert_eq!(rows[1].kappa, 1e6);
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        &["--m", "8", "--n", "65"][..],
        &["--refine", "-1"],
        &["--format", "xml"],
        &["--m", "8", "--n", "64", "--l", "7"],
        &["--trials", "0"],
    ] {
        let status = bench().args(args).output().unwrap().status;
        assert_eq!(status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn loads_triplet_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a.mtx");
    let op = CsrOperator::from_triplets(
        3,
        6,
        &[(0, 0, 1.0), (1, 1, 2.0), (2, 2, 3.0), (0, 5, 0.5), (2, 4, -1.0)],
    )
    .unwrap();
    save_triplet_file(&path, &op).unwrap();
    assert_eq!(
        load_triplet_file(&path).unwrap().triplets().collect::<Vec<_>>(),
        op.triplets().collect::<Vec<_>>()
    );
    let output = bench()
        .args(["--l", "4", "--kappa", "3", "--trials", "4", "--format", "csv", "--load"])
        .arg(&path)
        .output()
        .unwrap();
    assert!(output.status.success(), "{}", String::from_utf8_lossy(&output.stderr));
    let rows = parse_csv(&String::from_utf8(output.stdout).unwrap()).unwrap();
    assert_eq!((rows[0].m, rows[0].n), (3, 6));
    assert!(rows[0].delta_rand_over_kappa <= 1e-14);
}

#[test]
fn numerical_failure_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rank1.mtx");
    std::fs::write(&path, "2 4 1\n1 1 1.0\n").unwrap();
    let status = bench()
        .args(["--l", "2", "--trials", "2", "--load"])
        .arg(&path)
        .output()
        .unwrap()
        .status;
    assert_eq!(status.code(), Some(1));
}
