use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn hmlab(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hmlab"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("spawn hmlab")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

const SMALL: [&str; 6] = ["--nx", "33", "--ny", "33", "--s", "0.03125"];

#[test]
fn metric_check_reports_curvature() {
    let dir = TempDir::new().unwrap();
    for (m, k) in [
        ("euclidean", "K = 0.000000"),
        ("spherical", "K = 2.000000"),
        ("hyperbolic", "K = -2.000000"),
    ] {
        let o = hmlab(dir.path(), &["metric-check", "--metric", m]);
        assert_eq!(code(&o), 0, "{m}");
        assert!(stdout(&o).contains(k), "{m}: {}", stdout(&o));
    }
}

#[test]
fn usage_errors_exit_3() {
    let dir = TempDir::new().unwrap();
    for args in [
        &["metric-check", "--metric", "elliptic"][..],
        &["solve", "--boundary", "poly:1"],
        &["verify"],
        &["frobnicate"],
        &["solve", "--boundary", "holo:0,1", "--nx", "2"],
        &["refine", "--map", "holo:0,1", "--levels", "2"],
    ] {
        assert_eq!(code(&hmlab(dir.path(), args)), 3, "{args:?}");
    }
    assert_eq!(code(&hmlab(dir.path(), &["--help"])), 0);
}

#[test]
fn solve_leaving_the_disk_is_a_domain_guard_error() {
    let dir = TempDir::new().unwrap();
    let o = hmlab(
        dir.path(),
        &["solve", "--metric", "hyperbolic", "--boundary", "holo:0,2"],
    );
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("--boundary"));
}

#[test]
fn solve_then_verify_round_trip() {
    let dir = TempDir::new().unwrap();
    let p = dir.path();
    let mut args = vec![
        "solve",
        "--metric",
        "spherical",
        "--boundary",
        "holo:0,0,0.5,0",
        "--out",
        "run",
    ];
    args.extend(SMALL);
    fs::create_dir(p.join("run")).unwrap();
    assert_eq!(code(&hmlab(p, &args)), 0);
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(p.join("run/solution.json")).unwrap()).unwrap();
    assert_eq!(summary["converged"], true);

    let o = hmlab(
        p,
        &[
            "verify",
            "--metric",
            "spherical",
            "--input",
            "run/solution.hmfield",
            "--margin",
            "8",
            "--checks",
            "hopf,bochner,superharm",
            "--csv",
            "--out",
            "run",
        ],
    );
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let reports: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(p.join("run/reports.json")).unwrap()).unwrap();
    assert_eq!(reports.as_array().unwrap().len(), 4);
    let csv = fs::read_to_string(p.join("run/hopf.csv")).unwrap();
    assert!(csv.starts_with("i,j,x,y,lhs,rhs,residual,excluded"));
}

#[test]
fn solve_output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let p = dir.path();
    for out in ["a", "b"] {
        fs::create_dir(p.join(out)).unwrap();
        let mut args = vec![
            "solve",
            "--metric",
            "spherical",
            "--boundary",
            "affine:c=0.1,0",
            "--out",
            out,
        ];
        args.extend(SMALL);
        assert_eq!(code(&hmlab(p, &args)), 0);
    }
    for f in ["solution.hmfield", "solution.json"] {
        assert_eq!(
            fs::read(p.join("a").join(f)).unwrap(),
            fs::read(p.join("b").join(f)).unwrap(),
            "{f}"
        );
    }
}

#[test]
fn iteration_cap_exits_2_and_keeps_the_best_iterate() {
    let dir = TempDir::new().unwrap();
    let mut args = vec![
        "solve",
        "--metric",
        "spherical",
        "--boundary",
        "affine:c=0.1,0",
        "--max-iters",
        "1",
    ];
    args.extend(SMALL);
    assert_eq!(code(&hmlab(dir.path(), &args)), 2);
    assert!(dir.path().join("solution.hmfield").exists());
}

#[test]
fn verify_analytic_maps() {
    let dir = TempDir::new().unwrap();
    let p = dir.path();
    let quad = [
        "--x0",
        "0.5",
        "--y0",
        "0.5",
        "--map",
        "ehpoly:g=0,0,1;k=0,0,0.3",
        "--checks",
        "main,presub,quadform,superharm",
    ];
    let mut args = vec!["verify"];
    args.extend(quad);
    assert_eq!(code(&hmlab(p, &args)), 0);
    assert_eq!(code(&hmlab(p, &["verify", "--map", "affine:c=0.3,0"])), 0);
    let o = hmlab(p, &["verify", "--map", "modsq", "--checks", "hopf"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("FAIL"));
    let reports = fs::read_to_string(p.join("reports.json")).unwrap();
    assert!(reports.contains("\"fail\""));
}

#[test]
fn verify_reports_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let p = dir.path();
    let mut seen = Vec::new();
    for _ in 0..2 {
        assert_eq!(
            code(&hmlab(
                p,
                &[
                    "verify",
                    "--map",
                    "holo:0,0,1,0",
                    "--metric",
                    "spherical",
                    "--checks",
                    "hopf,bochner,minprin",
                    "--csv"
                ]
            )),
            0
        );
        seen.push((
            fs::read(p.join("reports.json")).unwrap(),
            fs::read(p.join("hopf.csv")).unwrap(),
        ));
    }
    assert_eq!(seen[0], seen[1]);
}

#[test]
fn refine_writes_table_and_slopes() {
    let dir = TempDir::new().unwrap();
    let p = dir.path();
    let o = hmlab(
        p,
        &[
            "refine",
            "--nx",
            "33",
            "--ny",
            "33",
            "--s",
            "0.03125",
            "--x0",
            "0.5",
            "--y0",
            "0.5",
            "--map",
            "ehpoly:g=0,0,1;k=0,0,0.3",
            "--checks",
            "main",
        ],
    );
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let table = fs::read_to_string(p.join("refine.csv")).unwrap();
    assert!(table.starts_with("check,level,nx,spacing,linf,status"));
    assert_eq!(table.lines().count(), 4);
    let slopes: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(p.join("slopes.json")).unwrap()).unwrap();
    assert_eq!(slopes[0]["passed"], true);

    let o = hmlab(
        p,
        &[
            "refine",
            "--nx",
            "33",
            "--ny",
            "33",
            "--s",
            "0.03125",
            "--metric",
            "spherical",
            "--boundary",
            "holo:0,0,0.5,0",
            "--checks",
            "bochner",
        ],
    );
    assert_eq!(code(&o), 0, "{}", stdout(&o));
}
