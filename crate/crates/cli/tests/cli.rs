use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn lsmdg(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lsmdg"))
        .args(args)
        .arg("--csv-dir")
        .arg(dir)
        .args(["--log-level", "warn"])
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

/// Header and rows of a CSV file.
fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let text = std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(String::from).collect()).collect();
    (header, rows)
}

fn column(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"))
}

#[test]
fn default_ode_study_writes_all_levels() {
    let dir = TempDir::new().unwrap();
    let out = lsmdg(dir.path(), &["ode-study"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let (header, rows) = read_csv(&dir.path().join("ode_study.csv"));
    assert_eq!(header, ["formulation", "cells", "h", "error", "rate"]);
    assert_eq!(rows.len(), 27);

    let rate = column(&header, "rate");
    let tail = |name: &str| -> f64 {
        let rates: Vec<f64> = rows.iter().filter(|r| r[0] == name).filter_map(|r| r[rate].parse().ok()).collect();
        rates[rates.len() - 3..].iter().sum::<f64>() / 3.0
    };
    assert!(tail("equal_order") <= 2.6);
    assert!((tail("trial_to_test") - 3.0).abs() < 0.1);
}

#[test]
fn degree_six_data_is_represented_exactly() {
    let dir = TempDir::new().unwrap();
    let out = lsmdg(dir.path(), &["ode-study", "--p", "6", "--cells", "2"]);
    assert_eq!(code(&out), 0);
    let (header, rows) = read_csv(&dir.path().join("ode_study.csv"));
    let e = column(&header, "error");
    for r in &rows {
        assert!(r[e].parse::<f64>().unwrap() < 1e-12, "{r:?}");
    }
}

#[test]
fn floats_carry_seventeen_significant_digits() {
    let dir = TempDir::new().unwrap();
    lsmdg(dir.path(), &["ode-study", "--cells", "2,4", "--formulation", "trial_to_test"]);
    let (header, rows) = read_csv(&dir.path().join("ode_study.csv"));
    let mantissa = rows[0][column(&header, "error")].split('e').next().unwrap().replace(['.', '-'], "");
    assert_eq!(mantissa.len(), 17);
}

#[test]
fn two_cell_table_entry_matches_the_reference_position() {
    let dir = TempDir::new().unwrap();
    let out = lsmdg(dir.path(), &["boundary-layer", "--mode", "table", "--pe", "10", "--p", "2"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let (header, rows) = read_csv(&dir.path().join("interface_positions.csv"));
    assert_eq!(header, ["Pe", "p", "x_eps"]);
    let x: f64 = rows[0][2].parse().unwrap();
    assert!((x - 0.74756464998474681).abs() < 1e-6, "{x}");
}

#[test]
fn static_convergence_table_has_the_documented_columns() {
    let dir = TempDir::new().unwrap();
    let out = lsmdg(dir.path(), &["boundary-layer", "--mode", "convergence", "--p", "3", "--schedule", "8,16"]);
    assert_eq!(code(&out), 0);
    let (header, rows) = read_csv(&dir.path().join("convergence.csv"));
    assert_eq!(header, ["case", "p", "cells", "h", "l2_error", "rate"]);
    assert_eq!(rows.len(), 2);
    let rate: f64 = rows[1][5].parse().unwrap();
    assert!((rate - 4.0).abs() < 0.3, "{rate}");
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = TempDir::new().unwrap();
    let file = dir.path().join("run.cfg");
    std::fs::write(&file, "# boundary layer\nmode = solve\npe = 10\np = 3\ncells = 4\nmoving = false\n").unwrap();
    let out = lsmdg(dir.path(), &["boundary-layer", "--config", file.to_str().unwrap(), "--cells", "6"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let (_, mesh) = read_csv(&dir.path().join("mesh.csv"));
    let cells: std::collections::BTreeSet<&str> = mesh.iter().map(|r| r[0].as_str()).collect();
    assert_eq!(cells.len(), 6);
}

#[test]
fn configuration_errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    for args in [
        &["boundary-layer", "--set", "colour=blue"][..],
        &["boundary-layer", "--pe", "ten"],
        &["boundary-layer", "--mode", "sideways"],
        &["burgers", "--epsilon", "-1"],
        &["ns-shock", "--set", "lambda_geometry=0"],
        &["ode-study", "--formulation", "galerkin"],
        &["ode-study", "--set", "noequals"],
    ] {
        let out = lsmdg(dir.path(), args);
        assert_eq!(code(&out), 2, "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
    assert!(!dir.path().join("solution.csv").exists(), "nothing may run before validation");
}

#[test]
fn unsettled_solves_exit_with_three_and_still_write_output() {
    let dir = TempDir::new().unwrap();
    let out = lsmdg(dir.path(), &["boundary-layer", "--pe", "10", "--set", "max_iters=2"]);
    assert_eq!(code(&out), 3);
    assert!(dir.path().join("solution.csv").exists());
}

#[test]
fn burgers_profile_stays_within_the_boundary_values() {
    let dir = TempDir::new().unwrap();
    let out = lsmdg(dir.path(), &["burgers", "--epsilon", "1e-2", "--p", "2", "--cells", "8"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let (header, rows) = read_csv(&dir.path().join("solution.csv"));
    let (y, exact) = (column(&header, "y"), column(&header, "y_exact"));
    let values: Vec<(f64, f64)> = rows.iter().map(|r| (r[y].parse().unwrap(), r[exact].parse().unwrap())).collect();
    let lo = values.iter().map(|v| v.1).fold(f64::INFINITY, f64::min);
    let hi = values.iter().map(|v| v.1).fold(f64::NEG_INFINITY, f64::max);
    for (v, _) in values {
        assert!(v >= lo - 1e-3 && v <= hi + 1e-3, "{v}");
    }
}

#[test]
fn shock_run_writes_profile_and_oracle_comparison() {
    let dir = TempDir::new().unwrap();
    let out = lsmdg(dir.path(), &["ns-shock"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let (header, _) = read_csv(&dir.path().join("solution.csv"));
    assert_eq!(header, ["x", "rho", "rho_v", "rho_E"]);
    let (header, rows) = read_csv(&dir.path().join("comparison.csv"));
    assert_eq!(header, ["x", "rho_h", "rho_oracle", "diff"]);
    let peak = rows.iter().map(|r| r[2].parse::<f64>().unwrap()).fold(0.0, f64::max);
    let worst = rows.iter().map(|r| r[3].parse::<f64>().unwrap().abs()).fold(0.0, f64::max);
    assert!(worst / peak <= 0.02, "{}", worst / peak);
    assert!(dir.path().join("oracle.csv").exists());
}
