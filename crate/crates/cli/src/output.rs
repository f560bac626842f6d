//! CSV writers. Every float goes out with 17 significant digits.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use lsmdg::experiments::{ConvergenceRow, InterfacePosition};
use lsmdg::ode_study::OdeStudyRow;

use crate::CliError;

pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

pub fn write(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, CliError> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(name);
    std::fs::write(&path, contents)?;
    log::info!("wrote {}", path.display());
    Ok(path)
}

pub fn ode_study(rows: &[OdeStudyRow]) -> String {
    let mut s = String::from("formulation,cells,h,error,rate\n");
    for r in rows {
        let _ = writeln!(s, "{},{},{},{},{}", r.formulation, r.cells, num(r.h), num(r.error), opt(r.rate));
    }
    s
}

pub fn convergence(rows: &[ConvergenceRow]) -> String {
    let mut s = String::from("case,p,cells,h,l2_error,rate\n");
    for r in rows {
        let _ = writeln!(s, "{},{},{},{},{},{}", r.case, r.p, r.cells, num(r.h), num(r.l2_error), opt(r.rate));
    }
    s
}

pub fn interface_positions(rows: &[InterfacePosition]) -> String {
    let mut s = String::from("Pe,p,x_eps\n");
    for r in rows {
        let _ = writeln!(s, "{},{},{}", num(r.peclet), r.p, num(r.x_eps));
    }
    s
}

/// Rows of `x` followed by one column per name.
pub fn columns(names: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> String {
    let mut s = names.join(",");
    s.push('\n');
    for row in rows {
        let line: Vec<String> = row.into_iter().map(num).collect();
        s.push_str(&line.join(","));
        s.push('\n');
    }
    s
}
