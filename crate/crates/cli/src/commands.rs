//! The four experiment commands. Each one pulls its keys out of the settings, rejects
//! leftovers, validates the solver configuration and only then starts solving.

use std::path::Path;

use lsmdg::experiments::{
    self, burgers_config, refinement_config, shock_config, ConvergenceRow, ShockCase, SolveOutcome, BURGERS_DOMAIN,
};
use lsmdg::ode_study::{run_ode_study, Formulation, OdeStudyConfig};
use lsmdg::oracles::{boundary_layer_exact, burgers_exact, BurgersExact};
use lsmdg::solver::SolverConfig;

use crate::config::Settings;
use crate::output::{self, num};
use crate::CliError;

/// Mass-flux constancy demanded of the shock oracle before it is trusted.
const ORACLE_MASS_FLUX_TOL: f64 = 1e-10;

/// Whether every solve of a command settled; unsettled runs still write their output.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Settled,
    Unsettled,
}

impl Outcome {
    fn from_flag(settled: bool) -> Self {
        if settled {
            Outcome::Settled
        } else {
            Outcome::Unsettled
        }
    }
}

fn single<T: Copy + std::fmt::Display>(key: &str, values: &[T]) -> Result<T, CliError> {
    match values {
        [v] => Ok(*v),
        _ => Err(CliError::Config(format!("{key} takes a single value in this mode"))),
    }
}

fn solver(settings: &mut Settings, base: SolverConfig, moving: bool) -> Result<SolverConfig, CliError> {
    let mut cfg = base;
    settings.apply_solver(&mut cfg)?;
    cfg.validate(moving)?;
    Ok(cfg)
}

fn doubling(from: usize, to: usize) -> Vec<usize> {
    std::iter::successors(Some(from), |n| Some(n * 2)).take_while(|&n| n <= to).collect()
}

fn report_rows(rows: &[ConvergenceRow]) -> Outcome {
    for r in rows {
        let rate = r.rate.map(|v| format!("{v:.3}")).unwrap_or_else(|| "-".into());
        log::info!("{} p={} cells={} error={:.3e} rate={rate}", r.case, r.p, r.cells, r.l2_error);
        if !r.settled {
            log::warn!("{} p={} cells={} did not settle", r.case, r.p, r.cells);
        }
    }
    Outcome::from_flag(rows.iter().all(|r| r.settled))
}

/// Writes `solution.csv` (x, computed value, exact value), `mesh.csv` and `history.csv`.
fn write_scalar_solve(dir: &Path, out: &SolveOutcome, exact: impl Fn(f64) -> f64) -> Result<(), CliError> {
    let rows = out.samples.iter().map(|(x, y)| vec![*x, y[0], exact(*x)]);
    output::write(dir, "solution.csv", &output::columns(&["x", "y", "y_exact"], rows))?;
    output::write(dir, "mesh.csv", &out.geometry.to_csv())?;
    output::write(dir, "history.csv", &out.report.to_csv())?;
    Ok(())
}

fn log_report(out: &SolveOutcome) -> Outcome {
    let r = &out.report;
    log::info!(
        "{} iterations, objective {:.3e}, gradient {:.3e}, converged {}, stagnated {}, L2 error {:.3e}",
        r.iterations,
        r.objective,
        r.gradient_norm,
        r.converged,
        r.stagnated,
        out.l2_error
    );
    if !r.settled() {
        log::warn!("solver stalled before settling");
    }
    Outcome::from_flag(r.settled())
}

pub fn ode_study(mut s: Settings, dir: &Path) -> Result<Outcome, CliError> {
    let defaults = OdeStudyConfig::default();
    let cfg = OdeStudyConfig {
        degree: s.take_or("p", defaults.degree)?,
        cells: s.take_list_or("cells", defaults.cells)?,
        formulations: s.take_list_or::<Formulation>("formulation", defaults.formulations)?,
    };
    s.finish("ode-study")?;
    cfg.validate()?;
    let result = run_ode_study(&cfg)?;
    for r in &result.rows {
        log::info!("{} cells={} error={:.3e} rate={:?}", r.formulation, r.cells, r.error, r.rate);
    }
    if let Some(gap) = result.equivalence_gap {
        log::info!("reduced-order versus trial-to-test coefficient gap {gap:.3e}");
    }
    output::write(dir, "ode_study.csv", &output::ode_study(&result.rows))?;
    Ok(Outcome::Settled)
}

pub fn boundary_layer(mut s: Settings, dir: &Path) -> Result<Outcome, CliError> {
    let mode: String = s.take_or("mode", "solve".to_string())?;
    match mode.as_str() {
        "solve" => {
            let pe = single("pe", &s.take_list_or("pe", vec![10.0])?)?;
            let p = single("p", &s.take_list_or("p", vec![2])?)?;
            let cells = s.take_or("cells", 2)?;
            let moving = s.take_bool("moving", true)?;
            let cfg = solver(&mut s, SolverConfig::default(), moving)?;
            s.finish("boundary-layer solve")?;
            let out = experiments::boundary_layer(pe, p, cells, moving, &cfg)?;
            log::info!("vertices {:?}", out.vertices());
            write_scalar_solve(dir, &out, |x| boundary_layer_exact(pe, x))?;
            Ok(log_report(&out))
        }
        "convergence" => {
            let pe = single("pe", &s.take_list_or("pe", vec![10.0])?)?;
            let moving = s.take_bool("moving", false)?;
            let (ps, top) = if moving { (vec![2, 3], 64) } else { (vec![2, 3, 4, 5], 256) };
            let ps: Vec<usize> = s.take_list_or("p", ps)?;
            let schedule = s.take_list_or("schedule", doubling(2, top))?;
            let base = if moving { refinement_config(&SolverConfig::default()) } else { SolverConfig::default() };
            let cfg = solver(&mut s, base, moving)?;
            s.finish("boundary-layer convergence")?;
            let mut rows = Vec::new();
            for &p in &ps {
                rows.extend(experiments::boundary_layer_convergence(pe, p, &schedule, moving, &cfg)?);
            }
            output::write(dir, "convergence.csv", &output::convergence(&rows))?;
            Ok(report_rows(&rows))
        }
        "table" => {
            let pes = s.take_list_or("pe", vec![10.0, 1e2, 1e3, 1e4, 1e5])?;
            let ps: Vec<usize> = s.take_list_or("p", vec![2, 3, 4, 5])?;
            let cfg = solver(&mut s, SolverConfig::default(), true)?;
            s.finish("boundary-layer table")?;
            let rows = experiments::interface_positions(&pes, &ps, &cfg)?;
            let mut settled = true;
            for r in &rows {
                let ok = !r.stalled && (r.converged || r.stagnated);
                settled &= ok;
                log::info!("Pe={} p={} x_eps={} settled {ok}", r.peclet, r.p, num(r.x_eps));
            }
            output::write(dir, "interface_positions.csv", &output::interface_positions(&rows))?;
            Ok(Outcome::from_flag(settled))
        }
        other => Err(CliError::Config(format!("mode={other}: expected solve, convergence or table"))),
    }
}

pub fn burgers(mut s: Settings, dir: &Path) -> Result<Outcome, CliError> {
    let mode: String = s.take_or("mode", "solve".to_string())?;
    let epsilon: f64 = s.take_or("epsilon", 1e-2)?;
    let p: usize = s.take_or("p", 2)?;
    let moving = s.take_bool("moving", true)?;
    let base = if moving { burgers_config(&SolverConfig::default()) } else { SolverConfig::default() };
    match mode.as_str() {
        "solve" => {
            let cells = s.take_or("cells", 8)?;
            let cfg = solver(&mut s, base, moving)?;
            s.finish("burgers solve")?;
            let out = experiments::burgers(epsilon, p, cells, moving, &cfg)?;
            let (yl, yr) = (burgers_exact(epsilon, 1.0, BURGERS_DOMAIN.0), burgers_exact(epsilon, 1.0, BURGERS_DOMAIN.1));
            log::info!("overshoot {:.3e}", experiments::overshoot(&out.samples, yl, yr));
            write_scalar_solve(dir, &out, |x| burgers_exact(epsilon, 1.0, x))?;
            Ok(log_report(&out))
        }
        "convergence" => {
            let schedule = s.take_list_or("schedule", vec![10, 20, 40, 80])?;
            let cfg = solver(&mut s, base, moving)?;
            s.finish("burgers convergence")?;
            let mut rows = experiments::burgers_convergence(epsilon, p, &schedule, moving, &cfg)?;
            let exact = BurgersExact { viscosity: epsilon, left: 1.0 };
            rows.extend(experiments::projection_convergence("burgers_projection", &exact, p, &schedule, BURGERS_DOMAIN)?);
            output::write(dir, "convergence.csv", &output::convergence(&rows))?;
            Ok(report_rows(&rows))
        }
        other => Err(CliError::Config(format!("mode={other}: expected solve or convergence"))),
    }
}

pub fn ns_shock(mut s: Settings, dir: &Path) -> Result<Outcome, CliError> {
    let d = ShockCase::default();
    let case = ShockCase {
        mach: s.take_or("mach", d.mach)?,
        reynolds: s.take_or("reynolds", d.reynolds)?,
        prandtl: s.take_or("prandtl", d.prandtl)?,
        p: s.take_or("p", d.p)?,
        cells: s.take_or("cells", d.cells)?,
        oracle_step: s.take_or("oracle_step", d.oracle_step)?,
        moving: s.take_bool("moving", d.moving)?,
    };
    let base = if case.moving { shock_config(&SolverConfig::default()) } else { SolverConfig::default() };
    let cfg = solver(&mut s, base, case.moving)?;
    s.finish("ns-shock")?;
    let out = experiments::ns_shock(&case, &cfg)?;

    let flux_defect = out.oracle.mass_flux_defect();
    if !(flux_defect <= ORACLE_MASS_FLUX_TOL) {
        return Err(CliError::Core(lsmdg::Error::Oracle(format!(
            "mass flux varies by {flux_defect:.3e} along the reference profile"
        ))));
    }
    log::info!("shift {:.6}, density error {:.3e}", out.shift, out.density_error);
    log::info!(
        "relative to peak density {:.3e}, relative to the jump {:.3e}",
        out.relative_density_error,
        out.jump_relative_density_error
    );
    log::info!("Rankine-Hugoniot defect of the boundary traces {:.3e}", out.rankine_hugoniot);

    let solution = out.solve.samples.iter().map(|(x, y)| vec![*x, y[0], y[1], y[2]]);
    output::write(dir, "solution.csv", &output::columns(&["x", "rho", "rho_v", "rho_E"], solution))?;
    output::write(dir, "mesh.csv", &out.solve.geometry.to_csv())?;
    output::write(dir, "history.csv", &out.solve.report.to_csv())?;

    let o = &out.oracle;
    let stride = (o.x.len() / 4000).max(1);
    let oracle = (0..o.x.len())
        .step_by(stride)
        .map(|i| vec![o.x[i] + out.shift, o.mass_flux / o.velocity[i], o.velocity[i], o.temperature[i]]);
    output::write(dir, "oracle.csv", &output::columns(&["x", "rho", "v", "T"], oracle))?;
    let comparison = out.solve.samples.iter().map(|(x, y)| {
        let r = o.density_at(x - out.shift);
        vec![*x, y[0], r, y[0] - r]
    });
    output::write(dir, "comparison.csv", &output::columns(&["x", "rho_h", "rho_oracle", "diff"], comparison))?;
    Ok(log_report(&out.solve))
}
