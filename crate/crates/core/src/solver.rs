//! Regularized Gauss-Newton iteration over state, auxiliary and geometry unknowns.
//!
//! Each iteration solves `(J^T J + R) delta = -J^T r` with a banded Cholesky factorization,
//! then backtracks on the true objective until the step keeps the mesh valid, the state
//! admissible and the objective strictly decreasing.

use std::fmt::Write as _;

use crate::assembly::{assemble, gradient, objective, ColumnKind, Discretization, FieldState, ResidualSystem};
use crate::error::{Error, Result};
use crate::linalg::{norm, BandedQr, BandedSpd};
use crate::mesh::GeometryField;

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Identity regularization on state coefficients.
    pub lambda_state: f64,
    /// Identity regularization on auxiliary coefficients.
    pub lambda_aux: f64,
    /// Initial identity regularization on geometry nodes.
    pub lambda_geometry: f64,
    /// Weight of the graph Laplacian on geometry increments.
    pub lambda_laplacian: f64,
    /// Scale the geometry regularization of each node by the mean inverse volume of its cells.
    pub inverse_volume_scaling: bool,
    /// Adapt `lambda_geometry` after each step: `x increase` when the step was rejected or its
    /// line search met a trial with a larger objective, `x decrease` otherwise.
    pub adapt_lambda: bool,
    pub lambda_increase: f64,
    pub lambda_decrease: f64,
    pub lambda_floor: f64,
    pub max_iters: usize,
    /// Absolute tolerance on `||J^T r||`.
    pub abs_tol: f64,
    /// Tolerance on `||J^T r||` relative to its initial value.
    pub rel_tol: f64,
    /// A rejected step shorter than `step_tol (1 + ||z||)` means no progress is possible at
    /// working precision; the iterate is then reported as converged.
    pub step_tol: f64,
    /// A rejected step whose linearized model predicts a decrease below `precision_tol * f`
    /// cannot make progress in floating point; the iterate is then reported as converged.
    pub precision_tol: f64,
    /// The solve stops with `stagnated = true` when the objective decreased by less than
    /// `stagnation_tol` relative over the last `stagnation_window` accepted steps. This
    /// terminates solves whose infimum lies on the boundary of valid geometries, where the
    /// gradient never vanishes.
    pub stagnation_window: usize,
    pub stagnation_tol: f64,
    pub backtrack_factor: f64,
    pub max_halvings: usize,
    /// Consecutive rejected iterations before the solve is declared stalled.
    pub max_rejections: usize,
    /// Factorization used for the regularized Gauss-Newton system.
    pub linear_solver: LinearSolver,
    /// Corrected seminormal refinement passes per Cholesky solve.
    pub refinements: usize,
}

/// How the regularized Gauss-Newton system is solved.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinearSolver {
    /// Banded Cholesky factorization of `J^T J + R` with iterative refinement.
    Cholesky,
    /// Givens QR of `[J; B]` with `B^T B = R`.
    Qr,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            lambda_state: 0.0,
            lambda_aux: 0.0,
            lambda_geometry: 1e-2,
            lambda_laplacian: 0.0,
            inverse_volume_scaling: false,
            adapt_lambda: true,
            lambda_increase: 10.0,
            lambda_decrease: 0.5,
            lambda_floor: 1e-12,
            max_iters: 20000,
            abs_tol: 1e-12,
            rel_tol: 1e-14,
            step_tol: 1e-14,
            precision_tol: 1e-13,
            stagnation_window: 10,
            stagnation_tol: 1e-10,
            backtrack_factor: 0.5,
            max_halvings: 30,
            max_rejections: 25,
            linear_solver: LinearSolver::Cholesky,
            refinements: 2,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self, moving: bool) -> Result<()> {
        let nonneg = [self.lambda_state, self.lambda_aux, self.lambda_laplacian];
        if nonneg.iter().any(|v| !(*v >= 0.0)) {
            return Err(Error::InvalidArgument("regularization weights must be nonnegative".into()));
        }
        if moving && !(self.lambda_geometry > 0.0) {
            return Err(Error::InvalidArgument("geometry regularization must be positive with moving geometry".into()));
        }
        let positive = [self.abs_tol, self.rel_tol, self.step_tol, self.precision_tol, self.stagnation_tol, self.lambda_increase, self.lambda_floor];
        if positive.iter().any(|v| !(*v > 0.0)) {
            return Err(Error::InvalidArgument("tolerances and adaptation factors must be positive".into()));
        }
        if self.stagnation_window == 0 {
            return Err(Error::InvalidArgument("stagnation window must be at least one step".into()));
        }
        if !(self.backtrack_factor > 0.0 && self.backtrack_factor < 1.0) || !(self.lambda_decrease > 0.0 && self.lambda_decrease <= 1.0) {
            return Err(Error::InvalidArgument("backtracking and decrease factors must lie in (0, 1)".into()));
        }
        Ok(())
    }
}

/// One line of the iteration log.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationRecord {
    pub iter: usize,
    pub objective: f64,
    pub grad_norm: f64,
    pub lambda_geometry: f64,
    /// Accepted step scale, or zero for a rejected iteration.
    pub step_scale: f64,
    pub min_jacobian: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    /// Accepted steps.
    pub iterations: usize,
    pub objective: f64,
    pub gradient_norm: f64,
    /// Objective after each accepted step, starting with the initial value.
    pub history: Vec<f64>,
    pub records: Vec<IterationRecord>,
    pub rejections: usize,
    /// Smallest `u'` of the final mesh.
    pub min_jacobian: f64,
    pub converged: bool,
    /// The objective stopped decreasing while the gradient was still above tolerance.
    pub stagnated: bool,
    pub stalled: bool,
}

impl SolveReport {
    /// Converged or stagnated without a stall: the iterate is as good as the solver gets it.
    pub fn settled(&self) -> bool {
        !self.stalled && (self.converged || self.stagnated)
    }

    /// Iteration log as CSV: `iter,objective,grad_norm,lambda_u,step_scale,min_jacobian`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("iter,objective,grad_norm,lambda_u,step_scale,min_jacobian\n");
        for r in &self.records {
            let _ = writeln!(
                s,
                "{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                r.iter, r.objective, r.grad_norm, r.lambda_geometry, r.step_scale, r.min_jacobian
            );
        }
        s
    }
}

/// Accepted step of the backtracking search.
#[derive(Debug, Clone, PartialEq)]
pub struct AcceptedStep<T> {
    pub scale: f64,
    pub objective: f64,
    pub payload: T,
}

/// Backtracking on the true objective: tries `alpha = 1, factor, factor^2, ...` and returns the
/// first scale at which `trial` reports a valid point (`Some`) with objective strictly below
/// `current`. `None` after `max_halvings` reductions.
pub fn damp_step<T>(
    current: f64,
    factor: f64,
    max_halvings: usize,
    mut trial: impl FnMut(f64) -> Option<(f64, T)>,
) -> Option<AcceptedStep<T>> {
    let mut alpha = 1.0;
    for _ in 0..=max_halvings {
        if let Some((f, payload)) = trial(alpha) {
            if f < current {
                return Some(AcceptedStep { scale: alpha, objective: f, payload });
            }
        }
        alpha *= factor;
    }
    None
}

/// Per-node geometry regularization weights: one, or the mean inverse volume of the cells
/// containing the node.
fn geometry_weights(disc: &Discretization, geometry: &GeometryField, nodes: &[usize], inverse_volume: bool) -> Vec<f64> {
    if !inverse_volume {
        return vec![1.0; nodes.len()];
    }
    let p = geometry.degree();
    let vols: Vec<f64> = (0..geometry.cell_count()).map(|c| geometry.cell_volume(c, disc.quadrature())).collect();
    nodes
        .iter()
        .map(|&n| {
            let cells: Vec<usize> = if n % p == 0 {
                [n / p, (n / p).wrapping_sub(1)].into_iter().filter(|&c| c < vols.len()).collect()
            } else {
                vec![n / p]
            };
            cells.iter().map(|&c| 1.0 / vols[c].abs().max(f64::MIN_POSITIVE)).sum::<f64>() / cells.len() as f64
        })
        .collect()
}

/// Regularization matrix in the column order of the layout.
struct Regularization {
    diag: Vec<f64>,
    /// Rows `B` with `B^T B` equal to the regularization matrix.
    sqrt_rows: Vec<Vec<(usize, f64)>>,
    /// Off-diagonal Laplacian couplings `(a, b, value)` with `a > b`.
    couplings: Vec<(usize, usize, f64)>,
}

impl Regularization {
    fn build(disc: &Discretization, geometry: &GeometryField, cfg: &SolverConfig, lambda_geometry: f64) -> Self {
        let layout = disc.layout();
        let kinds = layout.column_kinds();
        let geometry_cols = layout.geometry_columns();
        let nodes: Vec<usize> = geometry_cols.iter().map(|g| g.0).collect();
        let weights = geometry_weights(disc, geometry, &nodes, cfg.inverse_volume_scaling);
        let mut diag: Vec<f64> = kinds
            .iter()
            .map(|k| match k {
                ColumnKind::State => cfg.lambda_state,
                ColumnKind::Aux => cfg.lambda_aux,
                ColumnKind::Geometry(_) => 0.0,
            })
            .collect();
        for (&(_, col), w) in geometry_cols.iter().zip(&weights) {
            diag[col] += lambda_geometry * w;
        }
        let mut sqrt_rows: Vec<Vec<(usize, f64)>> =
            diag.iter().enumerate().filter(|(_, d)| **d > 0.0).map(|(i, d)| vec![(i, d.sqrt())]).collect();
        let mut couplings = Vec::new();
        // the Laplacian weight follows the adaptive identity weight
        let lap = cfg.lambda_laplacian * lambda_geometry / cfg.lambda_geometry;
        if lap > 0.0 && layout.is_moving() {
            let last = geometry.nodes().len() - 1;
            for n in 0..last {
                let a = layout.geometry_col(n);
                let b = layout.geometry_col(n + 1);
                for c in [a, b].into_iter().flatten() {
                    diag[c] += lap;
                }
                if let (Some(a), Some(b)) = (a, b) {
                    couplings.push((a.max(b), a.min(b), -lap));
                }
                let root = lap.sqrt();
                let row: Vec<(usize, f64)> = [a.map(|c| (c, root)), b.map(|c| (c, -root))].into_iter().flatten().collect();
                if !row.is_empty() {
                    sqrt_rows.push(row);
                }
            }
        }
        Self { diag, sqrt_rows, couplings }
    }

    fn bandwidth(&self) -> usize {
        self.couplings.iter().map(|&(a, b, _)| a - b).max().unwrap_or(0)
    }

    fn add_to(&self, m: &mut BandedSpd) {
        for (i, &d) in self.diag.iter().enumerate() {
            if d != 0.0 {
                m.add(i, i, d);
            }
        }
        for &(a, b, v) in &self.couplings {
            m.add(a, b, v);
        }
    }

    fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut y: Vec<f64> = self.diag.iter().zip(x).map(|(d, v)| d * v).collect();
        for &(a, b, v) in &self.couplings {
            y[a] += v * x[b];
            y[b] += v * x[a];
        }
        y
    }
}

/// Decrease of the objective predicted by the linearized residual, `f - |r + J delta|^2 / 2`.
fn predicted_decrease(rs: &ResidualSystem, delta: &[f64]) -> f64 {
    let jd = rs.jacobian.as_ref().expect("assembled with Jacobian").mul_vec(delta);
    let model: f64 = rs.residual.iter().zip(&jd).map(|(r, d)| (r + d) * (r + d)).sum();
    objective(rs) - 0.5 * model
}

/// Regularized Gauss-Newton step from a Givens QR factorization of the stacked matrix
/// `[J; B]`, where `B^T B = R`. Avoids forming `J^T J`, whose geometry block loses all
/// significant digits once the residual is small.
fn gauss_newton_step_qr(rs: &ResidualSystem, reg: &Regularization) -> Result<Vec<f64>> {
    let jac = rs.jacobian.as_ref().expect("assembled with Jacobian");
    let first = |row: &[(usize, f64)]| row.iter().map(|e| e.0).min().unwrap_or(0);
    let mut rows: Vec<(Vec<(usize, f64)>, f64)> = (0..jac.nrows())
        .map(|i| (jac.row(i).collect(), -rs.residual[i]))
        .chain(reg.sqrt_rows.iter().map(|r| (r.clone(), 0.0)))
        .collect();
    rows.sort_by_key(|(r, _)| first(r));
    let bw = rows
        .iter()
        .map(|(r, _)| {
            let lo = first(r);
            r.iter().map(|e| e.0).max().unwrap_or(lo) - lo
        })
        .max()
        .unwrap_or(0);
    let mut qr = BandedQr::new(jac.ncols(), bw);
    for (row, rhs) in rows {
        qr.add_row(row, rhs)?;
    }
    qr.solve()
}

/// Regularized Gauss-Newton step `delta` solving `(J^T J + R) delta = -J^T r`, refined against
/// the unfactored operator.
fn gauss_newton_step(rs: &ResidualSystem, grad: &[f64], reg: &Regularization, refinements: usize) -> Result<Vec<f64>> {
    let jac = rs.jacobian.as_ref().expect("assembled with Jacobian");
    let bw = jac.bandwidth().max(reg.bandwidth());
    let mut m = BandedSpd::zeros(jac.ncols(), bw);
    jac.add_normal_to(&mut m, None);
    reg.add_to(&mut m);
    let chol = m.factor()?;
    let rhs: Vec<f64> = grad.iter().map(|g| -g).collect();
    let mut delta = chol.solve(&rhs);
    for _ in 0..refinements {
        let jd = jac.mul_vec(&delta);
        let jtjd = jac.transpose_mul_vec(&jd);
        let rd = reg.apply(&delta);
        let res: Vec<f64> = (0..delta.len()).map(|i| rhs[i] - jtjd[i] - rd[i]).collect();
        let corr = chol.solve(&res);
        delta.iter_mut().zip(&corr).for_each(|(d, c)| *d += c);
    }
    Ok(delta)
}

/// Minimizes the least-squares objective from `(geometry, state)`.
///
/// Returns the final fields and a report. A persistent failure to find a decreasing step
/// returns the best iterate with `stalled = true`; a singular regularized normal matrix on
/// a static problem is an error.
pub fn gauss_newton_solve(
    disc: &Discretization,
    geometry: &GeometryField,
    state: &FieldState,
    cfg: &SolverConfig,
) -> Result<(FieldState, GeometryField, SolveReport)> {
    cfg.validate(disc.moving)?;
    let layout = disc.layout();
    let quad = disc.quadrature();
    let valid = geometry.check_validity(quad);
    if !(valid.min_jacobian > geometry.validity_tolerance()) {
        return Err(Error::InvalidGeometry { cell: valid.cell, min_jacobian: valid.min_jacobian });
    }
    let mut state = state.clone();
    let mut geometry = geometry.project_boundary();
    let mut z = layout.gather(&state, &geometry);
    let mut rs = assemble(disc, &geometry, &state, true)?;
    let mut f = objective(&rs);
    let mut grad = gradient(&rs)?;
    let g0 = norm(&grad);
    let mut lambda = cfg.lambda_geometry;
    let mut report = SolveReport {
        iterations: 0,
        objective: f,
        gradient_norm: g0,
        history: vec![f],
        records: Vec::new(),
        rejections: 0,
        min_jacobian: valid.min_jacobian,
        converged: false,
        stagnated: false,
        stalled: false,
    };
    let geometry_cols = layout.geometry_columns();
    let mut consecutive = 0;
    for iter in 0..cfg.max_iters {
        let gnorm = norm(&grad);
        report.gradient_norm = gnorm;
        if gnorm <= cfg.abs_tol || gnorm <= cfg.rel_tol * g0 || f == 0.0 {
            report.converged = true;
            break;
        }
        let reg = Regularization::build(disc, &geometry, cfg, lambda);
        let step = match cfg.linear_solver {
            LinearSolver::Cholesky => gauss_newton_step(&rs, &grad, &reg, cfg.refinements),
            LinearSolver::Qr => gauss_newton_step_qr(&rs, &reg),
        };
        let delta = match step {
            Ok(d) => d,
            Err(Error::SolveFailure { .. }) if layout.is_moving() && cfg.adapt_lambda => {
                lambda *= cfg.lambda_increase;
                report.rejections += 1;
                consecutive += 1;
                if consecutive >= cfg.max_rejections {
                    report.stalled = true;
                    break;
                }
                continue;
            }
            Err(e) => return Err(e),
        };
        let evaluate = |alpha: f64| {
            let zt: Vec<f64> = z.iter().zip(&delta).map(|(a, d)| a + alpha * d).collect();
            let mut st = state.clone();
            let mut gt = geometry.clone();
            layout.scatter(&zt, &mut st, &mut gt);
            let v = gt.check_validity(quad);
            if !(v.min_jacobian > gt.validity_tolerance()) {
                return None;
            }
            let rs = assemble(disc, &gt, &st, true).ok()?;
            let obj = objective(&rs);
            obj.is_finite().then_some((obj, (zt, st, gt, rs, v.min_jacobian)))
        };
        let mut increased = false;
        let accepted = damp_step(f, cfg.backtrack_factor, cfg.max_halvings, |alpha| {
            let out = evaluate(alpha);
            if matches!(&out, Some((obj, _)) if *obj >= f) {
                increased = true;
            }
            out
        });
        // A trial that raised the objective is blamed on the geometry when the same step
        // without its geometry part would have lowered it.
        let geometry_spoiled = increased && layout.is_moving() && {
            let mut state_only = delta.clone();
            for &(_, col) in &geometry_cols {
                state_only[col] = 0.0;
            }
            let zt: Vec<f64> = z.iter().zip(&state_only).map(|(a, d)| a + d).collect();
            let mut st = state.clone();
            let mut gt = geometry.clone();
            layout.scatter(&zt, &mut st, &mut gt);
            matches!(assemble(disc, &gt, &st, false), Ok(r) if objective(&r) < f)
        };
        match accepted {
            Some(step) => {
                let (zt, st, gt, rst, minj) = step.payload;
                z = zt;
                state = st;
                geometry = gt;
                rs = rst;
                f = step.objective;
                grad = gradient(&rs)?;
                report.iterations += 1;
                report.history.push(f);
                report.min_jacobian = minj;
                consecutive = 0;
                if cfg.adapt_lambda {
                    lambda = if !increased {
                        (lambda * cfg.lambda_decrease).max(cfg.lambda_floor)
                    } else if geometry_spoiled {
                        lambda * cfg.lambda_increase
                    } else {
                        lambda
                    };
                }
                let rec = IterationRecord {
                    iter,
                    objective: f,
                    grad_norm: norm(&grad),
                    lambda_geometry: lambda,
                    step_scale: step.scale,
                    min_jacobian: minj,
                };
                log::debug!(
                    "{},{:.6e},{:.6e},{:.3e},{:.3e},{:.6e}",
                    rec.iter, rec.objective, rec.grad_norm, rec.lambda_geometry, rec.step_scale, rec.min_jacobian
                );
                report.records.push(rec);
                let h = &report.history;
                if h.len() > cfg.stagnation_window {
                    let old = h[h.len() - 1 - cfg.stagnation_window];
                    if old - f <= cfg.stagnation_tol * old {
                        report.stagnated = true;
                        break;
                    }
                }
            }
            None => {
                report.rejections += 1;
                let dn = norm(&delta);
                let predicted = predicted_decrease(&rs, &delta);
                let at_precision = predicted <= cfg.precision_tol * f;
                if at_precision || (lambda <= cfg.lambda_geometry && dn <= cfg.step_tol * (1.0 + norm(&z))) {
                    report.converged = true;
                    break;
                }
                consecutive += 1;
                if cfg.adapt_lambda && layout.is_moving() {
                    lambda *= cfg.lambda_increase;
                }
                report.records.push(IterationRecord {
                    iter,
                    objective: f,
                    grad_norm: norm(&grad),
                    lambda_geometry: lambda,
                    step_scale: 0.0,
                    min_jacobian: report.min_jacobian,
                });
                if consecutive >= cfg.max_rejections || !(cfg.adapt_lambda && layout.is_moving()) {
                    report.stalled = true;
                    break;
                }
            }
        }
    }
    report.objective = f;
    report.gradient_norm = norm(&grad);
    if !report.converged && !report.stalled && !report.stagnated {
        log::warn!("solver reached {} iterations without converging", cfg.max_iters);
    }
    Ok((state, geometry, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembly::BoundaryKind;
    use crate::physics::{AdvectionDiffusion, Burgers};

    #[test]
    fn iteration_limit_leaves_the_report_unsettled() {
        let model = AdvectionDiffusion::new(1.0, 0.1);
        let d = Discretization::new(&model, 4, 2, 1, BoundaryKind::Dirichlet([0.0; 3]), BoundaryKind::Dirichlet([1.0, 0.0, 0.0]), true).unwrap();
        let g = d.uniform_geometry((0.0, 1.0)).unwrap();
        let cfg = SolverConfig { max_iters: 1, ..SolverConfig::default() };
        let (_, _, report) = gauss_newton_solve(&d, &g, &d.zero_state(), &cfg).unwrap();
        assert!(!report.settled());
        let (_, _, report) = gauss_newton_solve(&d, &g, &d.zero_state(), &SolverConfig::default()).unwrap();
        assert!(report.settled());
    }

    #[test]
    fn damp_step_rejects_zero_step() {
        // a zero increment never decreases the objective
        let out = damp_step(1.0, 0.5, 30, |_| Some((1.0, ())));
        assert!(out.is_none());
    }

    #[test]
    fn damp_step_takes_full_step_when_it_decreases() {
        let out = damp_step(1.0, 0.5, 30, |a| Some(((1.0 - a).powi(2), ()))).unwrap();
        assert_eq!(out.scale, 1.0);
    }

    #[test]
    fn damp_step_halves_past_invalid_points() {
        // the full step inverts a cell (invalid); half the step is valid and decreases
        let out = damp_step(1.0, 0.5, 30, |a| if a > 0.6 { None } else { Some((1.0 - a, ())) }).unwrap();
        assert!(out.scale <= 0.5);
    }

    #[test]
    fn linear_static_problem_solves_in_one_step() {
        let model = AdvectionDiffusion::new(1.0, 0.1);
        let d = Discretization::new(&model, 4, 2, 1, BoundaryKind::Dirichlet([0.0; 3]), BoundaryKind::Dirichlet([1.0, 0.0, 0.0]), false).unwrap();
        let g = d.uniform_geometry((0.0, 1.0)).unwrap();
        let s0 = d.zero_state();
        let (s, _, rep) = gauss_newton_solve(&d, &g, &s0, &SolverConfig::default()).unwrap();
        assert!(rep.converged, "{rep:?}");
        assert_eq!(rep.iterations, 1);
        // independent of the initial guess
        let s1 = d.project_state(|_, xi| [3.0 * xi - 1.0, 0.0, 0.0]);
        let (t, _, _) = gauss_newton_solve(&d, &g, &s1, &SolverConfig::default()).unwrap();
        let diff = s.state_coeffs().iter().zip(t.state_coeffs()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(diff < 1e-10, "{diff}");
    }

    #[test]
    fn moving_burgers_history_is_monotone_and_valid() {
        let model = Burgers::new(0.05);
        let d = Discretization::new(&model, 4, 2, 2, BoundaryKind::Dirichlet([1.0, 0.0, 0.0]), BoundaryKind::Dirichlet([-1.0, 0.0, 0.0]), true).unwrap();
        let g = d.uniform_geometry((-0.5, 0.5)).unwrap();
        let s0 = d.project_state(|c, _| [if c < 2 { 1.0 } else { -1.0 }, 0.0, 0.0]);
        let cfg = SolverConfig { inverse_volume_scaling: true, lambda_laplacian: 1e-6, ..SolverConfig::default() };
        let (_, g1, rep) = gauss_newton_solve(&d, &g, &s0, &cfg).unwrap();
        assert!(rep.history.windows(2).all(|w| w[1] < w[0]));
        assert!(rep.records.iter().all(|r| r.min_jacobian > 0.0));
        assert!(rep.objective < rep.history[0]);
        assert!(g1.check_validity(d.quadrature()).min_jacobian > 0.0);
        assert!(rep.to_csv().lines().count() == rep.records.len() + 1);
    }

    #[test]
    fn rejects_bad_configuration() {
        let cfg = SolverConfig { lambda_geometry: 0.0, ..SolverConfig::default() };
        assert!(cfg.validate(true).is_err());
        assert!(cfg.validate(false).is_ok());
    }
}
