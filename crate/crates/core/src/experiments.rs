//! Drivers for the one-dimensional experiments: boundary layer (static and moving grids,
//! interior interface positions on two cells), the stationary viscous Burgers shock and
//! the Mach 3.5 Navier-Stokes shock compared against the ODE profile.

use crate::approximation::gauss_rule;
use crate::assembly::{BoundaryKind, Discretization, FieldState};
use crate::error::{Error, Result};
use crate::mesh::GeometryField;
use crate::oracles::{
    burgers_exact, convergence_rate, l2_error, l2_project, ns_shock_ode_oracle, sample_state, BoundaryLayerExact,
    BurgersExact, ExactSolution, ShockProfile,
};
use crate::physics::{AdvectionDiffusion, Burgers, FluxModel, NavierStokes1D, Primitive, Vector};
use crate::solver::{gauss_newton_solve, SolveReport, SolverConfig};

/// Quadrature points used for error measurement.
pub const ERROR_QUAD_POINTS: usize = 20;

/// Evaluation points per cell in sampled solution output.
pub const SAMPLES_PER_CELL: usize = 11;

/// Final fields of one solve with their sampled profile and error against the exact solution.
#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub geometry: GeometryField,
    pub state: FieldState,
    pub report: SolveReport,
    /// Physical-space L2 error, or `NaN` when no exact solution is available.
    pub l2_error: f64,
    /// `(x, y)` at evenly spaced reference points of every cell.
    pub samples: Vec<(f64, Vector)>,
}

impl SolveOutcome {
    /// Coordinates of the cell interfaces, boundaries included.
    pub fn vertices(&self) -> Vec<f64> {
        self.geometry.vertices()
    }
}

/// One row of a convergence table.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub case: String,
    pub p: usize,
    pub cells: usize,
    pub h: f64,
    pub l2_error: f64,
    /// Rate against the previous row of the same case, absent on the first.
    pub rate: Option<f64>,
    /// False when the solve behind this row ended without settling (see `SolveReport::settled`).
    pub settled: bool,
}

/// Builds rows for one case from `(cells, error)` pairs ordered coarse to fine, with
/// `h = length / cells`.
pub fn convergence_rows(case: &str, p: usize, length: f64, levels: &[(usize, f64)]) -> Vec<ConvergenceRow> {
    let pairs: Vec<(f64, f64)> = levels.iter().map(|&(n, e)| (length / n as f64, e)).collect();
    let rates = convergence_rate(&pairs).unwrap_or_default();
    levels
        .iter()
        .zip(&pairs)
        .enumerate()
        .map(|(i, (&(cells, err), &(h, _)))| ConvergenceRow {
            case: case.to_string(),
            p,
            cells,
            h,
            l2_error: err,
            rate: if i == 0 { None } else { rates.get(i - 1).copied().filter(|r| r.is_finite()) },
            settled: true,
        })
        .collect()
}

/// Rates of one case in row order.
pub fn case_rates(rows: &[ConvergenceRow], case: &str, p: usize) -> Vec<f64> {
    rows.iter().filter(|r| r.case == case && r.p == p).filter_map(|r| r.rate).collect()
}

fn run(
    disc: &Discretization,
    geometry: &GeometryField,
    initial: &FieldState,
    cfg: &SolverConfig,
    exact: Option<&dyn ExactSolution>,
) -> Result<SolveOutcome> {
    let (state, geometry, report) = gauss_newton_solve(disc, geometry, initial, cfg)?;
    let l2 = match exact {
        Some(e) => l2_error(disc, &geometry, &state, e, &gauss_rule(ERROR_QUAD_POINTS)?),
        None => f64::NAN,
    };
    let samples = sample_state(disc, &geometry, &state, SAMPLES_PER_CELL);
    Ok(SolveOutcome { geometry, state, report, l2_error: l2, samples })
}

/// Piecewise-constant state taking `left` in cells whose centroid is at or left of `split`
/// and `right` elsewhere.
fn piecewise_constant(disc: &Discretization, geometry: &GeometryField, split: f64, left: Vector, right: Vector) -> FieldState {
    let centroids: Vec<f64> = (0..disc.cell_count()).map(|c| geometry.evaluate_mapping(c, 0.5).0).collect();
    disc.project_state(|c, _| if centroids[c] <= split { left } else { right })
}

// ---------------------------------------------------------------------------------------
// Boundary layer

/// Boundary layer `y' = y''/Pe` on `[0, 1]` with `y(0) = 0`, `y(1) = 1`, solved on `cells`
/// uniform cells of degree `p` (isoparametric geometry when `moving`), starting from the
/// linear profile.
pub fn boundary_layer(pe: f64, p: usize, cells: usize, moving: bool, cfg: &SolverConfig) -> Result<SolveOutcome> {
    let model = boundary_layer_model(pe)?;
    let disc = boundary_layer_disc(&model, p, cells, moving)?;
    let geometry = disc.uniform_geometry((0.0, 1.0))?;
    let initial = linear_profile(&disc);
    run(&disc, &geometry, &initial, cfg, Some(&BoundaryLayerExact { peclet: pe }))
}

fn boundary_layer_model(pe: f64) -> Result<AdvectionDiffusion> {
    if !(pe > 0.0) {
        return Err(Error::InvalidArgument("Peclet number must be positive".into()));
    }
    Ok(AdvectionDiffusion::boundary_layer(pe))
}

fn boundary_layer_disc<'a>(model: &'a AdvectionDiffusion, p: usize, cells: usize, moving: bool) -> Result<Discretization<'a>> {
    Discretization::new(
        model,
        cells,
        p,
        p,
        BoundaryKind::Dirichlet([0.0; 3]),
        BoundaryKind::Dirichlet([1.0, 0.0, 0.0]),
        moving,
    )
}

fn linear_profile(disc: &Discretization) -> FieldState {
    let n = disc.cell_count() as f64;
    disc.project_state(|c, xi| [(c as f64 + xi) / n, 0.0, 0.0])
}

/// Interior interface position of the two-cell moving boundary-layer solve.
#[derive(Debug, Clone, PartialEq)]
pub struct InterfacePosition {
    pub peclet: f64,
    pub p: usize,
    pub x_eps: f64,
    pub objective: f64,
    pub converged: bool,
    pub stagnated: bool,
    pub stalled: bool,
}

pub fn interface_position(pe: f64, p: usize, cfg: &SolverConfig) -> Result<InterfacePosition> {
    let out = boundary_layer(pe, p, 2, true, cfg)?;
    Ok(InterfacePosition {
        peclet: pe,
        p,
        x_eps: out.vertices()[1],
        objective: out.report.objective,
        converged: out.report.converged,
        stagnated: out.report.stagnated,
        stalled: out.report.stalled,
    })
}

/// `interface_position` over every `(Pe, p)` pair, Pe-major.
pub fn interface_positions(pes: &[f64], ps: &[usize], cfg: &SolverConfig) -> Result<Vec<InterfacePosition>> {
    let mut out = Vec::with_capacity(pes.len() * ps.len());
    for &pe in pes {
        for &p in ps {
            out.push(interface_position(pe, p, cfg)?);
        }
    }
    Ok(out)
}

/// Errors of the boundary-layer solve over a refinement schedule. The case name is
/// `boundary_layer_moving` or `boundary_layer_static`. On moving grids every level whose
/// cell count is a multiple of the previous one starts from the previous solution,
/// split with `refine_solution`.
pub fn boundary_layer_convergence(
    pe: f64,
    p: usize,
    schedule: &[usize],
    moving: bool,
    cfg: &SolverConfig,
) -> Result<Vec<ConvergenceRow>> {
    let model = boundary_layer_model(pe)?;
    let exact = BoundaryLayerExact { peclet: pe };
    let case = if moving { "boundary_layer_moving" } else { "boundary_layer_static" };
    nested_levels(
        case,
        p,
        1.0,
        schedule,
        moving,
        cfg,
        &exact,
        |n| boundary_layer_disc(&model, p, n, moving),
        |disc| Ok((disc.uniform_geometry((0.0, 1.0))?, linear_profile(disc))),
    )
}

/// Solver settings for refinement studies on moving grids: the gradient tests are
/// disabled so that every level is driven to the working-precision limit, where the
/// objective can fall far below the defaults' reach.
pub fn refinement_config(base: &SolverConfig) -> SolverConfig {
    SolverConfig { abs_tol: 1e-30, rel_tol: 1e-30, ..base.clone() }
}

/// Geometry Laplacian weight used for the moving Burgers runs. Without it the far-field
/// cells, which see almost no gradient, stay put and the mesh stalls against the validity
/// limit next to the shock.
pub const BURGERS_LAPLACIAN: f64 = 1.0;

/// Solver settings for the moving Burgers runs.
pub fn burgers_config(base: &SolverConfig) -> SolverConfig {
    SolverConfig { lambda_laplacian: BURGERS_LAPLACIAN, ..base.clone() }
}

/// Carries a solution on `coarse` to `fine`, whose cell count must be a multiple of the
/// coarse one. Each coarse cell is split into equal reference sub-intervals; the fine
/// geometry nodes and state reproduce the coarse mapping and solution exactly when the
/// degrees agree. The auxiliary variable starts from zero.
pub fn refine_solution(
    coarse: &Discretization,
    geometry: &GeometryField,
    state: &FieldState,
    fine: &Discretization,
) -> Result<(GeometryField, FieldState)> {
    let (nc, nf) = (coarse.cell_count(), fine.cell_count());
    if nc == 0 || nf % nc != 0 {
        return Err(Error::InvalidArgument(format!("{nf} cells do not refine {nc} cells")));
    }
    let r = nf / nc;
    let sub = |c: usize, xi: f64| (c / r, ((c % r) as f64 + xi) / r as f64);
    let pg = fine.geometry_degree();
    let reference = GeometryField::uniform(1, pg, (0.0, 1.0))?;
    let local: Vec<f64> = reference.nodes().to_vec();
    let mut nodes = vec![0.0; nf * pg + 1];
    for c in 0..nf {
        for (k, &xi) in local.iter().enumerate() {
            let (cc, t) = sub(c, xi);
            nodes[c * pg + k] = geometry.evaluate_mapping(cc, t).0;
        }
    }
    nodes[0] = geometry.bounds().0;
    nodes[nf * pg] = geometry.bounds().1;
    let refined = GeometryField::new(pg, nodes, geometry.bounds())?;
    let projected = fine.project_state(|c, xi| {
        let (cc, t) = sub(c, xi);
        coarse.state_at(state, cc, t)
    });
    Ok((refined, projected))
}

/// Solves every level of `schedule`, starting from the previous solution when `nested` and
/// the cell count allows it, and returns the rows of a `case` table.
#[allow(clippy::too_many_arguments)]
fn nested_levels<'a>(
    case: &str,
    p: usize,
    length: f64,
    schedule: &[usize],
    nested: bool,
    cfg: &SolverConfig,
    exact: &dyn ExactSolution,
    disc_for: impl Fn(usize) -> Result<Discretization<'a>>,
    fresh: impl Fn(&Discretization) -> Result<(GeometryField, FieldState)>,
) -> Result<Vec<ConvergenceRow>> {
    let mut levels = Vec::with_capacity(schedule.len());
    let mut settled = Vec::with_capacity(schedule.len());
    let mut previous: Option<(Discretization<'a>, GeometryField, FieldState)> = None;
    for &n in schedule {
        let disc = disc_for(n)?;
        let (geometry, initial) = match &previous {
            Some((pd, pg, ps)) if nested && n % pd.cell_count() == 0 => {
                let (g, s) = refine_solution(pd, pg, ps, &disc)?;
                // a coarse mapping resting on the validity limit can drop below it once split
                if g.check_validity(disc.quadrature()).min_jacobian > g.validity_tolerance() {
                    (g, s)
                } else {
                    fresh(&disc)?
                }
            }
            _ => fresh(&disc)?,
        };
        let out = run(&disc, &geometry, &initial, cfg, Some(exact))?;
        levels.push((n, out.l2_error));
        settled.push(out.report.settled());
        previous = Some((disc, out.geometry, out.state));
    }
    let mut rows = convergence_rows(case, p, length, &levels);
    for (row, s) in rows.iter_mut().zip(settled) {
        row.settled = s;
    }
    Ok(rows)
}

/// Error of the L2 projection of `exact` onto `cells` uniform cells of degree `p` on `bounds`.
pub fn projection_error(exact: &dyn ExactSolution, p: usize, cells: usize, bounds: (f64, f64)) -> Result<f64> {
    let model = AdvectionDiffusion::new(1.0, 0.0);
    let disc = Discretization::new(&model, cells, p, 1, BoundaryKind::Outflow, BoundaryKind::Outflow, false)?;
    let geometry = disc.uniform_geometry(bounds)?;
    let quad = gauss_rule(ERROR_QUAD_POINTS)?;
    let state = l2_project(&disc, &geometry, exact, &quad)?;
    Ok(l2_error(&disc, &geometry, &state, exact, &quad))
}

/// Projection errors over a schedule as a `<case>` convergence table.
pub fn projection_convergence(
    case: &str,
    exact: &dyn ExactSolution,
    p: usize,
    schedule: &[usize],
    bounds: (f64, f64),
) -> Result<Vec<ConvergenceRow>> {
    let mut levels = Vec::with_capacity(schedule.len());
    for &n in schedule {
        levels.push((n, projection_error(exact, p, n, bounds)?));
    }
    Ok(convergence_rows(case, p, bounds.1 - bounds.0, &levels))
}

// ---------------------------------------------------------------------------------------
// Burgers

/// Domain of the stationary Burgers shock.
pub const BURGERS_DOMAIN: (f64, f64) = (-0.5, 0.5);

/// Stationary viscous Burgers shock on `[-1/2, 1/2]` with exact Dirichlet data (`y_L = 1`
/// upstream), started from the boundary values assigned by cell centroid.
pub fn burgers(viscosity: f64, p: usize, cells: usize, moving: bool, cfg: &SolverConfig) -> Result<SolveOutcome> {
    let model = burgers_model(viscosity)?;
    let disc = burgers_disc(&model, p, cells, moving)?;
    let (geometry, initial) = burgers_start(&disc)?;
    run(&disc, &geometry, &initial, cfg, Some(&BurgersExact { viscosity, left: 1.0 }))
}

fn burgers_model(viscosity: f64) -> Result<Burgers> {
    if !(viscosity > 0.0) {
        return Err(Error::InvalidArgument("Burgers viscosity must be positive".into()));
    }
    Ok(Burgers::new(viscosity))
}

fn burgers_boundary_values(viscosity: f64) -> (f64, f64) {
    (burgers_exact(viscosity, 1.0, BURGERS_DOMAIN.0), burgers_exact(viscosity, 1.0, BURGERS_DOMAIN.1))
}

fn burgers_disc<'a>(model: &'a Burgers, p: usize, cells: usize, moving: bool) -> Result<Discretization<'a>> {
    let (yl, yr) = burgers_boundary_values(model.viscosity);
    Discretization::new(
        model,
        cells,
        p,
        p,
        BoundaryKind::Dirichlet([yl, 0.0, 0.0]),
        BoundaryKind::Dirichlet([yr, 0.0, 0.0]),
        moving,
    )
}

fn burgers_start(disc: &Discretization) -> Result<(GeometryField, FieldState)> {
    let (yl, yr) = match (&disc.left, &disc.right) {
        (BoundaryKind::Dirichlet(l), BoundaryKind::Dirichlet(r)) => (l[0], r[0]),
        _ => return Err(Error::InvalidArgument("Burgers runs use Dirichlet data".into())),
    };
    let geometry = disc.uniform_geometry(BURGERS_DOMAIN)?;
    let initial = piecewise_constant(disc, &geometry, 0.0, [yl, 0.0, 0.0], [yr, 0.0, 0.0]);
    Ok((geometry, initial))
}

/// Errors of the Burgers solve over a schedule, every level started afresh. Split coarse
/// solutions lead the moving solve into poorer local minima here. The case name is
/// `burgers_moving` or `burgers_static`.
pub fn burgers_convergence(viscosity: f64, p: usize, schedule: &[usize], moving: bool, cfg: &SolverConfig) -> Result<Vec<ConvergenceRow>> {
    let model = burgers_model(viscosity)?;
    let exact = BurgersExact { viscosity, left: 1.0 };
    let case = if moving { "burgers_moving" } else { "burgers_static" };
    let length = BURGERS_DOMAIN.1 - BURGERS_DOMAIN.0;
    nested_levels(case, p, length, schedule, false, cfg, &exact, |n| burgers_disc(&model, p, n, moving), burgers_start)
}

/// Largest excursion of the sampled solution outside `[min(y_L, y_R), max(y_L, y_R)]`.
pub fn overshoot(samples: &[(f64, Vector)], left: f64, right: f64) -> f64 {
    let (lo, hi) = (left.min(right), left.max(right));
    samples
        .iter()
        .map(|(_, y)| (lo - y[0]).max(y[0] - hi).max(0.0))
        .fold(0.0, f64::max)
}

// ---------------------------------------------------------------------------------------
// Navier-Stokes shock

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShockCase {
    pub mach: f64,
    pub reynolds: f64,
    pub prandtl: f64,
    pub p: usize,
    pub cells: usize,
    /// Step of the RK4 reference integration.
    pub oracle_step: f64,
    pub moving: bool,
}

impl Default for ShockCase {
    fn default() -> Self {
        Self { mach: 3.5, reynolds: 25.0, prandtl: 0.72, p: 2, cells: 16, oracle_step: 1e-4, moving: true }
    }
}

/// Domain of the shock computation.
pub const SHOCK_DOMAIN: (f64, f64) = (-1.0, 1.0);

/// Solver settings for the moving shock runs: a geometry Laplacian and a floor on the
/// adaptive geometry weight keep the grid from collapsing cells against the outflow
/// boundary, where the objective has a lower but spurious minimum with a shifted
/// downstream state.
pub fn shock_config(base: &SolverConfig) -> SolverConfig {
    SolverConfig { lambda_laplacian: 1e-2, lambda_floor: 1e-3, ..base.clone() }
}

/// Largest shift tried when aligning the computed density with the oracle profile. The
/// shock position is only exponentially weakly fixed by the boundary data, so the
/// computed shock may settle anywhere inside the domain.
pub const SHOCK_ALIGNMENT_RANGE: f64 = 1.0;

#[derive(Debug, Clone)]
pub struct ShockOutcome {
    pub solve: SolveOutcome,
    pub oracle: ShockProfile,
    /// Shift applied to the oracle for the comparison.
    pub shift: f64,
    /// Shift-aligned `max |rho_h - rho_oracle|` over the samples.
    pub density_error: f64,
    /// `density_error` divided by the largest oracle density.
    pub relative_density_error: f64,
    /// `density_error` divided by the density jump across the shock.
    pub jump_relative_density_error: f64,
    /// Largest component of the Rankine-Hugoniot defect between the boundary traces.
    pub rankine_hugoniot: f64,
}

/// Largest component of the Rankine-Hugoniot defect between the prescribed upstream and
/// downstream states of `case`.
pub fn shock_states_defect(case: &ShockCase) -> Result<f64> {
    let model = NavierStokes1D::from_flow(case.mach, case.reynolds, case.prandtl);
    let (left, right) = shock_states(&model, case.mach);
    let d = model.rankine_hugoniot_defect(&left, &right)?;
    Ok(d.iter().fold(0.0, |a: f64, b| a.max(b.abs())))
}

/// Upstream `(1, M, 1)` and downstream normal-shock states in conservative variables.
pub fn shock_states(model: &NavierStokes1D, mach: f64) -> (Vector, Vector) {
    let up = Primitive::new(1.0, mach, 1.0);
    let down = crate::oracles::normal_shock_downstream(model, &up);
    (model.to_conservative(&up), model.to_conservative(&down))
}

/// Viscous shock on `[-1, 1]` started from the jump at the origin, compared to the RK4
/// profile after the best shift in `[-1/2, 1/2]`.
pub fn ns_shock(case: &ShockCase, cfg: &SolverConfig) -> Result<ShockOutcome> {
    let oracle = ns_shock_ode_oracle(case.mach, case.reynolds, case.prandtl, case.oracle_step)?;
    let model = oracle.model;
    let (left, right) = shock_states(&model, case.mach);
    let disc = Discretization::new(
        &model,
        case.cells,
        case.p,
        case.p,
        BoundaryKind::Dirichlet(left),
        BoundaryKind::Dirichlet(right),
        case.moving,
    )?;
    let geometry = disc.uniform_geometry(SHOCK_DOMAIN)?;
    let initial = piecewise_constant(&disc, &geometry, 0.0, left, right);
    let solve = run(&disc, &geometry, &initial, cfg, None)?;

    let densities: Vec<(f64, f64)> = solve.samples.iter().map(|(x, y)| (*x, y[0])).collect();
    let (shift, density_error) = oracle.align_density(&densities, SHOCK_ALIGNMENT_RANGE);
    let jump = (oracle.downstream.density - oracle.upstream.density).abs();
    let first = disc.state_at(&solve.state, 0, 0.0);
    let last = disc.state_at(&solve.state, case.cells - 1, 1.0);
    let d = model.rankine_hugoniot_defect(&first, &last)?;
    let rankine_hugoniot = d.iter().fold(0.0, |a: f64, b| a.max(b.abs()));
    let peak = oracle.upstream.density.max(oracle.downstream.density);
    Ok(ShockOutcome {
        solve,
        oracle,
        shift,
        density_error,
        relative_density_error: density_error / peak,
        jump_relative_density_error: density_error / jump,
        rankine_hugoniot,
    })
}
