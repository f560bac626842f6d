use std::ops::Range;

use super::{BoundaryKind, Discretization, FieldState};
use crate::error::{Error, Result};
use crate::linalg::SparseRows;
use crate::mesh::{GeometryField, InterfaceKind};
use crate::physics::{mat_vec, FluxModel, Matrix, Vector, ZERO, ZERO_MATRIX};

/// Row ranges of the four residual families.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RowFamilies {
    /// Conservation samples `sqrt(w) [d_xi F - u' f]`.
    pub conservation: Range<usize>,
    /// Constitutive samples `sqrt(w) [u' sigma - G(y) d_xi y]`; empty for inviscid models.
    pub constitutive: Range<usize>,
    /// Normal-flux jump per interface.
    pub flux_jump: Range<usize>,
    /// Averaged-tensor state jump per interface; empty for inviscid models.
    pub state_jump: Range<usize>,
}

/// Residual vector and, optionally, its Jacobian in the column order of `Discretization::layout`.
#[derive(Debug, Clone)]
pub struct ResidualSystem {
    pub residual: Vec<f64>,
    pub jacobian: Option<SparseRows>,
    pub families: RowFamilies,
}

#[derive(Debug, Clone, Copy)]
struct Sample {
    y: Vector,
    dy: Vector,
    s: Vector,
    ds: Vector,
    x: f64,
    du: f64,
}

/// `F_y = A - F~v_y` and `F_sigma = -F~v_sigma`.
fn flux_derivatives(model: &dyn FluxModel, y: &Vector, s: &Vector) -> Result<(Matrix, Matrix)> {
    let d = model.derivatives(y, s)?;
    let mut fy = ZERO_MATRIX;
    let mut fs = ZERO_MATRIX;
    for i in 0..3 {
        for j in 0..3 {
            fy[i][j] = d.convective[i][j] - d.viscous_state[i][j];
            fs[i][j] = -d.viscous_aux[i][j];
        }
    }
    Ok((fy, fs))
}

struct Trace {
    y: Vector,
    s: Vector,
}

fn trace(disc: &Discretization, state: &FieldState, cell: usize, end: usize) -> Trace {
    let m = disc.components();
    let mut t = Trace { y: ZERO, s: ZERO };
    for i in 0..m {
        t.y[i] = disc.state_ends().interpolate(end, state.state_component(cell, i)).0;
        if disc.aux_dim() > 0 {
            let d = disc.aux_dim();
            t.s[i] = disc.aux_ends().interpolate(end, &state.cell_aux(cell)[i * d..(i + 1) * d]).0;
        }
    }
    t
}

/// Pushes `sum_j (dy[i][j] phi_k)` and `sum_j (ds[i][j] psi_k)` entries of one row for `cell`.
#[allow(clippy::too_many_arguments)]
fn push_trace_entries(
    jac: &mut SparseRows,
    disc: &Discretization,
    cell: usize,
    end: usize,
    i: usize,
    dy: &Matrix,
    ds: &Matrix,
    sign: f64,
) {
    let layout = disc.layout();
    let m = disc.components();
    let nb = disc.state_basis().dim();
    let phi = disc.state_ends().values(end);
    for j in 0..m {
        for k in 0..nb {
            jac.push(layout.state_col(cell, j * nb + k), sign * dy[i][j] * phi[k]);
        }
    }
    let na = disc.aux_dim();
    if na > 0 {
        let psi = disc.aux_ends().values(end);
        for j in 0..m {
            for k in 0..na {
                jac.push(layout.aux_col(cell, j * na + k), sign * ds[i][j] * psi[k]);
            }
        }
    }
}

/// Boundary normal-flux defect and its trace derivatives.
fn boundary_flux(model: &dyn FluxModel, closure: &BoundaryKind, n: f64, y: &Vector, s: &Vector) -> Result<(Vector, Matrix, Matrix)> {
    model.check_admissible(y)?;
    let mut val = ZERO;
    let mut dy = ZERO_MATRIX;
    let mut ds = ZERO_MATRIX;
    let m = model.components();
    match closure {
        BoundaryKind::Dirichlet(yb) => {
            model.check_admissible(yb)?;
            let (fc, fv) = (model.convective_flux(y), model.viscous_flux(y, s));
            let (bc, bv) = (model.convective_flux(yb), model.viscous_flux(yb, s));
            let a = model.convective_jacobian(y);
            let vy = model.viscous_jacobian_state(y, s);
            let vs = model.viscous_jacobian_aux(y, s);
            let bs = model.viscous_jacobian_aux(yb, s);
            for i in 0..m {
                val[i] = n * (fc[i] - fv[i] - bc[i] + bv[i]);
                for j in 0..m {
                    dy[i][j] = n * (a[i][j] - vy[i][j]);
                    ds[i][j] = n * (bs[i][j] - vs[i][j]);
                }
            }
        }
        BoundaryKind::Outflow => {
            let fv = model.viscous_flux(y, s);
            let f0 = model.viscous_flux(y, &ZERO);
            let vy = model.viscous_jacobian_state(y, s);
            let vy0 = model.viscous_jacobian_state(y, &ZERO);
            let vs = model.viscous_jacobian_aux(y, s);
            for i in 0..m {
                val[i] = -n * (fv[i] - f0[i]);
                for j in 0..m {
                    dy[i][j] = -n * (vy[i][j] - vy0[i][j]);
                    ds[i][j] = -n * vs[i][j];
                }
            }
        }
    }
    Ok((val, dy, ds))
}

/// Residual of the reference-space least-squares formulation, with the Jacobian if requested.
///
/// Fails with [`Error::InvalidGeometry`] when `u'` is not positive at a quadrature point
/// and with [`Error::Inadmissible`] when the model rejects a sampled state.
pub fn assemble(disc: &Discretization, geometry: &GeometryField, state: &FieldState, with_jacobian: bool) -> Result<ResidualSystem> {
    disc.check_inputs(geometry, state)?;
    let model = disc.model;
    let m = disc.components();
    let viscous = model.is_viscous();
    let layout = disc.layout();
    let quad = disc.quadrature();
    let nq = quad.len();
    let cells = disc.cell_count();
    let nb = disc.state_basis().dim();
    let na = disc.aux_dim();
    let pu = disc.geometry_degree();

    let mut samples = Vec::with_capacity(cells * nq);
    for c in 0..cells {
        let nodes = geometry.cell_nodes(c);
        for q in 0..nq {
            let (x, du) = disc.geometry_tab().interpolate(q, nodes);
            if !(du > 0.0) {
                return Err(Error::InvalidGeometry { cell: c, min_jacobian: du });
            }
            let mut smp = Sample { y: ZERO, dy: ZERO, s: ZERO, ds: ZERO, x, du };
            for i in 0..m {
                let (v, d) = disc.state_tab().interpolate(q, state.state_component(c, i));
                smp.y[i] = v;
                smp.dy[i] = d;
                if na > 0 {
                    let (v, d) = disc.aux_tab().interpolate(q, &state.cell_aux(c)[i * na..(i + 1) * na]);
                    smp.s[i] = v;
                    smp.ds[i] = d;
                }
            }
            samples.push(smp);
        }
    }

    let families_per_cell = if viscous { 2 } else { 1 };
    let interfaces = disc.mesh.interface_count();
    let nrows = families_per_cell * (cells * nq * m + interfaces * m);
    let mut r = Vec::with_capacity(nrows);
    let mut jac = with_jacobian.then(|| SparseRows::new(layout.len()));
    let geometry_cols: Vec<Vec<Option<usize>>> = (0..cells)
        .map(|c| (0..=pu).map(|l| layout.geometry_col(geometry.node_index(c, l))).collect())
        .collect();

    // conservation
    let start = r.len();
    for c in 0..cells {
        for q in 0..nq {
            let smp = &samples[c * nq + q];
            let w = quad.weights[q].sqrt();
            let (fy, fs) = flux_derivatives(model, &smp.y, &smp.s)?;
            let a = mat_vec(&fy, &smp.dy);
            let b = mat_vec(&fs, &smp.ds);
            let f = model.source(smp.x);
            for i in 0..m {
                r.push(w * (a[i] + b[i] - smp.du * f[i]));
            }
            if let Some(jac) = jac.as_mut() {
                let hc = model.convective_hessian(&smp.y, &smp.dy);
                let (vy, vs) = model.viscous_second(&smp.y, &smp.s, &smp.dy, &smp.ds);
                let fp = model.source_derivative(smp.x);
                let (phi, dphi) = (disc.state_tab().values(q), disc.state_tab().derivs(q));
                let (psi, dpsi) = (disc.aux_tab().values(q), disc.aux_tab().derivs(q));
                let (g, dg) = (disc.geometry_tab().values(q), disc.geometry_tab().derivs(q));
                for i in 0..m {
                    for j in 0..m {
                        for k in 0..nb {
                            let v = (hc[i][j] - vy[i][j]) * phi[k] + fy[i][j] * dphi[k];
                            jac.push(layout.state_col(c, j * nb + k), w * v);
                        }
                    }
                    for j in 0..m {
                        for k in 0..na {
                            let v = -vs[i][j] * psi[k] + fs[i][j] * dpsi[k];
                            jac.push(layout.aux_col(c, j * na + k), w * v);
                        }
                    }
                    for (l, col) in geometry_cols[c].iter().enumerate() {
                        if let Some(col) = col {
                            jac.push(*col, -w * (dg[l] * f[i] + smp.du * fp[i] * g[l]));
                        }
                    }
                    jac.finish_row();
                }
            }
        }
    }
    let conservation = start..r.len();

    // constitutive
    let start = r.len();
    if viscous {
        for c in 0..cells {
            for q in 0..nq {
                let smp = &samples[c * nq + q];
                let w = quad.weights[q].sqrt();
                let gm = model.constitutive_matrix(&smp.y);
                let gy = mat_vec(&gm, &smp.dy);
                for i in 0..m {
                    r.push(w * (smp.du * smp.s[i] - gy[i]));
                }
                if let Some(jac) = jac.as_mut() {
                    let gd = model.constitutive_state_derivative(&smp.y, &smp.dy);
                    let (phi, dphi) = (disc.state_tab().values(q), disc.state_tab().derivs(q));
                    let psi = disc.aux_tab().values(q);
                    let dg = disc.geometry_tab().derivs(q);
                    for i in 0..m {
                        for j in 0..m {
                            for k in 0..nb {
                                let v = gd[i][j] * phi[k] + gm[i][j] * dphi[k];
                                jac.push(layout.state_col(c, j * nb + k), -w * v);
                            }
                        }
                        for k in 0..na {
                            jac.push(layout.aux_col(c, i * na + k), w * smp.du * psi[k]);
                        }
                        for (l, col) in geometry_cols[c].iter().enumerate() {
                            if let Some(col) = col {
                                jac.push(*col, w * smp.s[i] * dg[l]);
                            }
                        }
                        jac.finish_row();
                    }
                }
            }
        }
    }
    let constitutive = start..r.len();

    // normal-flux jumps
    let start = r.len();
    for iface in disc.mesh.interfaces() {
        match iface.kind {
            InterfaceKind::Interior => {
                let (cl, cr) = (iface.left.unwrap(), iface.right.unwrap());
                let tl = trace(disc, state, cl, 1);
                let tr = trace(disc, state, cr, 0);
                let fl = model.flux(&tl.y, &tl.s)?;
                let fr = model.flux(&tr.y, &tr.s)?;
                for i in 0..m {
                    r.push(fl[i] - fr[i]);
                }
                if let Some(jac) = jac.as_mut() {
                    let (lyy, lys) = flux_derivatives(model, &tl.y, &tl.s)?;
                    let (ryy, rys) = flux_derivatives(model, &tr.y, &tr.s)?;
                    for i in 0..m {
                        push_trace_entries(jac, disc, cl, 1, i, &lyy, &lys, 1.0);
                        push_trace_entries(jac, disc, cr, 0, i, &ryy, &rys, -1.0);
                        jac.finish_row();
                    }
                }
            }
            InterfaceKind::LeftBoundary | InterfaceKind::RightBoundary => {
                let (cell, end, closure) = boundary_side(disc, iface.kind);
                let n = iface.normal_of(cell);
                let t = trace(disc, state, cell, end);
                let (val, dy, ds) = boundary_flux(model, closure, n, &t.y, &t.s)?;
                r.extend_from_slice(&val[..m]);
                if let Some(jac) = jac.as_mut() {
                    for i in 0..m {
                        push_trace_entries(jac, disc, cell, end, i, &dy, &ds, 1.0);
                        jac.finish_row();
                    }
                }
            }
        }
    }
    let flux_jump = start..r.len();

    // state jumps weighted by the averaged constitutive tensor
    let start = r.len();
    if viscous {
        for iface in disc.mesh.interfaces() {
            match iface.kind {
                InterfaceKind::Interior => {
                    let (cl, cr) = (iface.left.unwrap(), iface.right.unwrap());
                    let tl = trace(disc, state, cl, 1);
                    let tr = trace(disc, state, cr, 0);
                    let mut d = ZERO;
                    for i in 0..m {
                        d[i] = tl.y[i] - tr.y[i];
                    }
                    let gl = model.constitutive_matrix(&tl.y);
                    let gr = model.constitutive_matrix(&tr.y);
                    let mut avg = ZERO_MATRIX;
                    for i in 0..3 {
                        for j in 0..3 {
                            avg[i][j] = 0.5 * (gl[i][j] + gr[i][j]);
                        }
                    }
                    let v = mat_vec(&avg, &d);
                    r.extend_from_slice(&v[..m]);
                    if let Some(jac) = jac.as_mut() {
                        let dl = model.constitutive_state_derivative(&tl.y, &d);
                        let dr = model.constitutive_state_derivative(&tr.y, &d);
                        let mut jl = ZERO_MATRIX;
                        let mut jr = ZERO_MATRIX;
                        for i in 0..3 {
                            for j in 0..3 {
                                jl[i][j] = 0.5 * dl[i][j] + avg[i][j];
                                jr[i][j] = 0.5 * dr[i][j] - avg[i][j];
                            }
                        }
                        for i in 0..m {
                            push_trace_entries(jac, disc, cl, 1, i, &jl, &ZERO_MATRIX, 1.0);
                            push_trace_entries(jac, disc, cr, 0, i, &jr, &ZERO_MATRIX, 1.0);
                            jac.finish_row();
                        }
                    }
                }
                InterfaceKind::LeftBoundary | InterfaceKind::RightBoundary => {
                    let (cell, end, closure) = boundary_side(disc, iface.kind);
                    let n = iface.normal_of(cell);
                    let t = trace(disc, state, cell, end);
                    match closure {
                        BoundaryKind::Dirichlet(yb) => {
                            let gb = model.constitutive_matrix(yb);
                            let mut d = ZERO;
                            for i in 0..m {
                                d[i] = t.y[i] - yb[i];
                            }
                            let v = mat_vec(&gb, &d);
                            for i in 0..m {
                                r.push(n * v[i]);
                            }
                            if let Some(jac) = jac.as_mut() {
                                let mut jb = ZERO_MATRIX;
                                for i in 0..3 {
                                    for j in 0..3 {
                                        jb[i][j] = n * gb[i][j];
                                    }
                                }
                                for i in 0..m {
                                    push_trace_entries(jac, disc, cell, end, i, &jb, &ZERO_MATRIX, 1.0);
                                    jac.finish_row();
                                }
                            }
                        }
                        BoundaryKind::Outflow => {
                            // the boundary state is the interior trace: the row vanishes identically
                            for _ in 0..m {
                                r.extend([0.0]);
                                if let Some(jac) = jac.as_mut() {
                                    jac.finish_row();
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    let state_jump = start..r.len();
    debug_assert_eq!(r.len(), nrows);

    Ok(ResidualSystem {
        residual: r,
        jacobian: jac,
        families: RowFamilies { conservation, constitutive, flux_jump, state_jump },
    })
}

fn boundary_side<'d>(disc: &'d Discretization, kind: InterfaceKind) -> (usize, usize, &'d BoundaryKind) {
    match kind {
        InterfaceKind::LeftBoundary => (0, 0, &disc.left),
        _ => (disc.cell_count() - 1, 1, &disc.right),
    }
}

/// `1/2 r^T r`.
pub fn objective(rs: &ResidualSystem) -> f64 {
    0.5 * rs.residual.iter().map(|v| v * v).sum::<f64>()
}

/// `J^T r`, the gradient of the objective.
pub fn gradient(rs: &ResidualSystem) -> Result<Vec<f64>> {
    let jac = rs
        .jacobian
        .as_ref()
        .ok_or_else(|| Error::InvalidArgument("residual system was assembled without a Jacobian".into()))?;
    Ok(jac.transpose_mul_vec(&rs.residual))
}

/// Largest discrepancy between the assembled Jacobian and central differences of the residual,
/// relative to `max(1, |J_ij|)`. Perturbations go through the same unknown-to-field update
/// (including the boundary projection) as the solver.
pub fn jacobian_check(disc: &Discretization, geometry: &GeometryField, state: &FieldState, step: f64) -> Result<f64> {
    let rs = assemble(disc, geometry, state, true)?;
    let dense = rs.jacobian.as_ref().unwrap().to_dense();
    let layout = disc.layout();
    let z = layout.gather(state, geometry);
    let mut worst: f64 = 0.0;
    let eval = |zz: &[f64]| -> Result<Vec<f64>> {
        let mut s = state.clone();
        let mut g = geometry.clone();
        layout.scatter(zz, &mut s, &mut g);
        Ok(assemble(disc, &g, &s, false)?.residual)
    };
    for j in 0..z.len() {
        let h = step * z[j].abs().max(1.0);
        let mut zp = z.clone();
        let mut zm = z.clone();
        zp[j] += h;
        zm[j] -= h;
        let rp = eval(&zp)?;
        let rm = eval(&zm)?;
        for i in 0..rp.len() {
            let fd = (rp[i] - rm[i]) / (2.0 * h);
            let e = (dense[i][j] - fd).abs() / dense[i][j].abs().max(1.0);
            worst = worst.max(e);
        }
    }
    Ok(worst)
}
