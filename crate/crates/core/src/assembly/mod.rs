//! Quadrature-sampled least-squares residual of the reference-space formulation and its
//! exact Jacobian with respect to state, auxiliary and geometry unknowns.
//!
//! Every residual entry is a sample of the strong form: cell samples carry the square
//! root of their quadrature weight, interface samples are unweighted. Half the squared
//! norm of the vector is therefore the discrete L2 norm of the strong residual and the
//! discrete weak form is the normal equations `J^T r = 0`.

mod dls;
mod layout;
mod residual;

pub use dls::{assemble_dls, LinearSystem};
pub use layout::{ColumnKind, DofLayout};
pub use residual::{assemble, gradient, jacobian_check, objective, ResidualSystem, RowFamilies};

use crate::approximation::{gauss_rule, PolyBasis, QuadratureRule, Tabulation};
use crate::error::{Error, Result};
use crate::mesh::{GeometryField, ReferenceMesh};
use crate::physics::{FluxModel, Vector, ZERO};

/// Closure applied at a domain boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryKind {
    /// Prescribed state: the convective flux and the state trace are taken from it.
    Dirichlet(Vector),
    /// Interior state with zero auxiliary flux.
    Outflow,
}

/// Broken polynomial coefficients of the state and auxiliary fields.
///
/// Coefficients are stored cell-major, then component-major, then by basis index.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldState {
    components: usize,
    cell_count: usize,
    state_dim: usize,
    aux_dim: usize,
    state: Vec<f64>,
    aux: Vec<f64>,
}

impl FieldState {
    /// All-zero field. `aux_dim` is zero for inviscid models.
    pub fn zeros(components: usize, cell_count: usize, state_dim: usize, aux_dim: usize) -> Self {
        Self {
            components,
            cell_count,
            state_dim,
            aux_dim,
            state: vec![0.0; cell_count * components * state_dim],
            aux: vec![0.0; cell_count * components * aux_dim],
        }
    }

    pub fn components(&self) -> usize {
        self.components
    }

    pub fn cell_count(&self) -> usize {
        self.cell_count
    }

    pub fn state_dim(&self) -> usize {
        self.state_dim
    }

    pub fn aux_dim(&self) -> usize {
        self.aux_dim
    }

    pub fn state_coeffs(&self) -> &[f64] {
        &self.state
    }

    pub fn aux_coeffs(&self) -> &[f64] {
        &self.aux
    }

    pub fn cell_state(&self, cell: usize) -> &[f64] {
        let n = self.components * self.state_dim;
        &self.state[cell * n..(cell + 1) * n]
    }

    pub fn cell_state_mut(&mut self, cell: usize) -> &mut [f64] {
        let n = self.components * self.state_dim;
        &mut self.state[cell * n..(cell + 1) * n]
    }

    pub fn cell_aux(&self, cell: usize) -> &[f64] {
        let n = self.components * self.aux_dim;
        &self.aux[cell * n..(cell + 1) * n]
    }

    pub fn cell_aux_mut(&mut self, cell: usize) -> &mut [f64] {
        let n = self.components * self.aux_dim;
        &mut self.aux[cell * n..(cell + 1) * n]
    }

    /// Coefficients of one component of the state in one cell.
    pub fn state_component(&self, cell: usize, comp: usize) -> &[f64] {
        let s = &self.cell_state(cell)[comp * self.state_dim..];
        &s[..self.state_dim]
    }

    pub fn state_component_mut(&mut self, cell: usize, comp: usize) -> &mut [f64] {
        let d = self.state_dim;
        &mut self.cell_state_mut(cell)[comp * d..(comp + 1) * d]
    }
}

/// Polynomial degrees, quadrature, boundary closures and precomputed tabulations
/// for one flux model on one reference mesh.
#[derive(Debug, Clone)]
pub struct Discretization<'a> {
    pub model: &'a dyn FluxModel,
    pub mesh: ReferenceMesh,
    pub left: BoundaryKind,
    pub right: BoundaryKind,
    pub moving: bool,
    state_basis: PolyBasis,
    aux_basis: PolyBasis,
    geometry_degree: usize,
    quad: QuadratureRule,
    state_tab: Tabulation,
    aux_tab: Tabulation,
    geometry_tab: Tabulation,
    state_ends: Tabulation,
    aux_ends: Tabulation,
}

impl<'a> Discretization<'a> {
    /// Equal state and auxiliary degree `p`, geometry degree `geometry_degree`, default quadrature.
    pub fn new(
        model: &'a dyn FluxModel,
        cell_count: usize,
        p: usize,
        geometry_degree: usize,
        left: BoundaryKind,
        right: BoundaryKind,
        moving: bool,
    ) -> Result<Self> {
        Self::with_degrees(model, cell_count, p, p, geometry_degree, None, left, right, moving)
    }

    /// Full control over degrees and quadrature points. The default point count is
    /// `max(p_y, p_sigma) + p_u + 2`.
    #[allow(clippy::too_many_arguments)]
    pub fn with_degrees(
        model: &'a dyn FluxModel,
        cell_count: usize,
        state_degree: usize,
        aux_degree: usize,
        geometry_degree: usize,
        quad_points: Option<usize>,
        left: BoundaryKind,
        right: BoundaryKind,
        moving: bool,
    ) -> Result<Self> {
        if geometry_degree == 0 {
            return Err(Error::InvalidArgument("geometry degree must be at least 1".into()));
        }
        let mesh = ReferenceMesh::new(cell_count)?;
        let n = quad_points.unwrap_or(state_degree.max(aux_degree) + geometry_degree + 2);
        let quad = gauss_rule(n)?;
        let state_basis = PolyBasis::modal(state_degree);
        let aux_basis = PolyBasis::modal(aux_degree);
        let geometry_basis = PolyBasis::nodal(geometry_degree);
        Ok(Self {
            model,
            mesh,
            left,
            right,
            moving,
            state_tab: state_basis.tabulate(&quad.points),
            aux_tab: aux_basis.tabulate(&quad.points),
            geometry_tab: geometry_basis.tabulate(&quad.points),
            state_ends: state_basis.tabulate(&[0.0, 1.0]),
            aux_ends: aux_basis.tabulate(&[0.0, 1.0]),
            state_basis,
            aux_basis,
            geometry_degree,
            quad,
        })
    }

    pub fn cell_count(&self) -> usize {
        self.mesh.cell_count()
    }

    pub fn components(&self) -> usize {
        self.model.components()
    }

    pub fn state_degree(&self) -> usize {
        self.state_basis.degree()
    }

    pub fn aux_degree(&self) -> usize {
        self.aux_basis.degree()
    }

    pub fn geometry_degree(&self) -> usize {
        self.geometry_degree
    }

    pub fn quadrature(&self) -> &QuadratureRule {
        &self.quad
    }

    pub fn state_basis(&self) -> &PolyBasis {
        &self.state_basis
    }

    /// Number of auxiliary coefficients per component and cell (zero for inviscid models).
    pub fn aux_dim(&self) -> usize {
        if self.model.is_viscous() {
            self.aux_basis.dim()
        } else {
            0
        }
    }

    pub fn zero_state(&self) -> FieldState {
        FieldState::zeros(self.components(), self.cell_count(), self.state_basis.dim(), self.aux_dim())
    }

    pub fn layout(&self) -> DofLayout {
        let m = self.components();
        DofLayout::new(
            self.cell_count(),
            m * self.state_basis.dim(),
            m * self.aux_dim(),
            self.geometry_degree,
            self.moving,
        )
    }

    /// Uniform straight-sided geometry of the right degree on `bounds`.
    pub fn uniform_geometry(&self, bounds: (f64, f64)) -> Result<GeometryField> {
        GeometryField::uniform(self.cell_count(), self.geometry_degree, bounds)
    }

    /// State at reference point `xi` of `cell`.
    pub fn state_at(&self, state: &FieldState, cell: usize, xi: f64) -> Vector {
        let mut v = vec![0.0; self.state_basis.dim()];
        let mut d = vec![0.0; self.state_basis.dim()];
        self.state_basis.eval_into(xi, &mut v, &mut d);
        let mut y = ZERO;
        for (i, yi) in y.iter_mut().enumerate().take(self.components()) {
            *yi = state.state_component(cell, i).iter().zip(&v).map(|(a, b)| a * b).sum();
        }
        y
    }

    /// Cellwise reference-space L2 projection of `f(cell, xi)` onto the state basis,
    /// with zero auxiliary field.
    pub fn project_state(&self, f: impl Fn(usize, f64) -> Vector) -> FieldState {
        let mut s = self.zero_state();
        let dim = self.state_basis.dim();
        for c in 0..self.cell_count() {
            for (q, (&xi, &w)) in self.quad.points.iter().zip(&self.quad.weights).enumerate() {
                let y = f(c, xi);
                let phi = self.state_tab.values(q);
                for i in 0..self.components() {
                    let coeffs = s.state_component_mut(c, i);
                    for k in 0..dim {
                        coeffs[k] += w * phi[k] * y[i];
                    }
                }
            }
        }
        s
    }

    /// Checks that the degrees of a geometry and a state match this discretization.
    fn check_inputs(&self, geometry: &GeometryField, state: &FieldState) -> Result<()> {
        if geometry.degree() != self.geometry_degree || geometry.cell_count() != self.cell_count() {
            return Err(Error::InvalidArgument("geometry does not match the discretization".into()));
        }
        if state.cell_count() != self.cell_count()
            || state.components() != self.components()
            || state.state_dim() != self.state_basis.dim()
            || state.aux_dim() != self.aux_dim()
        {
            return Err(Error::InvalidArgument("field state does not match the discretization".into()));
        }
        Ok(())
    }

    pub(crate) fn state_tab(&self) -> &Tabulation {
        &self.state_tab
    }

    pub(crate) fn aux_tab(&self) -> &Tabulation {
        &self.aux_tab
    }

    pub(crate) fn geometry_tab(&self) -> &Tabulation {
        &self.geometry_tab
    }

    pub(crate) fn state_ends(&self) -> &Tabulation {
        &self.state_ends
    }

    pub(crate) fn aux_ends(&self) -> &Tabulation {
        &self.aux_ends
    }
}

#[cfg(test)]
mod tests;
