use crate::mesh::GeometryField;

use super::FieldState;

/// Ordering of the unknowns `(y, sigma, u)` in the global vector.
///
/// Each cell owns a contiguous block `[y | sigma | interior geometry nodes]`; with
/// moving geometry the shared vertex between two cells sits between their blocks,
/// so every residual row touches a narrow window of columns. Boundary vertices are
/// fixed by the geometric boundary condition and have no column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DofLayout {
    cell_count: usize,
    state_block: usize,
    aux_block: usize,
    geometry_degree: usize,
    moving: bool,
}

impl DofLayout {
    pub fn new(cell_count: usize, state_block: usize, aux_block: usize, geometry_degree: usize, moving: bool) -> Self {
        Self { cell_count, state_block, aux_block, geometry_degree, moving }
    }

    pub fn is_moving(&self) -> bool {
        self.moving
    }

    fn interior_nodes(&self) -> usize {
        if self.moving {
            self.geometry_degree - 1
        } else {
            0
        }
    }

    /// Columns owned by one cell, excluding the shared vertex.
    pub fn cell_block(&self) -> usize {
        self.state_block + self.aux_block + self.interior_nodes()
    }

    fn stride(&self) -> usize {
        self.cell_block() + usize::from(self.moving)
    }

    pub fn len(&self) -> usize {
        let n = self.cell_count;
        n * self.cell_block() + if self.moving { n - 1 } else { 0 }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn cell_start(&self, cell: usize) -> usize {
        cell * self.stride()
    }

    /// Column of state coefficient `local` (component-major) of `cell`.
    pub fn state_col(&self, cell: usize, local: usize) -> usize {
        self.cell_start(cell) + local
    }

    pub fn aux_col(&self, cell: usize, local: usize) -> usize {
        self.cell_start(cell) + self.state_block + local
    }

    /// Column of global geometry node `node`, or `None` when the node is not an unknown.
    pub fn geometry_col(&self, node: usize) -> Option<usize> {
        if !self.moving {
            return None;
        }
        let p = self.geometry_degree;
        let last = self.cell_count * p;
        if node == 0 || node >= last {
            return None;
        }
        let (cell, local) = (node / p, node % p);
        if local == 0 {
            Some(self.cell_start(cell) - 1)
        } else {
            Some(self.cell_start(cell) + self.state_block + self.aux_block + local - 1)
        }
    }

    /// Indices into `columns()` of every geometry unknown, paired with its node index.
    pub fn geometry_columns(&self) -> Vec<(usize, usize)> {
        let last = self.cell_count * self.geometry_degree;
        (1..last).filter_map(|n| self.geometry_col(n).map(|c| (n, c))).collect()
    }

    pub fn gather(&self, state: &FieldState, geometry: &GeometryField) -> Vec<f64> {
        let mut z = vec![0.0; self.len()];
        for c in 0..self.cell_count {
            for (l, &v) in state.cell_state(c).iter().enumerate() {
                z[self.state_col(c, l)] = v;
            }
            for (l, &v) in state.cell_aux(c).iter().enumerate() {
                z[self.aux_col(c, l)] = v;
            }
        }
        for (n, col) in self.geometry_columns() {
            z[col] = geometry.nodes()[n];
        }
        z
    }

    pub fn scatter(&self, z: &[f64], state: &mut FieldState, geometry: &mut GeometryField) {
        for c in 0..self.cell_count {
            for (l, v) in state.cell_state_mut(c).iter_mut().enumerate() {
                *v = z[self.state_col(c, l)];
            }
            for (l, v) in state.cell_aux_mut(c).iter_mut().enumerate() {
                *v = z[self.aux_col(c, l)];
            }
        }
        let cols = self.geometry_columns();
        let nodes = geometry.nodes_mut();
        for (n, col) in cols {
            nodes[n] = z[col];
        }
        geometry.project_boundary_in_place();
    }

    /// Role of each column, for regularization.
    pub fn column_kinds(&self) -> Vec<ColumnKind> {
        let mut kinds = vec![ColumnKind::State; self.len()];
        for c in 0..self.cell_count {
            for l in 0..self.aux_block {
                kinds[self.aux_col(c, l)] = ColumnKind::Aux;
            }
        }
        for (n, col) in self.geometry_columns() {
            kinds[col] = ColumnKind::Geometry(n);
        }
        kinds
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColumnKind {
    State,
    Aux,
    /// Geometry unknown holding the given global node.
    Geometry(usize),
}
