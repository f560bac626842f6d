//! Reference partition of the domain and the continuous high-order mapping
//! from reference cells to physical space.

use std::fmt::Write as _;

use crate::approximation::{PolyBasis, QuadratureRule};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InterfaceKind {
    LeftBoundary,
    Interior,
    RightBoundary,
}

/// A cell boundary point. `left` is the cell on the negative side, `right` the one on the positive side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Interface {
    pub index: usize,
    pub kind: InterfaceKind,
    pub left: Option<usize>,
    pub right: Option<usize>,
}

impl Interface {
    /// Outward normal of `cell` at this interface (`+1` on its right end, `-1` on its left end).
    pub fn normal_of(&self, cell: usize) -> f64 {
        if self.left == Some(cell) {
            1.0
        } else {
            -1.0
        }
    }
}

/// Partition of the reference domain into `cell_count` copies of `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReferenceMesh {
    cell_count: usize,
}

impl ReferenceMesh {
    pub fn new(cell_count: usize) -> Result<Self> {
        if cell_count == 0 {
            return Err(Error::InvalidArgument("mesh needs at least one cell".into()));
        }
        Ok(Self { cell_count })
    }

    pub fn cell_count(&self) -> usize {
        self.cell_count
    }

    pub fn interface_count(&self) -> usize {
        self.cell_count + 1
    }

    /// Interfaces ordered left to right: inflow boundary, interior interfaces, right boundary.
    pub fn interfaces(&self) -> impl Iterator<Item = Interface> + '_ {
        let n = self.cell_count;
        (0..=n).map(move |i| {
            let kind = if i == 0 {
                InterfaceKind::LeftBoundary
            } else if i == n {
                InterfaceKind::RightBoundary
            } else {
                InterfaceKind::Interior
            };
            Interface {
                index: i,
                kind,
                left: (i > 0).then(|| i - 1),
                right: (i < n).then_some(i),
            }
        })
    }
}

/// Minimum mapping jacobian over the sampled points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidityReport {
    pub min_jacobian: f64,
    pub cell: usize,
}

/// Continuous piecewise polynomial map `u` from the reference mesh to physical space,
/// in a nodal Gauss-Lobatto basis; adjacent cells share their vertex node.
#[derive(Debug, Clone, PartialEq)]
pub struct GeometryField {
    degree: usize,
    nodes: Vec<f64>,
    bounds: (f64, f64),
    basis: PolyBasis,
}

impl GeometryField {
    pub fn new(degree: usize, nodes: Vec<f64>, bounds: (f64, f64)) -> Result<Self> {
        if degree == 0 {
            return Err(Error::InvalidArgument("geometry degree must be at least 1".into()));
        }
        if nodes.len() < degree + 1 || !(nodes.len() - 1).is_multiple_of(degree) {
            return Err(Error::InvalidArgument(format!(
                "{} geometry nodes do not form cells of degree {degree}",
                nodes.len()
            )));
        }
        Ok(Self { degree, nodes, bounds, basis: PolyBasis::nodal(degree) })
    }

    /// Straight-sided cells with the given vertex positions.
    pub fn from_vertices(vertices: &[f64], degree: usize) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::InvalidArgument("need at least two vertices".into()));
        }
        let basis = PolyBasis::nodal(degree.max(1));
        let mut nodes = Vec::with_capacity((vertices.len() - 1) * degree + 1);
        for w in vertices.windows(2) {
            for &xi in &basis.nodes()[..degree] {
                nodes.push(w[0] + (w[1] - w[0]) * xi);
            }
        }
        nodes.push(*vertices.last().unwrap());
        let bounds = (vertices[0], *vertices.last().unwrap());
        Self::new(degree, nodes, bounds)
    }

    pub fn uniform(cell_count: usize, degree: usize, bounds: (f64, f64)) -> Result<Self> {
        if cell_count == 0 {
            return Err(Error::InvalidArgument("mesh needs at least one cell".into()));
        }
        let h = (bounds.1 - bounds.0) / cell_count as f64;
        let mut v: Vec<f64> = (0..=cell_count).map(|i| bounds.0 + h * i as f64).collect();
        v[cell_count] = bounds.1;
        Self::from_vertices(&v, degree)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn basis(&self) -> &PolyBasis {
        &self.basis
    }

    pub fn bounds(&self) -> (f64, f64) {
        self.bounds
    }

    pub fn cell_count(&self) -> usize {
        (self.nodes.len() - 1) / self.degree
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn nodes_mut(&mut self) -> &mut [f64] {
        &mut self.nodes
    }

    /// Global node index of local node `local` of `cell`.
    pub fn node_index(&self, cell: usize, local: usize) -> usize {
        cell * self.degree + local
    }

    pub fn cell_nodes(&self, cell: usize) -> &[f64] {
        let s = cell * self.degree;
        &self.nodes[s..=s + self.degree]
    }

    pub fn vertices(&self) -> Vec<f64> {
        self.nodes.iter().step_by(self.degree).copied().collect()
    }

    pub fn mean_cell_length(&self) -> f64 {
        (self.bounds.1 - self.bounds.0).abs() / self.cell_count() as f64
    }

    /// Physical coordinate and `u'(xi)` at a reference point of `cell`.
    pub fn evaluate_mapping(&self, cell: usize, xi: f64) -> (f64, f64) {
        let n = self.degree + 1;
        let mut v = [0.0; 32];
        let mut d = [0.0; 32];
        self.basis.eval_into(xi, &mut v[..n], &mut d[..n]);
        let dofs = self.cell_nodes(cell);
        let x = dofs.iter().zip(&v[..n]).map(|(a, b)| a * b).sum();
        let du = dofs.iter().zip(&d[..n]).map(|(a, b)| a * b).sum();
        (x, du)
    }

    /// Minimum of `u'` over the quadrature points and the endpoints of every cell.
    pub fn check_validity(&self, quad: &QuadratureRule) -> ValidityReport {
        let mut report = ValidityReport { min_jacobian: f64::INFINITY, cell: 0 };
        for c in 0..self.cell_count() {
            let samples = quad.points.iter().copied().chain([0.0, 1.0]);
            for xi in samples {
                let (_, du) = self.evaluate_mapping(c, xi);
                if du < report.min_jacobian || du.is_nan() {
                    report = ValidityReport { min_jacobian: du, cell: c };
                }
            }
        }
        report
    }

    /// Validity threshold used by the solver: `1e-10` times the mean cell length.
    pub fn validity_tolerance(&self) -> f64 {
        1e-10 * self.mean_cell_length()
    }

    /// Pin the two boundary nodes to the domain bounds; all other nodes are unchanged.
    pub fn project_boundary(&self) -> GeometryField {
        let mut g = self.clone();
        g.project_boundary_in_place();
        g
    }

    pub fn project_boundary_in_place(&mut self) {
        let last = self.nodes.len() - 1;
        self.nodes[0] = self.bounds.0;
        self.nodes[last] = self.bounds.1;
    }

    /// Derivative of the boundary projection applied to a node perturbation.
    pub fn project_boundary_derivative(&self, delta: &mut [f64]) {
        let last = delta.len() - 1;
        delta[0] = 0.0;
        delta[last] = 0.0;
    }

    /// `int_0^1 u'(xi) dxi` by quadrature: the physical length of the cell.
    pub fn cell_volume(&self, cell: usize, quad: &QuadratureRule) -> f64 {
        quad.integrate(|xi| self.evaluate_mapping(cell, xi).1)
    }

    /// CSV with one row per node: `cell_id,local_index,x`. Shared vertices are listed once, under the cell to their right
    /// (the last vertex under the last cell).
    pub fn to_csv(&self) -> String {
        let mut s = String::from("cell_id,local_index,x\n");
        let n = self.cell_count();
        for c in 0..n {
            let locals = if c + 1 == n { 0..=self.degree } else { 0..=self.degree - 1 };
            for l in locals {
                let _ = writeln!(s, "{},{},{:.16e}", c, l, self.nodes[self.node_index(c, l)]);
            }
        }
        s
    }

    pub fn from_csv(text: &str, bounds: (f64, f64)) -> Result<Self> {
        let mut rows: Vec<(usize, usize, f64)> = Vec::new();
        for (ln, line) in text.lines().enumerate().skip(1) {
            if line.trim().is_empty() {
                continue;
            }
            let f: Vec<&str> = line.split(',').collect();
            let bad = || Error::InvalidArgument(format!("mesh csv line {}: {line:?}", ln + 1));
            if f.len() != 3 {
                return Err(bad());
            }
            let c = f[0].trim().parse().map_err(|_| bad())?;
            let l = f[1].trim().parse().map_err(|_| bad())?;
            let x = f[2].trim().parse().map_err(|_| bad())?;
            rows.push((c, l, x));
        }
        let cells = rows.iter().map(|r| r.0).max().map(|c| c + 1).unwrap_or(0);
        let degree = rows.iter().filter(|r| r.0 + 1 == cells).map(|r| r.1).max().unwrap_or(0);
        if cells == 0 || degree == 0 || rows.len() != cells * degree + 1 {
            return Err(Error::InvalidArgument("mesh csv is incomplete".into()));
        }
        let mut nodes = vec![f64::NAN; cells * degree + 1];
        for (c, l, x) in rows {
            nodes[c * degree + l] = x;
        }
        if nodes.iter().any(|x| x.is_nan()) {
            return Err(Error::InvalidArgument("mesh csv has duplicate or missing nodes".into()));
        }
        Self::new(degree, nodes, bounds)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::approximation::gauss_rule;
    use approx::assert_relative_eq;

    #[test]
    fn interfaces_layout() {
        let m = ReferenceMesh::new(3).unwrap();
        let f: Vec<_> = m.interfaces().collect();
        assert_eq!(f.len(), 4);
        assert_eq!(f[0].kind, InterfaceKind::LeftBoundary);
        assert_eq!(f[0].left, None);
        assert_eq!(f[0].right, Some(0));
        assert_eq!(f.iter().filter(|i| i.kind == InterfaceKind::Interior).count(), 2);
        assert!(f[1..3].iter().all(|i| i.left.is_some() && i.right.is_some()));
        assert_eq!(f[3].right, None);
        assert_eq!(f[1].normal_of(0), 1.0);
        assert_eq!(f[1].normal_of(1), -1.0);
        assert!(ReferenceMesh::new(0).is_err());
    }

    #[test]
    fn identity_and_affine_maps() {
        let g = GeometryField::uniform(1, 1, (0.0, 1.0)).unwrap();
        assert_eq!(g.evaluate_mapping(0, 0.5), (0.5, 1.0));
        let g = GeometryField::uniform(1, 1, (0.0, 2.0)).unwrap();
        assert_eq!(g.evaluate_mapping(0, 0.25), (0.5, 2.0));
    }

    #[test]
    fn quadratic_map() {
        // u(xi) = 0.2 xi + 0.8 xi^2 interpolates (0, 0.3, 1) at xi = (0, 1/2, 1)
        let g = GeometryField::new(2, vec![0.0, 0.3, 1.0], (0.0, 1.0)).unwrap();
        let (x, du) = g.evaluate_mapping(0, 0.5);
        assert_relative_eq!(x, 0.3, epsilon = 1e-15);
        assert_relative_eq!(du, 0.2 + 1.6 * 0.5, epsilon = 1e-14);
        let (x, du) = g.evaluate_mapping(0, 0.25);
        assert_relative_eq!(x, 0.2 * 0.25 + 0.8 * 0.0625, epsilon = 1e-15);
        assert_relative_eq!(du, 0.2 + 1.6 * 0.25, epsilon = 1e-14);
    }

    #[test]
    fn validity() {
        let q = gauss_rule(6).unwrap();
        let g = GeometryField::uniform(1, 1, (0.0, 1.0)).unwrap();
        assert_relative_eq!(g.check_validity(&q).min_jacobian, 1.0);
        // u' = 2.6 - 3.2 xi turns negative near xi = 1
        let g = GeometryField::new(2, vec![0.0, 0.9, 1.0], (0.0, 1.0)).unwrap();
        let r = g.check_validity(&q);
        assert!(r.min_jacobian < 0.0);
        assert_relative_eq!(r.min_jacobian, -0.6, epsilon = 1e-13);
        let g = GeometryField::from_vertices(&[0.0, 0.7, 1.0], 1).unwrap();
        assert_relative_eq!(g.check_validity(&q).min_jacobian, 0.3, epsilon = 1e-15);
        assert_eq!(g.check_validity(&q).cell, 1);
    }

    #[test]
    fn boundary_projection() {
        let g = GeometryField::new(1, vec![0.0, 0.4, 1.0], (0.0, 1.0)).unwrap();
        assert_eq!(g.project_boundary(), g);
        let mut nodes = g.nodes().to_vec();
        nodes[2] = 1.01;
        let drift = GeometryField::new(1, nodes, (0.0, 1.0)).unwrap();
        let p = drift.project_boundary();
        assert_eq!(p.nodes(), &[0.0, 0.4, 1.0]);
        assert_eq!(p.project_boundary(), p);
        let mut d = vec![1.0, 2.0, 3.0];
        g.project_boundary_derivative(&mut d);
        assert_eq!(d, vec![0.0, 2.0, 0.0]);
    }

    #[test]
    fn volumes() {
        let q = gauss_rule(4).unwrap();
        let g = GeometryField::from_vertices(&[0.0, 0.25, 0.75, 1.0], 1).unwrap();
        assert_relative_eq!(g.cell_volume(1, &q), 0.5, epsilon = 1e-15);
        let g = GeometryField::uniform(1, 1, (0.0, 1.0)).unwrap();
        assert_relative_eq!(g.cell_volume(0, &q), 1.0, epsilon = 1e-15);
        let g = GeometryField::new(2, vec![0.0, 0.1, 1.0], (0.0, 1.0)).unwrap();
        assert_relative_eq!(g.cell_volume(0, &q), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn csv_round_trip() {
        let g = GeometryField::new(2, vec![0.0, 0.1, 0.3, 0.65, 1.0], (0.0, 1.0)).unwrap();
        let csv = g.to_csv();
        assert_eq!(csv.lines().count(), 6);
        let back = GeometryField::from_csv(&csv, (0.0, 1.0)).unwrap();
        for (a, b) in back.nodes().iter().zip(g.nodes()) {
            assert!((a - b).abs() <= 1e-16 * b.abs().max(1.0));
        }
    }
}
