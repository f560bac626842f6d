use super::{BoundaryKind, Discretization};
use crate::approximation::PolyBasis;
use crate::error::{Error, Result};
use crate::linalg::{solve_least_squares, SparseRows};
use crate::mesh::{GeometryField, InterfaceKind};

/// Rectangular linear system `min ||B c - l||` over the state coefficients.
#[derive(Debug, Clone)]
pub struct LinearSystem {
    pub matrix: SparseRows,
    pub rhs: Vec<f64>,
}

impl LinearSystem {
    pub fn rows(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn cols(&self) -> usize {
        self.matrix.ncols()
    }

    /// Least-squares solution (the exact solution when the system is square and consistent).
    pub fn solve(&self) -> Result<Vec<f64>> {
        solve_least_squares(&self.matrix, &self.rhs, 3)
    }
}

/// Projects the strong residual of a linear inviscid model onto a polynomial test space
/// of degree `test_degree` per cell (Gauss-Lobatto Lagrange basis) and appends one
/// unweighted row per component for each interface that carries a flux condition
/// (interior interfaces and Dirichlet boundaries). Geometry is fixed.
///
/// With `test_degree = p - 1` the system is square; with `test_degree = p` it has one
/// extra row per cell and component.
pub fn assemble_dls(disc: &Discretization, geometry: &GeometryField, test_degree: usize) -> Result<LinearSystem> {
    let model = disc.model;
    if !model.is_linear() || model.is_viscous() {
        return Err(Error::Unsupported(format!(
            "discrete least-squares projection needs a linear inviscid model, got {}",
            model.name()
        )));
    }
    let zero = disc.zero_state();
    disc.check_inputs(geometry, &zero)?;
    let m = disc.components();
    let nb = disc.state_basis().dim();
    let quad = disc.quadrature();
    let test = PolyBasis::nodal(test_degree);
    let test_tab = test.tabulate(&quad.points);
    let layout = disc.layout();
    let a = model.convective_jacobian(&[0.0; 3]);
    let cells = disc.cell_count();
    let mut b = SparseRows::new(layout.len());
    let mut rhs = Vec::new();

    for c in 0..cells {
        let nodes = geometry.cell_nodes(c);
        let xs: Vec<(f64, f64)> = (0..quad.len()).map(|q| disc.geometry_tab().interpolate(q, nodes)).collect();
        for t in 0..test.dim() {
            for i in 0..m {
                let mut row = vec![0.0; m * nb];
                let mut l = 0.0;
                for q in 0..quad.len() {
                    let wt = quad.weights[q] * test_tab.values(q)[t];
                    let dphi = disc.state_tab().derivs(q);
                    for j in 0..m {
                        for k in 0..nb {
                            row[j * nb + k] += wt * a[i][j] * dphi[k];
                        }
                    }
                    let (x, du) = xs[q];
                    l += wt * du * model.source(x)[i];
                }
                for (k, v) in row.into_iter().enumerate() {
                    b.push(layout.state_col(c, k), v);
                }
                b.finish_row();
                rhs.push(l);
            }
        }
    }

    for iface in disc.mesh.interfaces() {
        let (sides, closure): (Vec<(usize, usize, f64)>, Option<&BoundaryKind>) = match iface.kind {
            InterfaceKind::Interior => (vec![(iface.left.unwrap(), 1, 1.0), (iface.right.unwrap(), 0, -1.0)], None),
            InterfaceKind::LeftBoundary => (vec![(0, 0, -1.0)], Some(&disc.left)),
            InterfaceKind::RightBoundary => (vec![(cells - 1, 1, 1.0)], Some(&disc.right)),
        };
        let prescribed = match closure {
            Some(BoundaryKind::Outflow) => continue,
            Some(BoundaryKind::Dirichlet(yb)) => Some(*yb),
            None => None,
        };
        for i in 0..m {
            for &(cell, end, sign) in &sides {
                let phi = disc.state_ends().values(end);
                for j in 0..m {
                    for k in 0..nb {
                        b.push(layout.state_col(cell, j * nb + k), sign * a[i][j] * phi[k]);
                    }
                }
            }
            b.finish_row();
            let l = match prescribed {
                Some(yb) => sides[0].2 * (0..m).map(|j| a[i][j] * yb[j]).sum::<f64>(),
                None => 0.0,
            };
            rhs.push(l);
        }
    }
    Ok(LinearSystem { matrix: b, rhs })
}
