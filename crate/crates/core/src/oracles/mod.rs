//! Exact and reference solutions, L2 projection and error norms, convergence rates.

mod shock;

pub use shock::{normal_shock_downstream, ns_shock_ode_oracle, ShockProfile};

use crate::assembly::{Discretization, FieldState};
use crate::approximation::QuadratureRule;
use crate::error::{Error, Result};
use crate::linalg::BandedSpd;
use crate::mesh::GeometryField;
use crate::physics::Vector;

/// A reference solution `x -> y(x)`.
pub trait ExactSolution {
    fn value(&self, x: f64) -> Vector;
}

/// Wraps a scalar function as a one-component exact solution.
pub struct ScalarFn<F>(pub F);

impl<F: Fn(f64) -> f64> ExactSolution for ScalarFn<F> {
    fn value(&self, x: f64) -> Vector {
        [(self.0)(x), 0.0, 0.0]
    }
}

/// Steady advection-diffusion boundary layer on `[0, 1]` with `y(0) = 0`, `y(1) = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryLayerExact {
    pub peclet: f64,
}

impl ExactSolution for BoundaryLayerExact {
    fn value(&self, x: f64) -> Vector {
        [boundary_layer_exact(self.peclet, x), 0.0, 0.0]
    }
}

/// `(1 - exp(x Pe)) / (1 - exp(Pe))`, rewritten in terms of `exp((x - 1) Pe)` for `Pe > 30`
/// where the direct form loses all digits.
pub fn boundary_layer_exact(peclet: f64, x: f64) -> f64 {
    if peclet > 30.0 {
        ((((x - 1.0) * peclet).exp()) - (-peclet).exp()) / (1.0 - (-peclet).exp())
    } else {
        (1.0 - (x * peclet).exp()) / (1.0 - peclet.exp())
    }
}

/// Stationary viscous Burgers shock with `y_R = -y_L` centred at the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BurgersExact {
    pub viscosity: f64,
    pub left: f64,
}

impl ExactSolution for BurgersExact {
    fn value(&self, x: f64) -> Vector {
        [burgers_exact(self.viscosity, self.left, x), 0.0, 0.0]
    }
}

/// `y_R + (y_L - y_R)/2 (1 - tanh((y_L - y_R) x / (4 eps)))` with `y_R = -y_L`.
pub fn burgers_exact(viscosity: f64, left: f64, x: f64) -> f64 {
    let right = -left;
    right + 0.5 * (left - right) * (1.0 - ((left - right) * x / (4.0 * viscosity)).tanh())
}

/// Monic polynomial given by its roots.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialExact {
    pub roots: Vec<f64>,
}

impl PolynomialExact {
    pub fn eval(&self, x: f64) -> f64 {
        self.roots.iter().map(|r| x - r).product()
    }

    /// Power-basis coefficients, lowest degree first.
    pub fn coefficients(&self) -> Vec<f64> {
        let mut c = vec![1.0];
        for &r in &self.roots {
            let mut next = vec![0.0; c.len() + 1];
            for (k, &a) in c.iter().enumerate() {
                next[k + 1] += a;
                next[k] -= r * a;
            }
            c = next;
        }
        c
    }

    pub fn derivative_coefficients(&self) -> Vec<f64> {
        self.coefficients().iter().enumerate().skip(1).map(|(k, a)| k as f64 * a).collect()
    }
}

impl ExactSolution for PolynomialExact {
    fn value(&self, x: f64) -> Vector {
        [self.eval(x), 0.0, 0.0]
    }
}

/// Physical-space L2 error over all state components, using the mapped quadrature `quad`.
pub fn l2_error(disc: &Discretization, geometry: &GeometryField, state: &FieldState, exact: &dyn ExactSolution, quad: &QuadratureRule) -> f64 {
    let m = disc.components();
    let gtab = geometry.basis().tabulate(&quad.points);
    let stab = disc.state_basis().tabulate(&quad.points);
    let mut sum = 0.0;
    for c in 0..disc.cell_count() {
        let nodes = geometry.cell_nodes(c);
        for q in 0..quad.len() {
            let (x, du) = gtab.interpolate(q, nodes);
            let e = exact.value(x);
            for i in 0..m {
                let yh = stab.interpolate(q, state.state_component(c, i)).0;
                sum += quad.weights[q] * du * (yh - e[i]).powi(2);
            }
        }
    }
    sum.sqrt()
}

/// Cellwise L2 projection of `exact` onto the state space in the mapped inner product.
/// The auxiliary field is zero.
pub fn l2_project(disc: &Discretization, geometry: &GeometryField, exact: &dyn ExactSolution, quad: &QuadratureRule) -> Result<FieldState> {
    let m = disc.components();
    let n = disc.state_basis().dim();
    let gtab = geometry.basis().tabulate(&quad.points);
    let stab = disc.state_basis().tabulate(&quad.points);
    let mut out = disc.zero_state();
    for c in 0..disc.cell_count() {
        let nodes = geometry.cell_nodes(c);
        let mut mass = vec![vec![0.0; n]; n];
        let mut rhs = vec![[0.0; 3]; n];
        for q in 0..quad.len() {
            let (x, du) = gtab.interpolate(q, nodes);
            let phi = stab.values(q);
            let e = exact.value(x);
            let w = quad.weights[q] * du;
            for k in 0..n {
                for l in 0..n {
                    mass[k][l] += w * phi[k] * phi[l];
                }
                for i in 0..m {
                    rhs[k][i] += w * phi[k] * e[i];
                }
            }
        }
        let chol = BandedSpd::from_dense(&mass).factor()?;
        for i in 0..m {
            let b: Vec<f64> = rhs.iter().map(|r| r[i]).collect();
            out.state_component_mut(c, i).copy_from_slice(&chol.solve(&b));
        }
    }
    Ok(out)
}

/// Pairwise rates `log(e_i / e_{i+1}) / log(h_i / h_{i+1})`.
pub fn convergence_rate(errors: &[(f64, f64)]) -> Result<Vec<f64>> {
    if errors.len() < 2 {
        return Err(Error::InvalidArgument("need at least two (h, error) pairs".into()));
    }
    if errors.iter().any(|&(h, e)| !(h > 0.0) || !(e > 0.0)) {
        return Err(Error::InvalidArgument("mesh sizes and errors must be positive".into()));
    }
    Ok(errors
        .windows(2)
        .map(|w| (w[0].1 / w[1].1).ln() / (w[0].0 / w[1].0).ln())
        .collect())
}

/// Mean of the last `k` entries.
pub fn tail_mean(values: &[f64], k: usize) -> f64 {
    let k = k.min(values.len()).max(1);
    values[values.len() - k..].iter().sum::<f64>() / k as f64
}

/// Sample the discrete state at `per_cell` evenly spaced reference points per cell, returning `(x, y)`.
pub fn sample_state(disc: &Discretization, geometry: &GeometryField, state: &FieldState, per_cell: usize) -> Vec<(f64, Vector)> {
    let mut out = Vec::with_capacity(disc.cell_count() * per_cell);
    for c in 0..disc.cell_count() {
        for k in 0..per_cell {
            let xi = if per_cell == 1 { 0.5 } else { k as f64 / (per_cell - 1) as f64 };
            let (x, _) = geometry.evaluate_mapping(c, xi);
            out.push((x, disc.state_at(state, c, xi)));
        }
    }
    out
}
