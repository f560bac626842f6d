//! Flux models: linear advection-diffusion, viscous Burgers and the 1D compressible
//! Navier-Stokes equations, written as a common first-order (state, auxiliary flux) contract.

mod advection;
mod burgers;
mod navier_stokes;

pub use advection::{AdvectionDiffusion, Source};
pub use burgers::Burgers;
pub use navier_stokes::{NavierStokes1D, Primitive};

use crate::error::Result;

/// Largest state dimension among the supported models.
pub const MAX_COMPONENTS: usize = 3;

pub type Vector = [f64; MAX_COMPONENTS];
pub type Matrix = [[f64; MAX_COMPONENTS]; MAX_COMPONENTS];

pub const ZERO: Vector = [0.0; MAX_COMPONENTS];
pub const ZERO_MATRIX: Matrix = [[0.0; MAX_COMPONENTS]; MAX_COMPONENTS];

pub fn mat_vec(a: &Matrix, x: &Vector) -> Vector {
    let mut y = ZERO;
    for i in 0..MAX_COMPONENTS {
        y[i] = (0..MAX_COMPONENTS).map(|j| a[i][j] * x[j]).sum();
    }
    y
}

/// First derivatives of the flux pieces at a given `(y, sigma)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluxDerivatives {
    /// `dF^c/dy`
    pub convective: Matrix,
    /// `dF~^v/dy`
    pub viscous_state: Matrix,
    /// `dF~^v/dsigma`
    pub viscous_aux: Matrix,
}

/// A steady 1D conservation law `d/dx (F^c(y) - F~^v(y, sigma)) = f`, `sigma = G(y) dy/dx`.
///
/// All vectors carry `components()` meaningful entries; the rest are zero.
pub trait FluxModel: Send + Sync + std::fmt::Debug {
    fn name(&self) -> &'static str;

    fn components(&self) -> usize;

    /// `false` when there is no diffusion; the auxiliary variable and its
    /// equations are then dropped from the discretization.
    fn is_viscous(&self) -> bool;

    /// `true` when the flux is linear in the state and auxiliary variable.
    fn is_linear(&self) -> bool {
        false
    }

    fn check_admissible(&self, _y: &Vector) -> Result<()> {
        Ok(())
    }

    fn convective_flux(&self, y: &Vector) -> Vector;

    fn convective_jacobian(&self, y: &Vector) -> Matrix;

    /// `d/dy [dF^c/dy(y) a]`.
    fn convective_hessian(&self, y: &Vector, a: &Vector) -> Matrix;

    /// Modified viscous flux `F~^v(y, sigma)`.
    fn viscous_flux(&self, y: &Vector, sigma: &Vector) -> Vector;

    fn viscous_jacobian_state(&self, y: &Vector, sigma: &Vector) -> Matrix;

    fn viscous_jacobian_aux(&self, y: &Vector, sigma: &Vector) -> Matrix;

    /// Derivatives with respect to `y` and `sigma` of `F~^v_y a + F~^v_sigma b`.
    fn viscous_second(&self, y: &Vector, sigma: &Vector, a: &Vector, b: &Vector) -> (Matrix, Matrix);

    /// Constitutive tensor `G(y)` as a matrix acting on a gradient sample.
    fn constitutive_matrix(&self, y: &Vector) -> Matrix;

    /// `d/dy [G(y) g]`.
    fn constitutive_state_derivative(&self, y: &Vector, g: &Vector) -> Matrix;

    /// Physical viscous flux `F^v(y, dy/dx)` evaluated directly from the gradient.
    fn primal_viscous_flux(&self, y: &Vector, grad: &Vector) -> Vector;

    /// Source data `f` at a physical position.
    fn source(&self, _x: f64) -> Vector {
        ZERO
    }

    fn source_derivative(&self, _x: f64) -> Vector {
        ZERO
    }

    /// Total flux `F^c(y) - F~^v(y, sigma)`.
    fn flux(&self, y: &Vector, sigma: &Vector) -> Result<Vector> {
        self.check_admissible(y)?;
        let c = self.convective_flux(y);
        let v = self.viscous_flux(y, sigma);
        let mut out = ZERO;
        for i in 0..self.components() {
            out[i] = c[i] - v[i];
        }
        Ok(out)
    }

    /// `G(y) g`.
    fn constitutive_apply(&self, y: &Vector, g: &Vector) -> Result<Vector> {
        self.check_admissible(y)?;
        Ok(mat_vec(&self.constitutive_matrix(y), g))
    }

    fn derivatives(&self, y: &Vector, sigma: &Vector) -> Result<FluxDerivatives> {
        self.check_admissible(y)?;
        Ok(FluxDerivatives {
            convective: self.convective_jacobian(y),
            viscous_state: self.viscous_jacobian_state(y, sigma),
            viscous_aux: self.viscous_jacobian_aux(y, sigma),
        })
    }

    /// Inviscid normal-flux jump `F^c(y_L) - F^c(y_R)` across a steady shock.
    fn rankine_hugoniot_defect(&self, left: &Vector, right: &Vector) -> Result<Vector> {
        self.check_admissible(left)?;
        self.check_admissible(right)?;
        let a = self.convective_flux(left);
        let b = self.convective_flux(right);
        let mut out = ZERO;
        for i in 0..self.components() {
            out[i] = a[i] - b[i];
        }
        Ok(out)
    }
}
