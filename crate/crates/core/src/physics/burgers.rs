use super::{FluxModel, Matrix, Vector, ZERO, ZERO_MATRIX};

/// Viscous Burgers `d/dx (y^2/2 - eps dy/dx) = 0` in flux formulation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Burgers {
    pub viscosity: f64,
}

impl Burgers {
    pub fn new(viscosity: f64) -> Self {
        Self { viscosity }
    }
}

impl FluxModel for Burgers {
    fn name(&self) -> &'static str {
        "burgers"
    }

    fn components(&self) -> usize {
        1
    }

    fn is_viscous(&self) -> bool {
        self.viscosity > 0.0
    }

    fn convective_flux(&self, y: &Vector) -> Vector {
        [0.5 * y[0] * y[0], 0.0, 0.0]
    }

    fn convective_jacobian(&self, y: &Vector) -> Matrix {
        let mut a = ZERO_MATRIX;
        a[0][0] = y[0];
        a
    }

    fn convective_hessian(&self, _y: &Vector, a: &Vector) -> Matrix {
        let mut h = ZERO_MATRIX;
        h[0][0] = a[0];
        h
    }

    fn viscous_flux(&self, _y: &Vector, sigma: &Vector) -> Vector {
        if self.is_viscous() {
            [sigma[0], 0.0, 0.0]
        } else {
            ZERO
        }
    }

    fn viscous_jacobian_state(&self, _y: &Vector, _sigma: &Vector) -> Matrix {
        ZERO_MATRIX
    }

    fn viscous_jacobian_aux(&self, _y: &Vector, _sigma: &Vector) -> Matrix {
        let mut a = ZERO_MATRIX;
        if self.is_viscous() {
            a[0][0] = 1.0;
        }
        a
    }

    fn viscous_second(&self, _y: &Vector, _s: &Vector, _a: &Vector, _b: &Vector) -> (Matrix, Matrix) {
        (ZERO_MATRIX, ZERO_MATRIX)
    }

    fn constitutive_matrix(&self, _y: &Vector) -> Matrix {
        let mut g = ZERO_MATRIX;
        g[0][0] = self.viscosity;
        g
    }

    fn constitutive_state_derivative(&self, _y: &Vector, _g: &Vector) -> Matrix {
        ZERO_MATRIX
    }

    fn primal_viscous_flux(&self, _y: &Vector, grad: &Vector) -> Vector {
        [self.viscosity * grad[0], 0.0, 0.0]
    }
}
