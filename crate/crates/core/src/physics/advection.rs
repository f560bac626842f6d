use super::{FluxModel, Matrix, Vector, ZERO, ZERO_MATRIX};

/// Position-dependent source data for the scalar models.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum Source {
    #[default]
    Zero,
    Constant(f64),
    /// Power-basis coefficients, lowest degree first.
    Polynomial(Vec<f64>),
}

impl Source {
    pub fn value(&self, x: f64) -> f64 {
        match self {
            Source::Zero => 0.0,
            Source::Constant(c) => *c,
            Source::Polynomial(c) => c.iter().rev().fold(0.0, |acc, &a| acc * x + a),
        }
    }

    pub fn derivative(&self, x: f64) -> f64 {
        match self {
            Source::Zero | Source::Constant(_) => 0.0,
            Source::Polynomial(c) => c
                .iter()
                .enumerate()
                .skip(1)
                .rev()
                .fold(0.0, |acc, (k, &a)| acc * x + k as f64 * a),
        }
    }
}

/// Linear advection-diffusion `d/dx (v y - eps dy/dx) = f` in flux formulation
/// (`sigma = eps dy/dx`, `F~^v = sigma`). `eps = 0` gives pure advection.
#[derive(Debug, Clone, PartialEq)]
pub struct AdvectionDiffusion {
    pub velocity: f64,
    pub diffusivity: f64,
    pub source: Source,
}

impl AdvectionDiffusion {
    pub fn new(velocity: f64, diffusivity: f64) -> Self {
        Self { velocity, diffusivity, source: Source::Zero }
    }

    /// Boundary-layer configuration with Peclet number `pe` (`v = 1`, `eps = 1/pe`).
    pub fn boundary_layer(pe: f64) -> Self {
        Self::new(1.0, 1.0 / pe)
    }

    pub fn with_source(mut self, source: Source) -> Self {
        self.source = source;
        self
    }
}

impl FluxModel for AdvectionDiffusion {
    fn name(&self) -> &'static str {
        "advection-diffusion"
    }

    fn components(&self) -> usize {
        1
    }

    fn is_viscous(&self) -> bool {
        self.diffusivity > 0.0
    }

    fn is_linear(&self) -> bool {
        true
    }

    fn convective_flux(&self, y: &Vector) -> Vector {
        [self.velocity * y[0], 0.0, 0.0]
    }

    fn convective_jacobian(&self, _y: &Vector) -> Matrix {
        let mut a = ZERO_MATRIX;
        a[0][0] = self.velocity;
        a
    }

    fn convective_hessian(&self, _y: &Vector, _a: &Vector) -> Matrix {
        ZERO_MATRIX
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
        g[0][0] = self.diffusivity;
        g
    }

    fn constitutive_state_derivative(&self, _y: &Vector, _g: &Vector) -> Matrix {
        ZERO_MATRIX
    }

    fn primal_viscous_flux(&self, _y: &Vector, grad: &Vector) -> Vector {
        [self.diffusivity * grad[0], 0.0, 0.0]
    }

    fn source(&self, x: f64) -> Vector {
        [self.source.value(x), 0.0, 0.0]
    }

    fn source_derivative(&self, x: f64) -> Vector {
        [self.source.derivative(x), 0.0, 0.0]
    }
}
