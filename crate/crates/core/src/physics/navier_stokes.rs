use super::{FluxModel, Matrix, Vector, ZERO_MATRIX};
use crate::error::{Error, Result};

/// Lower bound for density and pressure of an admissible state.
const ADMISSIBILITY_FLOOR: f64 = 1e-12;

/// Primitive variables `(rho, v, T)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Primitive {
    pub density: f64,
    pub velocity: f64,
    pub temperature: f64,
}

impl Primitive {
    pub fn new(density: f64, velocity: f64, temperature: f64) -> Self {
        Self { density, velocity, temperature }
    }
}

/// Steady 1D compressible Navier-Stokes with state `(rho, rho v, rho E)`, constant
/// viscosity and a calorically perfect gas. Units are scaled by freestream density,
/// temperature and sound speed, so the gas constant is `1/gamma`.
///
/// The auxiliary variable is `mu_ref^{-1/2} (0, tau, -q)` with `tau = 4/3 mu v_x`
/// and `q = -k T_x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NavierStokes1D {
    pub gamma: f64,
    pub gas_constant: f64,
    pub viscosity: f64,
    pub prandtl: f64,
    pub conductivity: f64,
    pub reference_viscosity: f64,
}

impl NavierStokes1D {
    /// Air (`gamma = 1.4`) at the given freestream Mach and Reynolds numbers
    /// (unit length, unit freestream density).
    pub fn from_flow(mach: f64, reynolds: f64, prandtl: f64) -> Self {
        let gamma = 1.4;
        let gas_constant = 1.0 / gamma;
        let viscosity = mach / reynolds;
        let conductivity = gamma * gas_constant * viscosity / ((gamma - 1.0) * prandtl);
        Self { gamma, gas_constant, viscosity, prandtl, conductivity, reference_viscosity: viscosity }
    }

    /// Specific heat at constant pressure.
    pub fn cp(&self) -> f64 {
        self.gamma * self.gas_constant / (self.gamma - 1.0)
    }

    pub fn pressure(&self, y: &Vector) -> f64 {
        (self.gamma - 1.0) * (y[2] - 0.5 * y[1] * y[1] / y[0])
    }

    pub fn temperature(&self, y: &Vector) -> f64 {
        self.pressure(y) / (self.gas_constant * y[0])
    }

    /// Specific total enthalpy `H = (rho E + p) / rho`.
    pub fn total_enthalpy(&self, y: &Vector) -> f64 {
        (y[2] + self.pressure(y)) / y[0]
    }

    pub fn to_conservative(&self, w: &Primitive) -> Vector {
        let e = self.gas_constant * w.temperature / (self.gamma - 1.0);
        let rho = w.density;
        [rho, rho * w.velocity, rho * (e + 0.5 * w.velocity * w.velocity)]
    }

    pub fn to_primitive(&self, y: &Vector) -> Primitive {
        Primitive::new(y[0], y[1] / y[0], self.temperature(y))
    }

    fn aux_scale(&self) -> f64 {
        self.reference_viscosity.sqrt()
    }
}

impl FluxModel for NavierStokes1D {
    fn name(&self) -> &'static str {
        "navier-stokes"
    }

    fn components(&self) -> usize {
        3
    }

    fn is_viscous(&self) -> bool {
        self.viscosity > 0.0
    }

    fn check_admissible(&self, y: &Vector) -> Result<()> {
        let p = self.pressure(y);
        if !(y[0] > ADMISSIBILITY_FLOOR) || !(p > ADMISSIBILITY_FLOOR) {
            return Err(Error::Inadmissible(format!("density {} pressure {}", y[0], p)));
        }
        Ok(())
    }

    fn convective_flux(&self, y: &Vector) -> Vector {
        let (r, m, e) = (y[0], y[1], y[2]);
        let g = self.gamma;
        [
            m,
            0.5 * (3.0 - g) * m * m / r + (g - 1.0) * e,
            g * e * m / r - 0.5 * (g - 1.0) * m * m * m / (r * r),
        ]
    }

    fn convective_jacobian(&self, y: &Vector) -> Matrix {
        let (r, m, e) = (y[0], y[1], y[2]);
        let g = self.gamma;
        let v = m / r;
        [
            [0.0, 1.0, 0.0],
            [-0.5 * (3.0 - g) * v * v, (3.0 - g) * v, g - 1.0],
            [-g * e * m / (r * r) + (g - 1.0) * v * v * v, g * e / r - 1.5 * (g - 1.0) * v * v, g * v],
        ]
    }

    fn convective_hessian(&self, y: &Vector, a: &Vector) -> Matrix {
        let (r, m, e) = (y[0], y[1], y[2]);
        let g = self.gamma;
        let r2 = r * r;
        let r3 = r2 * r;
        let h2 = [
            [(3.0 - g) * m * m / r3, -(3.0 - g) * m / r2, 0.0],
            [-(3.0 - g) * m / r2, (3.0 - g) / r, 0.0],
            [0.0, 0.0, 0.0],
        ];
        let h3 = [
            [
                2.0 * g * e * m / r3 - 3.0 * (g - 1.0) * m * m * m / (r3 * r),
                -g * e / r2 + 3.0 * (g - 1.0) * m * m / r3,
                -g * m / r2,
            ],
            [-g * e / r2 + 3.0 * (g - 1.0) * m * m / r3, -3.0 * (g - 1.0) * m / r2, g / r],
            [-g * m / r2, g / r, 0.0],
        ];
        let mut out = ZERO_MATRIX;
        for j in 0..3 {
            out[1][j] = (0..3).map(|k| h2[j][k] * a[k]).sum();
            out[2][j] = (0..3).map(|k| h3[j][k] * a[k]).sum();
        }
        out
    }

    fn viscous_flux(&self, y: &Vector, s: &Vector) -> Vector {
        let c = self.aux_scale();
        let v = y[1] / y[0];
        [c * s[0], c * s[1], c * (s[1] * v + s[2])]
    }

    fn viscous_jacobian_state(&self, y: &Vector, s: &Vector) -> Matrix {
        let c = self.aux_scale();
        let r = y[0];
        let mut out = ZERO_MATRIX;
        out[2][0] = -c * s[1] * y[1] / (r * r);
        out[2][1] = c * s[1] / r;
        out
    }

    fn viscous_jacobian_aux(&self, y: &Vector, _s: &Vector) -> Matrix {
        let c = self.aux_scale();
        let v = y[1] / y[0];
        [[c, 0.0, 0.0], [0.0, c, 0.0], [0.0, c * v, c]]
    }

    fn viscous_second(&self, y: &Vector, s: &Vector, a: &Vector, b: &Vector) -> (Matrix, Matrix) {
        let c = self.aux_scale();
        let (r, m) = (y[0], y[1]);
        let r2 = r * r;
        let dv_a = -m * a[0] / r2 + a[1] / r;
        let mut wrt_state = ZERO_MATRIX;
        wrt_state[2][0] = c * (s[1] * (2.0 * m * a[0] / (r2 * r) - a[1] / r2) - b[1] * m / r2);
        wrt_state[2][1] = c * (-s[1] * a[0] / r2 + b[1] / r);
        let mut wrt_aux = ZERO_MATRIX;
        wrt_aux[2][1] = c * dv_a;
        (wrt_state, wrt_aux)
    }

    fn constitutive_matrix(&self, y: &Vector) -> Matrix {
        let (r, m, e) = (y[0], y[1], y[2]);
        let r2 = r * r;
        let inv = 1.0 / self.aux_scale();
        let tau = inv * 4.0 / 3.0 * self.viscosity;
        let heat = inv * self.conductivity * (self.gamma - 1.0) / self.gas_constant;
        [
            [0.0, 0.0, 0.0],
            [-tau * m / r2, tau / r, 0.0],
            [heat * (-e / r2 + m * m / (r2 * r)), -heat * m / r2, heat / r],
        ]
    }

    fn constitutive_state_derivative(&self, y: &Vector, g: &Vector) -> Matrix {
        let (r, m, e) = (y[0], y[1], y[2]);
        let r2 = r * r;
        let r3 = r2 * r;
        let inv = 1.0 / self.aux_scale();
        let tau = inv * 4.0 / 3.0 * self.viscosity;
        let heat = inv * self.conductivity * (self.gamma - 1.0) / self.gas_constant;
        let mut out = ZERO_MATRIX;
        out[1][0] = tau * (-g[1] / r2 + 2.0 * m * g[0] / r3);
        out[1][1] = tau * (-g[0] / r2);
        out[2][0] = heat * (-g[2] / r2 + 2.0 * e * g[0] / r3 + 2.0 * m * g[1] / r3 - 3.0 * m * m * g[0] / (r3 * r));
        out[2][1] = heat * (-g[1] / r2 + 2.0 * m * g[0] / r3);
        out[2][2] = heat * (-g[0] / r2);
        out
    }

    fn primal_viscous_flux(&self, y: &Vector, grad: &Vector) -> Vector {
        // Primitive gradients through the pressure: T = p / (R rho).
        let (r, m) = (y[0], y[1]);
        let v = m / r;
        let p = self.pressure(y);
        let vx = (grad[1] - v * grad[0]) / r;
        let px = (self.gamma - 1.0) * (grad[2] - v * grad[1] + 0.5 * v * v * grad[0]);
        let tx = (px * r - p * grad[0]) / (self.gas_constant * r * r);
        let tau = 4.0 / 3.0 * self.viscosity * vx;
        let q = -self.conductivity * tx;
        [0.0, tau, tau * v - q]
    }
}
