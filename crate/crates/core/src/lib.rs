//! Least-squares moving discontinuous Galerkin method with interface condition
//! enforcement (LS-MDG-ICE) for one-dimensional steady conservation laws.
//!
//! The discrete state `y`, the auxiliary viscous flux `sigma` and the
//! high-order mesh geometry `u` are solved simultaneously by minimizing the
//! quadrature-sampled L2 norm of the strong residual (cell conservation and
//! constitutive laws, interface flux and state-continuity conditions) with a
//! regularized Gauss-Newton method.

pub mod approximation;
pub mod assembly;
pub mod error;
pub mod experiments;
pub mod linalg;
pub mod mesh;
pub mod ode_study;
pub mod oracles;
pub mod physics;
pub mod solver;

pub use error::{Error, Result};
