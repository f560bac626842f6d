//! Polynomial bases on the reference cell `[0, 1]` and Gauss quadrature.

mod basis;
mod quadrature;

pub use basis::{BasisKind, PolyBasis, Tabulation};
pub use quadrature::{gauss_lobatto_points, gauss_rule, legendre, QuadratureRule};
