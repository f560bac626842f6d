use super::quadrature::{gauss_lobatto_points, legendre};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisKind {
    /// Lagrange interpolants through the Gauss-Lobatto points of `[0, 1]`.
    Nodal,
    /// Legendre polynomials orthonormal on `[0, 1]`.
    Modal,
}

/// Polynomial basis of degree `degree` on the reference cell.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyBasis {
    degree: usize,
    kind: BasisKind,
    nodes: Vec<f64>,
}

impl PolyBasis {
    pub fn new(degree: usize, kind: BasisKind) -> Self {
        let nodes = match kind {
            BasisKind::Nodal => gauss_lobatto_points(degree),
            BasisKind::Modal => Vec::new(),
        };
        Self { degree, kind, nodes }
    }

    pub fn modal(degree: usize) -> Self {
        Self::new(degree, BasisKind::Modal)
    }

    pub fn nodal(degree: usize) -> Self {
        Self::new(degree, BasisKind::Nodal)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.degree + 1
    }

    /// Interpolation nodes of a nodal basis (empty for modal bases).
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Values and derivatives of every basis function at `xi`.
    pub fn eval_into(&self, xi: f64, values: &mut [f64], derivs: &mut [f64]) {
        let n = self.dim();
        match self.kind {
            BasisKind::Modal => {
                let t = 2.0 * xi - 1.0;
                for k in 0..n {
                    let s = (2.0 * k as f64 + 1.0).sqrt();
                    let (p, d) = legendre(k, t);
                    values[k] = s * p;
                    derivs[k] = 2.0 * s * d;
                }
            }
            BasisKind::Nodal => {
                if n == 1 {
                    values[0] = 1.0;
                    derivs[0] = 0.0;
                    return;
                }
                let x = &self.nodes;
                for i in 0..n {
                    let mut v = 1.0;
                    let mut d = 0.0;
                    for j in 0..n {
                        if j == i {
                            continue;
                        }
                        let denom = x[i] - x[j];
                        // product rule, accumulated alongside the value
                        d = d * (xi - x[j]) / denom + v / denom;
                        v *= (xi - x[j]) / denom;
                    }
                    values[i] = v;
                    derivs[i] = d;
                }
            }
        }
    }

    pub fn eval(&self, xi: f64) -> Vec<(f64, f64)> {
        let mut v = vec![0.0; self.dim()];
        let mut d = vec![0.0; self.dim()];
        self.eval_into(xi, &mut v, &mut d);
        v.into_iter().zip(d).collect()
    }

    /// Tabulate values and derivatives at a list of points.
    pub fn tabulate(&self, points: &[f64]) -> Tabulation {
        let n = self.dim();
        let mut values = vec![0.0; n * points.len()];
        let mut derivs = vec![0.0; n * points.len()];
        for (q, &xi) in points.iter().enumerate() {
            self.eval_into(xi, &mut values[q * n..(q + 1) * n], &mut derivs[q * n..(q + 1) * n]);
        }
        Tabulation { dim: n, values, derivs }
    }
}

/// Basis values and derivatives sampled at a fixed list of points, point-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Tabulation {
    dim: usize,
    values: Vec<f64>,
    derivs: Vec<f64>,
}

impl Tabulation {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn values(&self, q: usize) -> &[f64] {
        &self.values[q * self.dim..(q + 1) * self.dim]
    }

    pub fn derivs(&self, q: usize) -> &[f64] {
        &self.derivs[q * self.dim..(q + 1) * self.dim]
    }

    /// `sum_k c_k phi_k(x_q)` and `sum_k c_k phi_k'(x_q)`.
    pub fn interpolate(&self, q: usize, coeffs: &[f64]) -> (f64, f64) {
        let v = self.values(q).iter().zip(coeffs).map(|(a, b)| a * b).sum();
        let d = self.derivs(q).iter().zip(coeffs).map(|(a, b)| a * b).sum();
        (v, d)
    }
}
