use crate::error::{Error, Result};

/// Quadrature rule on the reference cell `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Highest polynomial degree integrated exactly.
    pub fn exact_degree(&self) -> usize {
        2 * self.points.len() - 1
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Legendre polynomial `P_n(t)` on `[-1, 1]` and its derivative.
pub fn legendre(n: usize, t: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let (mut p_prev, mut p) = (1.0, t);
    let (mut d_prev, mut d) = (0.0, 1.0);
    for k in 1..n {
        let kf = k as f64;
        let p_next = ((2.0 * kf + 1.0) * t * p - kf * p_prev) / (kf + 1.0);
        let d_next = d_prev + (2.0 * kf + 1.0) * p;
        p_prev = p;
        p = p_next;
        d_prev = d;
        d = d_next;
    }
    (p, d)
}

/// Gauss-Legendre rule with `n` points mapped to `[0, 1]`; exact to degree `2n - 1`.
pub fn gauss_rule(n: usize) -> Result<QuadratureRule> {
    if !(1..=64).contains(&n) {
        return Err(Error::InvalidArgument(format!(
            "gauss rule point count {n} outside 1..=64"
        )));
    }
    let mut points = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        // Chebyshev-like initial guess, refined by Newton iteration.
        let mut t = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        for _ in 0..100 {
            let (p, d) = legendre(n, t);
            let dt = p / d;
            t -= dt;
            if dt.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, t);
        let w = 2.0 / ((1.0 - t * t) * d * d);
        // t is descending in i; store ascending on [0, 1]
        points[i] = 0.5 * (1.0 - t);
        points[n - 1 - i] = 0.5 * (1.0 + t);
        weights[i] = 0.5 * w;
        weights[n - 1 - i] = 0.5 * w;
    }
    if n % 2 == 1 {
        points[n / 2] = 0.5;
    }
    Ok(QuadratureRule { points, weights })
}

/// Gauss-Lobatto points of a degree `p` nodal basis on `[0, 1]` (`p + 1` points, endpoints included).
pub fn gauss_lobatto_points(p: usize) -> Vec<f64> {
    if p == 0 {
        return vec![0.5];
    }
    let mut pts = vec![0.0; p + 1];
    pts[p] = 1.0;
    // interior points are the roots of P'_p
    for i in 1..p {
        let mut t = -(std::f64::consts::PI * i as f64 / p as f64).cos();
        for _ in 0..100 {
            // Newton on P'_p using P''_p from the Legendre ODE
            let (pp, d) = legendre(p, t);
            let pf = p as f64;
            let dd = (2.0 * t * d - pf * (pf + 1.0) * pp) / (1.0 - t * t);
            let dt = d / dd;
            t -= dt;
            if dt.abs() < 1e-16 {
                break;
            }
        }
        pts[i] = 0.5 * (1.0 + t);
    }
    pts
}
