//! Linear algebra kernels: row-compressed sparse matrices and a banded
//! Cholesky factorization for the symmetric positive definite normal equations.

mod banded;
mod qr;
mod sparse;

pub use banded::{solve_linear_spd, BandedSpd, BandedCholesky};
pub use qr::BandedQr;
pub use sparse::SparseRows;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Minimizer of `||A x - b||` for a full-column-rank sparse `A`.
///
/// Solves the column-equilibrated normal equations by banded Cholesky and then applies
/// `refinements` corrected seminormal steps, each recomputing the residual from `A` itself.
pub fn solve_least_squares(a: &SparseRows, b: &[f64], refinements: usize) -> crate::Result<Vec<f64>> {
    let scale: Vec<f64> = a
        .column_norms()
        .into_iter()
        .map(|c| if c > 0.0 { 1.0 / c } else { 1.0 })
        .collect();
    let chol = a.normal_matrix(Some(&scale)).factor()?;
    let solve_scaled = |rhs: &[f64]| -> Vec<f64> {
        let g: Vec<f64> = a.transpose_mul_vec(rhs).iter().zip(&scale).map(|(v, s)| v * s).collect();
        chol.solve(&g).iter().zip(&scale).map(|(v, s)| v * s).collect()
    };
    let mut x = solve_scaled(b);
    for _ in 0..refinements {
        let ax = a.mul_vec(&x);
        let r: Vec<f64> = b.iter().zip(&ax).map(|(p, q)| p - q).collect();
        let dx = solve_scaled(&r);
        x.iter_mut().zip(&dx).for_each(|(v, d)| *v += d);
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn least_squares_fits_a_line() {
        // fit c0 + c1 t to four points on 1 + 2t
        let mut a = SparseRows::new(2);
        let ts = [0.0, 1.0, 2.0, 3.0];
        for t in ts {
            a.push(0, 1.0);
            a.push(1, t);
            a.finish_row();
        }
        let b: Vec<f64> = ts.iter().map(|t| 1.0 + 2.0 * t).collect();
        let x = solve_least_squares(&a, &b, 2).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-13 && (x[1] - 2.0).abs() < 1e-13, "{x:?}");
        assert!((norm(&[3.0, 4.0]) - 5.0).abs() < 1e-15);
    }
}
