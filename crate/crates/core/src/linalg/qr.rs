use crate::error::{Error, Result};

/// Row-by-row Givens QR factorization of a tall banded least-squares problem
/// `min |A x - b|`, keeping only the upper-triangular factor and `Q^T b`.
///
/// Every row of `A` must have its nonzeros within `bandwidth + 1` consecutive columns.
/// Rows are cheapest to add in order of their first column.
#[derive(Debug, Clone)]
pub struct BandedQr {
    n: usize,
    w: usize,
    /// Row `k` of the factor holds columns `k..=k + w` at `k * (w + 1)..`.
    r: Vec<f64>,
    qtb: Vec<f64>,
    filled: Vec<bool>,
    residual_sq: f64,
    buf: Vec<f64>,
}

impl BandedQr {
    pub fn new(n: usize, bandwidth: usize) -> Self {
        Self {
            n,
            w: bandwidth,
            r: vec![0.0; n * (bandwidth + 1)],
            qtb: vec![0.0; n],
            filled: vec![false; n],
            residual_sq: 0.0,
            buf: vec![0.0; n + bandwidth + 1],
        }
    }

    /// Squared norm of the part of `b` outside the range of the rows added so far.
    pub fn residual_norm_sq(&self) -> f64 {
        self.residual_sq
    }

    /// Adds the row `sum_j a_j x_j = rhs`. Duplicate columns are summed.
    pub fn add_row(&mut self, entries: impl IntoIterator<Item = (usize, f64)>, rhs: f64) -> Result<()> {
        let (mut lo, mut hi) = (usize::MAX, 0);
        for (j, v) in entries {
            if j >= self.n {
                return Err(Error::InvalidArgument(format!("column {j} outside a {}-column problem", self.n)));
            }
            self.buf[j] += v;
            lo = lo.min(j);
            hi = hi.max(j);
        }
        if lo == usize::MAX {
            self.residual_sq += rhs * rhs;
            return Ok(());
        }
        if hi - lo > self.w {
            for v in &mut self.buf[lo..=hi] {
                *v = 0.0;
            }
            return Err(Error::InvalidArgument(format!("row spans {} columns, bandwidth is {}", hi - lo + 1, self.w)));
        }
        let w = self.w;
        let mut beta = rhs;
        let mut k = lo;
        // the live part of the incoming row is always inside k..=k + w
        while k < self.n {
            let a = self.buf[k];
            if a == 0.0 {
                k += 1;
                if k > hi {
                    break;
                }
                continue;
            }
            let base = k * (w + 1);
            let end = (k + w).min(self.n - 1);
            if !self.filled[k] {
                for j in k..=end {
                    self.r[base + j - k] = self.buf[j];
                    self.buf[j] = 0.0;
                }
                self.qtb[k] = beta;
                self.filled[k] = true;
                return Ok(());
            }
            let d = self.r[base];
            let h = d.hypot(a);
            let (c, s) = (d / h, a / h);
            for j in k..=end {
                let rk = self.r[base + j - k];
                let x = self.buf[j];
                self.r[base + j - k] = c * rk + s * x;
                self.buf[j] = c * x - s * rk;
            }
            self.buf[k] = 0.0;
            let q = self.qtb[k];
            self.qtb[k] = c * q + s * beta;
            beta = c * beta - s * q;
            hi = hi.max(end);
            k += 1;
            if k > hi {
                break;
            }
        }
        for v in &mut self.buf[lo..(hi + 1).min(self.n)] {
            *v = 0.0;
        }
        self.residual_sq += beta * beta;
        Ok(())
    }

    /// Least-squares solution by back substitution. Fails when the factor is singular.
    pub fn solve(&self) -> Result<Vec<f64>> {
        let w = self.w;
        let mut x = vec![0.0; self.n];
        for k in (0..self.n).rev() {
            let base = k * (w + 1);
            let d = self.r[base];
            if !self.filled[k] || d == 0.0 || !d.is_finite() {
                return Err(Error::SolveFailure { row: k, pivot: d });
            }
            let end = (k + w).min(self.n - 1);
            let mut s = self.qtb[k];
            for j in k + 1..=end {
                s -= self.r[base + j - k] * x[j];
            }
            x[k] = s / d;
        }
        Ok(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{solve_least_squares, SparseRows};

    fn banded_rows(n: usize, w: usize, rows: usize, seed: u64) -> (SparseRows, Vec<f64>) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut a = SparseRows::new(n);
        let mut b = Vec::new();
        for i in 0..rows {
            let lo = (i * n / rows).min(n - 1);
            for j in lo..(lo + w + 1).min(n) {
                a.push(j, rng.gen_range(-1.0..1.0));
            }
            a.finish_row();
            b.push(rng.gen_range(-1.0..1.0));
        }
        (a, b)
    }

    #[test]
    fn matches_normal_equations_on_a_random_banded_problem() {
        let (a, b) = banded_rows(20, 3, 60, 7);
        let mut qr = BandedQr::new(20, 3);
        for i in 0..a.nrows() {
            qr.add_row(a.row(i), b[i]).unwrap();
        }
        let x = qr.solve().unwrap();
        let y = solve_least_squares(&a, &b, 3).unwrap();
        for (p, q) in x.iter().zip(&y) {
            assert!((p - q).abs() < 1e-10, "{p} {q}");
        }
        let ax = a.mul_vec(&x);
        let res: f64 = ax.iter().zip(&b).map(|(p, q)| (p - q).powi(2)).sum();
        assert!((res - qr.residual_norm_sq()).abs() < 1e-10 * res.max(1.0));
    }

    #[test]
    fn row_order_does_not_matter() {
        let (a, b) = banded_rows(12, 2, 30, 3);
        let mut fwd = BandedQr::new(12, 2);
        let mut rev = BandedQr::new(12, 2);
        for i in 0..a.nrows() {
            fwd.add_row(a.row(i), b[i]).unwrap();
        }
        for i in (0..a.nrows()).rev() {
            rev.add_row(a.row(i), b[i]).unwrap();
        }
        let (x, y) = (fwd.solve().unwrap(), rev.solve().unwrap());
        for (p, q) in x.iter().zip(&y) {
            assert!((p - q).abs() < 1e-11);
        }
    }

    #[test]
    fn rank_deficiency_and_wide_rows_are_reported() {
        let mut qr = BandedQr::new(3, 1);
        qr.add_row([(0, 1.0), (1, 1.0)], 1.0).unwrap();
        assert!(matches!(qr.solve(), Err(Error::SolveFailure { .. })));
        assert!(qr.add_row([(0, 1.0), (2, 1.0)], 0.0).is_err());
    }
}
