use crate::error::{Error, Result};

/// Symmetric matrix stored by its lower band: `band[i][k] = A[i][i - k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedSpd {
    n: usize,
    bw: usize,
    band: Vec<f64>,
}

impl BandedSpd {
    pub fn zeros(n: usize, bandwidth: usize) -> Self {
        let bw = bandwidth.min(n.saturating_sub(1));
        Self { n, bw, band: vec![0.0; n * (bw + 1)] }
    }

    pub fn identity(n: usize) -> Self {
        let mut a = Self::zeros(n, 0);
        (0..n).for_each(|i| a.add(i, i, 1.0));
        a
    }

    pub fn from_dense(a: &[Vec<f64>]) -> Self {
        let n = a.len();
        let mut bw = 0;
        for (i, row) in a.iter().enumerate() {
            for (j, &v) in row.iter().enumerate().take(i) {
                if v != 0.0 {
                    bw = bw.max(i - j);
                }
            }
        }
        let mut m = Self::zeros(n, bw);
        for i in 0..n {
            for j in i.saturating_sub(bw)..=i {
                m.add(i, j, a[i][j]);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.bw
    }

    #[inline]
    fn idx(&self, i: usize, k: usize) -> usize {
        i * (self.bw + 1) + k
    }

    /// Add `v` to the symmetric pair `(i, j)`; only the lower triangle is stored.
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let (i, j) = if i >= j { (i, j) } else { (j, i) };
        assert!(i - j <= self.bw, "entry ({i},{j}) outside bandwidth {}", self.bw);
        let k = self.idx(i, i - j);
        self.band[k] += v;
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (i, j) = if i >= j { (i, j) } else { (j, i) };
        if i - j > self.bw {
            0.0
        } else {
            self.band[self.idx(i, i - j)]
        }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        for i in 0..self.n {
            let a = &self.band[self.idx(i, 0)..self.idx(i, 0) + self.bw + 1];
            y[i] += a[0] * x[i];
            for k in 1..=self.bw.min(i) {
                let j = i - k;
                y[i] += a[k] * x[j];
                y[j] += a[k] * x[i];
            }
        }
        y
    }

    /// In-place banded Cholesky `A = L L^T`.
    pub fn factor(mut self) -> Result<BandedCholesky> {
        let (n, bw) = (self.n, self.bw);
        for j in 0..n {
            let jj = self.idx(j, 0);
            let mut d = self.band[jj];
            for k in 1..=bw.min(j) {
                let l = self.band[self.idx(j, k)];
                d -= l * l;
            }
            if !(d > 0.0) || !d.is_finite() {
                return Err(Error::SolveFailure { row: j, pivot: d });
            }
            let d = d.sqrt();
            self.band[jj] = d;
            for i in j + 1..=(j + bw).min(n - 1) {
                // L[i][j] = (A[i][j] - sum_k L[i][k] L[j][k]) / L[j][j]
                let mut s = self.band[self.idx(i, i - j)];
                let kmin = i.saturating_sub(bw);
                for k in kmin..j {
                    s -= self.band[self.idx(i, i - k)] * self.band[self.idx(j, j - k)];
                }
                let ij = self.idx(i, i - j);
                self.band[ij] = s / d;
            }
        }
        Ok(BandedCholesky { l: self })
    }
}

/// Banded Cholesky factor.
#[derive(Debug, Clone)]
pub struct BandedCholesky {
    l: BandedSpd,
}

impl BandedCholesky {
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let l = &self.l;
        let (n, bw) = (l.n, l.bw);
        let mut x = b.to_vec();
        for i in 0..n {
            let mut s = x[i];
            for k in 1..=bw.min(i) {
                s -= l.band[l.idx(i, k)] * x[i - k];
            }
            x[i] = s / l.band[l.idx(i, 0)];
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..=(i + bw).min(n - 1) {
                s -= l.band[l.idx(j, j - i)] * x[j];
            }
            x[i] = s / l.band[l.idx(i, 0)];
        }
        x
    }
}

/// Solve `A x = b` for a symmetric positive definite banded `A`.
pub fn solve_linear_spd(a: &BandedSpd, b: &[f64]) -> Result<Vec<f64>> {
    let chol = a.clone().factor()?;
    Ok(chol.solve(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_solve() {
        let a = BandedSpd::identity(4);
        let b = vec![1.0, -2.0, 3.0, 0.5];
        assert_eq!(solve_linear_spd(&a, &b).unwrap(), b);
    }

    #[test]
    fn diagonal_solve() {
        let a = BandedSpd::from_dense(&[vec![2.0, 0.0], vec![0.0, 3.0]]);
        let x = solve_linear_spd(&a, &[2.0, 3.0]).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-15 && (x[1] - 1.0).abs() < 1e-15, "{x:?}");
    }

    #[test]
    fn random_spd_dense() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 50;
        let m: Vec<Vec<f64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
        let mut a = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..n {
                a[i][j] = (0..n).map(|k| m[k][i] * m[k][j]).sum::<f64>() + if i == j { 1.0 } else { 0.0 };
            }
        }
        let b: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let band = BandedSpd::from_dense(&a);
        let x = solve_linear_spd(&band, &b).unwrap();
        let ax = band.mul_vec(&x);
        let res: f64 = ax.iter().zip(&b).map(|(p, q)| (p - q).powi(2)).sum::<f64>().sqrt();
        let bn: f64 = b.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!(res <= 1e-10 * bn, "residual {res}");
    }

    #[test]
    fn tridiagonal_against_dense() {
        let n = 30;
        let mut a = vec![vec![0.0; n]; n];
        for i in 0..n {
            a[i][i] = 4.0;
            if i > 0 {
                a[i][i - 1] = -1.0;
                a[i - 1][i] = -1.0;
            }
        }
        let band = BandedSpd::from_dense(&a);
        assert_eq!(band.bandwidth(), 1);
        let b: Vec<f64> = (0..n).map(|i| i as f64).collect();
        let x = solve_linear_spd(&band, &b).unwrap();
        for i in 0..n {
            let r: f64 = (0..n).map(|j| a[i][j] * x[j]).sum::<f64>() - b[i];
            assert!(r.abs() < 1e-12);
        }
    }

    #[test]
    fn indefinite_fails() {
        let a = BandedSpd::from_dense(&[vec![1.0, 2.0], vec![2.0, 1.0]]);
        assert!(matches!(solve_linear_spd(&a, &[1.0, 1.0]), Err(Error::SolveFailure { .. })));
    }
}
