use super::banded::BandedSpd;

/// Row-compressed sparse matrix assembled one row at a time.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SparseRows {
    ncols: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

impl SparseRows {
    pub fn new(ncols: usize) -> Self {
        Self { ncols, row_ptr: vec![0], cols: Vec::new(), vals: Vec::new() }
    }

    pub fn nrows(&self) -> usize {
        self.row_ptr.len() - 1
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Append an entry to the row currently being built. Duplicate columns are summed on use.
    pub fn push(&mut self, col: usize, val: f64) {
        debug_assert!(col < self.ncols);
        if val != 0.0 {
            self.cols.push(col);
            self.vals.push(val);
        }
    }

    /// Close the row currently being built.
    pub fn finish_row(&mut self) {
        self.row_ptr.push(self.cols.len());
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let (a, b) = (self.row_ptr[i], self.row_ptr[i + 1]);
        self.cols[a..b].iter().copied().zip(self.vals[a..b].iter().copied())
    }

    /// Dense copy, for tests and small diagnostics.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut d = vec![vec![0.0; self.ncols]; self.nrows()];
        for (i, row) in d.iter_mut().enumerate() {
            for (j, v) in self.row(i) {
                row[j] += v;
            }
        }
        d
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.nrows()).map(|i| self.row(i).map(|(j, v)| v * x[j]).sum()).collect()
    }

    pub fn transpose_mul_vec(&self, r: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.ncols];
        for (i, &ri) in r.iter().enumerate() {
            if ri == 0.0 {
                continue;
            }
            for (j, v) in self.row(i) {
                out[j] += v * ri;
            }
        }
        out
    }

    /// Maximum distance between any two columns sharing a row.
    pub fn bandwidth(&self) -> usize {
        (0..self.nrows())
            .map(|i| {
                let (lo, hi) = self
                    .row(i)
                    .fold((usize::MAX, 0), |(lo, hi), (j, _)| (lo.min(j), hi.max(j)));
                if lo == usize::MAX {
                    0
                } else {
                    hi - lo
                }
            })
            .max()
            .unwrap_or(0)
    }

    /// Normal matrix `A^T A` in banded storage, with optional column scaling `A D`.
    pub fn normal_matrix(&self, scale: Option<&[f64]>) -> BandedSpd {
        let mut m = BandedSpd::zeros(self.ncols, self.bandwidth());
        self.add_normal_to(&mut m, scale);
        m
    }

    /// Accumulate `(A D)^T (A D)` into `m`, whose bandwidth must cover that of `A`.
    pub fn add_normal_to(&self, m: &mut BandedSpd, scale: Option<&[f64]>) {
        let mut entries: Vec<(usize, f64)> = Vec::new();
        for i in 0..self.nrows() {
            entries.clear();
            entries.extend(self.row(i).map(|(j, v)| match scale {
                Some(s) => (j, v * s[j]),
                None => (j, v),
            }));
            for &(a, va) in &entries {
                for &(b, vb) in &entries {
                    if b <= a {
                        m.add(a, b, va * vb);
                    }
                }
            }
        }
    }

    /// Euclidean norms of the columns.
    pub fn column_norms(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.ncols];
        for i in 0..self.nrows() {
            for (j, v) in self.row(i) {
                out[j] += v * v;
            }
        }
        out.iter_mut().for_each(|x| *x = x.sqrt());
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> SparseRows {
        let mut a = SparseRows::new(3);
        a.push(0, 1.0);
        a.push(1, 2.0);
        a.finish_row();
        a.push(1, -1.0);
        a.push(2, 3.0);
        a.finish_row();
        a.push(2, 1.0);
        a.push(2, 1.0);
        a.finish_row();
        a
    }

    #[test]
    fn products() {
        let a = sample();
        assert_eq!(a.mul_vec(&[1.0, 1.0, 1.0]), vec![3.0, 2.0, 2.0]);
        assert_eq!(a.transpose_mul_vec(&[1.0, 1.0, 1.0]), vec![1.0, 1.0, 5.0]);
        assert_eq!(a.bandwidth(), 1);
    }

    #[test]
    fn normal_matrix_matches_dense() {
        let a = sample();
        let d = a.to_dense();
        let n = a.normal_matrix(None);
        for i in 0..3 {
            for j in 0..3 {
                let e: f64 = (0..3).map(|k| d[k][i] * d[k][j]).sum();
                assert!((n.get(i, j) - e).abs() < 1e-15);
            }
        }
    }
}
