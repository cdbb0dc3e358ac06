//! Small dense real matrices and a cyclic-Jacobi symmetric eigensolver.
//!
//! Everything in this crate runs at desk scale (matrix orders well below
//! one hundred), where repeated Jacobi eigendecompositions are cheap and
//! keep the numerical core dependency-free.

use thiserror::Error;

/// Off-diagonal magnitude below which the Jacobi iteration stops.
pub const JACOBI_OFF_TOL: f64 = 1e-11;

/// Maximum number of cyclic Jacobi sweeps.
pub const JACOBI_MAX_SWEEPS: usize = 100;

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("Jacobi iteration did not converge: off-diagonal sum {off:.3e} after {JACOBI_MAX_SWEEPS} sweeps")]
    JacobiNoConvergence { off: f64 },
    #[error("ragged rows: row {row} has {got} entries, expected {expected}")]
    RaggedRows { row: usize, got: usize, expected: usize },
}

/// Dense row-major matrix of f64.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != c {
                return Err(LinalgError::RaggedRows { row: i, got: row.len(), expected: c });
            }
        }
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        Ok(m)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Largest |a_ij - a_ji|.
    pub fn symmetry_defect(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..self.rows {
            for j in (i + 1)..self.cols.min(self.rows) {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }

    /// Elementwise a + scale * b. Panics on shape mismatch.
    pub fn add_scaled(&self, scale: f64, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (o, b) in out.data.iter_mut().zip(other.data.iter()) {
            *o += scale * b;
        }
        out
    }
}

/// Eigendecomposition of a real symmetric matrix.
///
/// `values[k]` pairs with the k-th column of `vectors`. Unsorted.
pub struct SymEigen {
    pub values: Vec<f64>,
    pub vectors: Mat,
}

impl SymEigen {
    /// Eigenvalues and matching eigenvector columns, sorted descending.
    pub fn sorted_descending(self) -> SymEigen {
        let n = self.values.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| self.values[b].partial_cmp(&self.values[a]).unwrap());
        let values = order.iter().map(|&k| self.values[k]).collect();
        let mut vectors = Mat::zeros(n, n);
        for (new_col, &old_col) in order.iter().enumerate() {
            for i in 0..n {
                vectors.set(i, new_col, self.vectors.get(i, old_col));
            }
        }
        SymEigen { values, vectors }
    }
}

/// Cyclic Jacobi eigendecomposition of a symmetric matrix.
///
/// Rotations follow the stable symmetric-Schur formulas of Numerical
/// Recipes §11.1; the iteration stops once the sum of absolute
/// off-diagonal entries falls below [`JACOBI_OFF_TOL`]. Only the upper
/// triangle of the input is read.
pub fn jacobi_eigh(m: &Mat) -> Result<SymEigen, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare { rows: m.rows, cols: m.cols });
    }
    let n = m.rows;
    let mut a = m.clone();
    let mut v = Mat::identity(n);
    let mut d: Vec<f64> = (0..n).map(|i| a.get(i, i)).collect();
    let mut b = d.clone();
    let mut z = vec![0.0; n];

    if n <= 1 {
        return Ok(SymEigen { values: d, vectors: v });
    }

    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n - 1 {
            for q in p + 1..n {
                off += a.get(p, q).abs();
            }
        }
        if off < JACOBI_OFF_TOL {
            return Ok(SymEigen { values: d, vectors: v });
        }

        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a.get(p, q);
                if apq == 0.0 {
                    continue;
                }
                let h = d[q] - d[p];
                // tan of the rotation angle
                let t = if h.abs() <= f64::EPSILON * apq.abs() {
                    1.0
                } else {
                    let theta = 0.5 * h / apq;
                    let mut t = 1.0 / (theta.abs() + (1.0 + theta * theta).sqrt());
                    if theta < 0.0 {
                        t = -t;
                    }
                    t
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);
                let h = t * apq;
                z[p] -= h;
                z[q] += h;
                d[p] -= h;
                d[q] += h;
                a.set(p, q, 0.0);
                for j in 0..p {
                    let g = a.get(j, p);
                    let w = a.get(j, q);
                    a.set(j, p, g - s * (w + g * tau));
                    a.set(j, q, w + s * (g - w * tau));
                }
                for j in p + 1..q {
                    let g = a.get(p, j);
                    let w = a.get(j, q);
                    a.set(p, j, g - s * (w + g * tau));
                    a.set(j, q, w + s * (g - w * tau));
                }
                for j in q + 1..n {
                    let g = a.get(p, j);
                    let w = a.get(q, j);
                    a.set(p, j, g - s * (w + g * tau));
                    a.set(q, j, w + s * (g - w * tau));
                }
                for j in 0..n {
                    let g = v.get(j, p);
                    let w = v.get(j, q);
                    v.set(j, p, g - s * (w + g * tau));
                    v.set(j, q, w + s * (g - w * tau));
                }
            }
        }
        for p in 0..n {
            b[p] += z[p];
            d[p] = b[p];
            z[p] = 0.0;
        }
    }

    let mut off = 0.0;
    for p in 0..n - 1 {
        for q in p + 1..n {
            off += a.get(p, q).abs();
        }
    }
    Err(LinalgError::JacobiNoConvergence { off })
}

/// Compensated (Kahan) sum; keeps distribution-normalization checks stable.
pub fn kahan_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0;
    let mut carry = 0.0;
    for v in values {
        let y = v - carry;
        let t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    sum
}
