//! Dense square complex matrices and state-vector helpers.

use num_complex::Complex64;

/// Dense row-major square matrix over ℂ.
#[derive(Clone, Debug, PartialEq)]
pub struct CMat {
    dim: usize,
    data: Vec<Complex64>,
}

impl CMat {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![Complex64::ZERO; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, Complex64::ONE);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let dim = rows.len();
        let mut m = Self::zeros(dim);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), dim, "CMat::from_rows requires square input");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    /// Pauli X.
    pub fn pauli_x() -> Self {
        Self::from_rows(&[
            vec![Complex64::ZERO, Complex64::ONE],
            vec![Complex64::ONE, Complex64::ZERO],
        ])
    }

    /// Pauli Y.
    pub fn pauli_y() -> Self {
        Self::from_rows(&[
            vec![Complex64::ZERO, -Complex64::I],
            vec![Complex64::I, Complex64::ZERO],
        ])
    }

    /// Pauli Z.
    pub fn pauli_z() -> Self {
        Self::from_rows(&[
            vec![Complex64::ONE, Complex64::ZERO],
            vec![Complex64::ZERO, -Complex64::ONE],
        ])
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.dim + j] = v;
    }

    pub fn matmul(&self, other: &CMat) -> CMat {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut out = CMat::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == Complex64::ZERO {
                    continue;
                }
                for j in 0..n {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim);
        let n = self.dim;
        let mut out = vec![Complex64::ZERO; n];
        for i in 0..n {
            let mut acc = Complex64::ZERO;
            for j in 0..n {
                acc += self.get(i, j) * v[j];
            }
            out[i] = acc;
        }
        out
    }

    pub fn add(&self, other: &CMat) -> CMat {
        assert_eq!(self.dim, other.dim);
        let mut out = self.clone();
        for (o, b) in out.data.iter_mut().zip(other.data.iter()) {
            *o += b;
        }
        out
    }

    pub fn scale(&self, factor: Complex64) -> CMat {
        let mut out = self.clone();
        for o in out.data.iter_mut() {
            *o *= factor;
        }
        out
    }

    /// Entrywise transpose (no conjugation).
    pub fn transpose(&self) -> CMat {
        let n = self.dim;
        let mut out = CMat::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CMat {
        let n = self.dim;
        let mut out = CMat::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    pub fn kron(&self, other: &CMat) -> CMat {
        let (a, b) = (self.dim, other.dim);
        let mut out = CMat::zeros(a * b);
        for i in 0..a {
            for j in 0..a {
                let f = self.get(i, j);
                if f == Complex64::ZERO {
                    continue;
                }
                for k in 0..b {
                    for l in 0..b {
                        out.set(i * b + k, j * b + l, f * other.get(k, l));
                    }
                }
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Largest |m_ij - conj(m_ji)|.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..self.dim {
            for j in i..self.dim {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    /// Largest |(M·M - I)_ij|; zero for an involution.
    pub fn involution_defect(&self) -> f64 {
        let sq = self.matmul(self);
        let mut worst = 0.0_f64;
        for i in 0..self.dim {
            for j in 0..self.dim {
                let expect = if i == j { Complex64::ONE } else { Complex64::ZERO };
                worst = worst.max((sq.get(i, j) - expect).norm());
            }
        }
        worst
    }

    /// Largest |(U†U - I)_ij|.
    pub fn unitarity_defect(&self) -> f64 {
        let prod = self.adjoint().matmul(self);
        let mut worst = 0.0_f64;
        for i in 0..self.dim {
            for j in 0..self.dim {
                let expect = if i == j { Complex64::ONE } else { Complex64::ZERO };
                worst = worst.max((prod.get(i, j) - expect).norm());
            }
        }
        worst
    }
}

/// ⟨x, y⟩ = Σ conj(x_i) y_i.
pub fn vec_inner(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    assert_eq!(x.len(), y.len());
    x.iter().zip(y.iter()).map(|(a, b)| a.conj() * b).sum()
}

pub fn vec_norm(x: &[Complex64]) -> f64 {
    x.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

/// Applies A ⊗ B to a state on ℂ^d ⊗ ℂ^d without forming the d²×d² matrix.
///
/// With the state reshaped to a d×d amplitude grid M (first factor indexes
/// rows), (A ⊗ B) ψ reshapes to A · M · Bᵀ.
pub fn apply_pair(a: &CMat, b: &CMat, psi: &[Complex64]) -> Vec<Complex64> {
    let d = a.dim();
    assert_eq!(b.dim(), d);
    assert_eq!(psi.len(), d * d);
    // T = A · M
    let mut t = vec![Complex64::ZERO; d * d];
    for i in 0..d {
        for k in 0..d {
            let f = a.get(i, k);
            if f == Complex64::ZERO {
                continue;
            }
            for j in 0..d {
                t[i * d + j] += f * psi[k * d + j];
            }
        }
    }
    // out = T · Bᵀ, i.e. out[i][j] = Σ_l T[i][l] · B[j][l]
    let mut out = vec![Complex64::ZERO; d * d];
    for i in 0..d {
        for j in 0..d {
            let mut acc = Complex64::ZERO;
            for l in 0..d {
                acc += t[i * d + l] * b.get(j, l);
            }
            out[i * d + j] = acc;
        }
    }
    out
}
