//! Conversion between unit-vector strategies and entangled observable
//! strategies, in both directions.
//!
//! Vectors become observables by contracting them against anticommuting
//! generators on 2^⌈N/2⌉ dimensions, with Bob's generators transposed so
//! that on the maximally entangled state ⟨Ψ| A ⊗ B |Ψ⟩ = tr(A·Bᵀ)/d turns
//! generator trace-orthonormality into exact inner-product reproduction.
//! Observables become vectors through the moment matrix of their pairwise
//! products, projected to the PSD cone and factorized.

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::complex::{apply_pair, vec_inner, vec_norm, CMat};
use crate::gram::VectorStrategy;
use crate::linalg::{jacobi_eigh, LinalgError, Mat};

/// Hermiticity tolerance for observables.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Tolerance on M·M = I for observables.
pub const INVOLUTION_TOL: f64 = 1e-9;

/// Unit-norm tolerance for shared states.
pub const STATE_NORM_TOL: f64 = 1e-10;

/// Most generators the Clifford construction will build (dimension 2^10).
pub const GENERATOR_LIMIT: usize = 20;

/// Eigenvalues of a moment matrix below this are modeling errors, not noise.
pub const MOMENT_PSD_FLOOR: f64 = -1e-6;

#[derive(Debug, Error)]
pub enum TsirelsonError {
    #[error("{n} generators exceed the guard of {GENERATOR_LIMIT}")]
    DimensionGuardExceeded { n: usize },
    #[error("{side} vector {index} has norm {norm}, expected 1")]
    NonUnitVector { side: &'static str, index: usize, norm: f64 },
    #[error("moment matrix is not PSD: min eigenvalue {min_eigenvalue:.3e}")]
    MomentMatrixNotPSD { min_eigenvalue: f64 },
    #[error("shared state has norm {norm}, expected 1 within {STATE_NORM_TOL:e}")]
    NonUnitState { norm: f64 },
    #[error("matrix is not Hermitian: defect {defect:.3e}")]
    NotHermitian { defect: f64 },
    #[error("matrix does not square to the identity: defect {defect:.3e}")]
    NotInvolution { defect: f64 },
    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: String },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Hermitian matrix squaring to the identity (±1 eigenvalues); one binary
/// projective measurement.
#[derive(Clone, Debug)]
pub struct Observable {
    pub dim: usize,
    pub matrix: CMat,
}

impl Observable {
    pub fn new(matrix: CMat) -> Result<Self, TsirelsonError> {
        let obs = Observable { dim: matrix.dim(), matrix };
        obs.validate()?;
        Ok(obs)
    }

    pub fn validate(&self) -> Result<(), TsirelsonError> {
        if self.matrix.dim() != self.dim {
            return Err(TsirelsonError::DimensionMismatch {
                context: format!("matrix dim {} != declared dim {}", self.matrix.dim(), self.dim),
            });
        }
        let h = self.matrix.hermitian_defect();
        if h > HERMITIAN_TOL {
            return Err(TsirelsonError::NotHermitian { defect: h });
        }
        let i = self.matrix.involution_defect();
        if i > INVOLUTION_TOL {
            return Err(TsirelsonError::NotInvolution { defect: i });
        }
        Ok(())
    }
}

/// Shared entangled state with one observable per question on each side.
/// `psi` lives on ℂ^dim ⊗ ℂ^dim in row-major order (Alice's index first).
#[derive(Clone, Debug)]
pub struct EntangledStrategy {
    pub dim: usize,
    pub psi: Vec<Complex64>,
    pub alice_observables: Vec<Observable>,
    pub bob_observables: Vec<Observable>,
}

impl EntangledStrategy {
    pub fn s_count(&self) -> usize {
        self.alice_observables.len()
    }

    pub fn t_count(&self) -> usize {
        self.bob_observables.len()
    }

    pub fn validate(&self) -> Result<(), TsirelsonError> {
        if self.psi.len() != self.dim * self.dim {
            return Err(TsirelsonError::DimensionMismatch {
                context: format!(
                    "state has {} amplitudes, expected dim² = {}",
                    self.psi.len(),
                    self.dim * self.dim
                ),
            });
        }
        let norm = vec_norm(&self.psi);
        if (norm - 1.0).abs() > STATE_NORM_TOL {
            return Err(TsirelsonError::NonUnitState { norm });
        }
        for obs in self.alice_observables.iter().chain(self.bob_observables.iter()) {
            if obs.dim != self.dim {
                return Err(TsirelsonError::DimensionMismatch {
                    context: format!("observable dim {} != state dim {}", obs.dim, self.dim),
                });
            }
            obs.validate()?;
        }
        Ok(())
    }

    /// ⟨Ψ| X_s ⊗ Y_t |Ψ⟩, real up to floating-point noise.
    pub fn correlation(&self, s: usize, t: usize) -> f64 {
        let moved = apply_pair(
            &self.alice_observables[s].matrix,
            &self.bob_observables[t].matrix,
            &self.psi,
        );
        vec_inner(&self.psi, &moved).re
    }
}

/// |Ψ⟩ = Σ_j |j⟩|j⟩ / √dim.
pub fn maximally_entangled_state(dim: usize) -> Vec<Complex64> {
    let mut psi = vec![Complex64::ZERO; dim * dim];
    let amp = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
    for j in 0..dim {
        psi[j * dim + j] = amp;
    }
    psi
}

/// First `n` anticommuting generators on 2^⌈n/2⌉ dimensions.
///
/// Jordan-Wigner products of Pauli factors: generator 2k−1 is
/// Z^⊗(k−1) ⊗ X ⊗ I…, generator 2k is Z^⊗(k−1) ⊗ Y ⊗ I…. Each squares to
/// the identity, each pair anticommutes, and tr(γ_i γ_j)/d = δ_ij.
pub fn clifford_generators(n: usize) -> Result<Vec<Observable>, TsirelsonError> {
    if n == 0 || n > GENERATOR_LIMIT {
        return Err(TsirelsonError::DimensionGuardExceeded { n });
    }
    let qubits = n.div_ceil(2);
    let build = |position: usize, middle: CMat| -> CMat {
        let mut m = CMat::identity(1);
        for q in 0..qubits {
            let factor = if q < position {
                CMat::pauli_z()
            } else if q == position {
                middle.clone()
            } else {
                CMat::identity(2)
            };
            m = m.kron(&factor);
        }
        m
    };
    let mut generators = Vec::with_capacity(n);
    for k in 0..qubits {
        generators.push(build(k, CMat::pauli_x()));
        if generators.len() == n {
            break;
        }
        generators.push(build(k, CMat::pauli_y()));
        if generators.len() == n {
            break;
        }
    }
    generators.into_iter().map(Observable::new).collect()
}

/// Realizes a vector strategy as observables on a maximally entangled
/// state of local dimension 2^⌈N/2⌉: X_s = Σ_i (x_s)_i γ_i and
/// Y_t = Σ_i (y_t)_i γ_iᵀ, giving ⟨Ψ| X_s ⊗ Y_t |Ψ⟩ = ⟨x_s, y_t⟩.
pub fn observables_from_vectors(
    strategy: &VectorStrategy,
) -> Result<EntangledStrategy, TsirelsonError> {
    let n = strategy.n_dim;
    for (side, vectors) in [("alice", &strategy.x_vectors), ("bob", &strategy.y_vectors)] {
        for (index, v) in vectors.iter().enumerate() {
            if v.len() != n {
                return Err(TsirelsonError::DimensionMismatch {
                    context: format!("{side} vector {index} has {} entries, expected {n}", v.len()),
                });
            }
            let norm = v.iter().map(|e| e * e).sum::<f64>().sqrt();
            if (norm - 1.0).abs() > crate::gram::UNIT_NORM_TOL {
                return Err(TsirelsonError::NonUnitVector { side, index, norm });
            }
        }
    }
    let generators = clifford_generators(n)?;
    let dim = generators[0].dim;
    let combine = |coeffs: &[f64], transpose: bool| -> Result<Observable, TsirelsonError> {
        let mut m = CMat::zeros(dim);
        for (c, g) in coeffs.iter().zip(generators.iter()) {
            let factor = if transpose { g.matrix.transpose() } else { g.matrix.clone() };
            m = m.add(&factor.scale(Complex64::new(*c, 0.0)));
        }
        Observable::new(m)
    };
    let alice_observables = strategy
        .x_vectors
        .iter()
        .map(|x| combine(x, false))
        .collect::<Result<Vec<_>, _>>()?;
    let bob_observables = strategy
        .y_vectors
        .iter()
        .map(|y| combine(y, true))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(EntangledStrategy {
        dim,
        psi: maximally_entangled_state(dim),
        alice_observables,
        bob_observables,
    })
}

/// Recovers real unit vectors whose inner products reproduce the
/// strategy's cross correlations.
///
/// Builds the moment matrix of Re⟨Ψ| ·· |Ψ⟩ over both observable
/// families, clips floating-point negativity, and factorizes. The
/// returned dimension is |S|+|T|; only the Alice-Bob cross block is
/// guaranteed, to 1e-6.
pub fn vectors_from_observables(
    strategy: &EntangledStrategy,
) -> Result<VectorStrategy, TsirelsonError> {
    strategy.validate()?;
    let norm = vec_norm(&strategy.psi);
    if (norm - 1.0).abs() > STATE_NORM_TOL {
        return Err(TsirelsonError::NonUnitState { norm });
    }
    let s_count = strategy.s_count();
    let t_count = strategy.t_count();
    let order = s_count + t_count;
    let identity = CMat::identity(strategy.dim);

    // Moment vectors: (X_s ⊗ I)|Ψ⟩ then (I ⊗ Y_t)|Ψ⟩. Their complex Gram
    // matrix has unit diagonal, our moment matrix is its real part.
    let mut moved: Vec<Vec<Complex64>> = Vec::with_capacity(order);
    for obs in &strategy.alice_observables {
        moved.push(apply_pair(&obs.matrix, &identity, &strategy.psi));
    }
    for obs in &strategy.bob_observables {
        moved.push(apply_pair(&identity, &obs.matrix, &strategy.psi));
    }
    let mut moment = Mat::zeros(order, order);
    for i in 0..order {
        for j in i..order {
            let value = vec_inner(&moved[i], &moved[j]).re;
            moment.set(i, j, value);
            moment.set(j, i, value);
        }
    }

    let eig = jacobi_eigh(&moment)?;
    let min_eigenvalue = eig.values.iter().copied().fold(f64::INFINITY, f64::min);
    if min_eigenvalue < MOMENT_PSD_FLOOR {
        return Err(TsirelsonError::MomentMatrixNotPSD { min_eigenvalue });
    }
    let factor: Vec<f64> = eig.values.iter().map(|&l| l.max(0.0).sqrt()).collect();
    let mut rows: Vec<Vec<f64>> = (0..order)
        .map(|i| (0..order).map(|k| factor[k] * eig.vectors.get(i, k)).collect())
        .collect();
    for row in rows.iter_mut() {
        let nrm = row.iter().map(|e| e * e).sum::<f64>().sqrt();
        if nrm > 1e-12 {
            row.iter_mut().for_each(|e| *e /= nrm);
        } else {
            row[0] = 1.0;
        }
    }
    let y_vectors = rows.split_off(s_count);
    Ok(VectorStrategy { n_dim: order, x_vectors: rows, y_vectors })
}

// Wire format: psi as [re, im] pairs, observables as row-major [re, im]
// matrices.
#[derive(Serialize, Deserialize)]
struct EntangledStrategyWire {
    dim: usize,
    psi: Vec<[f64; 2]>,
    alice_observables: Vec<Vec<[f64; 2]>>,
    bob_observables: Vec<Vec<[f64; 2]>>,
}

impl Serialize for EntangledStrategy {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let pack_matrix = |m: &CMat| -> Vec<[f64; 2]> {
            let d = m.dim();
            (0..d * d).map(|k| {
                let v = m.get(k / d, k % d);
                [v.re, v.im]
            }).collect()
        };
        let wire = EntangledStrategyWire {
            dim: self.dim,
            psi: self.psi.iter().map(|a| [a.re, a.im]).collect(),
            alice_observables: self.alice_observables.iter().map(|o| pack_matrix(&o.matrix)).collect(),
            bob_observables: self.bob_observables.iter().map(|o| pack_matrix(&o.matrix)).collect(),
        };
        wire.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for EntangledStrategy {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let wire = EntangledStrategyWire::deserialize(deserializer)?;
        let dim = wire.dim;
        if wire.psi.len() != dim * dim {
            return Err(D::Error::custom(format!(
                "psi has {} amplitudes, expected dim² = {}",
                wire.psi.len(),
                dim * dim
            )));
        }
        let unpack_matrix = |flat: &Vec<[f64; 2]>| -> Result<CMat, D::Error> {
            if flat.len() != dim * dim {
                return Err(D::Error::custom(format!(
                    "observable has {} entries, expected dim² = {}",
                    flat.len(),
                    dim * dim
                )));
            }
            let mut m = CMat::zeros(dim);
            for (k, &[re, im]) in flat.iter().enumerate() {
                m.set(k / dim, k % dim, Complex64::new(re, im));
            }
            Ok(m)
        };
        let unpack_side = |side: &Vec<Vec<[f64; 2]>>| -> Result<Vec<Observable>, D::Error> {
            side.iter()
                .map(|flat| {
                    let matrix = unpack_matrix(flat)?;
                    Ok(Observable { dim, matrix })
                })
                .collect()
        };
        Ok(EntangledStrategy {
            dim,
            psi: wire.psi.iter().map(|&[re, im]| Complex64::new(re, im)).collect(),
            alice_observables: unpack_side(&wire.alice_observables)?,
            bob_observables: unpack_side(&wire.bob_observables)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn chsh_optimal_vectors() -> VectorStrategy {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        VectorStrategy {
            n_dim: 2,
            x_vectors: vec![vec![1.0, 0.0], vec![0.0, 1.0]],
            y_vectors: vec![vec![r, r], vec![r, -r]],
        }
    }

    #[test]
    fn single_generator_is_pauli_x() {
        let g = clifford_generators(1).unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g[0].dim, 2);
        let x = CMat::pauli_x();
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(g[0].matrix.get(i, j), x.get(i, j));
            }
        }
    }

    #[test]
    fn two_generators_anticommute_on_dim_two() {
        let g = clifford_generators(2).unwrap();
        assert_eq!(g[0].dim, 2);
        let anti = g[0].matrix.matmul(&g[1].matrix).add(&g[1].matrix.matmul(&g[0].matrix));
        for i in 0..2 {
            for j in 0..2 {
                assert!(anti.get(i, j).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn generator_family_relations() {
        for n in [3usize, 4, 5, 7] {
            let g = clifford_generators(n).unwrap();
            let d = g[0].dim;
            assert_eq!(d, 1 << n.div_ceil(2));
            for i in 0..n {
                g[i].validate().unwrap();
                for j in 0..n {
                    let anti = g[i].matrix.matmul(&g[j].matrix).add(&g[j].matrix.matmul(&g[i].matrix));
                    let trace_product = g[i].matrix.matmul(&g[j].matrix).trace() / d as f64;
                    if i == j {
                        assert!((trace_product - Complex64::ONE).norm() < 1e-12);
                    } else {
                        assert!(trace_product.norm() < 1e-12);
                        for r in 0..d {
                            for c in 0..d {
                                assert!(anti.get(r, c).norm() < 1e-12, "n={n} pair ({i},{j})");
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn generator_guard() {
        assert!(matches!(clifford_generators(0), Err(TsirelsonError::DimensionGuardExceeded { .. })));
        assert!(matches!(clifford_generators(21), Err(TsirelsonError::DimensionGuardExceeded { .. })));
    }

    #[test]
    fn transposed_generators_stay_observables() {
        for g in clifford_generators(4).unwrap() {
            Observable::new(g.matrix.transpose()).unwrap();
        }
    }

    #[test]
    fn identical_unit_vectors_give_pauli_x_pair() {
        let strategy = VectorStrategy {
            n_dim: 1,
            x_vectors: vec![vec![1.0]],
            y_vectors: vec![vec![1.0]],
        };
        let ent = observables_from_vectors(&strategy).unwrap();
        assert_eq!(ent.dim, 2);
        let x = CMat::pauli_x();
        for obs in [&ent.alice_observables[0], &ent.bob_observables[0]] {
            for i in 0..2 {
                for j in 0..2 {
                    assert!((obs.matrix.get(i, j) - x.get(i, j)).norm() < 1e-15);
                }
            }
        }
        assert!((ent.correlation(0, 0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn chsh_vectors_reproduce_correlations() {
        let strategy = chsh_optimal_vectors();
        let ent = observables_from_vectors(&strategy).unwrap();
        ent.validate().unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let expected = [[r, r], [r, -r]];
        for s in 0..2 {
            for t in 0..2 {
                assert!((ent.correlation(s, t) - expected[s][t]).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn orthogonal_vectors_give_zero_correlation() {
        let strategy = VectorStrategy {
            n_dim: 2,
            x_vectors: vec![vec![1.0, 0.0]],
            y_vectors: vec![vec![0.0, 1.0]],
        };
        let ent = observables_from_vectors(&strategy).unwrap();
        assert!(ent.correlation(0, 0).abs() < 1e-12);
    }

    #[test]
    fn non_unit_vector_rejected() {
        let strategy = VectorStrategy {
            n_dim: 2,
            x_vectors: vec![vec![0.5, 0.5]],
            y_vectors: vec![vec![1.0, 0.0]],
        };
        assert!(matches!(
            observables_from_vectors(&strategy),
            Err(TsirelsonError::NonUnitVector { .. })
        ));
    }

    #[test]
    fn roundtrip_recovers_cross_block() {
        let strategy = chsh_optimal_vectors();
        let ent = observables_from_vectors(&strategy).unwrap();
        let recovered = vectors_from_observables(&ent).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let expected = [[r, r], [r, -r]];
        for s in 0..2 {
            for t in 0..2 {
                let ip: f64 = recovered.x_vectors[s]
                    .iter()
                    .zip(recovered.y_vectors[t].iter())
                    .map(|(a, b)| a * b)
                    .sum();
                assert!((ip - expected[s][t]).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn product_state_z_measurements_fully_correlated() {
        let mut psi = vec![Complex64::ZERO; 4];
        psi[0] = Complex64::ONE; // |0⟩|0⟩
        let z = Observable::new(CMat::pauli_z()).unwrap();
        let strategy = EntangledStrategy {
            dim: 2,
            psi,
            alice_observables: vec![z.clone()],
            bob_observables: vec![z],
        };
        let recovered = vectors_from_observables(&strategy).unwrap();
        let ip: f64 = recovered.x_vectors[0]
            .iter()
            .zip(recovered.y_vectors[0].iter())
            .map(|(a, b)| a * b)
            .sum();
        assert!((ip - 1.0).abs() < 1e-9);
    }

    #[test]
    fn anticommuting_pair_on_bell_state_uncorrelated() {
        let strategy = EntangledStrategy {
            dim: 2,
            psi: maximally_entangled_state(2),
            alice_observables: vec![Observable::new(CMat::pauli_x()).unwrap()],
            bob_observables: vec![Observable::new(CMat::pauli_z()).unwrap()],
        };
        let recovered = vectors_from_observables(&strategy).unwrap();
        let ip: f64 = recovered.x_vectors[0]
            .iter()
            .zip(recovered.y_vectors[0].iter())
            .map(|(a, b)| a * b)
            .sum();
        assert!(ip.abs() < 1e-9);
    }

    #[test]
    fn correlations_bounded_by_one() {
        let mut rng = SplitMix64::new(40);
        for _ in 0..10 {
            let strategy = VectorStrategy::random(3, 2, 3, &mut rng);
            let ent = observables_from_vectors(&strategy).unwrap();
            for s in 0..3 {
                for t in 0..2 {
                    assert!(ent.correlation(s, t).abs() <= 1.0 + 1e-10);
                }
            }
        }
    }

    #[test]
    fn serde_roundtrip_preserves_strategy() {
        let ent = observables_from_vectors(&chsh_optimal_vectors()).unwrap();
        let json = serde_json::to_string(&ent).unwrap();
        let back: EntangledStrategy = serde_json::from_str(&json).unwrap();
        back.validate().unwrap();
        assert_eq!(back.dim, ent.dim);
        for s in 0..2 {
            for t in 0..2 {
                assert!((back.correlation(s, t) - ent.correlation(s, t)).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn invalid_observable_rejected() {
        let mut m = CMat::identity(2);
        m.set(0, 1, Complex64::new(0.3, 0.0));
        assert!(matches!(Observable::new(m), Err(TsirelsonError::NotHermitian { .. })));
        let scaled = CMat::identity(2).scale(Complex64::new(2.0, 0.0));
        assert!(matches!(Observable::new(scaled), Err(TsirelsonError::NotInvolution { .. })));
    }
}
