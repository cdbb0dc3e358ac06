//! Quantum value of an XOR game via its Gram-matrix relaxation.
//!
//! The bias of a game is the maximum of Σ cost(s,t)·⟨x_s, y_t⟩ over unit
//! vectors, and the quantum value is the trivial value plus half that
//! maximum. Lifting the vectors to their Gram matrix turns the problem
//! into maximizing a linear functional over positive semidefinite
//! matrices with unit diagonal, which projected gradient ascent handles
//! well at this scale: step along the embedded cost, project back to the
//! PSD cone, rescale the diagonal, repeat. Rounding back to vectors and a
//! monotone alternating polish finish each restart.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::game::{trivial_value, cost_matrix, ClassicalStrategy, GameError, XorGame};
use crate::linalg::{jacobi_eigh, LinalgError, Mat};
use crate::rng::SplitMix64;

/// Unit-norm tolerance for strategy vectors.
pub const UNIT_NORM_TOL: f64 = 1e-9;

/// Symmetry tolerance required of a Gram matrix.
pub const GRAM_SYMMETRY_TOL: f64 = 1e-12;

/// Symmetry tolerance accepted by the PSD projection.
pub const PSD_INPUT_SYMMETRY_TOL: f64 = 1e-10;

/// Most negative eigenvalue a Gram matrix may carry before it is rejected.
pub const GRAM_MIN_EIGENVALUE: f64 = -1e-8;

/// Diagonal floor applied before the unit-diagonal rescale.
pub const DIAGONAL_FLOOR: f64 = 1e-12;

/// The polish phase runs its gain threshold four orders below the
/// configured objective tolerance: stopping at `tol` leaves a geometric
/// tail of the same magnitude, which the reported value cannot afford.
const POLISH_GAIN_FACTOR: f64 = 1e-4;

/// Iteration cap for the polish phase. Sweeps are vector-space only and
/// cost next to nothing compared to a projection step.
const POLISH_MAX_SWEEPS: usize = 100_000;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: String },
    #[error("matrix is not symmetric: defect {defect:.3e}")]
    NotSymmetric { defect: f64 },
    #[error("matrix is not positive semidefinite: min eigenvalue {min_eigenvalue:.3e}")]
    NotPSD { min_eigenvalue: f64 },
    #[error("{side} vector {index} has norm {norm}, expected 1 within {UNIT_NORM_TOL:e}")]
    NonUnitVector { side: &'static str, index: usize, norm: f64 },
    #[error("solver did not converge; best value so far {}", best.value)]
    DidNotConverge { best: Box<QuantumSolve> },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Game(#[from] GameError),
}

/// Unit vectors realizing a correlation matrix: one per question on each
/// side, all in ℝ^n_dim.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VectorStrategy {
    pub n_dim: usize,
    pub x_vectors: Vec<Vec<f64>>,
    pub y_vectors: Vec<Vec<f64>>,
}

impl VectorStrategy {
    /// Embeds deterministic answers as ±1 scalars in ℝ¹.
    pub fn from_classical(strategy: &ClassicalStrategy) -> Self {
        let sign = |bit: u8| if bit == 0 { vec![1.0] } else { vec![-1.0] };
        VectorStrategy {
            n_dim: 1,
            x_vectors: strategy.alice.iter().map(|&b| sign(b)).collect(),
            y_vectors: strategy.bob.iter().map(|&b| sign(b)).collect(),
        }
    }

    /// Seeded random unit vectors; test and CLI helper.
    pub fn random(s_count: usize, t_count: usize, n_dim: usize, rng: &mut SplitMix64) -> Self {
        let mut draw = |count: usize| -> Vec<Vec<f64>> {
            (0..count)
                .map(|_| {
                    let mut v: Vec<f64> = (0..n_dim).map(|_| rng.next_normal()).collect();
                    let norm = norm(&v);
                    if norm < 1e-12 {
                        v[0] = 1.0;
                    } else {
                        v.iter_mut().for_each(|e| *e /= norm);
                    }
                    v
                })
                .collect()
        };
        let x_vectors = draw(s_count);
        let y_vectors = draw(t_count);
        VectorStrategy { n_dim, x_vectors, y_vectors }
    }

    pub fn s_count(&self) -> usize {
        self.x_vectors.len()
    }

    pub fn t_count(&self) -> usize {
        self.y_vectors.len()
    }

    pub fn validate(&self) -> Result<(), SolverError> {
        for (side, vectors) in [("alice", &self.x_vectors), ("bob", &self.y_vectors)] {
            for (index, v) in vectors.iter().enumerate() {
                if v.len() != self.n_dim {
                    return Err(SolverError::DimensionMismatch {
                        context: format!(
                            "{side} vector {index} has {} entries, expected n_dim = {}",
                            v.len(),
                            self.n_dim
                        ),
                    });
                }
                let norm = norm(v);
                if (norm - 1.0).abs() > UNIT_NORM_TOL {
                    return Err(SolverError::NonUnitVector { side, index, norm });
                }
            }
        }
        Ok(())
    }
}

/// Symmetric PSD matrix with unit diagonal; rows index Alice's questions
/// first, then Bob's.
#[derive(Clone, Debug)]
pub struct GramMatrix {
    pub order: usize,
    pub entries: Mat,
}

impl GramMatrix {
    pub fn validate(&self) -> Result<(), SolverError> {
        if self.entries.rows() != self.order || self.entries.cols() != self.order {
            return Err(SolverError::DimensionMismatch {
                context: format!(
                    "gram matrix is {}x{}, expected order {}",
                    self.entries.rows(),
                    self.entries.cols(),
                    self.order
                ),
            });
        }
        let defect = self.entries.symmetry_defect();
        if defect > GRAM_SYMMETRY_TOL {
            return Err(SolverError::NotSymmetric { defect });
        }
        for i in 0..self.order {
            if (self.entries.get(i, i) - 1.0).abs() > 1e-6 {
                return Err(SolverError::DimensionMismatch {
                    context: format!("diagonal entry {i} is {}, expected 1", self.entries.get(i, i)),
                });
            }
        }
        let eig = jacobi_eigh(&self.entries)?;
        let min_eigenvalue = eig.values.iter().copied().fold(f64::INFINITY, f64::min);
        if min_eigenvalue < GRAM_MIN_EIGENVALUE {
            return Err(SolverError::NotPSD { min_eigenvalue });
        }
        Ok(())
    }
}

/// Solver knobs. Restart seeds derive from `seed` through a SplitMix64
/// stream, so runs are reproducible across platforms.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SolverConfig {
    pub seed: u64,
    pub restarts: usize,
    pub max_iters: usize,
    pub tol: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { seed: 0, restarts: 8, max_iters: 5000, tol: 1e-9 }
    }
}

impl SolverConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self { seed, ..Self::default() }
    }
}

/// Result of a quantum-value solve, including enough bookkeeping to make
/// reports reproducible.
#[derive(Clone, Debug)]
pub struct QuantumSolve {
    pub value: f64,
    pub strategy: VectorStrategy,
    pub iterations: u64,
    pub best_restart: usize,
}

/// Outcome of a bias maximization; `converged` reflects the winning restart.
#[derive(Clone, Debug)]
pub struct BiasSolve {
    pub bias: f64,
    pub strategy: VectorStrategy,
    pub iterations: u64,
    pub best_restart: usize,
    pub converged: bool,
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

/// Σ_{s,t} cost(s,t) · ⟨x_s, y_t⟩.
pub fn bias_objective(cost: &Mat, strategy: &VectorStrategy) -> Result<f64, SolverError> {
    if cost.rows() != strategy.s_count() || cost.cols() != strategy.t_count() {
        return Err(SolverError::DimensionMismatch {
            context: format!(
                "cost is {}x{} but strategy has {}|{} vectors",
                cost.rows(),
                cost.cols(),
                strategy.s_count(),
                strategy.t_count()
            ),
        });
    }
    for v in strategy.x_vectors.iter().chain(strategy.y_vectors.iter()) {
        if v.len() != strategy.n_dim {
            return Err(SolverError::DimensionMismatch {
                context: format!("vector has {} entries, expected n_dim = {}", v.len(), strategy.n_dim),
            });
        }
    }
    let mut total = 0.0;
    for s in 0..cost.rows() {
        for t in 0..cost.cols() {
            total += cost.get(s, t) * dot(&strategy.x_vectors[s], &strategy.y_vectors[t]);
        }
    }
    Ok(total)
}

/// Frobenius-nearest positive semidefinite matrix: eigendecompose, clip
/// negative eigenvalues to zero, recompose.
pub fn project_psd(m: &Mat) -> Result<Mat, SolverError> {
    let defect = m.symmetry_defect();
    if !m.is_square() || defect > PSD_INPUT_SYMMETRY_TOL {
        return Err(SolverError::NotSymmetric { defect });
    }
    let eig = jacobi_eigh(m)?;
    let n = m.rows();
    let mut out = Mat::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let mut sum = 0.0;
            for k in 0..n {
                let lambda = eig.values[k].max(0.0);
                if lambda > 0.0 {
                    sum += lambda * eig.vectors.get(i, k) * eig.vectors.get(j, k);
                }
            }
            out.set(i, j, sum);
            out.set(j, i, sum);
        }
    }
    Ok(out)
}

/// Orthonormal basis of size `k` whose leading vectors span the inputs.
/// Rank deficits are completed from the standard basis.
fn orthonormal_basis(vectors: &[Vec<f64>], k: usize, ambient: usize) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(k);
    let push_residual = |candidate: &[f64], basis: &mut Vec<Vec<f64>>| {
        let mut r = candidate.to_vec();
        for b in basis.iter() {
            let c = dot(b, &r);
            for (ri, bi) in r.iter_mut().zip(b.iter()) {
                *ri -= c * bi;
            }
        }
        let nrm = norm(&r);
        if nrm > 1e-10 {
            r.iter_mut().for_each(|e| *e /= nrm);
            basis.push(r);
        }
    };
    for v in vectors {
        if basis.len() == k {
            break;
        }
        push_residual(v, &mut basis);
    }
    for axis in 0..ambient {
        if basis.len() == k {
            break;
        }
        let mut e = vec![0.0; ambient];
        e[axis] = 1.0;
        push_residual(&e, &mut basis);
    }
    basis
}

/// Rounds a Gram matrix to unit vectors in ℝ^min(|S|,|T|).
///
/// The eigendecomposition yields one vector per row in the full order;
/// the smaller side's vectors are kept, the larger side's are projected
/// onto their span and renormalized. A projection that vanishes maps to
/// the first basis vector of the span.
pub fn extract_vectors(
    gram: &GramMatrix,
    s_count: usize,
    t_count: usize,
) -> Result<VectorStrategy, SolverError> {
    let order = s_count + t_count;
    if gram.order != order || gram.entries.rows() != order || gram.entries.cols() != order {
        return Err(SolverError::DimensionMismatch {
            context: format!("gram order {} does not match {s_count}+{t_count}", gram.order),
        });
    }
    let eig = jacobi_eigh(&gram.entries)?;
    let min_eigenvalue = eig.values.iter().copied().fold(f64::INFINITY, f64::min);
    if min_eigenvalue < GRAM_MIN_EIGENVALUE {
        return Err(SolverError::NotPSD { min_eigenvalue });
    }
    let factor: Vec<f64> = eig.values.iter().map(|&l| l.max(0.0).sqrt()).collect();
    let row_vector = |i: usize| -> Vec<f64> {
        (0..order).map(|k| factor[k] * eig.vectors.get(i, k)).collect()
    };
    let alice_raw: Vec<Vec<f64>> = (0..s_count).map(row_vector).collect();
    let bob_raw: Vec<Vec<f64>> = (s_count..order).map(row_vector).collect();

    let n_dim = s_count.min(t_count);
    let (kept_raw, projected_raw, alice_kept) = if s_count <= t_count {
        (&alice_raw, &bob_raw, true)
    } else {
        (&bob_raw, &alice_raw, false)
    };
    let basis = orthonormal_basis(kept_raw, n_dim, order);
    let coords = |v: &[f64]| -> Vec<f64> { basis.iter().map(|b| dot(b, v)).collect() };
    let to_unit = |v: &[f64]| -> Vec<f64> {
        let mut c = coords(v);
        let nrm = norm(&c);
        if nrm < 1e-12 {
            c = vec![0.0; n_dim];
            c[0] = 1.0;
        } else {
            c.iter_mut().for_each(|e| *e /= nrm);
        }
        c
    };
    let kept: Vec<Vec<f64>> = kept_raw.iter().map(|v| to_unit(v)).collect();
    let projected: Vec<Vec<f64>> = projected_raw.iter().map(|v| to_unit(v)).collect();
    let (x_vectors, y_vectors) = if alice_kept { (kept, projected) } else { (projected, kept) };
    Ok(VectorStrategy { n_dim, x_vectors, y_vectors })
}

fn embedded_objective(cost: &Mat, z: &Mat) -> f64 {
    let s_count = cost.rows();
    let mut total = 0.0;
    for s in 0..cost.rows() {
        for t in 0..cost.cols() {
            total += cost.get(s, t) * z.get(s, s_count + t);
        }
    }
    total
}

fn rescale_unit_diagonal(z: &mut Mat) {
    let n = z.rows();
    let factors: Vec<f64> = (0..n).map(|i| 1.0 / z.get(i, i).max(DIAGONAL_FLOOR).sqrt()).collect();
    for i in 0..n {
        for j in i + 1..n {
            let w = z.get(i, j) * factors[i] * factors[j];
            z.set(i, j, w);
            z.set(j, i, w);
        }
        z.set(i, i, 1.0);
    }
}

/// Gram matrix of `n` seeded random unit vectors; PSD with unit diagonal.
fn random_unit_gram(n: usize, rng: &mut SplitMix64) -> Mat {
    let mut vectors: Vec<Vec<f64>> = Vec::with_capacity(n);
    for _ in 0..n {
        let mut v: Vec<f64> = (0..n).map(|_| rng.next_normal()).collect();
        let nrm = norm(&v);
        if nrm < 1e-12 {
            v[0] = 1.0;
        } else {
            v.iter_mut().for_each(|e| *e /= nrm);
        }
        vectors.push(v);
    }
    let mut z = Mat::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let d = dot(&vectors[i], &vectors[j]);
            z.set(i, j, d);
            z.set(j, i, d);
        }
        z.set(i, i, 1.0);
    }
    z
}

/// Alternating maximization: each half-step sets one side's vectors to the
/// normalized cost-weighted sum of the other side's, which can only raise
/// the objective.
fn polish(cost: &Mat, strategy: &mut VectorStrategy, tol: f64) -> (f64, u64, bool) {
    let gain_tol = (tol * POLISH_GAIN_FACTOR).max(1e-15);
    let n_dim = strategy.n_dim;
    let mut objective = bias_objective(cost, strategy).expect("solver produced consistent dims");
    let mut iterations = 0u64;
    for _ in 0..POLISH_MAX_SWEEPS {
        for s in 0..strategy.s_count() {
            let mut w = vec![0.0; n_dim];
            for t in 0..strategy.t_count() {
                let c = cost.get(s, t);
                for (wi, yi) in w.iter_mut().zip(strategy.y_vectors[t].iter()) {
                    *wi += c * yi;
                }
            }
            let nrm = norm(&w);
            if nrm > 1e-15 {
                w.iter_mut().for_each(|e| *e /= nrm);
                strategy.x_vectors[s] = w;
            }
        }
        for t in 0..strategy.t_count() {
            let mut w = vec![0.0; n_dim];
            for s in 0..strategy.s_count() {
                let c = cost.get(s, t);
                for (wi, xi) in w.iter_mut().zip(strategy.x_vectors[s].iter()) {
                    *wi += c * xi;
                }
            }
            let nrm = norm(&w);
            if nrm > 1e-15 {
                w.iter_mut().for_each(|e| *e /= nrm);
                strategy.y_vectors[t] = w;
            }
        }
        iterations += 1;
        let next = bias_objective(cost, strategy).expect("solver produced consistent dims");
        let gain = next - objective;
        objective = next;
        if gain < gain_tol {
            return (objective, iterations, true);
        }
    }
    (objective, iterations, false)
}

/// Maximizes Σ cost(s,t)·⟨x_s, y_t⟩ over unit vectors.
///
/// Runs `restarts` independent projected-gradient ascents on the Gram
/// lifting, rounds each to vectors, polishes, and keeps the best value
/// (ties go to the lowest restart index). The same optimizer serves both
/// the quantum value and the simulated single-prover game.
pub fn maximize_bias(cost: &Mat, config: &SolverConfig) -> Result<BiasSolve, SolverError> {
    let s_count = cost.rows();
    let t_count = cost.cols();
    if s_count == 0 || t_count == 0 {
        return Err(SolverError::DimensionMismatch {
            context: "cost matrix must be nonempty".into(),
        });
    }
    let order = s_count + t_count;
    let n_dim = s_count.min(t_count);
    let cost_norm = cost.frobenius_norm();
    if cost_norm < 1e-15 {
        // Zero objective: any strategy is optimal; return aligned unit vectors.
        let e1 = || {
            let mut v = vec![0.0; n_dim];
            v[0] = 1.0;
            v
        };
        let strategy = VectorStrategy {
            n_dim,
            x_vectors: (0..s_count).map(|_| e1()).collect(),
            y_vectors: (0..t_count).map(|_| e1()).collect(),
        };
        let bias = bias_objective(cost, &strategy)?;
        return Ok(BiasSolve { bias, strategy, iterations: 0, best_restart: 0, converged: true });
    }

    let mut gradient = Mat::zeros(order, order);
    for s in 0..s_count {
        for t in 0..t_count {
            gradient.set(s, s_count + t, cost.get(s, t) / 2.0);
            gradient.set(s_count + t, s, cost.get(s, t) / 2.0);
        }
    }
    let step = 0.5 / cost_norm;

    let mut seed_stream = SplitMix64::new(config.seed);
    let mut best: Option<BiasSolve> = None;
    let mut total_iterations = 0u64;
    for restart in 0..config.restarts.max(1) {
        let mut rng = seed_stream.fork();
        let mut z = random_unit_gram(order, &mut rng);
        let mut best_objective = embedded_objective(cost, &z);
        let mut best_z = z.clone();
        let mut previous = best_objective;
        for _ in 0..config.max_iters {
            z = z.add_scaled(step, &gradient);
            z = project_psd(&z)?;
            rescale_unit_diagonal(&mut z);
            total_iterations += 1;
            let objective = embedded_objective(cost, &z);
            if objective > best_objective {
                best_objective = objective;
                best_z = z.clone();
            }
            if (objective - previous).abs() < config.tol {
                break;
            }
            previous = objective;
        }
        let gram = GramMatrix { order, entries: best_z };
        let mut strategy = extract_vectors(&gram, s_count, t_count)?;
        let (bias, polish_iters, converged) = polish(cost, &mut strategy, config.tol);
        total_iterations += polish_iters;
        let better = match &best {
            None => true,
            Some(b) => bias > b.bias,
        };
        if better {
            best = Some(BiasSolve {
                bias,
                strategy,
                iterations: 0,
                best_restart: restart,
                converged,
            });
        }
    }
    let mut solve = best.expect("at least one restart ran");
    solve.iterations = total_iterations;
    Ok(solve)
}

/// Quantum value ω_q(G) with solver bookkeeping.
pub fn quantum_value_detailed(
    game: &XorGame,
    config: &SolverConfig,
) -> Result<QuantumSolve, SolverError> {
    game.validate()?;
    let cost = cost_matrix(game);
    let tau = trivial_value(game);
    let solve = maximize_bias(&cost, config)?;
    let result = QuantumSolve {
        value: tau + 0.5 * solve.bias,
        strategy: solve.strategy,
        iterations: solve.iterations,
        best_restart: solve.best_restart,
    };
    if solve.converged {
        Ok(result)
    } else {
        Err(SolverError::DidNotConverge { best: Box::new(result) })
    }
}

/// Quantum value ω_q(G) and an optimal vector strategy.
pub fn quantum_value(
    game: &XorGame,
    config: &SolverConfig,
) -> Result<(f64, VectorStrategy), SolverError> {
    quantum_value_detailed(game, config).map(|solve| (solve.value, solve.strategy))
}
