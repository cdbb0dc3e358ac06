//! Single-quantum-prover simulation of a two-prover XOR game.
//!
//! The verifier prepares a flagged superposition of both questions,
//!
//! ```text
//! (|0⟩_V |0,s⟩_M + |1⟩_V |1,t⟩_M) / √2 ⊗ |0⟩_P ,
//! ```
//!
//! sends the message register to the prover, and measures the returned
//! state against {P₀, P₁, P_reject}, decoding outcome m as the answer
//! parity. An honest prover phase-encodes classical answers and is decoded
//! perfectly; an arbitrary prover is parameterized by the answer
//! components it leaves on the queried message labels, and its acceptance
//! probability reduces to the same bilinear objective the quantum value
//! maximizes. [`verify_simulation`] runs both maximizations independently
//! and checks that the simulated game value matches the quantum value.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{vec_norm, CMat};
use crate::game::{
    classical_value, trivial_value, ClassicalStrategy, GameError, XorGame,
};
use crate::gram::{
    maximize_bias, quantum_value_detailed, QuantumSolve, SolverConfig, SolverError, VectorStrategy,
};
use crate::game::cost_matrix;
use crate::linalg::Mat;
use crate::rng::SplitMix64;

/// Unit-norm tolerance for protocol states.
pub const STATE_NORM_TOL: f64 = 1e-10;

/// Unitarity tolerance for dishonest-prover transformations.
pub const UNITARY_TOL: f64 = 1e-9;

/// Allowed |w_sim − ω_q| before a report is a mismatch.
pub const SIMULATION_MATCH_TOL: f64 = 1e-6;

/// Probabilities above this negative floor are clamped to zero.
const NEGATIVE_PROBABILITY_FLOOR: f64 = -1e-12;

/// Salt separating the simulated-game optimizer's restart stream from the
/// quantum-value stream, so the two maximizations are independent runs.
const SIMULATED_SOLVE_SALT: u64 = 0x5349_4d55_4c41_5445;

#[derive(Debug, Error)]
pub enum ProtocolError {
    #[error("question index ({s},{t}) out of range for a {s_count}x{t_count} game")]
    IndexOutOfRange { s: usize, t: usize, s_count: usize, t_count: usize },
    #[error("state shape mismatch: {context}")]
    StateShapeMismatch { context: String },
    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: String },
    #[error("prover transformation is not unitary: defect {defect:.3e}")]
    NotUnitary { defect: f64 },
    #[error("state has norm {norm}, expected 1 within {STATE_NORM_TOL:e}")]
    NonUnitState { norm: f64 },
    #[error("p_dim must be at least 1")]
    EmptyProverSpace,
    #[error("simulated value {} differs from quantum value {} by {}",
        report.simulated_value, report.quantum_value, report.gap)]
    SimulationMismatch { report: Box<GameReport> },
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Solver(#[from] SolverError),
}

/// Label of one basis state of the message register: a flag bit plus a
/// question index on the flagged side.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MessageIndex {
    Alice(usize),
    Bob(usize),
}

impl MessageIndex {
    pub fn flag(&self) -> u8 {
        match self {
            MessageIndex::Alice(_) => 0,
            MessageIndex::Bob(_) => 1,
        }
    }

    pub fn question(&self) -> usize {
        match self {
            MessageIndex::Alice(s) => *s,
            MessageIndex::Bob(t) => *t,
        }
    }

    /// Position in the flat message basis: Alice's questions first.
    pub fn flat(&self, s_count: usize) -> usize {
        match self {
            MessageIndex::Alice(s) => *s,
            MessageIndex::Bob(t) => s_count + t,
        }
    }

    pub fn from_flat(index: usize, s_count: usize, t_count: usize) -> Option<Self> {
        if index < s_count {
            Some(MessageIndex::Alice(index))
        } else if index < s_count + t_count {
            Some(MessageIndex::Bob(index - s_count))
        } else {
            None
        }
    }
}

fn check_questions(game: &XorGame, s: usize, t: usize) -> Result<(), ProtocolError> {
    if s >= game.s_count || t >= game.t_count {
        return Err(ProtocolError::IndexOutOfRange {
            s,
            t,
            s_count: game.s_count,
            t_count: game.t_count,
        });
    }
    Ok(())
}

/// Pure state of verifier ⊗ message ⊗ prover.
///
/// The verifier register is one flag qubit, the message register has one
/// basis state per question label on either side, and the prover register
/// has `p_dim` dimensions. Amplitudes are stored flat with index
/// `(v · (|S|+|T|) + m) · p_dim + p`.
#[derive(Clone, Debug)]
pub struct ProtocolState {
    s_count: usize,
    t_count: usize,
    p_dim: usize,
    amplitudes: Vec<Complex64>,
}

impl ProtocolState {
    pub fn new(
        s_count: usize,
        t_count: usize,
        p_dim: usize,
        amplitudes: Vec<Complex64>,
    ) -> Result<Self, ProtocolError> {
        if p_dim == 0 {
            return Err(ProtocolError::EmptyProverSpace);
        }
        let expect = 2 * (s_count + t_count) * p_dim;
        if amplitudes.len() != expect {
            return Err(ProtocolError::StateShapeMismatch {
                context: format!("{} amplitudes, expected {expect}", amplitudes.len()),
            });
        }
        let state = ProtocolState { s_count, t_count, p_dim, amplitudes };
        let norm = state.norm();
        if (norm - 1.0).abs() > STATE_NORM_TOL {
            return Err(ProtocolError::NonUnitState { norm });
        }
        Ok(state)
    }

    /// Builds (|0⟩|φ_s⟩ + |1⟩|φ_t⟩)/√2 from the two branch message-prover
    /// components; each branch is a full set of prover vectors indexed by
    /// message label and must carry total norm 1.
    pub fn from_branches(
        s_count: usize,
        t_count: usize,
        p_dim: usize,
        branch0: &[Vec<Complex64>],
        branch1: &[Vec<Complex64>],
    ) -> Result<Self, ProtocolError> {
        let labels = s_count + t_count;
        for (name, branch) in [("flag-0", branch0), ("flag-1", branch1)] {
            if branch.len() != labels {
                return Err(ProtocolError::StateShapeMismatch {
                    context: format!("{name} branch has {} labels, expected {labels}", branch.len()),
                });
            }
            if branch.iter().any(|c| c.len() != p_dim) {
                return Err(ProtocolError::StateShapeMismatch {
                    context: format!("{name} branch component length differs from p_dim {p_dim}"),
                });
            }
        }
        let scale = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let mut amplitudes = vec![Complex64::ZERO; 2 * labels * p_dim];
        for (m, component) in branch0.iter().enumerate() {
            for (p, &a) in component.iter().enumerate() {
                amplitudes[m * p_dim + p] = scale * a;
            }
        }
        for (m, component) in branch1.iter().enumerate() {
            for (p, &a) in component.iter().enumerate() {
                amplitudes[(labels + m) * p_dim + p] = scale * a;
            }
        }
        Self::new(s_count, t_count, p_dim, amplitudes)
    }

    pub fn s_count(&self) -> usize {
        self.s_count
    }

    pub fn t_count(&self) -> usize {
        self.t_count
    }

    pub fn p_dim(&self) -> usize {
        self.p_dim
    }

    pub fn message_dim(&self) -> usize {
        self.s_count + self.t_count
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, flag: u8, message: MessageIndex, p: usize) -> Complex64 {
        let m = message.flat(self.s_count);
        self.amplitudes[(flag as usize * self.message_dim() + m) * self.p_dim + p]
    }

    pub fn norm(&self) -> f64 {
        vec_norm(&self.amplitudes)
    }

    /// The prover component attached to flag branch `flag` and message
    /// label `message`, scaled by √2 — the answer component entering the
    /// closed-form outcome probabilities.
    pub fn answer_component(&self, flag: u8, message: MessageIndex) -> Vec<Complex64> {
        let m = message.flat(self.s_count);
        let base = (flag as usize * self.message_dim() + m) * self.p_dim;
        let scale = Complex64::new(std::f64::consts::SQRT_2, 0.0);
        (0..self.p_dim).map(|p| scale * self.amplitudes[base + p]).collect()
    }
}

/// A prover's move: phase-encode classical answers, place real answer
/// vectors on the queried labels, or apply an arbitrary unitary on
/// message ⊗ prover.
#[derive(Clone, Debug)]
pub enum ProverAction {
    Honest(ClassicalStrategy),
    Vector(VectorStrategy),
    Unitary(CMat),
}

/// The verifier's three-outcome measurement on verifier ⊗ message.
#[derive(Clone, Debug)]
pub struct VerifierMeasurement {
    pub dim: usize,
    pub p0: Mat,
    pub p1: Mat,
    pub p_reject: Mat,
}

impl VerifierMeasurement {
    pub fn validate(&self) -> Result<(), ProtocolError> {
        let n = self.dim;
        for (name, p) in [("p0", &self.p0), ("p1", &self.p1), ("p_reject", &self.p_reject)] {
            if p.rows() != n || p.cols() != n {
                return Err(ProtocolError::DimensionMismatch {
                    context: format!("{name} is {}x{}, expected {n}x{n}", p.rows(), p.cols()),
                });
            }
            if p.symmetry_defect() > 1e-9 {
                return Err(ProtocolError::DimensionMismatch {
                    context: format!("{name} is not symmetric"),
                });
            }
            // idempotency
            for i in 0..n {
                for j in 0..n {
                    let mut prod = 0.0;
                    for k in 0..n {
                        prod += p.get(i, k) * p.get(k, j);
                    }
                    if (prod - p.get(i, j)).abs() > 1e-9 {
                        return Err(ProtocolError::DimensionMismatch {
                            context: format!("{name} is not idempotent"),
                        });
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                let sum = self.p0.get(i, j) + self.p1.get(i, j) + self.p_reject.get(i, j);
                let expect = if i == j { 1.0 } else { 0.0 };
                if (sum - expect).abs() > 1e-10 {
                    return Err(ProtocolError::DimensionMismatch {
                        context: "projectors do not sum to the identity".into(),
                    });
                }
                let mut cross = 0.0;
                for k in 0..n {
                    cross += self.p0.get(i, k) * self.p1.get(k, j);
                }
                if cross.abs() > 1e-10 {
                    return Err(ProtocolError::DimensionMismatch {
                        context: "p0 and p1 are not orthogonal".into(),
                    });
                }
            }
        }
        Ok(())
    }
}

/// Outcome probabilities of the verifier measurement.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct OutcomeProbabilities {
    pub p0: f64,
    pub p1: f64,
    pub p_reject: f64,
}

impl OutcomeProbabilities {
    pub fn total(&self) -> f64 {
        self.p0 + self.p1 + self.p_reject
    }
}

/// The verifier's opening move: amplitude 1/√2 on |0⟩|0,s⟩|0⟩ and on
/// |1⟩|1,t⟩|0⟩.
pub fn build_initial_state(
    game: &XorGame,
    s: usize,
    t: usize,
    p_dim: usize,
) -> Result<ProtocolState, ProtocolError> {
    check_questions(game, s, t)?;
    if p_dim == 0 {
        return Err(ProtocolError::EmptyProverSpace);
    }
    let labels = game.s_count + game.t_count;
    let mut amplitudes = vec![Complex64::ZERO; 2 * labels * p_dim];
    let amp = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let alice_slot = MessageIndex::Alice(s).flat(game.s_count);
    let bob_slot = MessageIndex::Bob(t).flat(game.s_count);
    amplitudes[alice_slot * p_dim] = amp;
    amplitudes[(labels + bob_slot) * p_dim] = amp;
    ProtocolState::new(game.s_count, game.t_count, p_dim, amplitudes)
}

/// Projectors onto (|0⟩|0,s⟩ ± |1⟩|1,t⟩)/√2 plus the reject remainder,
/// all on verifier ⊗ message.
pub fn verifier_measurement(
    game: &XorGame,
    s: usize,
    t: usize,
) -> Result<VerifierMeasurement, ProtocolError> {
    check_questions(game, s, t)?;
    let labels = game.s_count + game.t_count;
    let dim = 2 * labels;
    let i1 = MessageIndex::Alice(s).flat(game.s_count);
    let i2 = labels + MessageIndex::Bob(t).flat(game.s_count);
    let mut p0 = Mat::zeros(dim, dim);
    let mut p1 = Mat::zeros(dim, dim);
    for (m, sign) in [(&mut p0, 1.0), (&mut p1, -1.0)] {
        m.set(i1, i1, 0.5);
        m.set(i2, i2, 0.5);
        m.set(i1, i2, 0.5 * sign);
        m.set(i2, i1, 0.5 * sign);
    }
    let mut p_reject = Mat::identity(dim);
    for i in 0..dim {
        for j in 0..dim {
            p_reject.set(i, j, p_reject.get(i, j) - p0.get(i, j) - p1.get(i, j));
        }
    }
    Ok(VerifierMeasurement { dim, p0, p1, p_reject })
}

/// Phase-encodes classical answers: flag-0 amplitudes pick up (−1)^a(s),
/// flag-1 amplitudes (−1)^b(t).
pub fn apply_honest_prover(
    state: &ProtocolState,
    strategy: &ClassicalStrategy,
    s: usize,
    t: usize,
) -> Result<ProtocolState, ProtocolError> {
    if strategy.alice.len() != state.s_count || strategy.bob.len() != state.t_count {
        return Err(ProtocolError::StateShapeMismatch {
            context: format!(
                "strategy answers {}|{} do not fit a {}x{} state",
                strategy.alice.len(),
                strategy.bob.len(),
                state.s_count,
                state.t_count
            ),
        });
    }
    if s >= state.s_count || t >= state.t_count {
        return Err(ProtocolError::IndexOutOfRange {
            s,
            t,
            s_count: state.s_count,
            t_count: state.t_count,
        });
    }
    let phase = |bit: u8| if bit == 0 { 1.0 } else { -1.0 };
    let phase0 = phase(strategy.alice[s]);
    let phase1 = phase(strategy.bob[t]);
    let half = state.message_dim() * state.p_dim;
    let mut amplitudes = state.amplitudes.clone();
    for (k, a) in amplitudes.iter_mut().enumerate() {
        *a *= if k < half { phase0 } else { phase1 };
    }
    ProtocolState::new(state.s_count, state.t_count, state.p_dim, amplitudes)
}

/// Applies a prover move to the state the verifier sent for (s, t).
pub fn apply_prover(
    state: &ProtocolState,
    action: &ProverAction,
    s: usize,
    t: usize,
) -> Result<ProtocolState, ProtocolError> {
    match action {
        ProverAction::Honest(strategy) => apply_honest_prover(state, strategy, s, t),
        ProverAction::Vector(vectors) => {
            vectors.validate()?;
            if vectors.s_count() != state.s_count || vectors.t_count() != state.t_count {
                return Err(ProtocolError::DimensionMismatch {
                    context: format!(
                        "strategy has {}|{} vectors for a {}x{} state",
                        vectors.s_count(),
                        vectors.t_count(),
                        state.s_count,
                        state.t_count
                    ),
                });
            }
            if vectors.n_dim > state.p_dim {
                return Err(ProtocolError::DimensionMismatch {
                    context: format!(
                        "vector dimension {} exceeds prover space {}",
                        vectors.n_dim, state.p_dim
                    ),
                });
            }
            if s >= state.s_count || t >= state.t_count {
                return Err(ProtocolError::IndexOutOfRange {
                    s,
                    t,
                    s_count: state.s_count,
                    t_count: state.t_count,
                });
            }
            // Rejection-free form: answer vectors embedded on the queried
            // labels, every other component zero.
            let labels = state.message_dim();
            let p_dim = state.p_dim;
            let embed = |coords: &[f64]| -> Vec<Complex64> {
                let mut v = vec![Complex64::ZERO; p_dim];
                for (p, &c) in coords.iter().enumerate() {
                    v[p] = Complex64::new(c, 0.0);
                }
                v
            };
            let mut branch0 = vec![vec![Complex64::ZERO; p_dim]; labels];
            let mut branch1 = vec![vec![Complex64::ZERO; p_dim]; labels];
            branch0[MessageIndex::Alice(s).flat(state.s_count)] = embed(&vectors.x_vectors[s]);
            branch1[MessageIndex::Bob(t).flat(state.s_count)] = embed(&vectors.y_vectors[t]);
            ProtocolState::from_branches(state.s_count, state.t_count, p_dim, &branch0, &branch1)
        }
        ProverAction::Unitary(u) => {
            let block = state.message_dim() * state.p_dim;
            if u.dim() != block {
                return Err(ProtocolError::DimensionMismatch {
                    context: format!(
                        "unitary acts on dimension {}, message ⊗ prover has {block}",
                        u.dim()
                    ),
                });
            }
            let defect = u.unitarity_defect();
            if defect > UNITARY_TOL {
                return Err(ProtocolError::NotUnitary { defect });
            }
            let mut amplitudes = Vec::with_capacity(2 * block);
            for v in 0..2 {
                let slice = &state.amplitudes[v * block..(v + 1) * block];
                amplitudes.extend(u.mul_vec(slice));
            }
            ProtocolState::new(state.s_count, state.t_count, state.p_dim, amplitudes)
        }
    }
}

/// Measurement probabilities p_m = ⟨Φ| P_m ⊗ I_P |Φ⟩.
pub fn outcome_distribution(
    state: &ProtocolState,
    meas: &VerifierMeasurement,
) -> Result<OutcomeProbabilities, ProtocolError> {
    let dim = 2 * state.message_dim();
    if meas.dim != dim {
        return Err(ProtocolError::DimensionMismatch {
            context: format!("measurement dim {} does not match state dim {dim}", meas.dim),
        });
    }
    let p_dim = state.p_dim;
    let mut probs = [0.0; 3];
    for (slot, projector) in [(0, &meas.p0), (1, &meas.p1), (2, &meas.p_reject)] {
        let mut total = 0.0;
        for p in 0..p_dim {
            // quadratic form over the p-th prover slice
            for r in 0..dim {
                let ar = state.amplitudes[r * p_dim + p];
                if ar == Complex64::ZERO {
                    continue;
                }
                let mut row = Complex64::ZERO;
                for c in 0..dim {
                    let w = projector.get(r, c);
                    if w != 0.0 {
                        row += w * state.amplitudes[c * p_dim + p];
                    }
                }
                total += (ar.conj() * row).re;
            }
        }
        probs[slot] = if total < 0.0 && total >= NEGATIVE_PROBABILITY_FLOOR { 0.0 } else { total };
    }
    Ok(OutcomeProbabilities { p0: probs[0], p1: probs[1], p_reject: probs[2] })
}

/// Value of the simulated game for a rejection-free prover with the given
/// answer vectors: ½ Σ_{s,t,c} π(s,t) V(c|s,t) (1 + (−1)^c ⟨x_s, y_t⟩).
pub fn simulated_value(game: &XorGame, strategy: &VectorStrategy) -> Result<f64, ProtocolError> {
    if strategy.s_count() != game.s_count || strategy.t_count() != game.t_count {
        return Err(ProtocolError::DimensionMismatch {
            context: format!(
                "strategy has {}|{} vectors for a {}x{} game",
                strategy.s_count(),
                strategy.t_count(),
                game.s_count,
                game.t_count
            ),
        });
    }
    for v in strategy.x_vectors.iter().chain(strategy.y_vectors.iter()) {
        if v.len() != strategy.n_dim {
            return Err(ProtocolError::DimensionMismatch {
                context: format!("vector has {} entries, expected {}", v.len(), strategy.n_dim),
            });
        }
    }
    let mut total = 0.0;
    for s in 0..game.s_count {
        for t in 0..game.t_count {
            let ip: f64 = strategy.x_vectors[s]
                .iter()
                .zip(strategy.y_vectors[t].iter())
                .map(|(a, b)| a * b)
                .sum();
            total += game.pi[s][t]
                * (game.v0[s][t] * (1.0 + ip) + game.v1[s][t] * (1.0 - ip));
        }
    }
    Ok(0.5 * total)
}

/// Solver bookkeeping carried into a report.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SolverReport {
    pub seed: u64,
    pub restarts: usize,
    pub iterations: u64,
}

/// All computed values and strategy artifacts for one game.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GameReport {
    pub game: String,
    pub tau: f64,
    pub classical_value: f64,
    pub quantum_value: f64,
    pub simulated_value: f64,
    pub gap: f64,
    pub classical_strategy: ClassicalStrategy,
    pub vector_strategy: VectorStrategy,
    pub solver: SolverReport,
}

/// Maximizes the simulated game value over prover answer vectors. Shares
/// the bias optimizer with the quantum value but runs its own restart
/// stream, so agreement between the two is a genuine cross-check.
pub fn maximize_simulated_value(
    game: &XorGame,
    config: &SolverConfig,
) -> Result<(f64, VectorStrategy, u64), ProtocolError> {
    game.validate()?;
    let cost = cost_matrix(game);
    let mut sim_config = config.clone();
    sim_config.seed = SplitMix64::new(config.seed ^ SIMULATED_SOLVE_SALT).next_u64();
    let solve = maximize_bias(&cost, &sim_config)?;
    let value = simulated_value(game, &solve.strategy)?;
    if !solve.converged {
        return Err(ProtocolError::Solver(SolverError::DidNotConverge {
            best: Box::new(QuantumSolve {
                value,
                strategy: solve.strategy,
                iterations: solve.iterations,
                best_restart: solve.best_restart,
            }),
        }));
    }
    Ok((value, solve.strategy, solve.iterations))
}

/// Computes τ, the classical value, the quantum value, and the maximal
/// simulated value, asserting that the last two agree within
/// [`SIMULATION_MATCH_TOL`]. The report is produced either way; a
/// mismatch carries it inside the error.
pub fn verify_simulation(
    game: &XorGame,
    config: &SolverConfig,
) -> Result<GameReport, ProtocolError> {
    game.validate()?;
    let tau = trivial_value(game);
    let (classical, classical_strategy) = classical_value(game)?;
    let quantum = quantum_value_detailed(game, config)?;
    let (w_sim, _sim_strategy, sim_iterations) = maximize_simulated_value(game, config)?;
    let gap = w_sim - quantum.value;
    let report = GameReport {
        game: game.name.clone(),
        tau,
        classical_value: classical,
        quantum_value: quantum.value,
        simulated_value: w_sim,
        gap,
        classical_strategy,
        vector_strategy: quantum.strategy,
        solver: SolverReport {
            seed: config.seed,
            restarts: config.restarts,
            iterations: quantum.iterations + sim_iterations,
        },
    };
    if gap.abs() > SIMULATION_MATCH_TOL {
        return Err(ProtocolError::SimulationMismatch { report: Box::new(report) });
    }
    Ok(report)
}

/// Haar-like random unitary: modified Gram-Schmidt on a seeded complex
/// Gaussian matrix. The R diagonal comes out positive real, which fixes
/// the phase convention and keeps sampling reproducible.
pub fn random_unitary(dim: usize, rng: &mut SplitMix64) -> CMat {
    let mut columns: Vec<Vec<Complex64>> = (0..dim)
        .map(|_| {
            (0..dim)
                .map(|_| {
                    Complex64::new(rng.next_normal(), rng.next_normal())
                        * std::f64::consts::FRAC_1_SQRT_2
                })
                .collect()
        })
        .collect();
    for j in 0..dim {
        for i in 0..j {
            let (head, tail) = columns.split_at_mut(j);
            let q = &head[i];
            let v = &mut tail[0];
            let overlap: Complex64 = q.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
            for (vk, qk) in v.iter_mut().zip(q.iter()) {
                *vk -= overlap * qk;
            }
        }
        let norm = vec_norm(&columns[j]);
        // Gaussian columns are independent with probability one; a
        // vanishing residual would mean a broken generator.
        assert!(norm > 1e-12, "degenerate Gaussian sample");
        for vk in columns[j].iter_mut() {
            *vk /= norm;
        }
    }
    let mut u = CMat::zeros(dim);
    for (j, column) in columns.iter().enumerate() {
        for (i, &v) in column.iter().enumerate() {
            u.set(i, j, v);
        }
    }
    u
}
