//! Two-prover entangled game simulation: projective measurements on the
//! shared state, joint outcome distributions, and the win probability.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{apply_pair, vec_inner, CMat};
use crate::game::XorGame;
use crate::tsirelson::{EntangledStrategy, Observable, TsirelsonError};

/// Largest local dimension the dense simulation accepts.
pub const MAX_LOCAL_DIM: usize = 64;

/// Probabilities above this negative floor are rounding noise and are
/// clamped to zero; anything below it is a real error.
pub const NEGATIVE_PROBABILITY_FLOOR: f64 = -1e-12;

#[derive(Debug, Error)]
pub enum EntangledError {
    #[error("not a valid observable: {0}")]
    NotObservable(TsirelsonError),
    #[error("question index ({s},{t}) out of range for {s_count}x{t_count} strategy")]
    IndexOutOfRange { s: usize, t: usize, s_count: usize, t_count: usize },
    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: String },
    #[error("local dimension {dim} exceeds the dense-simulation guard of {MAX_LOCAL_DIM}")]
    DimensionGuardExceeded { dim: usize },
    #[error(transparent)]
    Strategy(#[from] TsirelsonError),
}

/// Joint answer distribution p(a,b) for one question pair.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct JointOutcomeDistribution {
    /// Indexed `[a][b]`.
    pub probabilities: [[f64; 2]; 2],
}

impl JointOutcomeDistribution {
    pub fn total(&self) -> f64 {
        self.probabilities.iter().flatten().sum()
    }
}

/// Splits an observable M into projectors (I+M)/2 and (I−M)/2 onto its
/// ±1 eigenspaces.
pub fn projectors_from_observable(obs: &Observable) -> Result<(CMat, CMat), EntangledError> {
    obs.validate().map_err(EntangledError::NotObservable)?;
    let identity = CMat::identity(obs.dim);
    let half = Complex64::new(0.5, 0.0);
    let plus = identity.add(&obs.matrix).scale(half);
    let minus = identity.add(&obs.matrix.scale(-Complex64::ONE)).scale(half);
    Ok((plus, minus))
}

/// p(a,b) = ⟨Ψ| X_s^a ⊗ Y_t^b |Ψ⟩ for the four outcome pairs.
pub fn joint_outcome_distribution(
    strategy: &EntangledStrategy,
    s: usize,
    t: usize,
) -> Result<JointOutcomeDistribution, EntangledError> {
    if s >= strategy.s_count() || t >= strategy.t_count() {
        return Err(EntangledError::IndexOutOfRange {
            s,
            t,
            s_count: strategy.s_count(),
            t_count: strategy.t_count(),
        });
    }
    if strategy.dim > MAX_LOCAL_DIM {
        return Err(EntangledError::DimensionGuardExceeded { dim: strategy.dim });
    }
    let alice = projectors_from_observable(&strategy.alice_observables[s])?;
    let bob = projectors_from_observable(&strategy.bob_observables[t])?;
    let alice = [alice.0, alice.1];
    let bob = [bob.0, bob.1];
    let mut probabilities = [[0.0; 2]; 2];
    for a in 0..2 {
        for b in 0..2 {
            let moved = apply_pair(&alice[a], &bob[b], &strategy.psi);
            let p = vec_inner(&strategy.psi, &moved).re;
            probabilities[a][b] = if p < 0.0 && p >= NEGATIVE_PROBABILITY_FLOOR { 0.0 } else { p };
        }
    }
    Ok(JointOutcomeDistribution { probabilities })
}

/// Σ_{s,t} π(s,t) Σ_{a,b} V(a⊕b | s,t) · p(a,b).
pub fn entangled_win_probability(
    game: &XorGame,
    strategy: &EntangledStrategy,
) -> Result<f64, EntangledError> {
    if strategy.s_count() != game.s_count || strategy.t_count() != game.t_count {
        return Err(EntangledError::DimensionMismatch {
            context: format!(
                "strategy has {}|{} observables for a {}x{} game",
                strategy.s_count(),
                strategy.t_count(),
                game.s_count,
                game.t_count
            ),
        });
    }
    let mut total = 0.0;
    for s in 0..game.s_count {
        for t in 0..game.t_count {
            let dist = joint_outcome_distribution(strategy, s, t)?;
            for a in 0..2 {
                for b in 0..2 {
                    let v = if a ^ b == 0 { game.v0[s][t] } else { game.v1[s][t] };
                    total += game.pi[s][t] * v * dist.probabilities[a][b];
                }
            }
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{all_accepting, cost_matrix, trivial_value};
    use crate::gram::VectorStrategy;
    use crate::rng::SplitMix64;
    use crate::tsirelson::{maximally_entangled_state, observables_from_vectors};

    fn chsh_optimal_entangled() -> EntangledStrategy {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let vectors = VectorStrategy {
            n_dim: 2,
            x_vectors: vec![vec![1.0, 0.0], vec![0.0, 1.0]],
            y_vectors: vec![vec![r, r], vec![r, -r]],
        };
        observables_from_vectors(&vectors).unwrap()
    }

    fn z_on_bell_pair(questions: (usize, usize)) -> EntangledStrategy {
        let z = Observable::new(CMat::pauli_z()).unwrap();
        EntangledStrategy {
            dim: 2,
            psi: maximally_entangled_state(2),
            alice_observables: vec![z.clone(); questions.0],
            bob_observables: vec![z; questions.1],
        }
    }

    #[test]
    fn pauli_z_projectors() {
        let obs = Observable::new(CMat::pauli_z()).unwrap();
        let (p0, p1) = projectors_from_observable(&obs).unwrap();
        assert!((p0.get(0, 0) - Complex64::ONE).norm() < 1e-15);
        assert!(p0.get(1, 1).norm() < 1e-15);
        assert!(p1.get(0, 0).norm() < 1e-15);
        assert!((p1.get(1, 1) - Complex64::ONE).norm() < 1e-15);
    }

    #[test]
    fn pauli_x_projectors() {
        let obs = Observable::new(CMat::pauli_x()).unwrap();
        let (p0, _) = projectors_from_observable(&obs).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((p0.get(i, j) - Complex64::new(0.5, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn identity_observable_projects_everything_to_zero_outcome() {
        let obs = Observable::new(CMat::identity(2)).unwrap();
        let (p0, p1) = projectors_from_observable(&obs).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let expect = if i == j { Complex64::ONE } else { Complex64::ZERO };
                assert!((p0.get(i, j) - expect).norm() < 1e-15);
                assert!(p1.get(i, j).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn projectors_are_idempotent_and_complete() {
        let mut rng = SplitMix64::new(8);
        let strategy = VectorStrategy::random(1, 1, 3, &mut rng);
        let ent = observables_from_vectors(&strategy).unwrap();
        let (p0, p1) = projectors_from_observable(&ent.alice_observables[0]).unwrap();
        let d = p0.dim();
        let p0sq = p0.matmul(&p0);
        let sum = p0.add(&p1);
        for i in 0..d {
            for j in 0..d {
                assert!((p0sq.get(i, j) - p0.get(i, j)).norm() < 1e-9);
                let expect = if i == j { Complex64::ONE } else { Complex64::ZERO };
                assert!((sum.get(i, j) - expect).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn rejects_non_observable() {
        let obs = Observable {
            dim: 2,
            matrix: CMat::identity(2).scale(Complex64::new(2.0, 0.0)),
        };
        assert!(matches!(
            projectors_from_observable(&obs),
            Err(EntangledError::NotObservable(_))
        ));
    }

    #[test]
    fn chsh_joint_distribution_first_pair() {
        let ent = chsh_optimal_entangled();
        let dist = joint_outcome_distribution(&ent, 0, 0).unwrap();
        let expect = (std::f64::consts::PI / 8.0).cos().powi(2) / 2.0;
        assert!((dist.probabilities[0][0] - expect).abs() < 1e-12);
        assert!((dist.probabilities[1][1] - expect).abs() < 1e-12);
        assert!((dist.total() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn z_measurements_on_product_state_deterministic() {
        let z = Observable::new(CMat::pauli_z()).unwrap();
        let mut psi = vec![Complex64::ZERO; 4];
        psi[0] = Complex64::ONE;
        let strategy = EntangledStrategy {
            dim: 2,
            psi,
            alice_observables: vec![z.clone()],
            bob_observables: vec![z],
        };
        let dist = joint_outcome_distribution(&strategy, 0, 0).unwrap();
        assert!((dist.probabilities[0][0] - 1.0).abs() < 1e-15);
        assert_eq!(dist.probabilities[0][1], 0.0);
    }

    #[test]
    fn z_measurements_on_bell_state_perfectly_correlated() {
        let strategy = z_on_bell_pair((1, 1));
        let dist = joint_outcome_distribution(&strategy, 0, 0).unwrap();
        assert!((dist.probabilities[0][0] - 0.5).abs() < 1e-15);
        assert!((dist.probabilities[1][1] - 0.5).abs() < 1e-15);
        assert!(dist.probabilities[0][1].abs() < 1e-15);
        assert!(dist.probabilities[1][0].abs() < 1e-15);
    }

    #[test]
    fn index_bounds_checked() {
        let strategy = z_on_bell_pair((1, 1));
        assert!(matches!(
            joint_outcome_distribution(&strategy, 1, 0),
            Err(EntangledError::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn chsh_optimal_strategy_wins_at_quantum_value() {
        let game = XorGame::chsh();
        let ent = chsh_optimal_entangled();
        let p = entangled_win_probability(&game, &ent).unwrap();
        let expect = (2.0 + std::f64::consts::SQRT_2) / 4.0;
        assert!((p - expect).abs() < 1e-6);
    }

    #[test]
    fn all_accepting_game_always_won() {
        let game = all_accepting(2, 2);
        let ent = chsh_optimal_entangled();
        let p = entangled_win_probability(&game, &ent).unwrap();
        assert!((p - 1.0).abs() < 1e-10);
    }

    #[test]
    fn chsh_with_shared_z_strategy_wins_three_quarters() {
        let game = XorGame::chsh();
        let strategy = z_on_bell_pair((2, 2));
        let p = entangled_win_probability(&game, &strategy).unwrap();
        assert!((p - 0.75).abs() < 1e-12);
    }

    #[test]
    fn strategy_shape_checked() {
        let game = XorGame::chsh();
        let strategy = z_on_bell_pair((1, 2));
        assert!(matches!(
            entangled_win_probability(&game, &strategy),
            Err(EntangledError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn xor_identity_and_no_signaling_on_random_strategies() {
        let mut rng = SplitMix64::new(123);
        for round in 0..8 {
            let s = 1 + (rng.next_u64() % 3) as usize;
            let t = 1 + (rng.next_u64() % 3) as usize;
            let game = XorGame::random(s, t, rng.next_u64()).unwrap();
            let vectors = VectorStrategy::random(s, t, 1 + (round % 4), &mut rng);
            let ent = observables_from_vectors(&vectors).unwrap();

            // win probability = trivial value + ½ Σ cost · correlation
            let p = entangled_win_probability(&game, &ent).unwrap();
            let cost = cost_matrix(&game);
            let mut bias = 0.0;
            for i in 0..s {
                for j in 0..t {
                    bias += cost.get(i, j) * ent.correlation(i, j);
                }
            }
            assert!((p - (trivial_value(&game) + 0.5 * bias)).abs() < 1e-9);

            // marginals do not depend on the far side's question
            for i in 0..s {
                let marginal = |j: usize| -> f64 {
                    let d = joint_outcome_distribution(&ent, i, j).unwrap();
                    d.probabilities[0][0] + d.probabilities[0][1]
                };
                let reference = marginal(0);
                for j in 1..t {
                    assert!((marginal(j) - reference).abs() < 1e-9);
                }
            }
            for j in 0..t {
                let marginal = |i: usize| -> f64 {
                    let d = joint_outcome_distribution(&ent, i, j).unwrap();
                    d.probabilities[0][0] + d.probabilities[1][0]
                };
                let reference = marginal(0);
                for i in 1..s {
                    assert!((marginal(i) - reference).abs() < 1e-9);
                }
            }
        }
    }
}
