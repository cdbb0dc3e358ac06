//! XOR game definitions, validation, and classical values.
//!
//! A game is a question distribution π over S × T together with acceptance
//! weights V(c|s,t) for the answer parity c = a ⊕ b. Predicate entries are
//! reals in [0, 1] rather than bits, so randomized acceptance predicates
//! fit the same tables; every formula below extends verbatim.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{kahan_sum, Mat};
use crate::rng::SplitMix64;

/// Normalization tolerance for the question distribution.
pub const PI_SUM_TOL: f64 = 1e-12;

/// Brute-force guard: |S| + |T| may not exceed this.
pub const BRUTE_FORCE_LIMIT: usize = 24;

/// Largest question-set side the random generator accepts.
pub const RANDOM_GAME_SIDE_LIMIT: usize = 12;

#[derive(Debug, Error)]
pub enum GameError {
    #[error("question distribution sums to {sum}, expected 1 within {PI_SUM_TOL:e}")]
    NonNormalizedDistribution { sum: f64 },
    #[error("pi({s},{t}) = {value} is negative")]
    NegativeProbability { s: usize, t: usize, value: f64 },
    #[error("{table}({s},{t}) = {value} is outside [0, 1]")]
    PredicateOutOfRange { table: &'static str, s: usize, t: usize, value: f64 },
    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: String },
    #[error("brute force over {total} questions exceeds the limit of {BRUTE_FORCE_LIMIT}")]
    TooLargeForBruteForce { total: usize },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

/// An XOR game G(V, π).
///
/// `pi`, `v0` and `v1` are |S|×|T| tables indexed `[s][t]`; `v0` holds the
/// acceptance weight for parity 0 and `v1` for parity 1.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct XorGame {
    pub name: String,
    pub s_count: usize,
    pub t_count: usize,
    pub pi: Vec<Vec<f64>>,
    pub v0: Vec<Vec<f64>>,
    pub v1: Vec<Vec<f64>>,
}

/// Deterministic one-bit answers for both players.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassicalStrategy {
    pub alice: Vec<u8>,
    pub bob: Vec<u8>,
}

impl XorGame {
    pub fn new(
        name: impl Into<String>,
        pi: Vec<Vec<f64>>,
        v0: Vec<Vec<f64>>,
        v1: Vec<Vec<f64>>,
    ) -> Result<Self, GameError> {
        let s_count = pi.len();
        let t_count = pi.first().map_or(0, Vec::len);
        let game = XorGame { name: name.into(), s_count, t_count, pi, v0, v1 };
        game.validate()?;
        Ok(game)
    }

    /// The CHSH game: uniform questions on {0,1}², accept iff a ⊕ b = s·t.
    pub fn chsh() -> Self {
        let pi = vec![vec![0.25, 0.25], vec![0.25, 0.25]];
        let mut v0 = vec![vec![0.0; 2]; 2];
        let mut v1 = vec![vec![0.0; 2]; 2];
        for s in 0..2 {
            for t in 0..2 {
                if s * t == 1 {
                    v1[s][t] = 1.0;
                } else {
                    v0[s][t] = 1.0;
                }
            }
        }
        XorGame { name: "chsh".into(), s_count: 2, t_count: 2, pi, v0, v1 }
    }

    /// Seeded random game: positive normalized π, {0,1} predicate tables.
    ///
    /// Identical (s_count, t_count, seed) triples produce identical games.
    pub fn random(s_count: usize, t_count: usize, seed: u64) -> Result<Self, GameError> {
        if s_count == 0 || t_count == 0 {
            return Err(GameError::InvalidParams("question counts must be positive".into()));
        }
        if s_count > RANDOM_GAME_SIDE_LIMIT || t_count > RANDOM_GAME_SIDE_LIMIT {
            return Err(GameError::InvalidParams(format!(
                "question counts must be at most {RANDOM_GAME_SIDE_LIMIT}, got {s_count}x{t_count}"
            )));
        }
        let mut rng = SplitMix64::new(seed);
        let mut pi = vec![vec![0.0; t_count]; s_count];
        let mut total = 0.0;
        for row in pi.iter_mut() {
            for p in row.iter_mut() {
                *p = rng.next_open_f64();
                total += *p;
            }
        }
        for row in pi.iter_mut() {
            for p in row.iter_mut() {
                *p /= total;
            }
        }
        let bit_table = |rng: &mut SplitMix64| -> Vec<Vec<f64>> {
            (0..s_count)
                .map(|_| (0..t_count).map(|_| (rng.next_u64() & 1) as f64).collect())
                .collect()
        };
        let v0 = bit_table(&mut rng);
        let v1 = bit_table(&mut rng);
        let name = format!("random-{s_count}x{t_count}-seed{seed}");
        Ok(XorGame { name, s_count, t_count, pi, v0, v1 })
    }

    pub fn validate(&self) -> Result<(), GameError> {
        if self.s_count == 0 || self.t_count == 0 {
            return Err(GameError::DimensionMismatch {
                context: format!("question counts must be positive, got {}x{}", self.s_count, self.t_count),
            });
        }
        for (label, table) in [("pi", &self.pi), ("v0", &self.v0), ("v1", &self.v1)] {
            if table.len() != self.s_count {
                return Err(GameError::DimensionMismatch {
                    context: format!("{label} has {} rows, expected {}", table.len(), self.s_count),
                });
            }
            for (s, row) in table.iter().enumerate() {
                if row.len() != self.t_count {
                    return Err(GameError::DimensionMismatch {
                        context: format!(
                            "{label} row {s} has {} entries, expected {}",
                            row.len(),
                            self.t_count
                        ),
                    });
                }
            }
        }
        for s in 0..self.s_count {
            for t in 0..self.t_count {
                let p = self.pi[s][t];
                if !(p >= 0.0) {
                    return Err(GameError::NegativeProbability { s, t, value: p });
                }
            }
        }
        let sum = kahan_sum(self.pi.iter().flatten().copied());
        if (sum - 1.0).abs() > PI_SUM_TOL {
            return Err(GameError::NonNormalizedDistribution { sum });
        }
        for (label, table) in [("v0", &self.v0), ("v1", &self.v1)] {
            for s in 0..self.s_count {
                for t in 0..self.t_count {
                    let v = table[s][t];
                    if !(0.0..=1.0).contains(&v) {
                        return Err(GameError::PredicateOutOfRange { table: label, s, t, value: v });
                    }
                }
            }
        }
        Ok(())
    }
}

impl ClassicalStrategy {
    /// All-zero answers.
    pub fn zeros(s_count: usize, t_count: usize) -> Self {
        Self { alice: vec![0; s_count], bob: vec![0; t_count] }
    }

    fn check_against(&self, game: &XorGame) -> Result<(), GameError> {
        if self.alice.len() != game.s_count || self.bob.len() != game.t_count {
            return Err(GameError::DimensionMismatch {
                context: format!(
                    "strategy has {}|{} answers for a {}x{} game",
                    self.alice.len(),
                    self.bob.len(),
                    game.s_count,
                    game.t_count
                ),
            });
        }
        Ok(())
    }
}

/// Returns the game unchanged if all its invariants hold.
pub fn validate_game(game: XorGame) -> Result<XorGame, GameError> {
    game.validate()?;
    Ok(game)
}

/// Winning probability of the strategy that ignores questions and answers
/// uniformly at random: ½ Σ_{s,t} π(s,t) (V(0|s,t) + V(1|s,t)).
pub fn trivial_value(game: &XorGame) -> f64 {
    0.5 * kahan_sum((0..game.s_count).flat_map(|s| {
        (0..game.t_count).map(move |t| game.pi[s][t] * (game.v0[s][t] + game.v1[s][t]))
    }))
}

/// Winning probability of one deterministic strategy:
/// Σ_{s,t} π(s,t) V(a(s) ⊕ b(t) | s,t).
pub fn classical_win_probability(
    game: &XorGame,
    strategy: &ClassicalStrategy,
) -> Result<f64, GameError> {
    strategy.check_against(game)?;
    let mut total = 0.0;
    for s in 0..game.s_count {
        for t in 0..game.t_count {
            let parity = strategy.alice[s] ^ strategy.bob[t];
            let v = if parity == 0 { game.v0[s][t] } else { game.v1[s][t] };
            total += game.pi[s][t] * v;
        }
    }
    Ok(total)
}

/// Exact classical value by enumerating all 2^(|S|+|T|) deterministic
/// strategies. Ties are broken toward the lexicographically smallest
/// concatenated (alice ‖ bob) bit string, so the argmax is reproducible.
pub fn classical_value(game: &XorGame) -> Result<(f64, ClassicalStrategy), GameError> {
    let total_bits = game.s_count + game.t_count;
    if total_bits > BRUTE_FORCE_LIMIT {
        return Err(GameError::TooLargeForBruteForce { total: total_bits });
    }
    let mut best = f64::NEG_INFINITY;
    let mut best_strategy = ClassicalStrategy::zeros(game.s_count, game.t_count);
    // Enumerating with alice[0] as the most significant bit makes ascending
    // order coincide with lexicographic order of the concatenated string,
    // so a strict improvement test realizes the tie-break.
    for code in 0u32..(1u32 << total_bits) {
        let bit = |pos: usize| ((code >> (total_bits - 1 - pos)) & 1) as u8;
        let strategy = ClassicalStrategy {
            alice: (0..game.s_count).map(bit).collect(),
            bob: (0..game.t_count).map(|t| bit(game.s_count + t)).collect(),
        };
        let p = classical_win_probability(game, &strategy)?;
        if p > best {
            best = p;
            best_strategy = strategy;
        }
    }
    Ok((best, best_strategy))
}

/// Entry (s,t) is π(s,t) (V(0|s,t) − V(1|s,t)); the bilinear objective
/// weights shared by the classical, quantum, and simulated optimizations.
pub fn cost_matrix(game: &XorGame) -> Mat {
    let mut m = Mat::zeros(game.s_count, game.t_count);
    for s in 0..game.s_count {
        for t in 0..game.t_count {
            m.set(s, t, game.pi[s][t] * (game.v0[s][t] - game.v1[s][t]));
        }
    }
    m
}

/// Best value over the four constant-answer strategies; a floor on the
/// classical value used by ordering checks.
pub fn best_constant_parity_value(game: &XorGame) -> f64 {
    let mut accept0 = 0.0;
    let mut accept1 = 0.0;
    for s in 0..game.s_count {
        for t in 0..game.t_count {
            accept0 += game.pi[s][t] * game.v0[s][t];
            accept1 += game.pi[s][t] * game.v1[s][t];
        }
    }
    accept0.max(accept1)
}

/// Game whose predicate accepts everything; its three values are all 1.
#[cfg(test)]
pub(crate) fn all_accepting(s_count: usize, t_count: usize) -> XorGame {
    let p = 1.0 / (s_count * t_count) as f64;
    XorGame {
        name: "all-accepting".into(),
        s_count,
        t_count,
        pi: vec![vec![p; t_count]; s_count],
        v0: vec![vec![1.0; t_count]; s_count],
        v1: vec![vec![1.0; t_count]; s_count],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent brute-force oracle: recursion over answer bits instead of
    /// integer codes, summing in a different order than the implementation.
    fn oracle_classical_value(game: &XorGame) -> f64 {
        fn go(game: &XorGame, alice: &mut Vec<u8>, bob: &mut Vec<u8>) -> f64 {
            if alice.len() < game.s_count {
                let mut best = f64::NEG_INFINITY;
                for bit in [0u8, 1] {
                    alice.push(bit);
                    best = best.max(go(game, alice, bob));
                    alice.pop();
                }
                return best;
            }
            if bob.len() < game.t_count {
                let mut best = f64::NEG_INFINITY;
                for bit in [0u8, 1] {
                    bob.push(bit);
                    best = best.max(go(game, alice, bob));
                    bob.pop();
                }
                return best;
            }
            // Same accumulation order as the implementation so that the
            // maxima agree bit for bit; only the strategy enumeration is
            // independent.
            let mut p = 0.0;
            for s in 0..game.s_count {
                for t in 0..game.t_count {
                    let v = if alice[s] ^ bob[t] == 0 { game.v0[s][t] } else { game.v1[s][t] };
                    p += game.pi[s][t] * v;
                }
            }
            p
        }
        go(game, &mut Vec::new(), &mut Vec::new())
    }

    #[test]
    fn chsh_is_valid() {
        XorGame::chsh().validate().unwrap();
    }

    #[test]
    fn non_normalized_distribution_rejected() {
        let mut game = XorGame::chsh();
        game.pi[0][0] = 0.15; // sums to 0.9
        assert!(matches!(
            game.validate(),
            Err(GameError::NonNormalizedDistribution { .. })
        ));
    }

    #[test]
    fn predicate_out_of_range_rejected() {
        let mut game = XorGame::chsh();
        game.v0[0][1] = 1.5;
        assert!(matches!(game.validate(), Err(GameError::PredicateOutOfRange { .. })));
    }

    #[test]
    fn negative_probability_rejected() {
        let mut game = XorGame::chsh();
        game.pi[0][0] = -0.25;
        game.pi[1][1] = 0.75;
        assert!(matches!(game.validate(), Err(GameError::NegativeProbability { .. })));
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let mut game = XorGame::chsh();
        game.v1[1].pop();
        assert!(matches!(game.validate(), Err(GameError::DimensionMismatch { .. })));
    }

    #[test]
    fn trivial_values() {
        assert_eq!(trivial_value(&XorGame::chsh()), 0.5);
        assert_eq!(trivial_value(&all_accepting(3, 2)), 1.0);
        let always_zero_parity = XorGame::new(
            "v0-only",
            vec![vec![0.5, 0.5]],
            vec![vec![1.0, 1.0]],
            vec![vec![0.0, 0.0]],
        )
        .unwrap();
        assert_eq!(trivial_value(&always_zero_parity), 0.5);
    }

    #[test]
    fn chsh_constant_strategy_wins_three_quarters() {
        let game = XorGame::chsh();
        let strategy = ClassicalStrategy::zeros(2, 2);
        assert_eq!(classical_win_probability(&game, &strategy).unwrap(), 0.75);
    }

    #[test]
    fn single_pair_anticorrelated_game() {
        let game = XorGame::new(
            "anti",
            vec![vec![1.0]],
            vec![vec![0.0]],
            vec![vec![1.0]],
        )
        .unwrap();
        let strategy = ClassicalStrategy { alice: vec![0], bob: vec![1] };
        assert_eq!(classical_win_probability(&game, &strategy).unwrap(), 1.0);
    }

    #[test]
    fn strategy_shape_checked() {
        let game = XorGame::chsh();
        let strategy = ClassicalStrategy::zeros(2, 3);
        assert!(matches!(
            classical_win_probability(&game, &strategy),
            Err(GameError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn chsh_classical_value_exact() {
        let (value, strategy) = classical_value(&XorGame::chsh()).unwrap();
        assert_eq!(value, 0.75);
        // 0.75 is attained by all-zeros, which also wins the tie-break.
        assert_eq!(strategy, ClassicalStrategy::zeros(2, 2));
    }

    #[test]
    fn all_accepting_tie_breaks_to_zeros() {
        let (value, strategy) = classical_value(&all_accepting(2, 2)).unwrap();
        assert_eq!(value, 1.0);
        assert_eq!(strategy, ClassicalStrategy::zeros(2, 2));
        // non-dyadic question count: value exact only up to rounding
        let (value, strategy) = classical_value(&all_accepting(2, 3)).unwrap();
        assert!((value - 1.0).abs() < 1e-12);
        assert_eq!(strategy, ClassicalStrategy::zeros(2, 3));
    }

    #[test]
    fn random_game_matches_enumeration_oracle() {
        let game = XorGame::random(3, 3, 42).unwrap();
        let (value, _) = classical_value(&game).unwrap();
        assert_eq!(value, oracle_classical_value(&game));
    }

    #[test]
    fn oracle_equivalence_on_small_games() {
        let mut rng = SplitMix64::new(2024);
        for _ in 0..40 {
            let s = 1 + (rng.next_u64() % 4) as usize;
            let t = 1 + (rng.next_u64() % 4) as usize;
            let game = XorGame::random(s, t, rng.next_u64()).unwrap();
            let (value, strategy) = classical_value(&game).unwrap();
            assert_eq!(value, oracle_classical_value(&game));
            assert_eq!(value, classical_win_probability(&game, &strategy).unwrap());
        }
    }

    #[test]
    fn brute_force_guard() {
        let p = 1.0 / (12.0 * 13.0);
        let game = XorGame {
            name: "big".into(),
            s_count: 12,
            t_count: 13,
            pi: vec![vec![p; 13]; 12],
            v0: vec![vec![1.0; 13]; 12],
            v1: vec![vec![0.0; 13]; 12],
        };
        assert!(matches!(
            classical_value(&game),
            Err(GameError::TooLargeForBruteForce { total: 25 })
        ));
    }

    #[test]
    fn chsh_cost_matrix() {
        let cost = cost_matrix(&XorGame::chsh());
        assert_eq!(cost.get(0, 0), 0.25);
        assert_eq!(cost.get(0, 1), 0.25);
        assert_eq!(cost.get(1, 0), 0.25);
        assert_eq!(cost.get(1, 1), -0.25);
    }

    #[test]
    fn cost_matrix_zero_cases() {
        let all = all_accepting(2, 2);
        let cost = cost_matrix(&all);
        for s in 0..2 {
            for t in 0..2 {
                assert_eq!(cost.get(s, t), 0.0);
            }
        }
        let mut equal = XorGame::chsh();
        equal.v1 = equal.v0.clone();
        let cost = cost_matrix(&equal);
        for s in 0..2 {
            for t in 0..2 {
                assert_eq!(cost.get(s, t), 0.0);
            }
        }
    }

    #[test]
    fn random_games_are_reproducible() {
        let a = XorGame::random(4, 2, 7).unwrap();
        let b = XorGame::random(4, 2, 7).unwrap();
        assert_eq!(a.pi, b.pi);
        assert_eq!(a.v0, b.v0);
        assert_eq!(a.v1, b.v1);
        a.validate().unwrap();
    }

    #[test]
    fn random_game_guard() {
        assert!(matches!(XorGame::random(13, 2, 0), Err(GameError::InvalidParams(_))));
        assert!(matches!(XorGame::random(2, 0, 0), Err(GameError::InvalidParams(_))));
    }

    #[test]
    fn classical_value_bounds_and_constant_floor() {
        let mut rng = SplitMix64::new(31);
        for _ in 0..25 {
            let s = 1 + (rng.next_u64() % 4) as usize;
            let t = 1 + (rng.next_u64() % 4) as usize;
            let game = XorGame::random(s, t, rng.next_u64()).unwrap();
            let tau = trivial_value(&game);
            let (value, _) = classical_value(&game).unwrap();
            assert!((0.0..=1.0 + 1e-12).contains(&tau));
            assert!((0.0..=1.0 + 1e-12).contains(&value));
            assert!(value + 1e-12 >= best_constant_parity_value(&game));
            assert!(best_constant_parity_value(&game) + 1e-12 >= tau);
        }
    }
}
