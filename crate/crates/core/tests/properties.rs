//! Cross-module invariants on randomized games and strategies.

use proptest::prelude::*;

use xorgame_core::entangled::entangled_win_probability;
use xorgame_core::game::{
    best_constant_parity_value, classical_value, classical_win_probability, trivial_value,
    validate_game, ClassicalStrategy, XorGame,
};
use xorgame_core::gram::{quantum_value, SolverConfig, VectorStrategy};
use xorgame_core::protocol::{simulated_value, verify_simulation};
use xorgame_core::rng::SplitMix64;
use xorgame_core::tsirelson::observables_from_vectors;

fn arb_game() -> impl Strategy<Value = XorGame> {
    (1usize..=3, 1usize..=3).prop_flat_map(|(s_count, t_count)| {
        let cells = s_count * t_count;
        (
            proptest::collection::vec(0.01f64..1.0, cells),
            proptest::collection::vec(0.0f64..=1.0, cells),
            proptest::collection::vec(0.0f64..=1.0, cells),
        )
            .prop_map(move |(pi_raw, v0_raw, v1_raw)| {
                let total: f64 = pi_raw.iter().sum();
                let rows = |v: &[f64]| -> Vec<Vec<f64>> {
                    (0..s_count).map(|i| v[i * t_count..(i + 1) * t_count].to_vec()).collect()
                };
                let pi: Vec<f64> = pi_raw.iter().map(|p| p / total).collect();
                XorGame {
                    name: "prop".into(),
                    s_count,
                    t_count,
                    pi: rows(&pi),
                    v0: rows(&v0_raw),
                    v1: rows(&v1_raw),
                }
            })
    })
}

fn arb_strategy_for(game: &XorGame, seed: u64) -> ClassicalStrategy {
    let mut rng = SplitMix64::new(seed);
    ClassicalStrategy {
        alice: (0..game.s_count).map(|_| (rng.next_u64() & 1) as u8).collect(),
        bob: (0..game.t_count).map(|_| (rng.next_u64() & 1) as u8).collect(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn games_survive_json_roundtrip(game in arb_game()) {
        let json = serde_json::to_string(&game).unwrap();
        let back: XorGame = serde_json::from_str(&json).unwrap();
        let back = validate_game(back).unwrap();
        prop_assert_eq!(game.pi, back.pi);
        prop_assert_eq!(game.v0, back.v0);
        prop_assert_eq!(game.v1, back.v1);
    }

    #[test]
    fn win_probability_is_affine_in_predicates(game in arb_game(), lambda in 0.0f64..=1.0, seed in any::<u64>()) {
        let strategy = arb_strategy_for(&game, seed);
        let base = classical_win_probability(&game, &strategy).unwrap();
        let mut scaled = game.clone();
        for table in [&mut scaled.v0, &mut scaled.v1] {
            for row in table.iter_mut() {
                for v in row.iter_mut() {
                    *v *= lambda;
                }
            }
        }
        let scaled_p = classical_win_probability(&scaled, &strategy).unwrap();
        prop_assert!((scaled_p - lambda * base).abs() < 1e-12);
    }

    #[test]
    fn value_ordering_holds(game in arb_game()) {
        let tau = trivial_value(&game);
        let floor = best_constant_parity_value(&game);
        let (classical, witness) = classical_value(&game).unwrap();
        prop_assert!((0.0..=1.0 + 1e-12).contains(&tau));
        prop_assert!(tau - 1e-9 <= floor);
        prop_assert!(floor <= classical + 1e-12);
        prop_assert!(classical <= 1.0 + 1e-12);
        let achieved = classical_win_probability(&game, &witness).unwrap();
        prop_assert!((achieved - classical).abs() < 1e-15);
    }

    #[test]
    fn simulated_value_matches_embedded_classical(game in arb_game(), seed in any::<u64>()) {
        let strategy = arb_strategy_for(&game, seed);
        let expect = classical_win_probability(&game, &strategy).unwrap();
        let embedded = VectorStrategy::from_classical(&strategy);
        let sim = simulated_value(&game, &embedded).unwrap();
        prop_assert!((sim - expect).abs() < 1e-12);
    }
}

/// No strategy that we can construct beats the solver's quantum value:
/// entangled realizations of random vector strategies stay below ω_q.
#[test]
fn no_entangled_strategy_beats_the_quantum_value() {
    let mut rng = SplitMix64::new(4242);
    for _ in 0..4 {
        let s = 1 + (rng.next_u64() % 3) as usize;
        let t = 1 + (rng.next_u64() % 3) as usize;
        let game = XorGame::random(s, t, rng.next_u64()).unwrap();
        let (omega_q, _) = quantum_value(&game, &SolverConfig::with_seed(9)).unwrap();
        for _ in 0..5 {
            let n_dim = 1 + (rng.next_u64() % 3) as usize;
            let vectors = VectorStrategy::random(s, t, n_dim, &mut rng);
            let entangled = observables_from_vectors(&vectors).unwrap();
            let p = entangled_win_probability(&game, &entangled).unwrap();
            assert!(p <= omega_q + 1e-4, "{}: {p} > {omega_q}", game.name);
        }
    }
}

/// The simulated game tracks the quantum value on a fresh batch of games
/// distinct from the acceptance seeds.
#[test]
fn simulation_identity_on_fresh_games() {
    let mut rng = SplitMix64::new(777);
    for _ in 0..5 {
        let s = 1 + (rng.next_u64() % 3) as usize;
        let t = 1 + (rng.next_u64() % 3) as usize;
        let game = XorGame::random(s, t, rng.next_u64()).unwrap();
        let report = verify_simulation(&game, &SolverConfig::with_seed(rng.next_u64())).unwrap();
        assert!(report.gap.abs() <= 1e-6);
        assert!(report.simulated_value >= report.classical_value - 1e-9);
        assert!(report.quantum_value <= 1.0 + 1e-9);
    }
}
