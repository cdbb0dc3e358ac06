//! `xorgame`: generate XOR games, compute their values, and simulate the
//! single-quantum-prover protocol.
//!
//! Exit codes are part of the scripting interface:
//! 0 success, 2 file/parse/parameter error, 3 game validation error,
//! 4 solver non-convergence, 5 simulated value disagrees with the quantum
//! value.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use xorgame_core::entangled::EntangledError;
use xorgame_core::game::{classical_value, trivial_value, validate_game, ClassicalStrategy, GameError, XorGame};
use xorgame_core::gram::{quantum_value, SolverConfig, SolverError};
use xorgame_core::protocol::{
    apply_prover, build_initial_state, outcome_distribution, verifier_measurement,
    verify_simulation, random_unitary, GameReport, ProtocolError, ProverAction,
};
use xorgame_core::rng::SplitMix64;
use xorgame_core::tsirelson::observables_from_vectors;

const SEED_ENV: &str = "XORGAME_SEED";

#[derive(Parser)]
#[command(name = "xorgame", version, about = "Classical, quantum, and simulated values of two-prover XOR games")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a game file
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Compute values of a game
    Value {
        /// Path to a game JSON file
        game: PathBuf,
        #[arg(long, value_enum, default_value_t = Which::All)]
        which: Which,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Check that the simulated single-prover value matches the quantum value
    Verify {
        game: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the protocol pair by pair and report outcome distributions
    Simulate {
        game: PathBuf,
        #[arg(long, value_enum)]
        prover: ProverKind,
        /// Classical strategy file for the honest prover (defaults to the
        /// brute-force optimum)
        #[arg(long)]
        strategy: Option<PathBuf>,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Compute an optimal strategy and write it as JSON
    Strategy {
        game: PathBuf,
        #[arg(long, value_enum, default_value_t = StrategyKind::Vector)]
        kind: StrategyKind,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Subcommand)]
enum GenKind {
    /// The CHSH game: uniform questions, accept iff a ⊕ b = s·t
    Chsh {
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Seeded random game with {0,1} predicate tables
    Random {
        #[arg(long)]
        s: usize,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Which {
    Trivial,
    Classical,
    Quantum,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProverKind {
    Honest,
    Optimal,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyKind {
    Classical,
    Vector,
    Entangled,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct SolverArgs {
    /// Seed for all randomized choices (falls back to $XORGAME_SEED, then 0)
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    restarts: Option<usize>,
    #[arg(long)]
    max_iters: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
struct OutputArgs {
    /// Write here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

enum CliError {
    Io { path: PathBuf, source: std::io::Error },
    Parse { path: PathBuf, source: serde_json::Error },
    InvalidParams(String),
    Validation(GameError),
    Solver(SolverError),
    Mismatch(Box<GameReport>),
    Internal(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } | CliError::Parse { .. } | CliError::InvalidParams(_) => 2,
            CliError::Validation(_) => 3,
            CliError::Solver(_) => 4,
            CliError::Mismatch(_) => 5,
            CliError::Internal(_) => 1,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Io { path, source } => format!("{}: {source}", path.display()),
            CliError::Parse { path, source } => format!("{}: parse error: {source}", path.display()),
            CliError::InvalidParams(msg) => format!("invalid parameters: {msg}"),
            CliError::Validation(e) => format!("invalid game: {e}"),
            CliError::Solver(e) => format!("solver: {e}"),
            CliError::Mismatch(report) => format!(
                "simulation mismatch: |w_sim - w_q| = {:.3e} exceeds 1e-6",
                report.gap.abs()
            ),
            CliError::Internal(msg) => format!("internal error: {msg}"),
        }
    }
}

impl From<GameError> for CliError {
    fn from(e: GameError) -> Self {
        match e {
            GameError::InvalidParams(msg) => CliError::InvalidParams(msg),
            other => CliError::Validation(other),
        }
    }
}

impl From<SolverError> for CliError {
    fn from(e: SolverError) -> Self {
        match e {
            SolverError::Game(g) => g.into(),
            other => CliError::Solver(other),
        }
    }
}

impl From<ProtocolError> for CliError {
    fn from(e: ProtocolError) -> Self {
        match e {
            ProtocolError::Game(g) => g.into(),
            ProtocolError::Solver(s) => s.into(),
            ProtocolError::SimulationMismatch { report } => CliError::Mismatch(report),
            other => CliError::Internal(other.to_string()),
        }
    }
}

impl From<EntangledError> for CliError {
    fn from(e: EntangledError) -> Self {
        CliError::Internal(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("xorgame: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Gen { kind } => cmd_gen(kind),
        Command::Value { game, which, solver, output } => cmd_value(&game, which, &solver, &output),
        Command::Verify { game, solver, output } => cmd_verify(&game, &solver, &output),
        Command::Simulate { game, prover, strategy, solver, output } => {
            cmd_simulate(&game, prover, strategy.as_deref(), &solver, &output)
        }
        Command::Strategy { game, kind, solver, output } => {
            cmd_strategy(&game, kind, &solver, &output)
        }
    }
}

fn resolve_seed(flag: Option<u64>) -> Result<u64, CliError> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match std::env::var(SEED_ENV) {
        Ok(text) => text
            .parse::<u64>()
            .map_err(|_| CliError::InvalidParams(format!("{SEED_ENV}={text} is not a u64"))),
        Err(_) => Ok(0),
    }
}

fn solver_config(args: &SolverArgs) -> Result<SolverConfig, CliError> {
    let mut config = SolverConfig::default();
    config.seed = resolve_seed(args.seed)?;
    if let Some(restarts) = args.restarts {
        if restarts == 0 {
            return Err(CliError::InvalidParams("--restarts must be positive".into()));
        }
        config.restarts = restarts;
    }
    if let Some(max_iters) = args.max_iters {
        if max_iters == 0 {
            return Err(CliError::InvalidParams("--max-iters must be positive".into()));
        }
        config.max_iters = max_iters;
    }
    if let Some(tol) = args.tol {
        if !(tol > 0.0) {
            return Err(CliError::InvalidParams("--tol must be positive".into()));
        }
        config.tol = tol;
    }
    Ok(config)
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    serde_json::from_str(&text).map_err(|source| CliError::Parse { path: path.to_path_buf(), source })
}

fn load_game(path: &Path) -> Result<XorGame, CliError> {
    let game: XorGame = read_json(path)?;
    validate_game(game).map_err(CliError::from)
}

fn emit(output: &OutputArgs, payload: &str) -> Result<(), CliError> {
    match &output.out {
        Some(path) => std::fs::write(path, payload)
            .map_err(|source| CliError::Io { path: path.clone(), source }),
        None => {
            print!("{payload}");
            Ok(())
        }
    }
}

fn emit_json<T: Serialize>(output: &OutputArgs, value: &T) -> Result<(), CliError> {
    let mut json = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Internal(format!("serialization failed: {e}")))?;
    json.push('\n');
    emit(output, &json)
}

#[derive(Serialize)]
struct ValueReport {
    game: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    tau: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    classical_value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    classical_strategy: Option<ClassicalStrategy>,
    #[serde(skip_serializing_if = "Option::is_none")]
    quantum_value: Option<f64>,
}

#[derive(Serialize)]
struct PairOutcome {
    s: usize,
    t: usize,
    p0: f64,
    p1: f64,
    p_reject: f64,
}

#[derive(Serialize)]
struct SimulateReport {
    game: String,
    prover: String,
    seed: u64,
    p_dim: usize,
    pairs: Vec<PairOutcome>,
    acceptance: f64,
}

fn cmd_gen(kind: GenKind) -> Result<(), CliError> {
    let (game, output) = match kind {
        GenKind::Chsh { output } => (XorGame::chsh(), output),
        GenKind::Random { s, t, seed, output } => {
            let seed = resolve_seed(seed)?;
            (XorGame::random(s, t, seed)?, output)
        }
    };
    match output.format {
        Format::Json => emit_json(&output, &game),
        Format::Text => {
            let mut text = String::new();
            let _ = writeln!(text, "game: {}", game.name);
            let _ = writeln!(text, "questions: {}x{}", game.s_count, game.t_count);
            let _ = writeln!(text, "tau: {}", trivial_value(&game));
            emit(&output, &text)
        }
    }
}

fn cmd_value(
    path: &Path,
    which: Which,
    solver: &SolverArgs,
    output: &OutputArgs,
) -> Result<(), CliError> {
    let game = load_game(path)?;
    let mut report = ValueReport {
        game: game.name.clone(),
        tau: None,
        classical_value: None,
        classical_strategy: None,
        quantum_value: None,
    };
    if matches!(which, Which::Trivial | Which::All) {
        report.tau = Some(trivial_value(&game));
    }
    if matches!(which, Which::Classical | Which::All) {
        let (value, strategy) = classical_value(&game)?;
        report.classical_value = Some(value);
        report.classical_strategy = Some(strategy);
    }
    if matches!(which, Which::Quantum | Which::All) {
        let config = solver_config(solver)?;
        let (value, _) = quantum_value(&game, &config)?;
        report.quantum_value = Some(value);
    }
    match output.format {
        Format::Json => emit_json(output, &report),
        Format::Text => {
            let mut text = String::new();
            let _ = writeln!(text, "game: {}", report.game);
            if let Some(tau) = report.tau {
                let _ = writeln!(text, "tau: {tau}");
            }
            if let Some(v) = report.classical_value {
                let _ = writeln!(text, "classical_value: {v}");
            }
            if let Some(v) = report.quantum_value {
                let _ = writeln!(text, "quantum_value: {v}");
            }
            emit(output, &text)
        }
    }
}

fn cmd_verify(path: &Path, solver: &SolverArgs, output: &OutputArgs) -> Result<(), CliError> {
    let game = load_game(path)?;
    let config = solver_config(solver)?;
    let (report, mismatch) = match verify_simulation(&game, &config) {
        Ok(report) => (report, false),
        Err(ProtocolError::SimulationMismatch { report }) => (*report, true),
        Err(other) => return Err(other.into()),
    };
    match output.format {
        Format::Json => emit_json(output, &report)?,
        Format::Text => {
            let mut text = String::new();
            let _ = writeln!(text, "game: {}", report.game);
            let _ = writeln!(text, "tau: {}", report.tau);
            let _ = writeln!(text, "classical_value: {}", report.classical_value);
            let _ = writeln!(text, "quantum_value: {}", report.quantum_value);
            let _ = writeln!(text, "simulated_value: {}", report.simulated_value);
            let _ = writeln!(text, "gap: {:e}", report.gap);
            let _ = writeln!(text, "status: {}", if mismatch { "MISMATCH" } else { "ok" });
            emit(output, &text)?;
        }
    }
    if mismatch {
        return Err(CliError::Mismatch(Box::new(report)));
    }
    Ok(())
}

fn cmd_simulate(
    path: &Path,
    prover: ProverKind,
    strategy_path: Option<&Path>,
    solver: &SolverArgs,
    output: &OutputArgs,
) -> Result<(), CliError> {
    let game = load_game(path)?;
    let config = solver_config(solver)?;
    let (label, p_dim, action) = match prover {
        ProverKind::Honest => {
            let strategy = match strategy_path {
                Some(p) => {
                    let s: ClassicalStrategy = read_json(p)?;
                    if s.alice.len() != game.s_count || s.bob.len() != game.t_count {
                        return Err(CliError::InvalidParams(format!(
                            "strategy file has {}|{} answers for a {}x{} game",
                            s.alice.len(),
                            s.bob.len(),
                            game.s_count,
                            game.t_count
                        )));
                    }
                    if s.alice.iter().chain(s.bob.iter()).any(|&b| b > 1) {
                        return Err(CliError::InvalidParams("strategy answers must be bits".into()));
                    }
                    s
                }
                None => classical_value(&game)?.1,
            };
            ("honest", 1, ProverAction::Honest(strategy))
        }
        ProverKind::Optimal => {
            let (_, vectors) = quantum_value(&game, &config)?;
            let p_dim = vectors.n_dim.max(1);
            ("optimal", p_dim, ProverAction::Vector(vectors))
        }
        ProverKind::Random => {
            let p_dim = game.s_count + game.t_count;
            let dim = (game.s_count + game.t_count) * p_dim;
            let mut rng = SplitMix64::new(config.seed);
            ("random", p_dim, ProverAction::Unitary(random_unitary(dim, &mut rng)))
        }
    };

    let mut pairs = Vec::new();
    let mut acceptance = 0.0;
    for s in 0..game.s_count {
        for t in 0..game.t_count {
            let state = build_initial_state(&game, s, t, p_dim)?;
            let state = apply_prover(&state, &action, s, t)?;
            let meas = verifier_measurement(&game, s, t)?;
            let outcome = outcome_distribution(&state, &meas)?;
            acceptance += game.pi[s][t] * (game.v0[s][t] * outcome.p0 + game.v1[s][t] * outcome.p1);
            pairs.push(PairOutcome {
                s,
                t,
                p0: outcome.p0,
                p1: outcome.p1,
                p_reject: outcome.p_reject,
            });
        }
    }
    let report = SimulateReport {
        game: game.name.clone(),
        prover: label.to_string(),
        seed: config.seed,
        p_dim,
        pairs,
        acceptance,
    };
    match output.format {
        Format::Json => emit_json(output, &report),
        Format::Text => {
            let mut text = String::new();
            let _ = writeln!(text, "game: {} prover: {}", report.game, report.prover);
            for pair in &report.pairs {
                let _ = writeln!(
                    text,
                    "(s={}, t={})  p0={:.12}  p1={:.12}  p_reject={:.3e}",
                    pair.s, pair.t, pair.p0, pair.p1, pair.p_reject
                );
            }
            let _ = writeln!(text, "acceptance: {}", report.acceptance);
            emit(output, &text)
        }
    }
}

fn cmd_strategy(
    path: &Path,
    kind: StrategyKind,
    solver: &SolverArgs,
    output: &OutputArgs,
) -> Result<(), CliError> {
    let game = load_game(path)?;
    match kind {
        StrategyKind::Classical => {
            let (_, strategy) = classical_value(&game)?;
            emit_json(output, &strategy)
        }
        StrategyKind::Vector => {
            let config = solver_config(solver)?;
            let (_, vectors) = quantum_value(&game, &config)?;
            emit_json(output, &vectors)
        }
        StrategyKind::Entangled => {
            let config = solver_config(solver)?;
            let (_, vectors) = quantum_value(&game, &config)?;
            let entangled = observables_from_vectors(&vectors)
                .map_err(|e| CliError::Internal(e.to_string()))?;
            emit_json(output, &entangled)
        }
    }
}
