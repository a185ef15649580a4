//! Computation, verification and benchmarking of epsilon-safe equilibria in
//! finite strategic-form games.
//!
//! A profile is an epsilon-safe equilibrium when every (non-protected) player
//! `i` plays `eps_i * tau_i + (1 - eps_i) * rho_i`, where `rho_i` is a best
//! response to the others and `tau_i` minimizes the payoff of the player `i`
//! is adversarial towards (the opponent in two-player games, player 0 in
//! n-player games).
//!
//! * [`exact`]: branch-and-bound over a mixed-integer feasibility program for
//!   two players, a support-enumeration cross-check, and LP-format export.
//! * [`approx`]: fictitious-play style iteration for any number of players,
//!   multi-restart initialization and the error metrics.
//! * [`constructions`]: auxiliary games used as correctness oracles.

pub mod approx;
pub mod constructions;
pub mod error;
pub mod exact;
pub mod game;
pub mod lp;
pub mod maximin;
pub mod solution;

pub use approx::{
    approx_2p, approx_np, approximate, run_with_restarts, verify_se, ApproxConfig, ApproxOutcome, Deltas,
};
pub use constructions::{auxiliary_game_thm1, extract_ne_from_reduction, hardness_reduction_thm2, ReducedGame};
pub use error::{Error, Result};
pub use exact::{
    build_mifp_2p, export_model, solve_exact_2p, solve_exact_2p_with_stats, support_enumerate_2p, write_model,
    BnbStats, MifpModel,
};
pub use game::{
    best_response, expected_utility, nash_regret, normalize_payoffs, pure_response_values, random_game, seeded_rng,
    trial_seed, worst_case_response, EpsilonVector, Game, GameRng, MixedStrategy, Profile,
};
pub use maximin::maximin_strategy;
pub use solution::SafeEqSolution;
