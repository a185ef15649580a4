//! Auxiliary games from the existence and hardness arguments, used as
//! correctness oracles.

use crate::error::{invalid, Error, Result};
use crate::game::{EpsilonVector, Game, MixedStrategy, Profile};
use crate::solution::SafeEqSolution;

/// Four-player game whose Nash equilibria are the epsilon-safe equilibria of
/// a two-player `game`. Players are, in order, `tau_1` and `rho_1` (both with
/// player 1's strategies) then `tau_2` and `rho_2` (player 2's strategies):
///
/// ```text
/// u'_1 = -e2 u_2(a, c) - (1 - e2) u_2(a, d)
/// u'_2 =  e2 u_1(b, c) + (1 - e2) u_1(b, d)
/// u'_3 = -e1 u_1(a, c) - (1 - e1) u_1(b, c)
/// u'_4 =  e1 u_2(a, d) + (1 - e1) u_2(b, d)
/// ```
pub fn auxiliary_game_thm1(game: &Game, eps: &EpsilonVector) -> Result<Game> {
    if game.num_players() != 2 {
        return invalid("the auxiliary game is defined for two-player games");
    }
    eps.check_for(game)?;
    let (m1, m2) = (game.num_strategies(0), game.num_strategies(1));
    let (e1, e2) = (eps.get(0), eps.get(1));
    let counts = vec![m1, m1, m2, m2];
    let outcomes = m1 * m1 * m2 * m2;
    let mut payoffs: Vec<Vec<f64>> = (0..4).map(|_| Vec::with_capacity(outcomes)).collect();
    let u = |p: usize, r: usize, c: usize| game.payoff(p, &[r, c]);
    for a in 0..m1 {
        for b in 0..m1 {
            for c in 0..m2 {
                for d in 0..m2 {
                    payoffs[0].push(-e2 * u(1, a, c) - (1.0 - e2) * u(1, a, d));
                    payoffs[1].push(e2 * u(0, b, c) + (1.0 - e2) * u(0, b, d));
                    payoffs[2].push(-e1 * u(0, a, c) - (1.0 - e1) * u(0, b, c));
                    payoffs[3].push(e1 * u(1, a, d) + (1.0 - e1) * u(1, b, d));
                }
            }
        }
    }
    Game::new(counts, payoffs)
}

/// `(tau_1, rho_1, tau_2, rho_2)` of a two-player solution as a profile of
/// the auxiliary game.
pub fn auxiliary_profile(solution: &SafeEqSolution) -> Result<Profile> {
    let get = |v: &Option<MixedStrategy>| {
        v.clone().ok_or_else(|| Error::InvalidArgument("solution lacks a rho/tau component".into()))
    };
    Ok(Profile::new(vec![
        get(&solution.tau[0])?,
        get(&solution.rho[0])?,
        get(&solution.tau[1])?,
        get(&solution.rho[1])?,
    ]))
}

/// Reads a profile of the auxiliary game back as a decomposed solution.
pub fn solution_from_auxiliary(game: &Game, eps: &EpsilonVector, profile: &Profile) -> Result<SafeEqSolution> {
    if profile.len() != 4 {
        return invalid("auxiliary profiles have four strategies");
    }
    let s = profile.strategies();
    SafeEqSolution::assemble(
        game,
        eps.clone(),
        vec![Some(s[1].clone()), Some(s[3].clone())],
        vec![Some(s[0].clone()), Some(s[2].clone())],
        None,
    )
}

/// A two-player game extended by a sink strategy `t` (last index for both
/// players).
///
/// Whoever plays `t` receives `sink_payoff`, one below the smallest payoff
/// of the base game. A player using a base strategy against `t` receives
/// `facing_sink_payoff`, half a unit above `sink_payoff`. Paying the sink
/// value to both players would leave `t` only weakly dominated, and
/// "everyone plays `t`" would then be a degenerate solution of the reduced
/// game; the half-unit gap makes `t` strictly dominated while keeping it the
/// unique way to minimize the opponent's payoff.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedGame {
    pub base: Game,
    pub sink_payoff: f64,
    pub facing_sink_payoff: f64,
    pub game: Game,
}

/// Appends the sink strategy to both players of `game`.
pub fn hardness_reduction_thm2(game: &Game) -> Result<ReducedGame> {
    if game.num_players() != 2 {
        return invalid("the reduction is defined for two-player games");
    }
    let sink = game.min_payoff() - 1.0;
    let facing = sink + 0.5;
    let (m1, m2) = (game.num_strategies(0), game.num_strategies(1));
    let mut payoffs: Vec<Vec<f64>> = (0..2).map(|_| Vec::with_capacity((m1 + 1) * (m2 + 1))).collect();
    for r in 0..=m1 {
        for c in 0..=m2 {
            let own = [r == m1, c == m2];
            for (p, table) in payoffs.iter_mut().enumerate() {
                table.push(match own {
                    [false, false] => game.payoff(p, &[r, c]),
                    _ if own[p] => sink,
                    _ => facing,
                });
            }
        }
    }
    Ok(ReducedGame {
        base: game.clone(),
        sink_payoff: sink,
        facing_sink_payoff: facing,
        game: Game::new(vec![m1 + 1, m2 + 1], payoffs)?,
    })
}

/// Structural tolerance on the mass rho/tau put on the sink.
pub const SINK_TOL: f64 = 1e-6;

/// Strips the sink from `rho` of a verified solution of the reduced game.
/// Fails if `rho` uses the sink or `tau` avoids it, both of which are
/// impossible for a correct solution with every epsilon below one.
pub fn extract_ne_from_reduction(reduced: &ReducedGame, solution: &SafeEqSolution) -> Result<Profile> {
    let mut out = Vec::with_capacity(2);
    for i in 0..2 {
        let (Some(rho), Some(tau)) = (&solution.rho[i], &solution.tau[i]) else {
            return invalid(format!("player {i} lacks a rho or tau component"));
        };
        let m = reduced.base.num_strategies(i);
        if rho.len() != m + 1 || tau.len() != m + 1 {
            return invalid("solution does not match the reduced game");
        }
        if rho.probs()[m] > SINK_TOL {
            return Err(Error::ReductionViolated(format!(
                "rho of player {i} puts {} on the dominated sink",
                rho.probs()[m]
            )));
        }
        if tau.probs()[m] < 1.0 - SINK_TOL {
            return Err(Error::ReductionViolated(format!(
                "tau of player {i} puts only {} on the sink",
                tau.probs()[m]
            )));
        }
        out.push(MixedStrategy::normalized(rho.probs()[..m].to_vec())?);
    }
    Ok(Profile::new(out))
}
