use crate::error::{invalid, Result};
use crate::game::{response_values_into, Game};
use crate::solution::SafeEqSolution;

/// Distance of a decomposed profile from an exact epsilon-safe equilibrium,
/// in the game's payoff units.
///
/// * `delta_rho`: largest gain of a best response over `rho_i`.
/// * `delta_tau`: largest excess of the targeted player's utility under
///   `tau_i` over its minimum.
/// * `delta_sigma`: gain of player 0 from deviating (more than two players
///   only).
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Deltas {
    pub delta_rho: f64,
    pub delta_tau: f64,
    pub delta_sigma: Option<f64>,
}

impl Deltas {
    pub fn max_component(&self) -> f64 {
        self.delta_rho.max(self.delta_tau).max(self.delta_sigma.unwrap_or(0.0))
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn max_of(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

fn min_of(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::INFINITY, f64::min)
}

/// Measures the deltas of `solution` on `game`. Inner optima range over pure
/// strategies, which is exact for linear objectives on the simplex.
pub fn verify_se(game: &Game, solution: &SafeEqSolution) -> Result<Deltas> {
    let n = game.num_players();
    solution.sigma.validate_for(game)?;
    if solution.rho.len() != n || solution.tau.len() != n {
        return invalid("rho and tau need one entry per player");
    }
    let sigma = solution.sigma.slices();
    let first = if n == 2 { 0 } else { 1 };
    let mut deltas = Deltas::default();

    for i in first..n {
        let m = game.num_strategies(i);
        let (Some(rho), Some(tau)) = (&solution.rho[i], &solution.tau[i]) else {
            return invalid(format!("player {i} is missing a rho or tau component"));
        };
        if rho.len() != m || tau.len() != m {
            return invalid(format!("rho/tau of player {i} have the wrong length"));
        }
        let target = if n == 2 { 1 - i } else { 0 };
        let mut own = vec![0.0; m];
        response_values_into(game, &sigma, i, i, &mut own);
        deltas.delta_rho = deltas.delta_rho.max(max_of(&own) - dot(&own, rho.probs()));
        let mut theirs = vec![0.0; m];
        response_values_into(game, &sigma, i, target, &mut theirs);
        deltas.delta_tau = deltas.delta_tau.max(dot(&theirs, tau.probs()) - min_of(&theirs));
    }
    if n > 2 {
        let mut own = vec![0.0; game.num_strategies(0)];
        response_values_into(game, &sigma, 0, 0, &mut own);
        deltas.delta_sigma = Some((max_of(&own) - dot(&own, solution.sigma.get(0).probs())).max(0.0));
    }
    deltas.delta_rho = deltas.delta_rho.max(0.0);
    deltas.delta_tau = deltas.delta_tau.max(0.0);
    Ok(deltas)
}
