use crate::approx::{verify_se, Deltas};
use crate::error::{invalid, Result};
use crate::game::{expected_utility, EpsilonVector, Game, MixedStrategy, Profile};

/// A decomposed profile `sigma_i = eps_i * tau_i + (1 - eps_i) * rho_i`.
///
/// `rho` and `tau` hold one entry per player; in games with more than two
/// players the protected player 0 carries neither (it simply best-responds
/// with `sigma_0`).
#[derive(Debug, Clone, PartialEq)]
pub struct SafeEqSolution {
    pub sigma: Profile,
    pub rho: Vec<Option<MixedStrategy>>,
    pub tau: Vec<Option<MixedStrategy>>,
    pub epsilon: EpsilonVector,
    pub deltas: Deltas,
    /// Realized `u_i(sigma)` in the game's own payoff units.
    pub utilities: Vec<f64>,
}

impl SafeEqSolution {
    /// Builds sigma from the components, then measures deltas and utilities
    /// on `game`. `protected_sigma` is player 0's strategy when the game has
    /// more than two players and must be `None` otherwise.
    pub fn assemble(
        game: &Game,
        epsilon: EpsilonVector,
        rho: Vec<Option<MixedStrategy>>,
        tau: Vec<Option<MixedStrategy>>,
        protected_sigma: Option<MixedStrategy>,
    ) -> Result<Self> {
        let n = game.num_players();
        epsilon.check_for(game)?;
        if rho.len() != n || tau.len() != n {
            return invalid("rho and tau need one entry per player");
        }
        let mut sigma = Vec::with_capacity(n);
        for i in 0..n {
            let s = match (&rho[i], &tau[i]) {
                (Some(r), Some(t)) => MixedStrategy::mixture(epsilon.get(i), t, r)?,
                (None, None) if i == 0 && n > 2 => match &protected_sigma {
                    Some(s) => s.clone(),
                    None => return invalid("player 0 strategy missing"),
                },
                _ => return invalid(format!("player {i} is missing a rho or tau component")),
            };
            sigma.push(s);
        }
        Self::from_parts(game, epsilon, Profile::new(sigma), rho, tau)
    }

    /// Wraps an explicit sigma (not recomputed from the components).
    pub fn from_parts(
        game: &Game,
        epsilon: EpsilonVector,
        sigma: Profile,
        rho: Vec<Option<MixedStrategy>>,
        tau: Vec<Option<MixedStrategy>>,
    ) -> Result<Self> {
        sigma.validate_for(game)?;
        let mut sol = Self { sigma, rho, tau, epsilon, deltas: Deltas::default(), utilities: Vec::new() };
        sol.deltas = verify_se(game, &sol)?;
        sol.utilities =
            (0..game.num_players()).map(|i| expected_utility(game, &sol.sigma, i)).collect::<Result<_>>()?;
        Ok(sol)
    }

    /// Largest componentwise gap in `sigma_i = eps_i tau_i + (1 - eps_i) rho_i`
    /// over the players that carry a decomposition.
    pub fn mixture_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for (i, s) in self.sigma.strategies().iter().enumerate() {
            if let (Some(r), Some(t)) = (&self.rho[i], &self.tau[i]) {
                let e = self.epsilon.get(i);
                for ((x, tv), rv) in s.probs().iter().zip(t.probs()).zip(r.probs()) {
                    worst = worst.max((x - (e * tv + (1.0 - e) * rv)).abs());
                }
            }
        }
        worst
    }
}
