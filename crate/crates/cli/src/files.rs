use std::path::Path;

use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};

use safe_equilibrium::{EpsilonVector, Game, MixedStrategy, Profile, SafeEqSolution};

/// On-disk game: one flat payoff array per player, row-major with player 1's
/// strategy varying slowest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameFile {
    pub players: usize,
    pub strategy_counts: Vec<usize>,
    pub payoffs: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strategy_names: Option<Vec<Vec<String>>>,
}

impl GameFile {
    pub fn from_game(game: &Game) -> Self {
        Self {
            players: game.num_players(),
            strategy_counts: game.strategy_counts().to_vec(),
            payoffs: (0..game.num_players()).map(|i| game.payoffs(i).to_vec()).collect(),
            strategy_names: game.strategy_names().map(<[_]>::to_vec),
        }
    }

    pub fn to_game(&self) -> anyhow::Result<Game> {
        if self.players != self.strategy_counts.len() {
            bail!("players is {} but strategy_counts has {} entries", self.players, self.strategy_counts.len());
        }
        let game = Game::new(self.strategy_counts.clone(), self.payoffs.clone())?;
        match &self.strategy_names {
            Some(names) => Ok(game.with_strategy_names(names.clone())?),
            None => Ok(game),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeltasFile {
    pub delta_sigma: Option<f64>,
    pub delta_rho: f64,
    pub delta_tau: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub method: String,
    pub iterations: Option<usize>,
    pub restarts: Option<usize>,
    pub seed: Option<u64>,
    pub wall_time_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionFile {
    pub epsilon: Vec<f64>,
    pub sigma: Vec<Vec<f64>>,
    pub rho: Vec<Option<Vec<f64>>>,
    pub tau: Vec<Option<Vec<f64>>>,
    pub deltas: DeltasFile,
    pub utilities: Vec<f64>,
    pub metadata: Metadata,
}

fn probs(v: &[Option<MixedStrategy>]) -> Vec<Option<Vec<f64>>> {
    v.iter().map(|s| s.as_ref().map(|s| s.probs().to_vec())).collect()
}

fn strategies(v: &[Option<Vec<f64>>], what: &str) -> anyhow::Result<Vec<Option<MixedStrategy>>> {
    v.iter()
        .enumerate()
        .map(|(i, s)| {
            s.as_ref()
                .map(|p| MixedStrategy::new(p.clone()).with_context(|| format!("{what} of player {}", i + 1)))
                .transpose()
        })
        .collect()
}

impl SolutionFile {
    pub fn from_solution(sol: &SafeEqSolution, metadata: Metadata) -> Self {
        Self {
            epsilon: sol.epsilon.values().to_vec(),
            sigma: sol.sigma.strategies().iter().map(|s| s.probs().to_vec()).collect(),
            rho: probs(&sol.rho),
            tau: probs(&sol.tau),
            deltas: DeltasFile {
                delta_sigma: sol.deltas.delta_sigma,
                delta_rho: sol.deltas.delta_rho,
                delta_tau: sol.deltas.delta_tau,
            },
            utilities: sol.utilities.clone(),
            metadata,
        }
    }

    /// Rebuilds the solution against `game`, recomputing deltas and
    /// utilities from the stored strategies.
    pub fn to_solution(&self, game: &Game) -> anyhow::Result<SafeEqSolution> {
        let sigma = self
            .sigma
            .iter()
            .enumerate()
            .map(|(i, p)| MixedStrategy::new(p.clone()).with_context(|| format!("sigma of player {}", i + 1)))
            .collect::<anyhow::Result<Vec<_>>>()?;
        let eps = EpsilonVector::new(self.epsilon.clone())?;
        Ok(SafeEqSolution::from_parts(
            game,
            eps,
            Profile::new(sigma),
            strategies(&self.rho, "rho")?,
            strategies(&self.tau, "tau")?,
        )?)
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> anyhow::Result<T> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Pretty JSON with a trailing newline, to `path` or stdout.
pub fn write_json<T: Serialize>(value: &T, path: Option<&Path>) -> anyhow::Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
