//! Fictitious-play style approximation of epsilon-safe equilibria.
//!
//! Each iteration computes, against the previous average profile, a pure
//! best response `rho'` and a pure payoff-minimizer `tau'` for every
//! decomposed player (lowest index on ties), forms `eps * tau' + (1 - eps) *
//! rho'`, and folds it into the running averages with weight `1 / (t + 1)`.
//! With more than two players, player 0 is protected: it only best-responds
//! and the others' `tau'` minimizes player 0's payoff.

mod verify;

use rand::Rng;
use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;

pub use verify::{verify_se, Deltas};

use crate::error::{invalid, Error, Result};
use crate::game::{argmax_lowest, argmin_lowest, response_values_into, seeded_rng, EpsilonVector, Game, MixedStrategy};
use crate::solution::SafeEqSolution;

/// Tolerance for the per-iteration invariant checks.
pub const INVARIANT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct ApproxConfig {
    pub iterations: usize,
    pub restarts: usize,
    /// Seeds the generator that samples restart profiles 1..K-1.
    pub seed: u64,
    /// Check the mixture identity and simplex membership at every iteration.
    pub check_invariants: bool,
}

impl Default for ApproxConfig {
    fn default() -> Self {
        Self { iterations: 10_000, restarts: 1, seed: 0, check_invariants: false }
    }
}

impl ApproxConfig {
    pub fn new(iterations: usize, restarts: usize, seed: u64) -> Self {
        Self { iterations, restarts, seed, check_invariants: false }
    }

    pub fn with_invariant_checks(mut self) -> Self {
        self.check_invariants = true;
        self
    }

    fn check(&self) -> Result<()> {
        if self.iterations == 0 {
            return invalid("iterations must be at least 1");
        }
        if self.restarts == 0 {
            return invalid("restarts must be at least 1");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct InvariantReport {
    pub iterations_checked: usize,
    pub max_mixture_residual: f64,
    pub max_simplex_residual: f64,
}

impl InvariantReport {
    pub fn merge(&mut self, other: &InvariantReport) {
        self.iterations_checked += other.iterations_checked;
        self.max_mixture_residual = self.max_mixture_residual.max(other.max_mixture_residual);
        self.max_simplex_residual = self.max_simplex_residual.max(other.max_simplex_residual);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ApproxOutcome {
    pub solution: SafeEqSolution,
    /// Index of the restart whose run was returned (0 is the uniform start).
    pub selected_restart: usize,
    /// `max` of the delta components of every restart, by restart index.
    pub restart_scores: Vec<f64>,
    /// Present when `check_invariants` was set; aggregated over restarts.
    pub invariants: Option<InvariantReport>,
}

/// Initial `(tau, rho)` per player. In protected mode `rho[0]` is the initial
/// strategy of player 0 and `tau[0]` is unused.
#[derive(Debug, Clone)]
struct Start {
    tau: Vec<Vec<f64>>,
    rho: Vec<Vec<f64>>,
}

impl Start {
    fn uniform(game: &Game) -> Self {
        let u: Vec<Vec<f64>> = game.strategy_counts().iter().map(|&m| vec![1.0 / m as f64; m]).collect();
        Self { tau: u.clone(), rho: u }
    }

    fn sampled<R: Rng + ?Sized>(game: &Game, rng: &mut R) -> Self {
        let mut draw = |m: usize| {
            let w: Vec<f64> = (0..m).map(|_| Exp1.sample(rng)).collect();
            let s: f64 = w.iter().sum();
            w.into_iter().map(|x: f64| x / s).collect::<Vec<f64>>()
        };
        let mut tau = Vec::new();
        let mut rho = Vec::new();
        for &m in game.strategy_counts() {
            tau.push(draw(m));
            rho.push(draw(m));
        }
        Self { tau, rho }
    }
}

/// Two-player approximation. Runs the restart scheme when `cfg.restarts > 1`.
pub fn approx_2p(game: &Game, eps: &EpsilonVector, cfg: &ApproxConfig) -> Result<ApproxOutcome> {
    if game.num_players() != 2 {
        return invalid(format!("approx_2p needs a 2-player game, got {} players", game.num_players()));
    }
    eps.check_for(game)?;
    run_with_restarts(game, eps, cfg)
}

/// n-player approximation (n >= 3) with player 0 protected.
pub fn approx_np(game: &Game, eps: &EpsilonVector, cfg: &ApproxConfig) -> Result<ApproxOutcome> {
    if game.num_players() < 3 {
        return invalid(format!("approx_np needs at least 3 players, got {}", game.num_players()));
    }
    eps.check_for(game)?;
    if eps.get(0) != 0.0 {
        return invalid("player 0 is protected; its epsilon must be 0");
    }
    run_with_restarts(game, eps, cfg)
}

/// Dispatches to [`approx_2p`] or [`approx_np`] by player count.
pub fn approximate(game: &Game, eps: &EpsilonVector, cfg: &ApproxConfig) -> Result<ApproxOutcome> {
    if game.num_players() == 2 {
        approx_2p(game, eps, cfg)
    } else {
        approx_np(game, eps, cfg)
    }
}

/// Runs `cfg.restarts` independent instances (restart 0 from the uniform
/// profile, the rest from Dirichlet(1, ..., 1) samples drawn in order from
/// `cfg.seed`) and returns the one with the smallest worst delta component,
/// lowest restart index on ties.
pub fn run_with_restarts(game: &Game, eps: &EpsilonVector, cfg: &ApproxConfig) -> Result<ApproxOutcome> {
    cfg.check()?;
    eps.check_for(game)?;
    if game.num_players() > 2 && eps.get(0) != 0.0 {
        return invalid("player 0 is protected; its epsilon must be 0");
    }
    let mut starts = vec![Start::uniform(game)];
    let mut rng = seeded_rng(cfg.seed);
    for _ in 1..cfg.restarts {
        starts.push(Start::sampled(game, &mut rng));
    }

    let runs: Vec<(SafeEqSolution, Option<InvariantReport>)> = if starts.len() == 1 {
        vec![run_single(game, eps, &starts[0], cfg)?]
    } else {
        starts.par_iter().map(|s| run_single(game, eps, s, cfg)).collect::<Result<_>>()?
    };

    let restart_scores: Vec<f64> = runs.iter().map(|(s, _)| s.deltas.max_component()).collect();
    let mut best = 0;
    for (k, &score) in restart_scores.iter().enumerate() {
        if score < restart_scores[best] {
            best = k;
        }
    }
    let invariants = cfg.check_invariants.then(|| {
        let mut all = InvariantReport::default();
        for (_, r) in &runs {
            if let Some(r) = r {
                all.merge(r);
            }
        }
        all
    });
    let solution = runs.into_iter().nth(best).map(|(s, _)| s).expect("at least one restart");
    Ok(ApproxOutcome { solution, selected_restart: best, restart_scores, invariants })
}

fn run_single(
    game: &Game,
    eps: &EpsilonVector,
    start: &Start,
    cfg: &ApproxConfig,
) -> Result<(SafeEqSolution, Option<InvariantReport>)> {
    let n = game.num_players();
    let protected = n > 2;
    let e = eps.values();

    let mut tau = start.tau.clone();
    let mut rho = start.rho.clone();
    let mut sigma: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            if protected && i == 0 {
                rho[0].clone()
            } else {
                tau[i].iter().zip(&rho[i]).map(|(t, r)| e[i] * t + (1.0 - e[i]) * r).collect()
            }
        })
        .collect();

    let mut report = cfg.check_invariants.then(InvariantReport::default);
    if let Some(rep) = report.as_mut() {
        check_iteration(0, protected, e, &sigma, &rho, &tau, rep)?;
    }

    let max_m = game.strategy_counts().iter().copied().max().unwrap_or(1);
    let mut values = vec![0.0; max_m];
    let mut rho_pick = vec![0usize; n];
    let mut tau_pick = vec![0usize; n];

    for t in 1..=cfg.iterations {
        {
            let views: Vec<&[f64]> = sigma.iter().map(Vec::as_slice).collect();
            for i in 0..n {
                let m = game.num_strategies(i);
                let buf = &mut values[..m];
                response_values_into(game, &views, i, i, buf);
                rho_pick[i] = argmax_lowest(buf);
                if protected && i == 0 {
                    continue;
                }
                let target = if protected { 0 } else { 1 - i };
                response_values_into(game, &views, i, target, buf);
                tau_pick[i] = argmin_lowest(buf);
            }
        }

        let w = 1.0 / (t as f64 + 1.0);
        let keep = 1.0 - w;
        for i in 0..n {
            sigma[i].iter_mut().for_each(|x| *x *= keep);
            if protected && i == 0 {
                sigma[0][rho_pick[0]] += w;
                continue;
            }
            sigma[i][tau_pick[i]] += w * e[i];
            sigma[i][rho_pick[i]] += w * (1.0 - e[i]);
            rho[i].iter_mut().for_each(|x| *x *= keep);
            rho[i][rho_pick[i]] += w;
            tau[i].iter_mut().for_each(|x| *x *= keep);
            tau[i][tau_pick[i]] += w;
        }

        if let Some(rep) = report.as_mut() {
            check_iteration(t, protected, e, &sigma, &rho, &tau, rep)?;
        }
    }

    let mut rho_out = Vec::with_capacity(n);
    let mut tau_out = Vec::with_capacity(n);
    for i in 0..n {
        if protected && i == 0 {
            rho_out.push(None);
            tau_out.push(None);
        } else {
            rho_out.push(Some(MixedStrategy::from_raw(rho[i].clone())));
            tau_out.push(Some(MixedStrategy::from_raw(tau[i].clone())));
        }
    }
    let sigma = crate::game::Profile::new(sigma.into_iter().map(MixedStrategy::from_raw).collect());
    let solution = SafeEqSolution::from_parts(game, eps.clone(), sigma, rho_out, tau_out)?;
    Ok((solution, report))
}

fn check_iteration(
    t: usize,
    protected: bool,
    e: &[f64],
    sigma: &[Vec<f64>],
    rho: &[Vec<f64>],
    tau: &[Vec<f64>],
    report: &mut InvariantReport,
) -> Result<()> {
    let simplex = |v: &[f64]| {
        let neg = v.iter().fold(0.0f64, |a, &x| a.max(-x));
        neg.max((v.iter().sum::<f64>() - 1.0).abs())
    };
    for i in 0..sigma.len() {
        let mut simplex_res = simplex(&sigma[i]);
        let mut mix_res = 0.0f64;
        if !(protected && i == 0) {
            simplex_res = simplex_res.max(simplex(&rho[i])).max(simplex(&tau[i]));
            for k in 0..sigma[i].len() {
                mix_res = mix_res.max((sigma[i][k] - (e[i] * tau[i][k] + (1.0 - e[i]) * rho[i][k])).abs());
            }
        }
        report.max_mixture_residual = report.max_mixture_residual.max(mix_res);
        report.max_simplex_residual = report.max_simplex_residual.max(simplex_res);
        if mix_res > INVARIANT_TOL {
            return Err(Error::Invariant {
                iteration: t,
                detail: format!("mixture identity off by {mix_res:.3e} for player {i}"),
            });
        }
        if simplex_res > INVARIANT_TOL {
            return Err(Error::Invariant {
                iteration: t,
                detail: format!("player {i} left the simplex by {simplex_res:.3e}"),
            });
        }
    }
    report.iterations_checked += 1;
    Ok(())
}
