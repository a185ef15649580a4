//! Exact two-player epsilon-safe equilibria through a mixed-integer
//! feasibility program.
//!
//! For every player `i` and role `j` (0: best response `rho`, 1: payoff
//! minimizer `tau`) the model carries, per pure strategy `s`, a probability
//! `p`, an expected utility `us`, a regret `r` and a support binary `b`, plus
//! a single best-attainable utility `u`:
//!
//! ```text
//! sum_s p[i,j,s] = 1
//! us[i,0,s] = sum_s' u_i(s, s')          * (eps_o p[o,1,s'] + (1 - eps_o) p[o,0,s'])
//! us[i,1,s] = sum_s' (c_o - u_o(s', s))  * (eps_o p[o,1,s'] + (1 - eps_o) p[o,0,s'])
//! r[i,j,s]  = u[i,j] - us[i,j,s]
//! p[i,j,s] <= 1 - b[i,j,s]
//! r[i,j,s] <= U[i,j] b[i,j,s]
//! p, u, us, r >= 0,  b in {0, 1}
//! ```
//!
//! where `o` is the opponent. Payoffs are first mapped into [0, 1] per
//! player. The minimizer role maximizes `c_o - u_o` with `c_o` the opponent's
//! largest normalized payoff, which keeps every utility nonnegative and has
//! the same argmin as `-u_o`. `U[i,j]` is the payoff spread of the utility
//! role `j` optimizes.
//!
//! The redundant constraint `u >= us` is omitted (it follows from the regret
//! definition and `r >= 0`).

mod bnb;
mod export;
mod support;

pub use bnb::{solve_exact_2p, solve_exact_2p_with_stats, BnbStats};
pub use export::{export_model, write_model};
pub use support::{support_enumerate_2p, SUPPORT_ENUM_BUDGET};

use crate::error::{invalid, Result};
use crate::game::{normalize_payoffs, AffineMap, EpsilonVector, Game, MixedStrategy};
use crate::lp::{LinearProgram, Relation, Sense};
use crate::solution::SafeEqSolution;

pub const ROLE_RHO: usize = 0;
pub const ROLE_TAU: usize = 1;

/// Column layout: for each `(player, role)` a block
/// `[p; m] [us; m] [r; m] [b; m] [u]`.
#[derive(Debug, Clone, PartialEq)]
pub struct VarIndex {
    counts: Vec<usize>,
    offsets: Vec<[usize; 2]>,
    total: usize,
}

impl VarIndex {
    fn new(counts: &[usize]) -> Self {
        let mut offsets = Vec::with_capacity(counts.len());
        let mut next = 0;
        for &m in counts {
            let a = next;
            let b = a + 4 * m + 1;
            next = b + 4 * m + 1;
            offsets.push([a, b]);
        }
        Self { counts: counts.to_vec(), offsets, total: next }
    }

    pub fn total(&self) -> usize {
        self.total
    }

    pub fn p(&self, i: usize, j: usize, s: usize) -> usize {
        self.offsets[i][j] + s
    }

    pub fn us(&self, i: usize, j: usize, s: usize) -> usize {
        self.offsets[i][j] + self.counts[i] + s
    }

    pub fn r(&self, i: usize, j: usize, s: usize) -> usize {
        self.offsets[i][j] + 2 * self.counts[i] + s
    }

    pub fn b(&self, i: usize, j: usize, s: usize) -> usize {
        self.offsets[i][j] + 3 * self.counts[i] + s
    }

    pub fn u(&self, i: usize, j: usize) -> usize {
        self.offsets[i][j] + 4 * self.counts[i]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MifpModel {
    /// The input game, in its own payoff units.
    pub game: Game,
    /// The game after per-player normalization into [0, 1].
    pub normalized: Game,
    pub maps: Vec<AffineMap>,
    pub epsilon: EpsilonVector,
    pub vars: VarIndex,
    /// LP relaxation: every binary relaxed to [0, 1].
    pub relaxation: LinearProgram,
    /// Column indices of the support binaries, ordered by (player, role, s).
    pub binaries: Vec<usize>,
    /// `big_m[i][j]` is U for player `i`, role `j`.
    pub big_m: Vec<[f64; 2]>,
    /// Stable variable names, see [`export_model`].
    pub names: Vec<String>,
    /// Row names, parallel to `relaxation.constraints`.
    pub row_names: Vec<String>,
}

impl MifpModel {
    pub fn num_binaries(&self) -> usize {
        self.binaries.len()
    }

    /// Reads `(rho, tau)` from a point of the model.
    pub(crate) fn extract(&self, x: &[f64]) -> Result<SafeEqSolution> {
        let mut rho = Vec::with_capacity(2);
        let mut tau = Vec::with_capacity(2);
        for i in 0..2 {
            let m = self.game.num_strategies(i);
            let read = |j: usize| (0..m).map(|s| x[self.vars.p(i, j, s)]).collect::<Vec<_>>();
            rho.push(Some(MixedStrategy::normalized(read(ROLE_RHO))?));
            tau.push(Some(MixedStrategy::normalized(read(ROLE_TAU))?));
        }
        SafeEqSolution::assemble(&self.game, self.epsilon.clone(), rho, tau, None)
    }

    /// Tolerance on the reported deltas, in the input game's payoff units.
    pub(crate) fn delta_tolerance(&self) -> f64 {
        let spread = self.maps.iter().map(|m| 1.0 / m.scale).fold(1.0, f64::max);
        1e-6 * spread
    }
}

fn spread(table: &[f64]) -> f64 {
    let lo = table.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = table.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    hi - lo
}

/// Builds the feasibility program for a two-player game.
pub fn build_mifp_2p(game: &Game, eps: &EpsilonVector) -> Result<MifpModel> {
    if game.num_players() != 2 {
        return invalid(format!("the exact formulation needs 2 players, got {}", game.num_players()));
    }
    eps.check_for(game)?;
    let (norm, maps) = normalize_payoffs(game);
    let counts = game.strategy_counts().to_vec();
    let vars = VarIndex::new(&counts);
    let mut lp = LinearProgram::new(vars.total(), Sense::Minimize);
    let mut names = vec![String::new(); vars.total()];
    let mut row_names = Vec::new();
    let mut binaries = Vec::new();
    let mut big_m = Vec::with_capacity(2);

    for i in 0..2 {
        let o = 1 - i;
        big_m.push([spread(norm.payoffs(i)), spread(norm.payoffs(o))]);
        for j in 0..2 {
            for s in 0..counts[i] {
                let tag = format!("{}_{}_{}", j + 1, i + 1, s + 1);
                names[vars.p(i, j, s)] = format!("p_{tag}");
                names[vars.us(i, j, s)] = format!("us_{tag}");
                names[vars.r(i, j, s)] = format!("r_{tag}");
                names[vars.b(i, j, s)] = format!("b_{tag}");
                lp.bounds[vars.b(i, j, s)] = (0.0, 1.0);
                binaries.push(vars.b(i, j, s));
            }
            names[vars.u(i, j)] = format!("u_{}_{}", j + 1, i + 1);
        }
    }

    let pure_index = |i: usize, s: usize, s_o: usize| if i == 0 { [s, s_o] } else { [s_o, s] };
    for i in 0..2 {
        let o = 1 - i;
        let eo = eps.get(o);
        let c_o = norm.payoffs(o).iter().copied().fold(f64::NEG_INFINITY, f64::max);
        for (j, &u_ij) in big_m[i].iter().enumerate() {
            let tag = format!("{}_{}", j + 1, i + 1);
            let terms: Vec<(usize, f64)> = (0..counts[i]).map(|s| (vars.p(i, j, s), 1.0)).collect();
            lp.add_sparse(&terms, Relation::Eq, 1.0);
            row_names.push(format!("sum_{tag}"));

            for s in 0..counts[i] {
                let stag = format!("{tag}_{}", s + 1);
                let mut terms = vec![(vars.us(i, j, s), 1.0)];
                for s_o in 0..counts[o] {
                    let idx = pure_index(i, s, s_o);
                    let coef = if j == ROLE_RHO { norm.payoff(i, &idx) } else { c_o - norm.payoff(o, &idx) };
                    if coef != 0.0 {
                        terms.push((vars.p(o, ROLE_TAU, s_o), -eo * coef));
                        terms.push((vars.p(o, ROLE_RHO, s_o), -(1.0 - eo) * coef));
                    }
                }
                lp.add_sparse(&terms, Relation::Eq, 0.0);
                row_names.push(format!("util_{stag}"));

                lp.add_sparse(
                    &[(vars.r(i, j, s), 1.0), (vars.u(i, j), -1.0), (vars.us(i, j, s), 1.0)],
                    Relation::Eq,
                    0.0,
                );
                row_names.push(format!("regret_{stag}"));

                lp.add_sparse(&[(vars.p(i, j, s), 1.0), (vars.b(i, j, s), 1.0)], Relation::Le, 1.0);
                row_names.push(format!("supp_{stag}"));

                lp.add_sparse(&[(vars.r(i, j, s), 1.0), (vars.b(i, j, s), -u_ij)], Relation::Le, 0.0);
                row_names.push(format!("bigm_{stag}"));
            }
        }
    }

    Ok(MifpModel {
        game: game.clone(),
        normalized: norm,
        maps,
        epsilon: eps.clone(),
        vars,
        relaxation: lp,
        binaries,
        big_m,
        names,
        row_names,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{chicken, random_game, seeded_rng};

    #[test]
    fn chicken_model_counts() {
        let eps = EpsilonVector::two_player(0.0, 0.05).unwrap();
        let model = build_mifp_2p(&chicken(), &eps).unwrap();
        assert_eq!(model.num_binaries(), 8);
        let count = |prefix: &str| model.names.iter().filter(|n| n.starts_with(prefix)).count();
        assert_eq!(count("p_"), 8);
        assert_eq!(count("r_"), 8);
        assert_eq!(count("us_"), 8);
        assert_eq!(count("u_"), 4);
        assert_eq!(model.big_m[0][0], 1.0);
        assert!(model.big_m.iter().flatten().all(|&u| u >= 0.0));
    }

    #[test]
    fn rejects_bad_inputs() {
        let g3 = random_game(3, 2, &mut seeded_rng(0)).unwrap();
        assert!(build_mifp_2p(&g3, &EpsilonVector::new(vec![0.0, 0.1, 0.1]).unwrap()).is_err());
        assert!(EpsilonVector::two_player(0.0, 1.2).is_err());
        let three = EpsilonVector::new(vec![0.0, 0.1, 0.1]).unwrap();
        assert!(build_mifp_2p(&chicken(), &three).is_err());
    }

    #[test]
    fn known_chicken_equilibrium_satisfies_the_relaxation() {
        // rho = tau-independent point at eps = (0, 0.05):
        // sigma_1 = sigma_2 = (0.9, 0.1), tau_2 = straight, rho_2 = (18/19, 1/19).
        let g = chicken();
        let eps = EpsilonVector::two_player(0.0, 0.05).unwrap();
        let model = build_mifp_2p(&g, &eps).unwrap();
        let v = &model.vars;
        let mut x = vec![0.0; v.total()];
        let strategies = [[[0.9, 0.1], [0.0, 1.0]], [[18.0 / 19.0, 1.0 / 19.0], [0.0, 1.0]]];
        for i in 0..2 {
            for j in 0..2 {
                for s in 0..2 {
                    x[v.p(i, j, s)] = strategies[i][j][s];
                }
            }
        }
        // Fill utilities, regrets, binaries from the linking rows.
        for i in 0..2 {
            for j in 0..2 {
                for s in 0..2 {
                    let row = model
                        .row_names
                        .iter()
                        .position(|n| *n == format!("util_{}_{}_{}", j + 1, i + 1, s + 1))
                        .unwrap();
                    let c = &model.relaxation.constraints[row];
                    let rest: f64 = c
                        .coeffs
                        .iter()
                        .zip(&x)
                        .enumerate()
                        .filter(|(k, _)| *k != v.us(i, j, s))
                        .map(|(_, (a, b))| a * b)
                        .sum();
                    x[v.us(i, j, s)] = -rest;
                }
                let best = (0..2).map(|s| x[v.us(i, j, s)]).fold(f64::NEG_INFINITY, f64::max);
                x[v.u(i, j)] = best;
                for s in 0..2 {
                    x[v.r(i, j, s)] = best - x[v.us(i, j, s)];
                    x[v.b(i, j, s)] = if x[v.p(i, j, s)] > 0.0 { 0.0 } else { 1.0 };
                }
            }
        }
        assert!(model.relaxation.max_violation(&x) < 1e-12, "{}", model.relaxation.max_violation(&x));
        assert!(model.relaxation.max_bound_violation(&x) == 0.0);
    }
}
