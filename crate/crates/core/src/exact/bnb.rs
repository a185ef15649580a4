use crate::error::{Error, Result};
use crate::game::{EpsilonVector, Game};
use crate::lp::{check_feasible, LpStatus};
use crate::solution::SafeEqSolution;

use super::{build_mifp_2p, MifpModel};

const INTEGRAL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BnbStats {
    pub nodes: usize,
    pub lp_solves: usize,
    pub max_depth: usize,
    pub binaries: usize,
}

/// Exact epsilon-safe equilibrium of a two-player game.
pub fn solve_exact_2p(game: &Game, eps: &EpsilonVector) -> Result<SafeEqSolution> {
    solve_exact_2p_with_stats(game, eps).map(|(s, _)| s)
}

/// Depth-first branch-and-bound over the support binaries.
///
/// Each node fixes some binaries and solves the feasibility LP of the
/// remaining relaxation; infeasible nodes are pruned. Otherwise the free
/// binary whose relaxed value is closest to 0.5 is branched on (lowest index
/// on ties) with the 0-branch explored first. When every free binary is
/// already integral in the relaxed point, all binaries are fixed to those
/// values and the leaf LP is solved to confirm. A feasible leaf yields
/// `(rho, tau)`.
pub fn solve_exact_2p_with_stats(game: &Game, eps: &EpsilonVector) -> Result<(SafeEqSolution, BnbStats)> {
    let model = build_mifp_2p(game, eps)?;
    let nb = model.num_binaries();
    let mut stats = BnbStats { binaries: nb, ..Default::default() };
    let node_cap: u128 = (1u128 << (nb + 1).min(127)) - 1;

    let mut stack: Vec<Vec<Option<bool>>> = vec![vec![None; nb]];
    while let Some(fixing) = stack.pop() {
        stats.nodes += 1;
        if stats.nodes as u128 > node_cap {
            return Err(Error::Internal(format!("branch-and-bound exceeded {node_cap} nodes")));
        }
        let depth = fixing.iter().filter(|f| f.is_some()).count();
        stats.max_depth = stats.max_depth.max(depth);

        let Some(x) = node_point(&model, &fixing, &mut stats)? else { continue };

        let free: Vec<usize> = (0..nb).filter(|&k| fixing[k].is_none()).collect();
        let fractional = free.iter().any(|&k| {
            let v = x[model.binaries[k]];
            v > INTEGRAL_TOL && v < 1.0 - INTEGRAL_TOL
        });
        if !fractional {
            let leaf: Vec<Option<bool>> =
                (0..nb).map(|k| Some(fixing[k].unwrap_or_else(|| x[model.binaries[k]] > 0.5))).collect();
            if let Some(y) = node_point(&model, &leaf, &mut stats)? {
                return finish(&model, &y, stats);
            }
            // The rounded leaf can only fail through tolerance effects; fall
            // back to ordinary branching below.
        }

        let Some(&branch) = free.iter().min_by(|&&a, &&b| {
            let da = (x[model.binaries[a]] - 0.5).abs();
            let db = (x[model.binaries[b]] - 0.5).abs();
            da.total_cmp(&db).then(a.cmp(&b))
        }) else {
            // All binaries fixed and the LP is feasible.
            return finish(&model, &x, stats);
        };
        let mut one = fixing.clone();
        one[branch] = Some(true);
        let mut zero = fixing;
        zero[branch] = Some(false);
        stack.push(one);
        stack.push(zero);
    }
    Err(Error::Internal(format!(
        "branch-and-bound exhausted {} nodes without a feasible leaf; an equilibrium always exists",
        stats.nodes
    )))
}

/// Feasible point of the relaxation under `fixing`, or `None` if infeasible.
pub(crate) fn node_point(model: &MifpModel, fixing: &[Option<bool>], stats: &mut BnbStats) -> Result<Option<Vec<f64>>> {
    let mut bounds = model.relaxation.bounds.clone();
    for (k, f) in fixing.iter().enumerate() {
        if let Some(v) = f {
            let val = if *v { 1.0 } else { 0.0 };
            bounds[model.binaries[k]] = (val, val);
        }
    }
    stats.lp_solves += 1;
    let out = check_feasible(&model.relaxation.constraints, &bounds)?;
    Ok(match out.status {
        LpStatus::Optimal => Some(out.solution),
        _ => None,
    })
}

fn finish(model: &MifpModel, x: &[f64], stats: BnbStats) -> Result<(SafeEqSolution, BnbStats)> {
    let sol = model.extract(x)?;
    let tol = model.delta_tolerance();
    if sol.deltas.max_component() > tol {
        return Err(Error::Solver(format!(
            "leaf solution misses the equilibrium conditions by {:.3e} (tolerance {tol:.1e})",
            sol.deltas.max_component()
        )));
    }
    Ok((sol, stats))
}
