use crate::error::{Error, Result};
use crate::game::{EpsilonVector, Game};
use crate::solution::SafeEqSolution;

use super::bnb::{node_point, BnbStats};
use super::{build_mifp_2p, ROLE_RHO, ROLE_TAU};

/// Largest number of support 4-tuples a single enumeration may visit.
pub const SUPPORT_ENUM_BUDGET: u64 = 1 << 20;

/// Brute-force counterpart of the branch-and-bound: enumerates supports of
/// `(rho_1, tau_1, rho_2, tau_2)` in lexicographic order of their bitmasks,
/// fixes the binaries they imply (0 inside the support, 1 outside) and
/// returns the first feasible one. Supports larger than `max_size` are
/// skipped. `Ok(None)` means no tuple was feasible.
pub fn support_enumerate_2p(game: &Game, eps: &EpsilonVector, max_size: usize) -> Result<Option<SafeEqSolution>> {
    let model = build_mifp_2p(game, eps)?;
    let counts = game.strategy_counts();
    let masks: Vec<Vec<u64>> = (0..2)
        .map(|i| {
            let m = counts[i];
            if m > 20 {
                return Vec::new();
            }
            (1u64..(1u64 << m)).filter(|mask| mask.count_ones() as usize <= max_size).collect()
        })
        .collect();
    if counts.iter().any(|&m| m > 20) {
        return Err(Error::Budget(format!("support enumeration over {counts:?} strategies")));
    }
    let total = (masks[0].len() as u64).saturating_pow(2).saturating_mul((masks[1].len() as u64).saturating_pow(2));
    if total > SUPPORT_ENUM_BUDGET {
        return Err(Error::Budget(format!("{total} support tuples exceed the budget of {SUPPORT_ENUM_BUDGET}")));
    }

    let mut stats = BnbStats::default();
    let mut fixing = vec![None; model.num_binaries()];
    let position = |i: usize, j: usize, s: usize| {
        model.binaries.iter().position(|&c| c == model.vars.b(i, j, s)).expect("binary column")
    };
    let slots: Vec<Vec<usize>> = [(0, ROLE_RHO), (0, ROLE_TAU), (1, ROLE_RHO), (1, ROLE_TAU)]
        .iter()
        .map(|&(i, j)| (0..counts[i]).map(|s| position(i, j, s)).collect())
        .collect();

    for &a in &masks[0] {
        for &b in &masks[0] {
            for &c in &masks[1] {
                for &d in &masks[1] {
                    for (slot, mask) in slots.iter().zip([a, b, c, d]) {
                        for (s, &k) in slot.iter().enumerate() {
                            fixing[k] = Some(mask & (1 << s) == 0);
                        }
                    }
                    if let Some(x) = node_point(&model, &fixing, &mut stats)? {
                        return Ok(Some(model.extract(&x)?));
                    }
                }
            }
        }
    }
    Ok(None)
}
