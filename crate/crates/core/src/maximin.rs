use crate::error::{Error, Result};
use crate::game::{Game, MixedStrategy};
use crate::lp::{solve_lp, LinearProgram, LpStatus, Relation, Sense};

/// Maximin strategy of `player` and its guaranteed value.
///
/// Solves `max v` subject to `sum_s p_s u(s, s_-i) >= v` for every joint pure
/// profile `s_-i` of the opponents. Against a fixed `p` the inner minimum over
/// independent opponent mixtures is a multilinear function, so it is attained
/// at a pure profile and the joint enumeration is exact.
///
/// The reported value is re-evaluated from the returned strategy, so it is
/// the true guarantee of that strategy rather than the LP's bookkeeping.
pub fn maximin_strategy(game: &Game, player: usize) -> Result<(MixedStrategy, f64)> {
    if player >= game.num_players() {
        return Err(Error::InvalidArgument(format!("player {player} out of range")));
    }
    let m = game.num_strategies(player);
    let columns = opponent_columns(game, player);

    // Variables: p_0..p_{m-1}, v (free).
    let mut lp = LinearProgram::new(m + 1, Sense::Maximize);
    lp.objective[m] = 1.0;
    lp.bounds[m] = (f64::NEG_INFINITY, f64::INFINITY);
    for col in &columns {
        let mut row: Vec<f64> = col.clone();
        row.push(-1.0);
        lp.add_constraint(row, Relation::Ge, 0.0);
    }
    let mut sum = vec![1.0; m];
    sum.push(0.0);
    lp.add_constraint(sum, Relation::Eq, 1.0);

    let out = solve_lp(&lp)?;
    if out.status != LpStatus::Optimal {
        return Err(Error::Solver(format!(
            "maximin LP for player {player} ended {:?} after {} pivots",
            out.status, out.pivots
        )));
    }
    let strategy = MixedStrategy::normalized(out.solution[..m].to_vec())?;
    let value = columns
        .iter()
        .map(|col| col.iter().zip(strategy.probs()).map(|(u, p)| u * p).sum::<f64>())
        .fold(f64::INFINITY, f64::min);
    Ok((strategy, value))
}

/// For every joint pure profile of the opponents, `player`'s payoff of each
/// own pure strategy.
fn opponent_columns(game: &Game, player: usize) -> Vec<Vec<f64>> {
    let m = game.num_strategies(player);
    let stride = game.strides()[player];
    let table = game.payoffs(player);
    let mut idx = vec![0usize; game.num_players()];
    let mut columns = Vec::with_capacity(game.num_outcomes() / m);
    for flat in 0..game.num_outcomes() {
        game.decode(flat, &mut idx);
        if idx[player] != 0 {
            continue;
        }
        columns.push((0..m).map(|s| table[flat + s * stride]).collect());
    }
    columns
}
