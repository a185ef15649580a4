//! Strategic-form games, mixed strategies and the response kernels every
//! solver in this crate is built on.
//!
//! Payoff tensors are stored flat, row-major, with player 0 varying slowest:
//! the outcome `(s_0, ..., s_{n-1})` lives at `sum_i s_i * stride_i` where
//! `stride_{n-1} = 1` and `stride_i = stride_{i+1} * m_{i+1}`.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Result};

/// Tolerance on the probability sum accepted at construction time.
pub const PROB_SUM_TOL: f64 = 1e-9;

/// Deterministic generator used for every random draw in the crate.
///
/// ChaCha8 seeded through `seed_from_u64`; the stream is stable across
/// platforms and releases of `rand_chacha`, so a seed reproduces games and
/// solver runs bit-for-bit.
pub type GameRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> GameRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of one benchmark trial: `seed` xor a hash of `(m, trial)`, so every
/// trial owns an independent stream regardless of scheduling.
pub fn trial_seed(seed: u64, m: usize, trial: u64) -> u64 {
    seed ^ splitmix64(splitmix64(m as u64) ^ trial)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Game {
    strategy_counts: Vec<usize>,
    payoffs: Vec<Vec<f64>>,
    strategy_names: Option<Vec<Vec<String>>>,
    strides: Vec<usize>,
}

impl Game {
    pub fn new(strategy_counts: Vec<usize>, payoffs: Vec<Vec<f64>>) -> Result<Self> {
        let n = strategy_counts.len();
        if n < 2 {
            return invalid(format!("a game needs at least 2 players, got {n}"));
        }
        if let Some(p) = strategy_counts.iter().position(|&m| m == 0) {
            return invalid(format!("player {p} has no pure strategies"));
        }
        if payoffs.len() != n {
            return invalid(format!("expected {n} payoff arrays, got {}", payoffs.len()));
        }
        let outcomes = strategy_counts
            .iter()
            .try_fold(1usize, |acc, &m| acc.checked_mul(m))
            .ok_or_else(|| crate::Error::InvalidArgument("payoff tensor too large".into()))?;
        for (i, table) in payoffs.iter().enumerate() {
            if table.len() != outcomes {
                return invalid(format!("payoffs for player {i} have {} entries, expected {outcomes}", table.len()));
            }
            if let Some(k) = table.iter().position(|x| !x.is_finite()) {
                return invalid(format!("payoff {k} of player {i} is not finite"));
            }
        }
        let mut strides = vec![1usize; n];
        for i in (0..n - 1).rev() {
            strides[i] = strides[i + 1] * strategy_counts[i + 1];
        }
        Ok(Self { strategy_counts, payoffs, strategy_names: None, strides })
    }

    /// Two-player game from row-player and column-player matrices.
    pub fn bimatrix(row: &[Vec<f64>], col: &[Vec<f64>]) -> Result<Self> {
        let m0 = row.len();
        let m1 = row.first().map_or(0, Vec::len);
        if col.len() != m0 || row.iter().chain(col).any(|r| r.len() != m1) {
            return invalid("bimatrix rows must all have the same length");
        }
        let flat = |mat: &[Vec<f64>]| mat.iter().flatten().copied().collect::<Vec<_>>();
        Self::new(vec![m0, m1], vec![flat(row), flat(col)])
    }

    pub fn with_strategy_names(mut self, names: Vec<Vec<String>>) -> Result<Self> {
        if names.len() != self.num_players() || names.iter().zip(&self.strategy_counts).any(|(l, &m)| l.len() != m) {
            return invalid("strategy name lists do not match strategy counts");
        }
        self.strategy_names = Some(names);
        Ok(self)
    }

    pub fn num_players(&self) -> usize {
        self.strategy_counts.len()
    }

    pub fn strategy_counts(&self) -> &[usize] {
        &self.strategy_counts
    }

    pub fn num_strategies(&self, player: usize) -> usize {
        self.strategy_counts[player]
    }

    pub fn num_outcomes(&self) -> usize {
        self.payoffs[0].len()
    }

    pub fn payoffs(&self, player: usize) -> &[f64] {
        &self.payoffs[player]
    }

    pub fn strategy_names(&self) -> Option<&[Vec<String>]> {
        self.strategy_names.as_deref()
    }

    pub fn strides(&self) -> &[usize] {
        &self.strides
    }

    pub fn flat_index(&self, pure: &[usize]) -> usize {
        pure.iter().zip(&self.strides).map(|(s, st)| s * st).sum()
    }

    pub fn payoff(&self, player: usize, pure: &[usize]) -> f64 {
        self.payoffs[player][self.flat_index(pure)]
    }

    /// Writes the pure profile stored at `flat` into `out`.
    pub fn decode(&self, mut flat: usize, out: &mut [usize]) {
        for (i, st) in self.strides.iter().enumerate() {
            out[i] = flat / st;
            flat %= st;
        }
    }

    pub fn min_payoff(&self) -> f64 {
        self.payoffs.iter().flatten().copied().fold(f64::INFINITY, f64::min)
    }

    fn check_player(&self, player: usize) -> Result<()> {
        if player >= self.num_players() {
            return invalid(format!("player {player} out of range for {}-player game", self.num_players()));
        }
        Ok(())
    }

    fn check_strategy(&self, player: usize, probs: &[f64]) -> Result<()> {
        if probs.len() != self.strategy_counts[player] {
            return invalid(format!(
                "strategy for player {player} has {} entries, expected {}",
                probs.len(),
                self.strategy_counts[player]
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MixedStrategy {
    probs: Vec<f64>,
}

impl MixedStrategy {
    /// Validates entries in [0, 1] and a sum within [`PROB_SUM_TOL`] of one.
    /// Never renormalizes; use [`MixedStrategy::normalized`] for that.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return invalid("mixed strategy must have at least one entry");
        }
        if let Some(k) = probs.iter().position(|p| !(0.0..=1.0).contains(p)) {
            return invalid(format!("probability {k} = {} outside [0, 1]", probs[k]));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > PROB_SUM_TOL {
            return invalid(format!("probabilities sum to {sum}, not 1"));
        }
        Ok(Self { probs })
    }

    /// Clamps negatives to zero and rescales to sum one.
    pub fn normalized(probs: Vec<f64>) -> Result<Self> {
        let clamped: Vec<f64> = probs.into_iter().map(|p| if p > 0.0 { p } else { 0.0 }).collect();
        let sum: f64 = clamped.iter().sum();
        if sum <= 0.0 || !sum.is_finite() {
            return invalid("cannot normalize a vector with no positive mass");
        }
        Ok(Self { probs: clamped.into_iter().map(|p| (p / sum).min(1.0)).collect() })
    }

    pub fn pure(num_strategies: usize, index: usize) -> Self {
        assert!(index < num_strategies, "pure strategy index out of range");
        let mut probs = vec![0.0; num_strategies];
        probs[index] = 1.0;
        Self { probs }
    }

    pub fn uniform(num_strategies: usize) -> Self {
        assert!(num_strategies > 0);
        Self { probs: vec![1.0 / num_strategies as f64; num_strategies] }
    }

    /// `eps * tau + (1 - eps) * rho`, componentwise.
    pub fn mixture(eps: f64, tau: &MixedStrategy, rho: &MixedStrategy) -> Result<Self> {
        if tau.len() != rho.len() {
            return invalid("mixture components have different lengths");
        }
        let probs = tau.probs.iter().zip(&rho.probs).map(|(t, r)| eps * t + (1.0 - eps) * r).collect();
        Ok(Self { probs })
    }

    pub(crate) fn from_raw(probs: Vec<f64>) -> Self {
        Self { probs }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Index of the single strategy carrying all the mass, if any.
    pub fn pure_index(&self) -> Option<usize> {
        self.probs.iter().position(|&p| p == 1.0)
    }

    pub fn support(&self, tol: f64) -> Vec<usize> {
        self.probs.iter().enumerate().filter(|(_, &p)| p > tol).map(|(i, _)| i).collect()
    }

    /// Largest violation of nonnegativity or of the unit sum.
    pub fn simplex_residual(&self) -> f64 {
        let neg = self.probs.iter().fold(0.0f64, |acc, &p| acc.max(-p));
        let sum: f64 = self.probs.iter().sum();
        neg.max((sum - 1.0).abs())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    strategies: Vec<MixedStrategy>,
}

impl Profile {
    pub fn new(strategies: Vec<MixedStrategy>) -> Self {
        Self { strategies }
    }

    pub fn uniform(game: &Game) -> Self {
        Self::new(game.strategy_counts().iter().map(|&m| MixedStrategy::uniform(m)).collect())
    }

    pub fn pure(game: &Game, pure: &[usize]) -> Self {
        Self::new(game.strategy_counts().iter().zip(pure).map(|(&m, &s)| MixedStrategy::pure(m, s)).collect())
    }

    pub fn strategies(&self) -> &[MixedStrategy] {
        &self.strategies
    }

    pub fn get(&self, player: usize) -> &MixedStrategy {
        &self.strategies[player]
    }

    pub fn len(&self) -> usize {
        self.strategies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strategies.is_empty()
    }

    pub fn with_strategy(&self, player: usize, strategy: MixedStrategy) -> Self {
        let mut strategies = self.strategies.clone();
        strategies[player] = strategy;
        Self { strategies }
    }

    pub fn validate_for(&self, game: &Game) -> Result<()> {
        if self.len() != game.num_players() {
            return invalid(format!("profile has {} strategies for a {}-player game", self.len(), game.num_players()));
        }
        for (i, s) in self.strategies.iter().enumerate() {
            game.check_strategy(i, s.probs())?;
        }
        Ok(())
    }

    pub(crate) fn slices(&self) -> Vec<&[f64]> {
        self.strategies.iter().map(|s| s.probs()).collect()
    }
}

/// Irrationality probabilities, one per player. For games with more than two
/// players the entry of player 0 (the protected player) is fixed at zero.
#[derive(Debug, Clone, PartialEq)]
pub struct EpsilonVector {
    eps: Vec<f64>,
}

impl EpsilonVector {
    pub fn new(eps: Vec<f64>) -> Result<Self> {
        if eps.len() < 2 {
            return invalid("epsilon vector needs one entry per player (at least 2)");
        }
        if let Some(k) = eps.iter().position(|e| !(0.0..=1.0).contains(e)) {
            return invalid(format!("epsilon {k} = {} outside [0, 1]", eps[k]));
        }
        if eps.len() > 2 && eps[0] != 0.0 {
            return invalid("with more than two players the first epsilon must be 0");
        }
        Ok(Self { eps })
    }

    pub fn two_player(eps1: f64, eps2: f64) -> Result<Self> {
        Self::new(vec![eps1, eps2])
    }

    pub fn zeros(num_players: usize) -> Self {
        Self { eps: vec![0.0; num_players] }
    }

    pub fn values(&self) -> &[f64] {
        &self.eps
    }

    pub fn get(&self, player: usize) -> f64 {
        self.eps[player]
    }

    pub fn len(&self) -> usize {
        self.eps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eps.is_empty()
    }

    pub fn check_for(&self, game: &Game) -> Result<()> {
        if self.len() != game.num_players() {
            return invalid(format!(
                "epsilon vector has {} entries for a {}-player game",
                self.len(),
                game.num_players()
            ));
        }
        Ok(())
    }
}

/// Utility of `payoff_of` when `deviator` plays each of its pure strategies
/// and every other player follows `strategies`. The deviator's own entry is
/// ignored.
pub(crate) fn response_values_into(
    game: &Game,
    strategies: &[&[f64]],
    deviator: usize,
    payoff_of: usize,
    out: &mut [f64],
) {
    let table = game.payoffs(payoff_of);
    out.iter_mut().for_each(|v| *v = 0.0);
    if game.num_players() == 2 {
        let m1 = game.num_strategies(1);
        if deviator == 0 {
            let col = strategies[1];
            for (s, v) in out.iter_mut().enumerate() {
                let row = &table[s * m1..(s + 1) * m1];
                *v = row.iter().zip(col).map(|(u, p)| u * p).sum();
            }
        } else {
            for (s0, &p) in strategies[0].iter().enumerate() {
                if p == 0.0 {
                    continue;
                }
                let row = &table[s0 * m1..(s0 + 1) * m1];
                for (v, u) in out.iter_mut().zip(row) {
                    *v += p * u;
                }
            }
        }
        return;
    }

    let n = game.num_players();
    let counts = game.strategy_counts();
    let mut idx = vec![0usize; n];
    for &u in table {
        let mut w = 1.0;
        for j in 0..n {
            if j != deviator {
                w *= strategies[j][idx[j]];
            }
        }
        out[idx[deviator]] += w * u;
        for j in (0..n).rev() {
            idx[j] += 1;
            if idx[j] < counts[j] {
                break;
            }
            idx[j] = 0;
        }
    }
}

/// Relative gap below which two response values count as tied.
pub const TIE_TOL: f64 = 1e-12;

fn tie_slack(v: f64) -> f64 {
    TIE_TOL * v.abs().max(1.0)
}

pub(crate) fn argmax_lowest(values: &[f64]) -> usize {
    let mut best = 0;
    for (k, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] + tie_slack(values[best]) {
            best = k;
        }
    }
    best
}

pub(crate) fn argmin_lowest(values: &[f64]) -> usize {
    let mut best = 0;
    for (k, &v) in values.iter().enumerate().skip(1) {
        if v < values[best] - tie_slack(values[best]) {
            best = k;
        }
    }
    best
}

fn check_others(game: &Game, profile: &Profile, skip: usize) -> Result<()> {
    if profile.len() != game.num_players() {
        return invalid(format!("profile has {} strategies for a {}-player game", profile.len(), game.num_players()));
    }
    for (i, s) in profile.strategies().iter().enumerate() {
        if i != skip {
            game.check_strategy(i, s.probs())?;
        }
    }
    Ok(())
}

pub fn expected_utility(game: &Game, profile: &Profile, player: usize) -> Result<f64> {
    game.check_player(player)?;
    profile.validate_for(game)?;
    let values = pure_response_values(game, profile, player)?;
    Ok(values.iter().zip(profile.get(player).probs()).map(|(v, p)| v * p).sum())
}

/// Expected utility of `player` for each of its pure strategies against the
/// rest of `profile`.
pub fn pure_response_values(game: &Game, profile: &Profile, player: usize) -> Result<Vec<f64>> {
    game.check_player(player)?;
    check_others(game, profile, player)?;
    let mut out = vec![0.0; game.num_strategies(player)];
    response_values_into(game, &profile.slices(), player, player, &mut out);
    Ok(out)
}

/// Pure best response; ties go to the lowest strategy index.
pub fn best_response(game: &Game, profile: &Profile, player: usize) -> Result<MixedStrategy> {
    let values = pure_response_values(game, profile, player)?;
    Ok(MixedStrategy::pure(values.len(), argmax_lowest(&values)))
}

/// Pure strategy of `deviator` minimizing `target`'s expected utility with
/// everyone else fixed at `profile`; ties go to the lowest index.
pub fn worst_case_response(game: &Game, profile: &Profile, target: usize, deviator: usize) -> Result<MixedStrategy> {
    game.check_player(target)?;
    game.check_player(deviator)?;
    if target == deviator {
        return invalid("worst-case response needs target != deviator");
    }
    check_others(game, profile, deviator)?;
    let mut out = vec![0.0; game.num_strategies(deviator)];
    response_values_into(game, &profile.slices(), deviator, target, &mut out);
    Ok(MixedStrategy::pure(out.len(), argmin_lowest(&out)))
}

/// Largest gain any single player can obtain by a unilateral deviation.
pub fn nash_regret(game: &Game, profile: &Profile) -> Result<f64> {
    profile.validate_for(game)?;
    let mut worst = 0.0f64;
    for i in 0..game.num_players() {
        let values = pure_response_values(game, profile, i)?;
        let current: f64 = values.iter().zip(profile.get(i).probs()).map(|(v, p)| v * p).sum();
        let best = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        worst = worst.max(best - current);
    }
    Ok(worst)
}

/// n players with m strategies each, every payoff drawn i.i.d. uniform on
/// [0, 1).
pub fn random_game<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Result<Game> {
    if n < 2 {
        return invalid(format!("random games need at least 2 players, got {n}"));
    }
    if m < 1 {
        return invalid("random games need at least one strategy per player");
    }
    let outcomes = m.checked_pow(n as u32).ok_or_else(|| crate::Error::InvalidArgument("game too large".into()))?;
    let payoffs = (0..n).map(|_| (0..outcomes).map(|_| rng.random::<f64>()).collect()).collect();
    Game::new(vec![m; n], payoffs)
}

/// Positive affine map `x -> scale * x + offset`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineMap {
    pub scale: f64,
    pub offset: f64,
}

impl AffineMap {
    pub const IDENTITY: AffineMap = AffineMap { scale: 1.0, offset: 0.0 };

    pub fn apply(&self, x: f64) -> f64 {
        self.scale * x + self.offset
    }

    pub fn invert(&self, y: f64) -> f64 {
        (y - self.offset) / self.scale
    }
}

/// Maps each player's payoffs into [0, 1] with a positive affine map. A
/// player with constant payoffs gets all entries 0.5 (scale 1).
pub fn normalize_payoffs(game: &Game) -> (Game, Vec<AffineMap>) {
    let mut maps = Vec::with_capacity(game.num_players());
    let mut payoffs = Vec::with_capacity(game.num_players());
    for i in 0..game.num_players() {
        let table = game.payoffs(i);
        let lo = table.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = table.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let map = if hi > lo {
            AffineMap { scale: 1.0 / (hi - lo), offset: -lo / (hi - lo) }
        } else {
            AffineMap { scale: 1.0, offset: 0.5 - lo }
        };
        let mapped = if hi > lo {
            table.iter().map(|&x| ((x - lo) / (hi - lo)).clamp(0.0, 1.0)).collect()
        } else {
            vec![0.5; table.len()]
        };
        maps.push(map);
        payoffs.push(mapped);
    }
    let mut normalized = Game::new(game.strategy_counts().to_vec(), payoffs).expect("normalization preserves shape");
    normalized.strategy_names = game.strategy_names.clone();
    (normalized, maps)
}

/// The game of Chicken: strategy 0 swerves, strategy 1 goes straight.
pub fn chicken() -> Game {
    Game::bimatrix(&[vec![0.0, -1.0], vec![1.0, -10.0]], &[vec![0.0, 1.0], vec![-1.0, -10.0]])
        .expect("static game")
        .with_strategy_names(vec![vec!["swerve".into(), "straight".into()], vec!["swerve".into(), "straight".into()]])
        .expect("static names")
}

/// Three-target security game: the row player defends, the column player
/// attacks.
pub fn security_game() -> Game {
    Game::bimatrix(
        &[vec![4.0, -1.0, -7.0], vec![-5.0, 2.0, -1.0], vec![-9.0, -1.0, 9.0]],
        &[vec![-3.0, 1.0, 2.0], vec![5.0, -1.0, 4.0], vec![1.0, 8.0, -4.0]],
    )
    .expect("static game")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn profile2(a: &[f64], b: &[f64]) -> Profile {
        Profile::new(vec![MixedStrategy::new(a.to_vec()).unwrap(), MixedStrategy::new(b.to_vec()).unwrap()])
    }

    #[test]
    fn chicken_expected_utilities() {
        let g = chicken();
        let both_swerve = Profile::pure(&g, &[0, 0]);
        assert_eq!(expected_utility(&g, &both_swerve, 0).unwrap(), 0.0);
        // 0.81*0 + 0.09*(-1) + 0.09*1 + 0.01*(-10)
        let p = profile2(&[0.9, 0.1], &[0.9, 0.1]);
        assert!((expected_utility(&g, &p, 0).unwrap() + 0.1).abs() < 1e-12);
    }

    #[test]
    fn pure_profiles_read_the_tensor() {
        let g = security_game();
        for a in 0..3 {
            for b in 0..3 {
                let p = Profile::pure(&g, &[a, b]);
                for i in 0..2 {
                    assert_eq!(expected_utility(&g, &p, i).unwrap(), g.payoff(i, &[a, b]));
                }
            }
        }
    }

    #[test]
    fn response_values_against_straight() {
        let g = chicken();
        let p = Profile::pure(&g, &[0, 1]);
        assert_eq!(pure_response_values(&g, &p, 0).unwrap(), vec![-1.0, -10.0]);
        assert_eq!(best_response(&g, &p, 0).unwrap().pure_index(), Some(0));
    }

    #[test]
    fn constant_payoffs_give_constant_values() {
        let g = Game::new(vec![2, 3], vec![vec![2.5; 6], vec![0.0; 6]]).unwrap();
        let p = profile2(&[0.3, 0.7], &[0.2, 0.5, 0.3]);
        assert_eq!(pure_response_values(&g, &p, 0).unwrap(), vec![2.5, 2.5]);
        assert_eq!(worst_case_response(&g, &p, 0, 1).unwrap().pure_index(), Some(0));
    }

    #[test]
    fn security_game_nash_indifference() {
        let g = security_game();
        let p = profile2(&[0.3136, 0.4661, 0.2203], &[1.0 / 3.0; 3]);
        let v = pure_response_values(&g, &p, 1).unwrap();
        for x in &v {
            assert!((x - v[0]).abs() < 1e-3, "{v:?}");
        }
    }

    #[test]
    fn ties_go_to_lowest_index() {
        let g = chicken();
        let p = profile2(&[0.9, 0.1], &[0.9, 0.1]);
        let v = pure_response_values(&g, &p, 0).unwrap();
        assert!((v[0] + 0.1).abs() < 1e-12 && (v[1] + 0.1).abs() < 1e-12);
        // 0.9 - 1.0 rounds above -0.1; still a tie.
        assert_eq!(best_response(&g, &p, 0).unwrap().pure_index(), Some(0));
        let single = Game::new(vec![1, 2], vec![vec![3.0, 1.0], vec![0.0, 0.0]]).unwrap();
        let q = profile2(&[1.0], &[0.5, 0.5]);
        assert_eq!(best_response(&single, &q, 0).unwrap().pure_index(), Some(0));
    }

    #[test]
    fn worst_case_in_chicken() {
        let g = chicken();
        let p = Profile::pure(&g, &[0, 0]);
        assert_eq!(worst_case_response(&g, &p, 0, 1).unwrap().pure_index(), Some(1));
        let q = profile2(&[0.9, 0.1], &[0.5, 0.5]);
        assert_eq!(worst_case_response(&g, &q, 0, 1).unwrap().pure_index(), Some(1));
        assert!(worst_case_response(&g, &q, 1, 1).is_err());
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let g = chicken();
        let p = profile2(&[1.0], &[0.5, 0.5]);
        assert!(expected_utility(&g, &p, 0).is_err());
        assert!(expected_utility(&g, &Profile::uniform(&g), 2).is_err());
    }

    #[test]
    fn mixed_strategy_validation() {
        assert!(MixedStrategy::new(vec![0.5, 0.5]).is_ok());
        assert!(MixedStrategy::new(vec![0.5, 0.6]).is_err());
        assert!(MixedStrategy::new(vec![-0.1, 1.1]).is_err());
        assert!(MixedStrategy::new(vec![0.5, 0.5 + 5e-10]).is_ok());
        let n = MixedStrategy::normalized(vec![2.0, -1e-12, 2.0]).unwrap();
        assert_eq!(n.probs(), &[0.5, 0.0, 0.5]);
    }

    #[test]
    fn game_validation() {
        assert!(Game::new(vec![2], vec![vec![0.0; 2]]).is_err());
        assert!(Game::new(vec![2, 0], vec![vec![], vec![]]).is_err());
        assert!(Game::new(vec![2, 2], vec![vec![0.0; 4], vec![0.0; 3]]).is_err());
        assert!(Game::new(vec![2, 2], vec![vec![0.0; 4], vec![f64::NAN, 0.0, 0.0, 0.0]]).is_err());
    }

    #[test]
    fn epsilon_validation() {
        assert!(EpsilonVector::two_player(0.0, 0.05).is_ok());
        assert!(EpsilonVector::two_player(0.0, 1.5).is_err());
        assert!(EpsilonVector::new(vec![0.0, 0.05, 0.05]).is_ok());
        assert!(EpsilonVector::new(vec![0.1, 0.05, 0.05]).is_err());
    }

    #[test]
    fn random_games() {
        let a = random_game(2, 2, &mut seeded_rng(42)).unwrap();
        let b = random_game(2, 2, &mut seeded_rng(42)).unwrap();
        assert_eq!(a, b);
        let g = random_game(2, 5, &mut seeded_rng(9)).unwrap();
        assert!((0..2).all(|i| g.payoffs(i).iter().all(|x| (0.0..=1.0).contains(x))));
        assert_eq!((0..2).map(|i| g.payoffs(i).len()).sum::<usize>(), 50);
        let g3 = random_game(3, 2, &mut seeded_rng(1)).unwrap();
        assert!((0..3).all(|i| g3.payoffs(i).len() == 8));
        assert!(random_game(1, 2, &mut seeded_rng(1)).is_err());
    }

    #[test]
    fn normalization_maps() {
        let (norm, maps) = normalize_payoffs(&chicken());
        assert!((maps[0].scale - 1.0 / 11.0).abs() < 1e-15);
        assert!((maps[0].offset - 10.0 / 11.0).abs() < 1e-15);
        assert_eq!(norm.payoffs(0), &[10.0 / 11.0, 9.0 / 11.0, 1.0, 0.0]);

        let unit = Game::new(vec![2, 2], vec![vec![0.0, 1.0, 0.5, 0.25], vec![1.0, 0.0, 0.0, 1.0]]).unwrap();
        let (same, maps) = normalize_payoffs(&unit);
        assert_eq!(same, unit);
        assert!(maps.iter().all(|m| *m == AffineMap::IDENTITY));

        let flat = Game::new(vec![2, 2], vec![vec![-3.0; 4], vec![1.0, 2.0, 3.0, 4.0]]).unwrap();
        let (n, maps) = normalize_payoffs(&flat);
        assert_eq!(n.payoffs(0), &[0.5; 4]);
        assert_eq!(maps[0].scale, 1.0);
        assert_eq!(maps[0].apply(-3.0), 0.5);
    }

    #[test]
    fn three_player_kernel_matches_enumeration() {
        let g = random_game(3, 3, &mut seeded_rng(5)).unwrap();
        let p = Profile::new(vec![
            MixedStrategy::new(vec![0.2, 0.3, 0.5]).unwrap(),
            MixedStrategy::new(vec![0.6, 0.1, 0.3]).unwrap(),
            MixedStrategy::new(vec![0.25, 0.25, 0.5]).unwrap(),
        ]);
        for dev in 0..3 {
            for target in 0..3 {
                let mut out = vec![0.0; 3];
                response_values_into(&g, &p.slices(), dev, target, &mut out);
                for (s, &got) in out.iter().enumerate() {
                    let mut want = 0.0;
                    let mut idx = [0usize; 3];
                    for flat in 0..27 {
                        g.decode(flat, &mut idx);
                        if idx[dev] != s {
                            continue;
                        }
                        let w: f64 = (0..3).filter(|&j| j != dev).map(|j| p.get(j).probs()[idx[j]]).product();
                        want += w * g.payoffs(target)[flat];
                    }
                    assert!((got - want).abs() < 1e-12);
                }
            }
        }
    }
}
