use proptest::prelude::*;

use safe_equilibrium::game::{best_response, expected_utility};
use safe_equilibrium::{
    approximate, maximin_strategy, random_game, seeded_rng, solve_exact_2p, support_enumerate_2p, verify_se,
    ApproxConfig, EpsilonVector, Game, MixedStrategy, Profile, SafeEqSolution,
};

fn zero_sum(rows: usize, cols: usize, seed: u64) -> Game {
    let g = random_game(2, rows.max(cols), &mut seeded_rng(seed)).unwrap();
    let a: Vec<f64> = (0..rows * cols).map(|k| g.payoffs(0)[k] * 2.0 - 1.0).collect();
    Game::new(vec![rows, cols], vec![a.clone(), a.iter().map(|x| -x).collect()]).unwrap()
}

fn affine(game: &Game, scale: f64, shift: f64) -> Game {
    let payoffs =
        (0..game.num_players()).map(|i| game.payoffs(i).iter().map(|x| scale * x + shift).collect()).collect();
    Game::new(game.strategy_counts().to_vec(), payoffs).unwrap()
}

fn eps_strategy() -> impl Strategy<Value = (f64, f64)> {
    (0.0..=1.0f64, 0.0..=1.0f64)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn maximin_values_are_zero_sum_duals(rows in 1usize..=6, cols in 1usize..=6, seed in any::<u64>()) {
        let g = zero_sum(rows, cols, seed);
        let (_, v1) = maximin_strategy(&g, 0).unwrap();
        let (_, v2) = maximin_strategy(&g, 1).unwrap();
        prop_assert!((v1 + v2).abs() <= 1e-7, "v1 = {v1}, v2 = {v2}");
    }

    #[test]
    fn maximin_is_a_lower_bound(n in 2usize..=3, m in 1usize..=4, seed in any::<u64>(), probe in any::<u64>()) {
        let g = random_game(n, m, &mut seeded_rng(seed)).unwrap();
        let (x, v) = maximin_strategy(&g, 0).unwrap();
        // Random opponents: the maximin strategy guarantees at least v, so a
        // best response does too.
        let mut rng = seeded_rng(probe);
        let others = random_game(n, m, &mut rng).unwrap();
        let mut strategies = vec![x];
        for i in 1..n {
            strategies.push(MixedStrategy::normalized(others.payoffs(i)[..m].to_vec()).unwrap_or(MixedStrategy::uniform(m)));
        }
        let profile = Profile::new(strategies);
        prop_assert!(expected_utility(&g, &profile, 0).unwrap() >= v - 1e-9);
        let br = profile.with_strategy(0, best_response(&g, &profile, 0).unwrap());
        prop_assert!(expected_utility(&g, &br, 0).unwrap() >= v - 1e-9);
    }

    #[test]
    fn exact_solutions_verify(m in 2usize..=3, seed in any::<u64>(), (e1, e2) in eps_strategy()) {
        let g = random_game(2, m, &mut seeded_rng(seed)).unwrap();
        let eps = EpsilonVector::two_player(e1, e2).unwrap();
        let sol = solve_exact_2p(&g, &eps).unwrap();
        prop_assert!(sol.deltas.max_component() <= 1e-6, "{:?}", sol.deltas);
        prop_assert!(sol.mixture_residual() <= 1e-9);
        let again = verify_se(&g, &sol).unwrap();
        prop_assert_eq!(again, sol.deltas);
    }

    #[test]
    fn support_enumeration_agrees_on_existence(m in 2usize..=3, seed in any::<u64>(), (e1, e2) in eps_strategy()) {
        let g = random_game(2, m, &mut seeded_rng(seed)).unwrap();
        let eps = EpsilonVector::two_player(e1, e2).unwrap();
        let found = support_enumerate_2p(&g, &eps, m).unwrap().expect("an equilibrium always exists");
        prop_assert!(verify_se(&g, &found).unwrap().max_component() <= 1e-6);
    }

    #[test]
    fn positive_affine_maps_preserve_solutions(seed in any::<u64>(), scale in 0.01..100.0f64, shift in -50.0..50.0f64) {
        let g = random_game(2, 3, &mut seeded_rng(seed)).unwrap();
        let h = affine(&g, scale, shift);
        let eps = EpsilonVector::two_player(0.0, 0.3).unwrap();
        let sol = solve_exact_2p(&h, &eps).unwrap();
        let on_g = SafeEqSolution::from_parts(&g, eps.clone(), sol.sigma.clone(), sol.rho.clone(), sol.tau.clone()).unwrap();
        prop_assert!(on_g.deltas.max_component() <= 1e-6 / scale.min(1.0));
        let d = verify_se(&h, &on_g).unwrap();
        prop_assert!((d.delta_rho - scale * on_g.deltas.delta_rho).abs() <= 1e-9 * scale.max(1.0));
        prop_assert!((d.delta_tau - scale * on_g.deltas.delta_tau).abs() <= 1e-9 * scale.max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn approx_iterates_keep_the_mixture_identity(
        n in 2usize..=3,
        m in 1usize..=4,
        seed in any::<u64>(),
        (e1, e2) in eps_strategy(),
        restarts in 1usize..=3,
    ) {
        let g = random_game(n, m, &mut seeded_rng(seed)).unwrap();
        let eps = if n == 2 {
            EpsilonVector::two_player(e1, e2).unwrap()
        } else {
            EpsilonVector::new(vec![0.0, e1, e2]).unwrap()
        };
        let cfg = ApproxConfig::new(300, restarts, seed).with_invariant_checks();
        let out = approximate(&g, &eps, &cfg).unwrap();
        let report = out.invariants.expect("checks were requested");
        prop_assert!(report.max_mixture_residual <= 1e-9);
        prop_assert!(report.max_simplex_residual <= 1e-9);
        prop_assert!(out.solution.mixture_residual() <= 1e-9);
        prop_assert_eq!(out.solution.deltas.delta_sigma.is_some(), n > 2);
    }

    #[test]
    fn more_restarts_never_hurt(n in 2usize..=3, m in 2usize..=5, seed in any::<u64>()) {
        let g = random_game(n, m, &mut seeded_rng(seed)).unwrap();
        let eps = if n == 2 { EpsilonVector::two_player(0.0, 0.05).unwrap() } else { EpsilonVector::new(vec![0.0, 0.05, 0.05]).unwrap() };
        let one = approximate(&g, &eps, &ApproxConfig::new(500, 1, seed)).unwrap();
        let many = approximate(&g, &eps, &ApproxConfig::new(500, 6, seed)).unwrap();
        prop_assert!(many.solution.deltas.max_component() <= one.solution.deltas.max_component());
        prop_assert_eq!(&many.restart_scores[0], &one.restart_scores[0]);
    }
}

#[test]
fn one_by_one_games_are_trivial() {
    let g = Game::new(vec![1, 1], vec![vec![3.0], vec![-2.0]]).unwrap();
    let eps = EpsilonVector::two_player(0.5, 0.5).unwrap();
    let sol = solve_exact_2p(&g, &eps).unwrap();
    assert_eq!(sol.deltas.max_component(), 0.0);
    assert_eq!(sol.utilities, vec![3.0, -2.0]);
    assert_eq!(maximin_strategy(&g, 1).unwrap().1, -2.0);
}

#[test]
fn trial_seeds_are_distinct() {
    use std::collections::HashSet;
    let seeds: HashSet<u64> =
        (1..=10).flat_map(|m| (0..1000).map(move |t| safe_equilibrium::trial_seed(42, m, t))).collect();
    assert_eq!(seeds.len(), 10_000);
}
