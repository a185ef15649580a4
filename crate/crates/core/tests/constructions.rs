use safe_equilibrium::constructions::{auxiliary_profile, solution_from_auxiliary};
use safe_equilibrium::error::Error;
use safe_equilibrium::game::chicken;
use safe_equilibrium::{
    auxiliary_game_thm1, extract_ne_from_reduction, hardness_reduction_thm2, nash_regret, random_game, seeded_rng,
    solve_exact_2p, verify_se, EpsilonVector, Game, MixedStrategy, Profile, SafeEqSolution,
};

#[test]
fn auxiliary_payoffs_reconstruct_entrywise() {
    let g = random_game(2, 3, &mut seeded_rng(21)).unwrap();
    let (e1, e2) = (0.2, 0.35);
    let aux = auxiliary_game_thm1(&g, &EpsilonVector::two_player(e1, e2).unwrap()).unwrap();
    assert_eq!(aux.strategy_counts(), &[3, 3, 3, 3]);
    let (a1, a2) = (|r: usize, c: usize| g.payoff(0, &[r, c]), |r: usize, c: usize| g.payoff(1, &[r, c]));
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                for d in 0..3 {
                    let s = [a, b, c, d];
                    assert_eq!(aux.payoff(0, &s), -e2 * a2(a, c) - (1.0 - e2) * a2(a, d));
                    assert_eq!(aux.payoff(1, &s), e2 * a1(b, c) + (1.0 - e2) * a1(b, d));
                    assert_eq!(aux.payoff(2, &s), -e1 * a1(a, c) - (1.0 - e1) * a1(b, c));
                    assert_eq!(aux.payoff(3, &s), e1 * a2(a, d) + (1.0 - e1) * a2(b, d));
                }
            }
        }
    }
}

#[test]
fn auxiliary_game_rejects_three_players() {
    let g = random_game(3, 2, &mut seeded_rng(0)).unwrap();
    let eps = EpsilonVector::new(vec![0.0, 0.1, 0.1]).unwrap();
    assert!(matches!(auxiliary_game_thm1(&g, &eps), Err(Error::InvalidArgument(_))));
}

#[test]
fn exact_solutions_are_nash_equilibria_of_the_auxiliary_game() {
    for seed in 0..20 {
        let g = random_game(2, 3, &mut seeded_rng(seed)).unwrap();
        let eps = EpsilonVector::two_player(0.1, 0.3).unwrap();
        let sol = solve_exact_2p(&g, &eps).unwrap();
        let aux = auxiliary_game_thm1(&g, &eps).unwrap();
        let profile = auxiliary_profile(&sol).unwrap();
        assert!(nash_regret(&aux, &profile).unwrap() <= 1e-6, "seed {seed}");
    }
}

fn pure_nash_equilibria(game: &Game) -> Vec<Vec<usize>> {
    let counts = game.strategy_counts().to_vec();
    let mut found = Vec::new();
    let mut pure = vec![0; counts.len()];
    for flat in 0..game.num_outcomes() {
        game.decode(flat, &mut pure);
        let stable = (0..counts.len()).all(|i| {
            let here = game.payoff(i, &pure);
            (0..counts[i]).all(|s| {
                let mut dev = pure.clone();
                dev[i] = s;
                game.payoff(i, &dev) <= here
            })
        });
        if stable {
            found.push(pure.clone());
        }
    }
    found
}

#[test]
fn pure_equilibria_of_the_auxiliary_game_are_safe_equilibria() {
    let mut checked = 0;
    for (seed, (e1, e2)) in (0..40).zip([(0.0, 0.05), (0.3, 0.6), (1.0, 0.5), (0.1, 1.0)].iter().cycle()) {
        let g = random_game(2, 2, &mut seeded_rng(seed)).unwrap();
        let eps = EpsilonVector::two_player(*e1, *e2).unwrap();
        let aux = auxiliary_game_thm1(&g, &eps).unwrap();
        for pure in pure_nash_equilibria(&aux) {
            let profile = Profile::pure(&aux, &pure);
            let sol = solution_from_auxiliary(&g, &eps, &profile).unwrap();
            let d = verify_se(&g, &sol).unwrap();
            assert!(d.max_component() <= 1e-12, "seed {seed}: {d:?}");
            checked += 1;
        }
    }
    assert!(checked > 0);
}

#[test]
fn reduced_chicken_recovers_a_nash_equilibrium() {
    let base = chicken();
    let reduced = hardness_reduction_thm2(&base).unwrap();
    assert_eq!(reduced.sink_payoff, -11.0);
    let eps = EpsilonVector::two_player(0.05, 0.05).unwrap();
    let sol = solve_exact_2p(&reduced.game, &eps).unwrap();
    let ne = extract_ne_from_reduction(&reduced, &sol).unwrap();
    assert!(nash_regret(&base, &ne).unwrap() <= 1e-6);
    let swerve = [ne.get(0).probs()[0], ne.get(1).probs()[0]];
    let mixed = swerve.iter().all(|p| (p - 0.9).abs() < 1e-6);
    let pure_asym = (swerve[0] - 1.0).abs() < 1e-9 && swerve[1].abs() < 1e-9
        || swerve[0].abs() < 1e-9 && (swerve[1] - 1.0).abs() < 1e-9;
    assert!(mixed || pure_asym, "{swerve:?}");
}

#[test]
fn zero_epsilon_extraction_is_projection() {
    let base = random_game(2, 3, &mut seeded_rng(3)).unwrap();
    let reduced = hardness_reduction_thm2(&base).unwrap();
    let sol = solve_exact_2p(&reduced.game, &EpsilonVector::zeros(2)).unwrap();
    for i in 0..2 {
        assert_eq!(sol.sigma.get(i).probs()[3], 0.0);
    }
    let ne = extract_ne_from_reduction(&reduced, &sol).unwrap();
    for i in 0..2 {
        assert_eq!(ne.get(i).probs(), &sol.sigma.get(i).probs()[..3]);
    }
}

#[test]
fn extraction_flags_structural_violations() {
    let reduced = hardness_reduction_thm2(&chicken()).unwrap();
    let eps = EpsilonVector::two_player(0.05, 0.05).unwrap();
    let uniform = MixedStrategy::uniform(3);
    let sink = MixedStrategy::pure(3, 2);
    let on_sink = SafeEqSolution::assemble(
        &reduced.game,
        eps.clone(),
        vec![Some(uniform.clone()), Some(uniform.clone())],
        vec![Some(sink.clone()), Some(sink.clone())],
        None,
    )
    .unwrap();
    assert!(matches!(extract_ne_from_reduction(&reduced, &on_sink), Err(Error::ReductionViolated(_))));

    let swerve = MixedStrategy::pure(3, 0);
    let avoids_sink = SafeEqSolution::assemble(
        &reduced.game,
        eps,
        vec![Some(swerve.clone()), Some(swerve.clone())],
        vec![Some(swerve.clone()), Some(swerve)],
        None,
    )
    .unwrap();
    assert!(matches!(extract_ne_from_reduction(&reduced, &avoids_sink), Err(Error::ReductionViolated(_))));
}
