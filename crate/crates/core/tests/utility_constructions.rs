use lookahead_core::engine::*;
use lookahead_core::utility::*;

const KAPPAS: [f64; 4] = [13.0, 50.0, 120.0, 1e4];

fn pair(a: Action, b: Action) -> StateProfile {
    StateProfile::new(vec![a.index(), b.index()])
}

/// Independent depth-2 oracle: the mover picks an action, the other player
/// replies with her best marginal (lowest index on ties), the mover scores
/// her marginal in the resulting pair.
fn two_step_value(g: &BasicUtilityGame, mine: Action) -> f64 {
    let reply = Action::ALL
        .iter()
        .copied()
        .fold((Action::None, f64::NEG_INFINITY), |best, b| {
            let v = g.gamma(mine, b) - g.gamma(mine, Action::None);
            if v > best.1 + 1e-12 { (b, v) } else { best }
        })
        .0;
    g.gamma(mine, reply) - g.gamma(Action::None, reply)
}

#[test]
fn two_step_values_match_oracle() {
    for kappa in KAPPAS {
        let g = BasicUtilityGame::new(kappa).unwrap();
        let eval = Evaluator::new(&g, &basic_utility_config(2)).unwrap();
        let e = eval.evaluate(&pair(Action::None, Action::None), 0).unwrap();
        for a in Action::ALL {
            assert_eq!(e.candidate_scores[a.index()], two_step_value(&g, a), "kappa {kappa} action {a:?}");
        }
        assert_eq!(e.candidate_scores, vec![0.0, 6.0, 4.0, 5.0]);
    }
}

#[test]
fn unique_equilibrium_is_bb() {
    for kappa in KAPPAS {
        let report = basic_utility_equilibria(kappa, 2).unwrap();
        assert_eq!(report.equilibria, vec![(Action::B, Action::B)]);
        assert_eq!(report.equilibrium_value, Some(12.0));
        let ratio = report.ratio.unwrap();
        assert!((ratio - kappa / 12.0).abs() <= 1e-9 * ratio, "kappa {kappa}: {ratio}");
    }
}

#[test]
fn unrestricted_mover_pool_keeps_the_equilibrium() {
    for kappa in KAPPAS {
        let g = BasicUtilityGame::new(kappa).unwrap();
        let cfg = LookaheadConfig::uniform(2, 2, PayoffModel::Leaf, OrderModel::Average);
        assert_eq!(enumerate_equilibria(&g, &cfg, u128::MAX).unwrap(), vec![pair(Action::B, Action::B)]);
    }
}

#[test]
fn myopic_chain_reaches_optimum() {
    // with kappa above 15 myopic replies walk B -> T -> G -> G
    for kappa in [50.0, 120.0, 1e4] {
        let g = BasicUtilityGame::new(kappa).unwrap();
        let eval = Evaluator::new(&g, &LookaheadConfig::myopic(2)).unwrap();
        let mut s = pair(Action::B, Action::None);
        let mut chain = vec![Action::B];
        for step in 0..3 {
            let mover = (step + 1) % 2;
            let best = eval.evaluate(&s, mover).unwrap().best_strategy;
            s = s.with(mover, best);
            chain.push(Action::from_index(best));
        }
        assert_eq!(chain, vec![Action::B, Action::T, Action::G, Action::G]);
        assert_eq!(g.social_value(&s), kappa);
    }
    // at kappa 13 the myopic reply to B is B itself
    let g = BasicUtilityGame::new(13.0).unwrap();
    let eval = Evaluator::new(&g, &LookaheadConfig::myopic(2)).unwrap();
    assert_eq!(eval.evaluate(&pair(Action::B, Action::None), 1).unwrap().best_strategy, Action::B.index());
}

fn fano_config(g: &SteinerGame) -> LookaheadConfig {
    steiner_config(g, g.k())
}

#[test]
fn fano_mover_guarantees() {
    let g = SteinerGame::fano();
    let cfg = fano_config(&g);
    for mover in 0..g.players() {
        let (total, immediate) = guaranteed_scores(&g, &cfg, &g.all_nice(), mover).unwrap();
        assert_eq!(immediate, 2.0 * g.k() as f64);
        assert_eq!(total, (g.k() * (g.k() + 1)) as f64);
        // staying nice everywhere is worth k per step
        assert!(total > (g.k() * g.k()) as f64);
    }
}

#[test]
fn fano_dynamics_settle_at_half_the_optimum() {
    let g = SteinerGame::fano();
    let cfg = fano_config(&g);
    for seed in 0..3 {
        let walk = WalkParams { steps: 120, burn_in: 60, seed, walks: 1 };
        let d = steiner_dynamics(&g, &cfg, &walk, DEFAULT_STATE_CAP).unwrap();
        assert_eq!(d.optimum, 28.0);
        assert!((d.long_run_value - 14.0).abs() < 1e-9, "seed {seed}: {}", d.long_run_value);
        assert!((d.ratio - 2.0).abs() <= 0.01);
        assert_eq!(d.rows.len(), 121);
    }
}
