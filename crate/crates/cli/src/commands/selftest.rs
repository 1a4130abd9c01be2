use anyhow::{bail, Result};
use clap::Args;
use lookahead_core::engine::{
    all_profiles, profile_count, Evaluator, Game, GameDescription, LookaheadConfig, OrderModel, Orientation,
    PayoffModel, StateProfile,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::args::OutputArgs;
use crate::output::emit_record;

#[derive(Args, Debug)]
pub struct SelftestArgs {
    /// Random games to check.
    #[arg(long, default_value_t = 200)]
    pub games: usize,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Serialize)]
struct Summary {
    games: usize,
    states: usize,
    depth1_mismatches: usize,
    depth2_mismatches: usize,
}

fn myopic(g: &GameDescription, s: &StateProfile, player: usize) -> usize {
    let sg = g.orientation().sign();
    (0..g.strategy_counts()[player]).fold(0, |best, x| {
        if sg * g.payoff(player, &s.with(player, x)) > sg * g.payoff(player, &s.with(player, best)) {
            x
        } else {
            best
        }
    })
}

/// Checks the engine against direct computations on random tabular games:
/// depth 1 against a myopic best response, depth 2 average-case against
/// the mean over every next mover's myopic reply.
pub fn run(args: &SelftestArgs, out: &OutputArgs) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut summary = Summary { games: args.games, states: 0, depth1_mismatches: 0, depth2_mismatches: 0 };
    for _ in 0..args.games {
        let counts: Vec<usize> = (0..rng.gen_range(1..=3)).map(|_| rng.gen_range(1..=4)).collect();
        let n = counts.len();
        let table = (0..profile_count(&counts)).map(|_| (0..n).map(|_| f64::from(rng.gen_range(0..6))).collect()).collect();
        let o = if rng.gen_bool(0.5) { Orientation::Maximize } else { Orientation::Minimize };
        let g = GameDescription::tabular(&counts, o, table)?;
        let one = Evaluator::new(&g, &LookaheadConfig::myopic(n))?;
        let two = Evaluator::new(&g, &LookaheadConfig::uniform(n, 2, PayoffModel::Leaf, OrderModel::Average))?;
        for s in all_profiles(&counts) {
            summary.states += 1;
            for p in 0..n {
                if one.evaluate(&s, p)?.best_strategy != myopic(&g, &s, p) {
                    summary.depth1_mismatches += 1;
                }
                let scores = two.evaluate(&s, p)?.candidate_scores;
                for (x, score) in scores.iter().enumerate() {
                    let child = s.with(p, x);
                    let expect =
                        (0..n).map(|j| g.payoff(p, &child.with(j, myopic(&g, &child, j)))).sum::<f64>() / n as f64;
                    if (score - expect).abs() > 1e-9 {
                        summary.depth2_mismatches += 1;
                    }
                }
            }
        }
    }
    emit_record(&summary, out.format, out.out.as_deref())?;
    if summary.depth1_mismatches + summary.depth2_mismatches > 0 {
        bail!("engine disagrees with the direct computation");
    }
    Ok(())
}
