use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::game::{expected_step, player_latency, total_latency, two_step_config, RoutingGame};
use crate::engine::{Evaluator, Game, PayoffModel, StateProfile};
use crate::error::Result;

/// (1 + sqrt 5)^2, the equilibrium ratio bound.
pub fn equilibrium_bound() -> f64 {
    (1.0 + 5f64.sqrt()).powi(2)
}

/// 6 + sqrt 37, the threshold above which dynamics must shrink l(f).
pub fn dynamics_threshold() -> f64 {
    6.0 + 37f64.sqrt()
}

/// Relative slack allowed on every inequality.
pub const LEMMA_TOLERANCE: f64 = 1e-9;

fn holds(lhs: f64, rhs: f64) -> bool {
    lhs <= rhs + LEMMA_TOLERANCE * lhs.abs().max(rhs.abs()).max(1.0)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LemmaRow {
    pub trial: usize,
    pub inequality_id: String,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

impl LemmaRow {
    fn new(trial: usize, id: &str, lhs: f64, rhs: f64) -> Self {
        LemmaRow { trial, inequality_id: id.to_string(), lhs, rhs, holds: holds(lhs, rhs) }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub optimum: f64,
    pub rows: Vec<LemmaRow>,
}

impl LemmaReport {
    pub fn checked(&self, id: &str) -> usize {
        self.rows.iter().filter(|r| r.inequality_id == id).count()
    }

    pub fn violations(&self, id: &str) -> Vec<&LemmaRow> {
        self.rows.iter().filter(|r| r.inequality_id == id && !r.holds).collect()
    }
}

/// Inequalities checked at one flow `f`, with ids:
///
/// * `fund`: l_i(f'_i) <= 2 l_i(f) + l(f)/n for each improving move.
/// * `cost_change`: l(f'_i) <= l(f) + 2 l_i(f'_i) - l_i(f) for each improving move.
/// * `cost_change_improving`: l(f'_i) <= (1 + 1/n) l(f) + 3 l_i(f) for each improving move.
/// * `expected_total`: E l(f') <= (1 + 4/n) l(f).
/// * `expected_mover`: E l_i(f'_i) <= (1 + 4/n) l(f).
/// * `decrease_or_near_opt`: E l(f') <= (1 - 1/(2n)) l(f) when l(f) >= (6 + sqrt 37) OPT;
///   otherwise the row records l(f) < (6 + sqrt 37) OPT.
/// * `case2_quadratic`: x^2 <= 12x + 1 with x = sqrt(l(f)/OPT), whenever
///   4 sum_i l_i(f'_i) > l(f).
pub fn check_flow(
    eval: &Evaluator<'_, RoutingGame>,
    state: &StateProfile,
    optimum: f64,
    trial: usize,
) -> Result<Vec<LemmaRow>> {
    let game = eval.game();
    let n = game.num_players() as f64;
    let l = total_latency(game, state);
    let step = expected_step(eval, state)?;
    let mut rows = Vec::new();
    let mut moved_sum = 0.0;
    for (i, succ) in step.successors.iter().enumerate() {
        let li = player_latency(game, state, i);
        let li_new = player_latency(game, succ, i);
        moved_sum += li_new;
        if !step.improving[i] {
            continue;
        }
        let l_new = total_latency(game, succ);
        rows.push(LemmaRow::new(trial, "fund", li_new, 2.0 * li + l / n));
        rows.push(LemmaRow::new(trial, "cost_change", l_new, l + 2.0 * li_new - li));
        rows.push(LemmaRow::new(trial, "cost_change_improving", l_new, (1.0 + 1.0 / n) * l + 3.0 * li));
    }
    rows.push(LemmaRow::new(trial, "expected_total", step.expected_total, (1.0 + 4.0 / n) * l));
    rows.push(LemmaRow::new(trial, "expected_mover", step.expected_mover_latency, (1.0 + 4.0 / n) * l));
    let threshold = dynamics_threshold() * optimum;
    if l >= threshold {
        rows.push(LemmaRow::new(trial, "decrease_or_near_opt", step.expected_total, (1.0 - 0.5 / n) * l));
    } else {
        rows.push(LemmaRow { trial, inequality_id: "decrease_or_near_opt".into(), lhs: l, rhs: threshold, holds: true });
    }
    if 4.0 * moved_sum > l && optimum > 0.0 {
        let x = (l / optimum).sqrt();
        rows.push(LemmaRow::new(trial, "case2_quadratic", x * x, 12.0 * x + 1.0));
    }
    Ok(rows)
}

/// Samples `trials` uniformly random flows (trial t uses seed `seed + t`)
/// and checks every inequality of [`check_flow`] under depth-2
/// average-case leaf lookahead.
pub fn verify_lemma_suite(game: &RoutingGame, trials: usize, seed: u64, cap: u128) -> Result<LemmaReport> {
    let optimum = game.optimum(cap)?;
    let cfg = two_step_config(game.num_players(), PayoffModel::Leaf);
    let per_trial: Vec<Result<Vec<LemmaRow>>> = (0..trials)
        .into_par_iter()
        .map_init(
            || Evaluator::new(game, &cfg).expect("valid configuration"),
            |eval, t| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(t as u64));
                let choice = game.path_counts().iter().map(|&c| rng.gen_range(0..c)).collect();
                check_flow(eval, &StateProfile::new(choice), optimum, t)
            },
        )
        .collect();
    let mut rows = Vec::new();
    for r in per_trial {
        rows.extend(r?);
    }
    Ok(LemmaReport { optimum, rows })
}
