use std::path::PathBuf;

use anyhow::Result;
use clap::{Args, ValueEnum};
use lookahead_core::engine::{enumerate_equilibria, random_walk, LookaheadConfig, Orientation, StateProfile};
use lookahead_core::routing::{total_latency, verify_lemma_suite, RoutingGame, RoutingInstance, DEFAULT_PATH_CAP};
use serde::Serialize;

use crate::args::{parse_profile, ModelArg, OrderArg, OutputArgs, SearchArgs, WalkArgs};
use crate::output::emit_rows;

const DEFAULT_INSTANCE: &str = include_str!("../../../../paper-instances/routing/steep_vs_flat.json");

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RoutingMode {
    /// Every lookahead equilibrium with its latency ratio.
    Equilibria,
    /// Inequality checks on sampled flows.
    Lemmas,
    /// One seeded walk.
    Walk,
}

#[derive(Args, Debug)]
pub struct RoutingArgs {
    /// Routing instance JSON; defaults to a four-player parallel-link network.
    #[arg(long)]
    pub instance: Option<PathBuf>,

    #[arg(long, value_enum, default_value = "equilibria")]
    pub mode: RoutingMode,

    #[command(flatten)]
    pub search: SearchArgs,

    #[command(flatten)]
    pub walk: WalkArgs,

    /// Starting profile for walks as path indices, e.g. `2,2,2,2`.
    #[arg(long)]
    pub start: Option<String>,

    /// Sampled flows for `--mode lemmas`.
    #[arg(long, default_value_t = 100)]
    pub trials: usize,

    #[arg(long, default_value_t = DEFAULT_PATH_CAP)]
    pub path_cap: usize,
}

#[derive(Serialize)]
struct EquilibriumRow {
    equilibrium_id: usize,
    profile: String,
    total_latency: f64,
    optimum: f64,
    ratio: f64,
}

#[derive(Serialize)]
struct WalkRow {
    step: usize,
    mover: Option<usize>,
    profile: String,
    total_latency: f64,
    optimum: f64,
    ratio: f64,
}

fn profile_text(s: &StateProfile) -> String {
    crate::output::join(s.choices())
}

pub fn run(args: &RoutingArgs, out: &OutputArgs) -> Result<()> {
    let inst = match &args.instance {
        Some(p) => RoutingInstance::from_json(&crate::args::read_instance(p)?)?,
        None => RoutingInstance::from_json(DEFAULT_INSTANCE)?,
    };
    let game = RoutingGame::new(inst, args.path_cap)?;
    let n = game.instance().num_players();
    let cfg = LookaheadConfig::uniform(
        n,
        args.search.depth.unwrap_or(2),
        args.search.payoff_model(ModelArg::Leaf),
        args.search.order_model(OrderArg::Average)?,
    );
    let ratio = |l: f64, opt: f64| Orientation::Minimize.ratio(l, opt);
    match args.mode {
        RoutingMode::Equilibria => {
            let opt = game.optimum(out.cap())?;
            let rows: Vec<EquilibriumRow> = enumerate_equilibria(&game, &cfg, out.cap())?
                .iter()
                .enumerate()
                .map(|(k, s)| {
                    let l = total_latency(&game, s);
                    EquilibriumRow { equilibrium_id: k, profile: profile_text(s), total_latency: l, optimum: opt, ratio: ratio(l, opt) }
                })
                .collect();
            emit_rows(&rows, out.format, out.out.as_deref())
        }
        RoutingMode::Lemmas => {
            let report = verify_lemma_suite(&game, args.trials, args.walk.seed, out.cap())?;
            emit_rows(&report.rows, out.format, out.out.as_deref())
        }
        RoutingMode::Walk => {
            let opt = game.optimum(out.cap())?;
            let start = match &args.start {
                Some(t) => parse_profile(t, n)?,
                None => StateProfile::new(vec![0; n]),
            };
            let t = random_walk(&game, &start, args.walk.steps, &cfg, args.walk.seed)?;
            let rows: Vec<WalkRow> = t
                .steps
                .iter()
                .enumerate()
                .map(|(step, s)| WalkRow {
                    step,
                    mover: s.mover,
                    profile: profile_text(&s.state),
                    total_latency: s.social_value,
                    optimum: opt,
                    ratio: ratio(s.social_value, opt),
                })
                .collect();
            emit_rows(&rows, out.format, out.out.as_deref())
        }
    }
}
