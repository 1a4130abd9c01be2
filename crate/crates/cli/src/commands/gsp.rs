use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::Args;
use lookahead_core::engine::{enumerate_equilibria, is_lookahead_equilibrium, LookaheadConfig, MoverPool};
use lookahead_core::gsp::{
    is_output_truthful, optimal_welfare, slot_order_profile, welfare, GspGame, GspInstance,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::args::{ModelArg, OrderArg, OutputArgs, SearchArgs};
use crate::output::{emit_record, emit_rows, join};

const BAD_EXAMPLE: &str = include_str!("../../../../paper-instances/gsp/badexample.json");

#[derive(Args, Debug)]
pub struct GspArgs {
    /// Instance file `{"ctr": [...], "valuations": [...]}`; defaults to the
    /// four-bidder counterexample.
    #[arg(long)]
    pub instance: Option<PathBuf>,

    #[command(flatten)]
    pub search: SearchArgs,

    /// Check only the profile where bidder s holds slot s at balanced bids.
    #[arg(long)]
    pub check: bool,

    /// Successors exclude the bidder who just moved.
    #[arg(long)]
    pub no_self: bool,

    /// Analyse this many random instances instead of one file.
    #[arg(long)]
    pub random: Option<usize>,

    #[arg(long, default_value_t = 4)]
    pub players: usize,

    #[arg(long, default_value_t = 4)]
    pub slots: usize,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Serialize)]
struct CheckRow {
    order_model: String,
    depth: usize,
    bids: String,
    equilibrium: bool,
    output_truthful: bool,
    welfare: f64,
    opt_welfare: f64,
}

#[derive(Serialize)]
struct EquilibriumRow {
    instance_id: String,
    order_model: String,
    equilibrium_id: usize,
    bids: String,
    welfare: f64,
    opt_welfare: f64,
    output_truthful: bool,
}

fn config(args: &GspArgs, players: usize) -> Result<(LookaheadConfig, String)> {
    let order = args.search.order.unwrap_or(OrderArg::Average);
    if order == OrderArg::Fixed {
        bail!("gsp supports --order worst or average");
    }
    let depth = args.search.depth.unwrap_or(2);
    let mut cfg = LookaheadConfig::uniform(players, depth, args.search.payoff_model(ModelArg::Leaf), args.search.order_model(order)?);
    if args.no_self && players >= 2 {
        cfg = cfg.with_pool(MoverPool::NoRepeat);
    }
    Ok((cfg, format!("{order:?}").to_lowercase()))
}

fn equilibria(inst: &GspInstance, id: &str, args: &GspArgs, cap: u128) -> Result<Vec<EquilibriumRow>> {
    let (cfg, order) = config(args, inst.players())?;
    let game = GspGame::new(inst.clone())?;
    let opt = optimal_welfare(inst);
    Ok(enumerate_equilibria(&game, &cfg, cap)?
        .iter()
        .enumerate()
        .map(|(k, s)| EquilibriumRow {
            instance_id: id.to_string(),
            order_model: order.clone(),
            equilibrium_id: k,
            bids: join(s.bids()),
            welfare: welfare(inst, s),
            opt_welfare: opt,
            output_truthful: is_output_truthful(inst, s),
        })
        .collect())
}

pub fn run(args: &GspArgs, out: &OutputArgs) -> Result<()> {
    if let Some(count) = args.random {
        let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
        let mut rows = Vec::new();
        for i in 0..count {
            let inst = GspInstance::random(&mut rng, args.players, args.slots);
            rows.extend(equilibria(&inst, &format!("random-{i}"), args, out.cap())?);
        }
        return emit_rows(&rows, out.format, out.out.as_deref());
    }
    let (inst, id) = match &args.instance {
        Some(p) => (GspInstance::from_json(&crate::args::read_instance(p)?)?, p.display().to_string()),
        None => (GspInstance::from_json(BAD_EXAMPLE)?, "badexample".to_string()),
    };
    if args.check {
        let (cfg, order) = config(args, inst.players())?;
        let profile = slot_order_profile(&inst);
        let game = GspGame::new(inst.clone())?;
        let row = CheckRow {
            order_model: order,
            depth: cfg.max_depth(),
            bids: join(profile.bids()),
            equilibrium: is_lookahead_equilibrium(&game, &profile, &cfg)?,
            output_truthful: is_output_truthful(&inst, &profile),
            welfare: welfare(&inst, &profile),
            opt_welfare: optimal_welfare(&inst),
        };
        return emit_record(&row, out.format, out.out.as_deref());
    }
    emit_rows(&equilibria(&inst, &id, args, out.cap())?, out.format, out.out.as_deref())
}
