use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::{Args, ValueEnum};
use lookahead_core::engine::{enumerate_equilibria, StateProfile};
use lookahead_core::routing::DEFAULT_PATH_CAP;
use lookahead_core::shapley::{
    consecutive_mover_claim_check, shapley_config, shapley_dynamics, total_cost, ShapleyInstance,
};
use serde::Serialize;

use crate::args::{parse_profile, OrderArg, OutputArgs, SearchArgs, WalkArgs};
use crate::output::{emit_rows, join};

const DEFAULT_INSTANCE: &str = include_str!("../../../../paper-instances/shapley/two_links.json");

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ShapleyMode {
    /// One seeded walk.
    Walk,
    /// Equilibria for every depth 1..=n against the n/k bound.
    Equilibria,
    /// Consecutive-mover agreement for every depth 1..=n.
    Claim,
}

#[derive(Args, Debug)]
pub struct ShapleyArgs {
    /// `{"paths": [{"cost": c}], "n": n}` or a routing graph with one
    /// terminal pair; defaults to links of cost 1 and 6 with six players.
    #[arg(long)]
    pub instance: Option<PathBuf>,

    #[arg(long, value_enum, default_value = "walk")]
    pub mode: ShapleyMode,

    #[command(flatten)]
    pub search: SearchArgs,

    #[command(flatten)]
    pub walk: WalkArgs,

    /// Starting path indices; everyone on the dearest path by default.
    #[arg(long)]
    pub start: Option<String>,
}

#[derive(Serialize)]
struct EquilibriumRow {
    k: usize,
    profile: String,
    total_cost: f64,
    optimum: f64,
    bound: f64,
    within_bound: bool,
}

#[derive(Serialize)]
struct ClaimRow {
    k: usize,
    holds: bool,
}

pub fn run(args: &ShapleyArgs, out: &OutputArgs) -> Result<()> {
    let inst = match &args.instance {
        Some(p) => ShapleyInstance::from_json(&crate::args::read_instance(p)?, DEFAULT_PATH_CAP)?,
        None => ShapleyInstance::from_json(DEFAULT_INSTANCE, DEFAULT_PATH_CAP)?,
    };
    if args.search.order == Some(OrderArg::Fixed) {
        bail!("shapley supports --order worst or average");
    }
    if args.search.model.is_some_and(|m| m != crate::args::ModelArg::Leaf) {
        bail!("shapley dynamics use the leaf model");
    }
    let order = args.search.order_model(OrderArg::Worst)?;
    match args.mode {
        ShapleyMode::Walk => {
            let k = args.search.depth.unwrap_or(inst.n);
            let start = match &args.start {
                Some(t) => parse_profile(t, inst.n)?,
                None => {
                    let dearest = (0..inst.paths.len())
                        .fold(0, |b, p| if inst.path_cost(p) > inst.path_cost(b) { p } else { b });
                    StateProfile::new(vec![dearest; inst.n])
                }
            };
            let d = shapley_dynamics(&inst, k, order, &start, args.walk.steps, args.walk.seed)?;
            emit_rows(&d.rows, out.format, out.out.as_deref())
        }
        ShapleyMode::Equilibria => {
            let mut rows = Vec::new();
            for k in depths(args, inst.n) {
                let bound = inst.n as f64 / k as f64 * inst.optimum();
                for s in enumerate_equilibria(&inst, &shapley_config(&inst, k, order.clone()), out.cap())? {
                    let c = total_cost(&inst, &s);
                    rows.push(EquilibriumRow {
                        k,
                        profile: join(s.choices()),
                        total_cost: c,
                        optimum: inst.optimum(),
                        bound,
                        within_bound: c <= bound + 1e-9,
                    });
                }
            }
            emit_rows(&rows, out.format, out.out.as_deref())
        }
        ShapleyMode::Claim => {
            let rows = depths(args, inst.n)
                .map(|k| Ok(ClaimRow { k, holds: consecutive_mover_claim_check(&inst, k, out.cap())? }))
                .collect::<Result<Vec<_>>>()?;
            emit_rows(&rows, out.format, out.out.as_deref())
        }
    }
}

fn depths(args: &ShapleyArgs, n: usize) -> std::ops::RangeInclusive<usize> {
    match args.search.depth {
        Some(k) => k..=k,
        None => 1..=n,
    }
}
