use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::{Args, ValueEnum};
use lookahead_core::engine::{enumerate_equilibria, Game, LookaheadConfig, MoverPool, Orientation, WalkParams};
use lookahead_core::utility::{
    basic_utility_config, steiner_dynamics, Action, BasicUtilityGame, SteinerGame, UtilityConstruction,
};
use serde::Serialize;

use crate::args::{ModelArg, OrderArg, OutputArgs, SearchArgs, WalkArgs};
use crate::output::{emit_record, emit_rows};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ConstructionArg {
    Basic,
    Steiner,
}

#[derive(Args, Debug)]
pub struct UtilityArgs {
    #[arg(long, value_enum, default_value = "basic")]
    pub construction: ConstructionArg,

    /// Construction file, e.g. `{"construction": "basic", "kappa": 120}`;
    /// overrides `--construction`, `--kappa` and `--q`.
    #[arg(long)]
    pub instance: Option<PathBuf>,

    #[arg(long, default_value_t = 120.0)]
    pub kappa: f64,

    /// Order of the projective plane for the Steiner game (prime).
    #[arg(long, default_value_t = 2)]
    pub q: usize,

    #[command(flatten)]
    pub search: SearchArgs,

    #[command(flatten)]
    pub walk: WalkArgs,

    /// Steps dropped before averaging the Steiner walk.
    #[arg(long, default_value_t = 50)]
    pub burn_in: usize,
}

#[derive(Serialize)]
struct BasicRow {
    kappa: f64,
    depth: usize,
    equilibria: String,
    equilibrium_value: Option<f64>,
    optimum: f64,
    ratio: Option<f64>,
    submodular: bool,
}

fn basic(kappa: f64, args: &UtilityArgs, out: &OutputArgs) -> Result<()> {
    let game = BasicUtilityGame::new(kappa)?;
    let depth = args.search.depth.unwrap_or(2);
    let mut cfg = basic_utility_config(depth);
    if args.search.order.is_some() || args.search.model.is_some() {
        cfg = LookaheadConfig::uniform(2, depth, args.search.payoff_model(ModelArg::Leaf), args.search.order_model(OrderArg::Average)?)
            .with_pool(MoverPool::NoRepeat);
    }
    let eqs = enumerate_equilibria(&game, &cfg, out.cap())?;
    let worst = eqs.iter().map(|s| game.social_value(s)).reduce(f64::min);
    let label = |i: usize| Action::from_index(i).label();
    let row = BasicRow {
        kappa,
        depth,
        equilibria: eqs.iter().map(|s| format!("{{{},{}}}", label(s[0]), label(s[1]))).collect::<Vec<_>>().join(";"),
        equilibrium_value: worst,
        optimum: game.optimum(),
        ratio: worst.map(|w| Orientation::Maximize.ratio(w, game.optimum())),
        submodular: game.is_submodular(),
    };
    emit_record(&row, out.format, out.out.as_deref())
}

fn steiner(q: usize, args: &UtilityArgs, out: &OutputArgs) -> Result<()> {
    let game = SteinerGame::new(q)?;
    let cfg = LookaheadConfig::uniform(
        game.players(),
        args.search.depth.unwrap_or(game.k()),
        args.search.payoff_model(ModelArg::Path),
        args.search.order_model(OrderArg::Worst)?,
    );
    let walk = WalkParams { steps: args.walk.steps, burn_in: args.burn_in, seed: args.walk.seed, walks: 1 };
    let d = steiner_dynamics(&game, &cfg, &walk, out.cap())?;
    emit_rows(&d.rows, out.format, out.out.as_deref())
}

pub fn run(args: &UtilityArgs, out: &OutputArgs) -> Result<()> {
    let construction = match &args.instance {
        Some(p) => UtilityConstruction::from_json(&crate::args::read_instance(p)?)?,
        None => match args.construction {
            ConstructionArg::Basic => UtilityConstruction::Basic { kappa: args.kappa },
            ConstructionArg::Steiner => UtilityConstruction::Steiner { q: args.q },
        },
    };
    match construction {
        UtilityConstruction::Basic { kappa } => basic(kappa, args, out),
        UtilityConstruction::Steiner { q } => {
            if args.search.order == Some(OrderArg::Fixed) {
                bail!("the Steiner walk supports --order worst or average");
            }
            steiner(q, args, out)
        }
    }
}
