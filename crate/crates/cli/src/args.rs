use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::{Args, ValueEnum};
use lookahead_core::engine::{OrderModel, PayoffModel, StateProfile, DEFAULT_STATE_CAP};

use crate::output::Format;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OrderArg {
    Worst,
    Average,
    Fixed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Leaf,
    Path,
}

impl From<ModelArg> for PayoffModel {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Leaf => PayoffModel::Leaf,
            ModelArg::Path => PayoffModel::Path,
        }
    }
}

/// Output options shared by every subcommand.
#[derive(Args, Clone, Debug)]
pub struct OutputArgs {
    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, value_enum, default_value = "csv", global = true)]
    pub format: Format,

    /// Cap on enumerated states.
    #[arg(long, env = "LOOKAHEAD_STATE_CAP", global = true)]
    pub state_cap: Option<u128>,
}

impl OutputArgs {
    pub fn cap(&self) -> u128 {
        self.state_cap.unwrap_or(DEFAULT_STATE_CAP)
    }
}

/// Search options. `None` means the game's own default.
#[derive(Args, Clone, Debug)]
pub struct SearchArgs {
    #[arg(long)]
    pub depth: Option<usize>,

    #[arg(long, value_enum)]
    pub order: Option<OrderArg>,

    /// Later movers for `--order fixed`, e.g. `1,0,1`.
    #[arg(long, value_delimiter = ',')]
    pub sequence: Vec<usize>,

    #[arg(long, value_enum)]
    pub model: Option<ModelArg>,
}

impl SearchArgs {
    pub fn order_model(&self, default: OrderArg) -> Result<OrderModel> {
        Ok(match self.order.unwrap_or(default) {
            OrderArg::Worst => OrderModel::Worst,
            OrderArg::Average => OrderModel::Average,
            OrderArg::Fixed => {
                if self.sequence.is_empty() {
                    bail!("--order fixed needs --sequence");
                }
                OrderModel::Fixed(self.sequence.clone())
            }
        })
    }

    pub fn payoff_model(&self, default: ModelArg) -> PayoffModel {
        self.model.unwrap_or(default).into()
    }
}

#[derive(Args, Clone, Debug)]
pub struct WalkArgs {
    #[arg(long, default_value_t = 200)]
    pub steps: usize,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

pub fn parse_profile(text: &str, players: usize) -> Result<StateProfile> {
    let choices = text
        .split(',')
        .map(|t| t.trim().parse::<usize>())
        .collect::<std::result::Result<Vec<_>, _>>()?;
    if choices.len() != players {
        bail!("start profile has {} entries for {players} players", choices.len());
    }
    Ok(StateProfile::new(choices))
}

pub fn read_instance(path: &std::path::Path) -> anyhow::Result<String> {
    use anyhow::Context;
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}
