use anyhow::Result;
use clap::Args;
use lookahead_core::cournot::foresight_curve;

use crate::args::OutputArgs;
use crate::output::emit_rows;

#[derive(Args, Debug)]
pub struct CournotArgs {
    /// Largest lookahead depth in the table.
    #[arg(long, default_value_t = 40)]
    pub k_max: usize,
}

pub fn run(args: &CournotArgs, out: &OutputArgs) -> Result<()> {
    emit_rows(&foresight_curve(args.k_max)?, out.format, out.out.as_deref())
}
