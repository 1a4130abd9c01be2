//! `lookahead`: run the bundled game experiments and emit CSV or JSON.

mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use args::OutputArgs;
use commands::{cournot, gsp, routing, selftest, shapley, utility};

#[derive(Parser, Debug)]
#[command(name = "lookahead", version, about = "k-lookahead search experiments")]
struct Cli {
    #[command(flatten)]
    output: OutputArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Duopoly quantities, output and surplus by lookahead depth.
    Cournot(cournot::CournotArgs),
    /// Sponsored-search auction equilibria.
    Gsp(gsp::GspArgs),
    /// Selfish routing equilibria, inequality checks and walks.
    Routing(routing::RoutingArgs),
    /// Utility-game constructions.
    Utility(utility::UtilityArgs),
    /// Cost-sharing network design walks, equilibria and mover agreement.
    Shapley(shapley::ShapleyArgs),
    /// Cross-check the search engine against direct computations.
    EngineSelftest(selftest::SelftestArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = &cli.output;
    let result = match &cli.command {
        Command::Cournot(a) => cournot::run(a, out),
        Command::Gsp(a) => gsp::run(a, out),
        Command::Routing(a) => routing::run(a, out),
        Command::Utility(a) => utility::run(a, out),
        Command::Shapley(a) => shapley::run(a, out),
        Command::EngineSelftest(a) => selftest::run(a, out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
