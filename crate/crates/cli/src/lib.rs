//! Command-line front end: batch runs over candle files with JSON and CSV
//! reports. Every report embeds the run configuration and is byte-identical
//! across re-runs with the same inputs and seed.

pub mod args;
pub mod commands;
pub mod error;
pub mod input;

pub use args::{Cli, Command};
pub use error::{CliError, CliResult};

use commands::write_output;

pub fn run(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Detect(a) => write_output(a.common.output.as_deref(), &commands::detect(a)?),
        Command::Stats(a) => {
            let out = commands::stats(a)?;
            write_output(a.common.output.as_deref(), &out.report)?;
            if let Some(path) = commands::histogram_path(a) {
                write_output(Some(&path), &out.histograms)?;
            }
            Ok(())
        }
        Command::Sweep(a) => write_output(a.output.as_deref(), &commands::sweep(a)?),
        Command::TradeEval(a) => write_output(a.output.as_deref(), &commands::trade_eval(a)?),
        Command::Backtest(a) => write_output(a.common.output.as_deref(), &commands::backtest(a)?),
        Command::Synth(a) => write_output(a.output.as_deref(), &commands::synth(a)?),
    }
}
