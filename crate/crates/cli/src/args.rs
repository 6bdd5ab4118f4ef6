use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use trendstat::{Direction, TrendVariable, DEFAULT_SCALINGS, DEFAULT_SWEEP};

#[derive(Debug, Parser)]
#[command(
    name = "trendstat",
    version,
    about = "Dow-trend detection, trend statistics and anti-cyclic trade evaluation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fixed extrema and trend phases per series and scaling (JSON).
    Detect(DetectArgs),
    /// Log-normal fits with AD test (JSON) and histograms (CSV).
    Stats(StatsArgs),
    /// Mean trend period per scaling with a linear fit (CSV).
    Sweep(SweepArgs),
    /// Expected return of the anti-cyclic system, analytic and simulated (JSON).
    TradeEval(TradeEvalArgs),
    /// Replay the anti-cyclic system on candles (JSON).
    Backtest(BacktestArgs),
    /// Write a synthetic candle series (CSV).
    Synth(SynthArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DirectionFilter {
    Up,
    Down,
    Both,
}

impl DirectionFilter {
    pub fn directions(self) -> &'static [Direction] {
        match self {
            DirectionFilter::Up => &[Direction::Up],
            DirectionFilter::Down => &[Direction::Down],
            DirectionFilter::Both => &[Direction::Up, Direction::Down],
        }
    }

    pub fn admits(self, d: Direction) -> bool {
        self.directions().contains(&d)
    }
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// Candle file or directory of `.csv` files; repeat for several markets.
    #[arg(long, required = true)]
    pub input: Vec<PathBuf>,

    /// Report path; stdout when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,

    /// MACD scaling factor; repeatable.
    #[arg(long = "scaling", default_values_t = DEFAULT_SCALINGS.to_vec())]
    pub scalings: Vec<f64>,

    #[arg(long, value_enum, default_value_t = DirectionFilter::Both)]
    pub direction: DirectionFilter,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct DetectArgs {
    #[command(flatten)]
    pub common: InputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct StatsArgs {
    #[command(flatten)]
    pub common: InputArgs,

    /// Variable to fit; repeatable. Defaults to all seven trend variables.
    #[arg(long = "variable", value_parser = parse_variable)]
    pub variables: Vec<TrendVariable>,

    /// Histogram range `lo:hi`; defaults per variable.
    #[arg(long)]
    pub range: Option<String>,

    #[arg(long)]
    pub bin_width: Option<f64>,

    /// Histogram CSV path; defaults to `<output>.hist.csv` next to `--output`.
    #[arg(long)]
    pub histogram_output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    /// Candle file or directory of `.csv` files; repeat for several markets.
    #[arg(long, required = true)]
    pub input: Vec<PathBuf>,

    #[arg(long)]
    pub output: Option<PathBuf>,

    /// Scaling grid `lo:hi:step`.
    #[arg(long, default_value = DEFAULT_SWEEP)]
    pub scalings: String,

    #[arg(long, value_enum, default_value_t = DirectionFilter::Both)]
    pub direction: DirectionFilter,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, Args, Serialize)]
pub struct TradeParams {
    #[arg(long, allow_negative_numbers = true)]
    pub mu_x: f64,
    #[arg(long)]
    pub sigma_x: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub mu_d: f64,
    #[arg(long)]
    pub sigma_d: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub rho: f64,
}

#[derive(Debug, Clone, Args)]
pub struct TradeEvalArgs {
    #[command(flatten)]
    pub params: TradeParams,

    /// Entry retracement level `a`.
    #[arg(long)]
    pub entry: f64,

    /// Target retracement level `t`; no target when omitted.
    #[arg(long)]
    pub target: Option<f64>,

    #[arg(long, default_value_t = 1_000_000)]
    pub mc_samples: usize,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct BacktestArgs {
    #[command(flatten)]
    pub common: InputArgs,

    #[arg(long)]
    pub entry: f64,

    #[arg(long)]
    pub target: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SynthKind {
    /// Geometric Brownian motion with wicks.
    Gbm,
    /// Up-trend with planted log-normal retracements.
    Planted,
}

#[derive(Debug, Clone, Args)]
pub struct SynthArgs {
    #[arg(long, value_enum, default_value_t = SynthKind::Gbm)]
    pub kind: SynthKind,

    /// Number of bars (gbm).
    #[arg(long, default_value_t = 2000)]
    pub bars: usize,

    #[arg(long, default_value_t = 100.0)]
    pub start: f64,

    /// Per-bar log drift (gbm).
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub drift: f64,

    /// Per-bar log volatility (gbm).
    #[arg(long, default_value_t = 0.02)]
    pub vol: f64,

    /// Movement/correction pairs (planted).
    #[arg(long, default_value_t = 120)]
    pub legs: usize,

    /// Log-mean of the planted retracements.
    #[arg(long, default_value_t = 0.5f64.ln(), allow_negative_numbers = true)]
    pub mu_x: f64,

    /// Log-sd of the planted retracements.
    #[arg(long, default_value_t = 0.3)]
    pub sigma_x: f64,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    #[arg(long)]
    pub output: Option<PathBuf>,
}

fn parse_variable(s: &str) -> Result<TrendVariable, String> {
    s.parse().map_err(|e: trendstat::Error| e.to_string())
}
