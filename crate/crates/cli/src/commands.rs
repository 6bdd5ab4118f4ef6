//! Command bodies. Each returns the report text so tests can call them
//! without touching the file system for output.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;
use trendstat::{
    backtest_anticyclic, default_histogram, detect_trends, expected_return, extract_samples,
    histogram, log_correlation, macd_sar, parse_range, period_scaling_fit, planted_trend,
    run_minmax, simulate_expected_return, synth_gbm, BivariateLogNormalParams, Direction,
    FitReport, HistogramSpec, LinearFit, MinMaxProcess, PlantedTrend, SampleSet, ScalingConfig,
    ScalingRange, TradeOutcome, TradeSpec, TrendPhase, TrendVariable,
};

use crate::args::{
    BacktestArgs, DetectArgs, DirectionFilter, InputArgs, StatsArgs, SweepArgs, SynthArgs,
    SynthKind, TradeEvalArgs, TradeParams,
};
use crate::error::{CliError, CliResult};
use crate::input::{load_markets, Market};

/// The variables `stats` fits when none is selected.
pub const STATS_VARIABLES: [TrendVariable; 7] = [
    TrendVariable::Retracement,
    TrendVariable::Duration,
    TrendVariable::RelMovement,
    TrendVariable::RelCorrection,
    TrendVariable::DelayX,
    TrendVariable::DelayM,
    TrendVariable::DelayC,
];

/// Jointly reported pairs; the correlation is attached to the second
/// variable's cell.
pub const LINKED_PAIRS: [(TrendVariable, TrendVariable); 4] = [
    (TrendVariable::Retracement, TrendVariable::DelayX),
    (TrendVariable::Retracement, TrendVariable::Duration),
    (TrendVariable::RelMovement, TrendVariable::DelayM),
    (TrendVariable::RelCorrection, TrendVariable::DelayC),
];

/// Sweep cells with fewer period gaps than this are marked insufficient.
pub const MIN_SWEEP_GAPS: usize = 3;

#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    pub inputs: Vec<String>,
    pub scalings: Vec<f64>,
    pub direction: DirectionFilter,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub variables: Vec<TrendVariable>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub histogram: Option<HistogramSpec>,
    pub output: Option<String>,
    pub seed: u64,
}

impl RunConfig {
    fn new(command: &'static str, args: &InputArgs) -> CliResult<Self> {
        check_scalings(&args.scalings)?;
        Ok(RunConfig {
            command,
            inputs: display_paths(&args.input),
            scalings: args.scalings.clone(),
            direction: args.direction,
            variables: Vec::new(),
            histogram: None,
            output: args.output.as_ref().map(|p| p.display().to_string()),
            seed: args.seed,
        })
    }
}

fn display_paths(paths: &[PathBuf]) -> Vec<String> {
    paths.iter().map(|p| p.display().to_string()).collect()
}

fn check_scalings(scalings: &[f64]) -> CliResult<()> {
    if scalings.is_empty() {
        return Err(CliError::Usage("at least one --scaling is required".into()));
    }
    if let Some(s) = scalings.iter().find(|s| !(s.is_finite() && **s > 0.0)) {
        return Err(CliError::Usage(format!("scaling must be > 0, got {s}")));
    }
    Ok(())
}

fn usage(e: trendstat::Error) -> CliError {
    CliError::Usage(e.to_string())
}

fn to_json<T: Serialize>(value: &T) -> CliResult<String> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text)
}

/// CSV reports start with the run configuration as a `#` comment line.
fn csv_preamble<T: Serialize>(config: &T) -> CliResult<String> {
    Ok(format!("# {}\n", serde_json::to_string(config)?))
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

// ---------------------------------------------------------------- detect

#[derive(Debug, Serialize)]
struct DetectSection {
    market: String,
    symbol: String,
    scaling: f64,
    macd: (f64, f64, f64),
    bars: usize,
    #[serde(flatten)]
    process: MinMaxProcess,
    phases: Vec<TrendPhase>,
}

#[derive(Debug, Serialize)]
struct DetectReport {
    config: RunConfig,
    sections: Vec<DetectSection>,
}

fn detect_one(
    series: &trendstat::CandleSeries,
    scaling: f64,
) -> CliResult<(MinMaxProcess, Vec<TrendPhase>)> {
    let cfg = ScalingConfig::new(scaling).map_err(usage)?;
    let mm = run_minmax(series, &macd_sar(series, cfg)?)?;
    let phases = detect_trends(&mm)?;
    Ok((mm, phases))
}

pub fn detect(args: &DetectArgs) -> CliResult<String> {
    let config = RunConfig::new("detect", &args.common)?;
    let markets = load_markets(&args.common.input)?;
    let mut sections = Vec::new();
    for m in &markets {
        for s in &m.series {
            for &scaling in &config.scalings {
                let cfg = ScalingConfig::new(scaling).map_err(usage)?;
                let (process, mut phases) = detect_one(s, scaling)?;
                phases.retain(|p| config.direction.admits(p.direction));
                sections.push(DetectSection {
                    market: m.name.clone(),
                    symbol: s.symbol.clone(),
                    scaling,
                    macd: (cfg.fast(), cfg.slow(), cfg.signal()),
                    bars: s.len(),
                    process,
                    phases,
                });
            }
        }
    }
    sections.sort_by(|a, b| {
        (a.symbol.as_str(), a.scaling, a.market.as_str())
            .partial_cmp(&(b.symbol.as_str(), b.scaling, b.market.as_str()))
            .expect("scalings are finite")
    });
    to_json(&DetectReport { config, sections })
}

// ---------------------------------------------------------------- stats

fn pooled_samples(m: &Market, scaling: f64) -> CliResult<(SampleSet, usize, usize)> {
    let mut set = SampleSet::default();
    let mut extrema = 0;
    let mut phases_total = 0;
    for s in &m.series {
        let (mm, phases) = detect_one(s, scaling)?;
        extrema += mm.points.len();
        phases_total += phases.len();
        set.extend(extract_samples(&mm, &phases, &s.symbol, scaling)?);
    }
    Ok((set, extrema, phases_total))
}

#[derive(Debug, Serialize)]
struct CellSummary {
    market: String,
    scaling: f64,
    series: usize,
    extrema: usize,
    phases: usize,
    degenerate_movements: usize,
    nonpositive_values: usize,
}

#[derive(Debug, Serialize)]
struct SkippedCell {
    market: String,
    variable: TrendVariable,
    direction: Direction,
    scaling: f64,
    n: usize,
    reason: String,
}

#[derive(Debug, Serialize)]
struct HistogramSummary {
    market: String,
    variable: TrendVariable,
    direction: Direction,
    scaling: f64,
    n_total: usize,
    out_of_range: usize,
}

#[derive(Debug, Serialize)]
struct StatsReport {
    config: RunConfig,
    cells: Vec<CellSummary>,
    fits: Vec<FitReport>,
    skipped: Vec<SkippedCell>,
    histograms: Vec<HistogramSummary>,
}

/// Both stats outputs: the JSON fit report and the histogram CSV.
pub struct StatsOutput {
    pub report: String,
    pub histograms: String,
}

fn histogram_spec(args: &StatsArgs, variable: TrendVariable) -> CliResult<HistogramSpec> {
    let base = default_histogram(variable);
    let (lo, hi) = match &args.range {
        Some(r) => parse_range(r).map_err(usage)?,
        None => (base.lo, base.hi),
    };
    HistogramSpec::new(lo, hi, args.bin_width.unwrap_or(base.bin_width)).map_err(usage)
}

pub fn stats(args: &StatsArgs) -> CliResult<StatsOutput> {
    let mut config = RunConfig::new("stats", &args.common)?;
    let variables = if args.variables.is_empty() {
        STATS_VARIABLES.to_vec()
    } else {
        args.variables.clone()
    };
    config.variables = variables.clone();
    if args.range.is_some() || args.bin_width.is_some() {
        config.histogram = Some(histogram_spec(args, variables[0])?);
    }
    // validate every histogram spec before any work
    for &v in &variables {
        histogram_spec(args, v)?;
    }
    let markets = load_markets(&args.common.input)?;

    let mut cells = Vec::new();
    let mut fits = Vec::new();
    let mut skipped = Vec::new();
    let mut summaries = Vec::new();
    let mut csv = csv_preamble(&config)?;
    csv.push_str("market,variable,direction,scaling,bin_lo,bin_hi,count,density\n");

    for m in &markets {
        for &scaling in &config.scalings {
            let (set, extrema, phases) = pooled_samples(m, scaling)?;
            cells.push(CellSummary {
                market: m.name.clone(),
                scaling,
                series: m.series.len(),
                extrema,
                phases,
                degenerate_movements: set.degenerate_movements,
                nonpositive_values: set.nonpositive_values,
            });
            for &dir in config.direction.directions() {
                for &variable in &variables {
                    let values = set.values(variable, Some(dir));
                    let skip = |reason: String| SkippedCell {
                        market: m.name.clone(),
                        variable,
                        direction: dir,
                        scaling,
                        n: values.len(),
                        reason,
                    };
                    if values.len() < 2 {
                        skipped.push(skip("fewer than 2 samples".into()));
                        continue;
                    }
                    let mut fit = match FitReport::fit(
                        &values,
                        variable.as_str(),
                        dir.as_str(),
                        scaling,
                        &m.name,
                    ) {
                        Ok(f) => f,
                        Err(e) => {
                            skipped.push(skip(e.to_string()));
                            continue;
                        }
                    };
                    if let Some(&(first, _)) = LINKED_PAIRS.iter().find(|(_, s)| *s == variable) {
                        if let Ok(r) = log_correlation(&set.pairs(first, variable, Some(dir))) {
                            fit.rho = Some(r);
                            fit.rho_with = Some(first.as_str().to_string());
                        }
                    }
                    fits.push(fit);

                    let h = histogram(&values, histogram_spec(args, variable)?)?;
                    for i in 0..h.counts.len() {
                        let (lo, hi) = h.bin_bounds(i);
                        let _ = writeln!(
                            csv,
                            "{},{},{},{},{},{},{},{}",
                            m.name,
                            variable,
                            dir.as_str(),
                            scaling,
                            lo,
                            hi,
                            h.counts[i],
                            h.density[i]
                        );
                    }
                    summaries.push(HistogramSummary {
                        market: m.name.clone(),
                        variable,
                        direction: dir,
                        scaling,
                        n_total: h.n_total,
                        out_of_range: h.out_of_range,
                    });
                }
            }
        }
    }
    let report = to_json(&StatsReport {
        config,
        cells,
        fits,
        skipped,
        histograms: summaries,
    })?;
    Ok(StatsOutput {
        report,
        histograms: csv,
    })
}

/// Where the histogram CSV goes: the explicit flag, else next to `--output`.
pub fn histogram_path(args: &StatsArgs) -> Option<PathBuf> {
    args.histogram_output.clone().or_else(|| {
        args.common
            .output
            .as_ref()
            .map(|p| p.with_extension("hist.csv"))
    })
}

// ---------------------------------------------------------------- sweep

#[derive(Debug, Serialize)]
struct SweepConfig {
    command: &'static str,
    inputs: Vec<String>,
    scalings: ScalingRange,
    direction: DirectionFilter,
    output: Option<String>,
    seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepCell {
    pub market: String,
    pub scaling: f64,
    pub period: Option<f64>,
    pub n_gaps: usize,
}

pub fn sweep_cells(
    markets: &[Market],
    scalings: &[f64],
    direction: DirectionFilter,
) -> CliResult<Vec<SweepCell>> {
    let mut out = Vec::new();
    for m in markets {
        for &scaling in scalings {
            let (set, _, _) = pooled_samples(m, scaling)?;
            let gaps: Vec<f64> = direction
                .directions()
                .iter()
                .flat_map(|&d| set.values(TrendVariable::PeriodGap, Some(d)))
                .collect();
            let period = (gaps.len() >= MIN_SWEEP_GAPS)
                .then(|| gaps.iter().sum::<f64>() / gaps.len() as f64);
            out.push(SweepCell {
                market: m.name.clone(),
                scaling,
                period,
                n_gaps: gaps.len(),
            });
        }
    }
    Ok(out)
}

pub fn sweep_fit(cells: &[SweepCell]) -> Option<LinearFit> {
    let points: Vec<(f64, f64)> = cells
        .iter()
        .filter_map(|c| c.period.map(|p| (c.scaling, p)))
        .collect();
    period_scaling_fit(&points).ok()
}

pub fn sweep(args: &SweepArgs) -> CliResult<String> {
    let range = ScalingRange::parse(&args.scalings).map_err(usage)?;
    let scalings = range.values();
    check_scalings(&scalings)?;
    let config = SweepConfig {
        command: "sweep",
        inputs: display_paths(&args.input),
        scalings: range,
        direction: args.direction,
        output: args.output.as_ref().map(|p| p.display().to_string()),
        seed: args.seed,
    };
    let markets = load_markets(&args.input)?;
    let cells = sweep_cells(&markets, &scalings, args.direction)?;

    let mut csv = csv_preamble(&config)?;
    csv.push_str("market,scaling,period,n_gaps,status,intercept,slope,residual_rms\n");
    for m in &markets {
        let mine: Vec<SweepCell> = cells
            .iter()
            .filter(|c| c.market == m.name)
            .cloned()
            .collect();
        let fit = sweep_fit(&mine);
        for c in &mine {
            let _ = writeln!(
                csv,
                "{},{},{},{},{},{},{},{}",
                c.market,
                c.scaling,
                opt(c.period),
                c.n_gaps,
                if c.period.is_some() {
                    "ok"
                } else {
                    "insufficient"
                },
                opt(fit.map(|f| f.intercept)),
                opt(fit.map(|f| f.slope)),
                opt(fit.map(|f| f.residual_rms)),
            );
        }
    }
    Ok(csv)
}

// ---------------------------------------------------------------- trade-eval

fn trade_spec(entry: f64, target: Option<f64>) -> CliResult<TradeSpec> {
    if let Some(t) = target {
        if entry >= t {
            return Err(CliError::Usage(format!(
                "entry {entry} must be below target {t}"
            )));
        }
    }
    TradeSpec::new(entry, target.unwrap_or(f64::INFINITY)).map_err(usage)
}

fn bivariate(p: &TradeParams) -> CliResult<BivariateLogNormalParams> {
    BivariateLogNormalParams::new(p.mu_x, p.mu_d, p.sigma_x, p.sigma_d, p.rho).map_err(usage)
}

#[derive(Debug, Serialize)]
struct TradeEvalConfig {
    command: &'static str,
    params: TradeParams,
    entry: f64,
    target: Option<f64>,
    mc_samples: usize,
    output: Option<String>,
    seed: u64,
}

#[derive(Debug, Serialize)]
struct TradeEvalReport {
    config: TradeEvalConfig,
    analytic: f64,
    mc_mean: f64,
    mc_stderr: f64,
    /// `(analytic - mc_mean) / mc_stderr`
    z_score: f64,
    open_probability: f64,
    target_probability: f64,
}

pub fn trade_eval(args: &TradeEvalArgs) -> CliResult<String> {
    let spec = trade_spec(args.entry, args.target)?;
    let params = bivariate(&args.params)?;
    if args.mc_samples < 10_000 {
        return Err(CliError::Usage(
            "--mc-samples must be at least 10000".into(),
        ));
    }
    let analytic = expected_return(params, spec)?;
    let (mc_mean, mc_stderr) = simulate_expected_return(params, spec, args.mc_samples, args.seed)?;
    let px = params.marginal_x();
    let open = px.survival(spec.entry);
    let target_probability = match args.target {
        Some(t) => px.survival(t) / open,
        None => 0.0,
    };
    to_json(&TradeEvalReport {
        config: TradeEvalConfig {
            command: "trade-eval",
            params: args.params,
            entry: args.entry,
            target: args.target,
            mc_samples: args.mc_samples,
            output: args.output.as_ref().map(|p| p.display().to_string()),
            seed: args.seed,
        },
        analytic,
        mc_mean,
        mc_stderr,
        z_score: (analytic - mc_mean) / mc_stderr,
        open_probability: open,
        target_probability,
    })
}

// ---------------------------------------------------------------- backtest

#[derive(Debug, Serialize)]
struct BacktestSection {
    market: String,
    symbol: String,
    scaling: f64,
    trades: usize,
    reached_target: usize,
    mean_return: Option<f64>,
    truncated: usize,
    not_entered: usize,
    outcomes: Vec<TradeOutcome>,
}

#[derive(Debug, Serialize)]
struct BacktestPool {
    market: String,
    scaling: f64,
    trades: usize,
    mean_return: Option<f64>,
    stderr: Option<f64>,
    target_rate: Option<f64>,
}

#[derive(Debug, Serialize)]
struct BacktestConfig {
    #[serde(flatten)]
    run: RunConfig,
    entry: f64,
    target: Option<f64>,
}

#[derive(Debug, Serialize)]
struct BacktestReport {
    config: BacktestConfig,
    sections: Vec<BacktestSection>,
    pooled: Vec<BacktestPool>,
}

fn pool(market: &str, scaling: f64, outcomes: &[TradeOutcome]) -> BacktestPool {
    let n = outcomes.len();
    let mean = (n > 0).then(|| outcomes.iter().map(|o| o.ret).sum::<f64>() / n as f64);
    let stderr = mean.filter(|_| n > 1).map(|m| {
        let var = outcomes.iter().map(|o| (o.ret - m).powi(2)).sum::<f64>() / (n - 1) as f64;
        (var / n as f64).sqrt()
    });
    BacktestPool {
        market: market.to_string(),
        scaling,
        trades: n,
        mean_return: mean,
        stderr,
        target_rate: (n > 0)
            .then(|| outcomes.iter().filter(|o| o.reached_target).count() as f64 / n as f64),
    }
}

pub fn backtest(args: &BacktestArgs) -> CliResult<String> {
    let run = RunConfig::new("backtest", &args.common)?;
    let include_down = match args.common.direction {
        DirectionFilter::Up => false,
        DirectionFilter::Both => true,
        DirectionFilter::Down => {
            return Err(CliError::Usage(
                "backtest trades up-trends always; use --direction up or both".into(),
            ))
        }
    };
    let spec = trade_spec(args.entry, args.target)?;
    let markets = load_markets(&args.common.input)?;

    let mut sections = Vec::new();
    let mut pooled = Vec::new();
    for m in &markets {
        for &scaling in &run.scalings {
            let mut all = Vec::new();
            for s in &m.series {
                let bt = backtest_anticyclic(s, scaling, spec, include_down)?;
                all.extend_from_slice(&bt.outcomes);
                sections.push(BacktestSection {
                    market: m.name.clone(),
                    symbol: s.symbol.clone(),
                    scaling,
                    trades: bt.outcomes.len(),
                    reached_target: bt.outcomes.iter().filter(|o| o.reached_target).count(),
                    mean_return: bt.mean_return(),
                    truncated: bt.truncated,
                    not_entered: bt.not_entered,
                    outcomes: bt.outcomes,
                });
            }
            pooled.push(pool(&m.name, scaling, &all));
        }
    }
    sections.sort_by(|a, b| {
        (a.symbol.as_str(), a.scaling, a.market.as_str())
            .partial_cmp(&(b.symbol.as_str(), b.scaling, b.market.as_str()))
            .expect("scalings are finite")
    });
    to_json(&BacktestReport {
        config: BacktestConfig {
            run,
            entry: args.entry,
            target: args.target,
        },
        sections,
        pooled,
    })
}

// ---------------------------------------------------------------- synth

pub fn synth(args: &SynthArgs) -> CliResult<String> {
    let series = match args.kind {
        SynthKind::Gbm => {
            synth_gbm(args.start, args.drift, args.vol, args.bars, args.seed).map_err(usage)?
        }
        SynthKind::Planted => {
            let cfg = PlantedTrend {
                start_price: args.start,
                legs: args.legs,
                mu_x: args.mu_x,
                sigma_x: args.sigma_x,
                ..PlantedTrend::default()
            };
            planted_trend(&cfg, args.seed).map_err(usage)?.series
        }
    };
    Ok(series.to_csv())
}

pub fn write_output(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|source| CliError::Io {
            path: p.to_path_buf(),
            source,
        }),
        None => {
            use std::io::Write;
            match std::io::stdout().lock().write_all(text.as_bytes()) {
                // a closed pipe (`| head`) is not an error
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::Io {
                    path: PathBuf::from("<stdout>"),
                    source: e,
                }),
                _ => Ok(()),
            }
        }
    }
}
