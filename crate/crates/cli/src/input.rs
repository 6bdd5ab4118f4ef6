//! Loading candle files. Each `--input` is one market: a directory pools all
//! of its `.csv` files, a single file is a market of one.

use std::fs;
use std::path::{Path, PathBuf};

use trendstat::{parse_candles, CandleSeries};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone)]
pub struct Market {
    pub name: String,
    pub series: Vec<CandleSeries>,
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .or_else(|| path.file_name())
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

pub fn read_series(path: &Path) -> CliResult<CandleSeries> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    parse_candles(&text, &stem(path)).map_err(|source| CliError::Parse {
        path: path.to_path_buf(),
        source,
    })
}

fn csv_files(dir: &Path) -> CliResult<Vec<PathBuf>> {
    let mut files = Vec::new();
    for entry in fs::read_dir(dir).map_err(io_err(dir))? {
        let path = entry.map_err(io_err(dir))?.path();
        let is_csv = path
            .extension()
            .is_some_and(|e| e.eq_ignore_ascii_case("csv"));
        if is_csv && path.is_file() {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

pub fn load_market(path: &Path) -> CliResult<Market> {
    let files = if path.is_dir() {
        csv_files(path)?
    } else {
        vec![path.to_path_buf()]
    };
    if files.is_empty() {
        return Err(CliError::NoInputs(path.to_path_buf()));
    }
    let mut series = files
        .iter()
        .map(|f| read_series(f))
        .collect::<CliResult<Vec<_>>>()?;
    series.sort_by(|a, b| a.symbol.cmp(&b.symbol));
    Ok(Market {
        name: stem(path),
        series,
    })
}

/// Loads every input, ordered by market name.
pub fn load_markets(paths: &[PathBuf]) -> CliResult<Vec<Market>> {
    if paths.is_empty() {
        return Err(CliError::Usage("at least one --input is required".into()));
    }
    let mut markets = paths
        .iter()
        .map(|p| load_market(p))
        .collect::<CliResult<Vec<_>>>()?;
    markets.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(markets)
}
