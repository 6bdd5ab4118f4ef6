use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Half-open bins `[lo + i w, lo + (i+1) w)` covering `[lo, hi)`; the last
/// bin is cut at `hi` when the range is not a multiple of the width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistogramSpec {
    pub lo: f64,
    pub hi: f64,
    pub bin_width: f64,
}

impl HistogramSpec {
    pub fn new(lo: f64, hi: f64, bin_width: f64) -> Result<Self> {
        let spec = HistogramSpec { lo, hi, bin_width };
        spec.validate()?;
        Ok(spec)
    }

    /// Default spec for retracement-type variables: `[0, 5)` in bins of 0.11.
    pub fn retracement_default() -> Self {
        HistogramSpec {
            lo: 0.0,
            hi: 5.0,
            bin_width: 0.11,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.lo.is_finite() && self.hi.is_finite() && self.lo < self.hi) {
            return Err(Error::InvalidParameter(format!(
                "histogram range needs lo < hi, got [{}, {})",
                self.lo, self.hi
            )));
        }
        if !(self.bin_width > 0.0 && self.bin_width.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "bin width must be > 0, got {}",
                self.bin_width
            )));
        }
        Ok(())
    }

    pub fn bins(&self) -> usize {
        (((self.hi - self.lo) / self.bin_width) - 1e-9)
            .ceil()
            .max(1.0) as usize
    }

    pub fn edge(&self, i: usize) -> f64 {
        (self.lo + i as f64 * self.bin_width).min(self.hi)
    }

    fn locate(&self, x: f64) -> Option<usize> {
        if !(x >= self.lo && x < self.hi) {
            return None;
        }
        let bins = self.bins();
        let mut i = (((x - self.lo) / self.bin_width).floor() as usize).min(bins - 1);
        // settle rounding so edge(i) <= x < edge(i + 1)
        while i > 0 && self.edge(i) > x {
            i -= 1;
        }
        while i + 1 < bins && self.edge(i + 1) <= x {
            i += 1;
        }
        Some(i)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub spec: HistogramSpec,
    pub counts: Vec<usize>,
    /// `count / (n_total * width_of_bin)`.
    pub density: Vec<f64>,
    pub n_total: usize,
    pub out_of_range: usize,
}

impl Histogram {
    pub fn bin_bounds(&self, i: usize) -> (f64, f64) {
        (self.spec.edge(i), self.spec.edge(i + 1))
    }
}

pub fn histogram(samples: &[f64], spec: HistogramSpec) -> Result<Histogram> {
    spec.validate()?;
    let bins = spec.bins();
    let mut counts = vec![0usize; bins];
    let mut out_of_range = 0;
    for &x in samples {
        match spec.locate(x) {
            Some(i) => counts[i] += 1,
            None => out_of_range += 1,
        }
    }
    let n = samples.len();
    let density = counts
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            if n == 0 {
                0.0
            } else {
                c as f64 / (n as f64 * (spec.edge(i + 1) - spec.edge(i)))
            }
        })
        .collect();
    Ok(Histogram {
        spec,
        counts,
        density,
        n_total: n,
        out_of_range,
    })
}
