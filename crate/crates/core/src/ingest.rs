//! Tick ingestion and previous-tick alignment onto an equally spaced grid.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ObservationScheme;
use crate::simulate::PathSample;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PriceScale {
    /// Positive prices; logs are taken on alignment.
    #[default]
    RawPrice,
    /// Values are already log-prices.
    LogPrice,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TickSeries {
    timestamps: Vec<f64>,
    values: Vec<f64>,
    scale: PriceScale,
}

impl TickSeries {
    pub fn new(timestamps: Vec<f64>, values: Vec<f64>, scale: PriceScale) -> Result<Self> {
        if timestamps.len() != values.len() {
            return Err(Error::Mismatch(format!(
                "{} timestamps but {} prices",
                timestamps.len(),
                values.len()
            )));
        }
        if timestamps.is_empty() {
            return Err(Error::NoTicks);
        }
        for (i, (&t, &v)) in timestamps.iter().zip(&values).enumerate() {
            let row = i + 1;
            if !t.is_finite() {
                return Err(Error::BadRow {
                    row,
                    message: format!("timestamp {t} is not finite"),
                });
            }
            if i > 0 && t < timestamps[i - 1] {
                return Err(Error::BadRow {
                    row,
                    message: format!(
                        "timestamp {t} decreases (previous row has {})",
                        timestamps[i - 1]
                    ),
                });
            }
            if !v.is_finite() || (scale == PriceScale::RawPrice && v <= 0.0) {
                return Err(Error::BadRow {
                    row,
                    message: format!("price {v} is not positive"),
                });
            }
        }
        Ok(TickSeries {
            timestamps,
            values,
            scale,
        })
    }

    pub fn len(&self) -> usize {
        self.timestamps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.timestamps.is_empty()
    }

    pub fn timestamps(&self) -> &[f64] {
        &self.timestamps
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn scale(&self) -> PriceScale {
        self.scale
    }

    fn log_value(&self, i: usize) -> f64 {
        match self.scale {
            PriceScale::RawPrice => self.values[i].ln(),
            PriceScale::LogPrice => self.values[i],
        }
    }
}

#[derive(Debug, Deserialize)]
struct TickRow {
    timestamp: f64,
    price: f64,
}

/// Reads a `timestamp,price` CSV file (timestamps in seconds).
pub fn read_csv(path: impl AsRef<Path>, scale: PriceScale) -> Result<TickSeries> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_ticks(file, scale)
}

pub fn read_ticks<R: std::io::Read>(reader: R, scale: PriceScale) -> Result<TickSeries> {
    let mut csv = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let mut timestamps = Vec::new();
    let mut values = Vec::new();
    for (i, row) in csv.deserialize::<TickRow>().enumerate() {
        let row = row.map_err(|e| Error::BadRow {
            row: i + 1,
            message: e.to_string(),
        })?;
        timestamps.push(row.timestamp);
        values.push(row.price);
    }
    TickSeries::new(timestamps, values, scale)
}

/// Previous-tick returns on the grid `t0 + kτ`, `k = 0..=n`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlignedReturns {
    pub t0: f64,
    pub tau: f64,
    pub n: usize,
    /// `Δ^o_k X`, `k = 0..n`.
    pub returns: Vec<f64>,
    /// `observed[k]`: a tick arrived in `(t0 + (k-1)τ, t0 + kτ]`; `observed[0]` is always true.
    pub observed: Vec<bool>,
}

impl AlignedReturns {
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut csv = csv::Writer::from_writer(writer);
        csv.write_record(["k", "return", "observed"])?;
        for k in 0..=self.n {
            let ret = self.returns.get(k).map(|r| r.to_string()).unwrap_or_default();
            csv.write_record([k.to_string(), ret, (self.observed[k] as u8).to_string()])?;
        }
        csv.flush().map_err(|e| Error::io("<csv>", e))?;
        Ok(())
    }
}

/// Aligns ticks to the grid by previous-tick interpolation. The grid value at point
/// `k` is the (log) price of the last tick at or before `t0 + kτ`; ties at the same
/// timestamp resolve to the last tick.
pub fn align_to_grid(ticks: &TickSeries, t0: f64, tau: f64, n: usize) -> Result<AlignedReturns> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::InvalidArgument(format!("tau must be positive, got {tau}")));
    }
    let times = ticks.timestamps();
    let mut next = times.partition_point(|&t| t <= t0);
    if next == 0 {
        return Err(Error::NoTickBeforeOrigin(t0));
    }
    let mut level = Vec::with_capacity(n + 1);
    let mut observed = Vec::with_capacity(n + 1);
    level.push(ticks.log_value(next - 1));
    observed.push(true);
    for k in 1..=n {
        let grid_time = t0 + k as f64 * tau;
        let start = next;
        while next < times.len() && times[next] <= grid_time {
            next += 1;
        }
        observed.push(next > start);
        level.push(ticks.log_value(next - 1));
    }
    let returns = level.windows(2).map(|w| w[1] - w[0]).collect();
    Ok(AlignedReturns {
        t0,
        tau,
        n,
        returns,
        observed,
    })
}

/// Turns a simulated path into previous-tick returns: increments are cumulated into
/// log-price levels starting at zero, masked points are dropped, and the result is
/// re-aligned on the grid `kτ`.
pub fn returns_from_sample(
    path: &PathSample,
    scheme: &ObservationScheme,
) -> Result<(AlignedReturns, AlignedReturns)> {
    let n = scheme.n;
    let one = |returns: &[f64], mask: &[bool]| -> Result<AlignedReturns> {
        if returns.len() != n || mask.len() != n + 1 {
            return Err(Error::Mismatch(format!(
                "expected {n} returns and {} mask flags, got {} and {}",
                n + 1,
                returns.len(),
                mask.len()
            )));
        }
        if mask[0] {
            return Err(Error::InvalidArgument(
                "the initial value must be observed (mask[0] = false)".into(),
            ));
        }
        let mut timestamps = Vec::new();
        let mut values = Vec::new();
        let mut level = 0.0;
        for k in 0..=n {
            if k > 0 {
                level += returns[k - 1];
            }
            if !mask[k] {
                timestamps.push(0.0 + k as f64 * scheme.tau);
                values.push(level);
            }
        }
        let ticks = TickSeries::new(timestamps, values, PriceScale::LogPrice)?;
        align_to_grid(&ticks, 0.0, scheme.tau, n)
    };
    Ok((
        one(&path.returns1, &path.mask1)?,
        one(&path.returns2, &path.mask2)?,
    ))
}
