//! Replicated simulate → interpolate → estimate experiments, summarized by
//! median and median absolute deviation of the lag estimates.

use std::io::Write;

use log::{info, warn};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimator::{check_levels, estimate_all_levels, hry_lag, LagGrid};
use crate::filters::Family;
use crate::ingest::returns_from_sample;
use crate::model::{ModelFile, ObservationScheme, SpectralModel};
use crate::simulate::{default_maxlag, draw, target_covariance_tables, CirculantSampler, EmbeddingReport};

pub const SCHEMA_VERSION: u32 = 1;

/// A summary is flagged invalid when more than this fraction of replications fail.
pub const MAX_FAILURE_RATE: f64 = 0.05;

#[derive(Debug, Clone, PartialEq)]
pub struct MCConfig {
    pub model: SpectralModel,
    pub scheme: ObservationScheme,
    pub families: Vec<Family>,
    pub max_level: usize,
    /// Grid half-width in steps of `τ`.
    pub max_lag: usize,
    pub replications: usize,
    pub master_seed: u64,
}

impl MCConfig {
    /// The simulation design with `n = 15000`, `|l| ≤ 60`, levels 1..8 and all three filters.
    pub fn reference(pi: f64, replications: usize, master_seed: u64) -> Self {
        let model = SpectralModel::reference();
        let scheme = ObservationScheme::new(model.tau(), 15000, pi, pi).expect("valid scheme");
        MCConfig {
            model,
            scheme,
            families: Family::ALL.to_vec(),
            max_level: 8,
            max_lag: 60,
            replications,
            master_seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.replications < 1 {
            return Err(Error::InvalidArgument("at least one replication is required".into()));
        }
        if self.families.is_empty() {
            return Err(Error::InvalidArgument("no wavelet families selected".into()));
        }
        self.scheme.validate()?;
        self.model.validate()?;
        if self.model.tau() != self.scheme.tau {
            return Err(Error::Mismatch(format!(
                "model tau {} differs from scheme tau {}",
                self.model.tau(),
                self.scheme.tau
            )));
        }
        let n = self.scheme.n;
        for &family in &self.families {
            check_levels(family, self.max_level, n)?;
            let needed = crate::filters::level_filter_len(family.len(), self.max_level) + self.max_lag;
            if needed > n {
                return Err(Error::InvalidArgument(format!(
                    "grid half-width {} leaves no data at level {} of {family} (n = {n})",
                    self.max_lag, self.max_level
                )));
            }
        }
        Ok(())
    }
}

/// JSON experiment description for the command line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MCConfigFile {
    pub model: ModelFile,
    #[serde(default = "default_families")]
    pub families: Vec<Family>,
    #[serde(default = "default_levels")]
    pub levels: usize,
    #[serde(default = "default_grid")]
    pub maxlag: usize,
    #[serde(default = "default_reps")]
    pub reps: usize,
    #[serde(default)]
    pub seed: u64,
}

fn default_families() -> Vec<Family> {
    Family::ALL.to_vec()
}
fn default_levels() -> usize {
    8
}
fn default_grid() -> usize {
    60
}
fn default_reps() -> usize {
    200
}

impl MCConfigFile {
    pub fn into_config(self) -> Result<MCConfig> {
        let config = MCConfig {
            model: self.model.model()?,
            scheme: self.model.scheme()?,
            families: self.families,
            max_level: self.levels,
            max_lag: self.maxlag,
            replications: self.reps,
            master_seed: self.seed,
        };
        config.validate()?;
        Ok(config)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LagSummary {
    pub median: i64,
    pub mad: i64,
}

/// Lower median and median absolute deviation of integer lags.
pub fn summarize(values: &[i64]) -> Result<LagSummary> {
    if values.is_empty() {
        return Err(Error::Empty("no lag estimates to summarize".into()));
    }
    let median = lower_median(values.to_vec());
    let deviations = values.iter().map(|v| (v - median).abs()).collect();
    Ok(LagSummary {
        median,
        mad: lower_median(deviations),
    })
}

fn lower_median(mut values: Vec<i64>) -> i64 {
    values.sort_unstable();
    values[(values.len() - 1) / 2]
}

/// Lag estimates (grid units) of one replication.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Replication {
    pub index: usize,
    pub seed: u64,
    /// `levels[f][j-1]` for `families[f]`.
    pub levels: Vec<Vec<i64>>,
    pub hry: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilySummary {
    pub family: Family,
    /// Indexed by `j - 1`.
    pub levels: Vec<LagSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MCSummary {
    pub replications: usize,
    pub failures: usize,
    pub valid: bool,
    /// True lags `θ_j/τ` for `j = 1..=max_level`.
    pub truth: Vec<f64>,
    pub families: Vec<FamilySummary>,
    pub hry: LagSummary,
    pub runs: Vec<Replication>,
}

impl MCSummary {
    pub fn family(&self, family: Family) -> Option<&FamilySummary> {
        self.families.iter().find(|f| f.family == family)
    }

    /// Table layout: a `True` row, then per estimator a `median` and a `mad` row,
    /// one column per level. The single-scale baseline repeats its value across levels.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let levels = self.truth.len();
        let mut csv = csv::Writer::from_writer(writer);
        let mut header = vec!["schema_version".to_string(), "estimator".into(), "statistic".into()];
        header.extend((1..=levels).map(|j| format!("j{j}")));
        csv.write_record(&header)?;

        let version = SCHEMA_VERSION.to_string();
        let mut row = |name: &str, stat: &str, values: Vec<String>| -> Result<()> {
            let mut record = vec![version.clone(), name.to_string(), stat.to_string()];
            record.extend(values);
            csv.write_record(&record)?;
            Ok(())
        };
        row("True", "theta_over_tau", self.truth.iter().map(|t| t.to_string()).collect())?;
        row("HRY", "median", vec![self.hry.median.to_string(); levels])?;
        row("HRY", "mad", vec![self.hry.mad.to_string(); levels])?;
        for family in &self.families {
            let name = family.family.name();
            row(name, "median", family.levels.iter().map(|s| s.median.to_string()).collect())?;
            row(name, "mad", family.levels.iter().map(|s| s.mad.to_string()).collect())?;
        }
        csv.flush().map_err(|e| Error::io("<csv>", e))?;
        Ok(())
    }
}

/// SplitMix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of replication `index`, derived from the master seed only.
pub fn replication_seed(master_seed: u64, index: usize) -> u64 {
    mix(master_seed ^ mix((index as u64).wrapping_add(0x9e37_79b9_7f4a_7c15)))
}

fn replicate(config: &MCConfig, sampler: &CirculantSampler, grid: &LagGrid, index: usize) -> Result<Replication> {
    let seed = replication_seed(config.master_seed, index);
    let path = draw(sampler, &config.scheme, seed);
    let (ret1, ret2) = returns_from_sample(&path, &config.scheme)?;
    let levels = config
        .families
        .iter()
        .map(|&family| {
            Ok(estimate_all_levels(&ret1, &ret2, family, config.max_level, grid)?
                .into_iter()
                .map(|r| r.estimate.lag_steps)
                .collect())
        })
        .collect::<Result<Vec<Vec<i64>>>>()?;
    let hry = hry_lag(&ret1, &ret2, grid)?.lag_steps;
    Ok(Replication {
        index,
        seed,
        levels,
        hry,
    })
}

/// Builds the embedding once and runs all replications in parallel; results are
/// merged in replication order, so the summary does not depend on the thread count.
pub fn run_mc(config: &MCConfig) -> Result<MCSummary> {
    Ok(run_mc_with_report(config)?.0)
}

pub fn run_mc_with_report(config: &MCConfig) -> Result<(MCSummary, EmbeddingReport)> {
    config.validate()?;
    let tables = target_covariance_tables(
        &config.model,
        &config.scheme,
        default_maxlag(&config.model, config.scheme.n),
    )?;
    let sampler = CirculantSampler::new(&tables, &config.scheme)?;
    let report = sampler.report();
    let grid = LagGrid::symmetric(config.max_lag);
    info!(
        "running {} replications (n = {}, pi = ({}, {}))",
        config.replications, config.scheme.n, config.scheme.pi1, config.scheme.pi2
    );

    let outcomes: Vec<Result<Replication>> = (0..config.replications)
        .into_par_iter()
        .map(|index| replicate(config, &sampler, &grid, index))
        .collect();
    let mut runs = Vec::with_capacity(outcomes.len());
    let mut failures = 0;
    for (index, outcome) in outcomes.into_iter().enumerate() {
        match outcome {
            Ok(run) => runs.push(run),
            Err(e) => {
                warn!("replication {index} failed: {e}");
                failures += 1;
            }
        }
    }
    if runs.is_empty() {
        return Err(Error::Empty("every replication failed".into()));
    }
    let valid = (failures as f64) <= MAX_FAILURE_RATE * config.replications as f64;

    let families = config
        .families
        .iter()
        .enumerate()
        .map(|(f, &family)| {
            let levels = (0..config.max_level)
                .map(|j| summarize(&runs.iter().map(|r| r.levels[f][j]).collect::<Vec<_>>()))
                .collect::<Result<Vec<_>>>()?;
            Ok(FamilySummary { family, levels })
        })
        .collect::<Result<Vec<_>>>()?;
    let hry = summarize(&runs.iter().map(|r| r.hry).collect::<Vec<_>>())?;
    let truth = (1..=config.max_level)
        .map(|j| config.model.level(j).map_or(0.0, |p| p.lag / config.model.tau()))
        .collect();
    Ok((
        MCSummary {
            replications: config.replications,
            failures,
            valid,
            truth,
            families,
            hry,
            runs,
        },
        report,
    ))
}
