//! Bivariate Gaussian increment paths via multivariate circulant embedding,
//! plus missing-completely-at-random observation masks.

use std::sync::Arc;

use log::{debug, warn};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::model::{ObservationScheme, SpectralModel};

/// Upper bound on the covariance truncation lag.
pub const MAX_LAG_CAP: usize = 4096;

/// Kernel terms below `MAXLAG_THRESHOLD · τ` are dropped.
pub const MAXLAG_THRESHOLD: f64 = 1e-6;

/// Eigenvalues in `[-EIGEN_TOLERANCE · τ, 0)` are clipped, anything lower is fatal.
pub const EIGEN_TOLERANCE: f64 = 1e-8;

const PATH_STREAM: u64 = 0;

/// One simulated replication: increments and missingness flags
/// (`true` = missing at grid point `k`, `mask[0]` always `false`).
#[derive(Debug, Clone, PartialEq)]
pub struct PathSample {
    pub returns1: Vec<f64>,
    pub returns2: Vec<f64>,
    pub mask1: Vec<bool>,
    pub mask2: Vec<bool>,
    pub seed: u64,
}

impl PathSample {
    pub fn len(&self) -> usize {
        self.returns1.len()
    }

    pub fn is_empty(&self) -> bool {
        self.returns1.is_empty()
    }
}

/// Target second-order structure of the increment process up to `maxlag`.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceTables {
    pub maxlag: usize,
    /// `auto_ν[l]`, `l = 0..=maxlag`.
    pub auto1: Vec<f64>,
    pub auto2: Vec<f64>,
    /// `cross[l + maxlag] = E[Δ_k B¹ Δ_{k+l} B²]`, `l = -maxlag..=maxlag`.
    pub cross: Vec<f64>,
}

impl CovarianceTables {
    pub fn cross_at(&self, lag: i64) -> f64 {
        if lag.unsigned_abs() as usize > self.maxlag {
            0.0
        } else {
            self.cross[(lag + self.maxlag as i64) as usize]
        }
    }
}

/// Smallest truncation lag beyond which every kernel term is below
/// `MAXLAG_THRESHOLD · τ`, capped at `MAX_LAG_CAP` and `n - 1`.
pub fn default_maxlag(model: &SpectralModel, n: usize) -> usize {
    // |ψ(s)| ≤ 2/(π|s|), so a level contributes at most 2τ|R|/(π|l − θ/τ|).
    let needed = model
        .levels()
        .iter()
        .filter(|level| level.correlation != 0.0)
        .map(|level| {
            let centre = (level.lag / model.tau()).abs();
            let reach = 2.0 * level.correlation.abs() / (std::f64::consts::PI * MAXLAG_THRESHOLD);
            (centre + reach).ceil() as usize
        })
        .max()
        .unwrap_or(0);
    needed.min(MAX_LAG_CAP).min(n.saturating_sub(1))
}

pub fn target_covariance_tables(
    model: &SpectralModel,
    scheme: &ObservationScheme,
    maxlag: usize,
) -> Result<CovarianceTables> {
    if maxlag >= scheme.n {
        return Err(Error::InvalidArgument(format!(
            "maxlag {maxlag} must be smaller than n = {}",
            scheme.n
        )));
    }
    let mut auto = vec![0.0; maxlag + 1];
    auto[0] = scheme.tau;
    let m = maxlag as i64;
    let cross = (-m..=m).map(|l| model.increment_cross_cov(l)).collect();
    Ok(CovarianceTables {
        maxlag,
        auto1: auto.clone(),
        auto2: auto,
        cross,
    })
}

/// Diagnostics of the embedding's spectral factorization.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EmbeddingReport {
    pub circulant_len: usize,
    pub min_eigenvalue: f64,
    pub clipped: usize,
    /// Sum of the clipped (negative) eigenvalue magnitudes.
    pub clipped_mass: f64,
}

/// Precomputed circulant factorization; draws are cheap once this is built.
pub struct CirculantSampler {
    n: usize,
    tau: f64,
    // Per-frequency 2×2 factor A_k (row-major) with A_k A_k^* = S_k.
    factors: Vec<[Complex64; 4]>,
    fft: Arc<dyn Fft<f64>>,
    report: EmbeddingReport,
}

impl std::fmt::Debug for CirculantSampler {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CirculantSampler")
            .field("n", &self.n)
            .field("report", &self.report)
            .finish()
    }
}

impl CirculantSampler {
    pub fn new(tables: &CovarianceTables, scheme: &ObservationScheme) -> Result<Self> {
        let n = scheme.n;
        let maxlag = tables.maxlag;
        let len = (2 * (n + maxlag)).next_power_of_two();

        // c(l) = E[X_0 X_l^T] wrapped onto the circle; C(-l) = C(l)^T.
        let mut c11 = vec![Complex64::default(); len];
        let mut c22 = vec![Complex64::default(); len];
        let mut c12 = vec![Complex64::default(); len];
        let mut c21 = vec![Complex64::default(); len];
        for l in 0..=maxlag {
            let pos = l;
            let neg = (len - l) % len;
            c11[pos].re = tables.auto1[l];
            c11[neg].re = tables.auto1[l];
            c22[pos].re = tables.auto2[l];
            c22[neg].re = tables.auto2[l];
            c12[pos].re = tables.cross_at(l as i64);
            c12[neg].re = tables.cross_at(-(l as i64));
            c21[pos].re = tables.cross_at(-(l as i64));
            c21[neg].re = tables.cross_at(l as i64);
        }
        let fft = FftPlanner::new().plan_fft_forward(len);
        for buf in [&mut c11, &mut c22, &mut c12, &mut c21] {
            fft.process(buf);
        }

        let tolerance = EIGEN_TOLERANCE * scheme.tau;
        let mut report = EmbeddingReport {
            circulant_len: len,
            min_eigenvalue: f64::INFINITY,
            ..Default::default()
        };
        let mut factors = Vec::with_capacity(len);
        for k in 0..len {
            // Hermitian by construction; average out rounding in the off-diagonal.
            let a = c11[k].re;
            let d = c22[k].re;
            let b = 0.5 * (c12[k] + c21[k].conj());
            let (values, vectors) = hermitian_eigen(a, d, b);
            let mut scales = [0.0; 2];
            for (i, &value) in values.iter().enumerate() {
                report.min_eigenvalue = report.min_eigenvalue.min(value);
                if value < -tolerance {
                    return Err(Error::InvalidEmbedding {
                        index: k,
                        eigenvalue: value,
                        tolerance,
                    });
                }
                if value < 0.0 {
                    report.clipped += 1;
                    report.clipped_mass += -value;
                }
                scales[i] = value.max(0.0).sqrt();
            }
            factors.push([
                vectors[0] * scales[0],
                vectors[1] * scales[1],
                vectors[2] * scales[0],
                vectors[3] * scales[1],
            ]);
        }
        if report.clipped > 0 {
            warn!(
                "circulant embedding: clipped {} negative eigenvalues (total mass {:e}, min {:e})",
                report.clipped, report.clipped_mass, report.min_eigenvalue
            );
        } else {
            debug!(
                "circulant embedding of length {len}: min eigenvalue {:e}",
                report.min_eigenvalue
            );
        }
        Ok(CirculantSampler {
            n,
            tau: scheme.tau,
            factors,
            fft,
            report,
        })
    }

    pub fn report(&self) -> EmbeddingReport {
        self.report
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// Draws one pair of increment series of length `n`.
    pub fn sample(&self, seed: u64) -> (Vec<f64>, Vec<f64>) {
        let len = self.factors.len();
        let mut rng = stream_rng(seed, PATH_STREAM);
        let mut y1 = Vec::with_capacity(len);
        let mut y2 = Vec::with_capacity(len);
        for factor in &self.factors {
            let z1 = Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
            let z2 = Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
            y1.push(factor[0] * z1 + factor[1] * z2);
            y2.push(factor[2] * z1 + factor[3] * z2);
        }
        self.fft.process(&mut y1);
        self.fft.process(&mut y2);
        let norm = 1.0 / (len as f64).sqrt();
        (
            y1[..self.n].iter().map(|z| z.re * norm).collect(),
            y2[..self.n].iter().map(|z| z.re * norm).collect(),
        )
    }
}

/// Eigen-decomposition of `[[a, b], [b̄, d]]`. Returns eigenvalues and the
/// eigenvector matrix in row-major order (columns are eigenvectors).
fn hermitian_eigen(a: f64, d: f64, b: Complex64) -> ([f64; 2], [Complex64; 4]) {
    let mean = 0.5 * (a + d);
    let half_diff = 0.5 * (a - d);
    let radius = (half_diff * half_diff + b.norm_sqr()).sqrt();
    let values = [mean + radius, mean - radius];
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    if b.norm() <= 1e-300 {
        let vectors = if a >= d {
            [one, zero, zero, one]
        } else {
            [zero, one, one, zero]
        };
        return (values, vectors);
    }
    // (b, λ - a) solves the first row; normalise each column.
    let column = |lambda: f64| {
        let v0 = b;
        let v1 = Complex64::new(lambda - a, 0.0);
        let norm = (v0.norm_sqr() + v1.norm_sqr()).sqrt();
        (v0 / norm, v1 / norm)
    };
    let (u0, u1) = column(values[0]);
    let (w0, w1) = column(values[1]);
    (values, [u0, w0, u1, w1])
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Independent Bernoulli(π_ν) missingness on grid points `1..=n`, one ChaCha stream per series.
pub fn apply_missing(scheme: &ObservationScheme, seed: u64) -> (Vec<bool>, Vec<bool>) {
    let mask = |p: f64, stream: u64| {
        let mut rng = stream_rng(seed, stream);
        let mut out = Vec::with_capacity(scheme.n + 1);
        out.push(false);
        out.extend((0..scheme.n).map(|_| rng.random::<f64>() < p));
        out
    };
    (mask(scheme.pi1, 1), mask(scheme.pi2, 2))
}

/// Builds the embedding for the default truncation lag and draws one masked path.
pub fn circulant_embed_sample(
    model: &SpectralModel,
    scheme: &ObservationScheme,
    seed: u64,
) -> Result<PathSample> {
    let tables = target_covariance_tables(model, scheme, default_maxlag(model, scheme.n))?;
    let sampler = CirculantSampler::new(&tables, scheme)?;
    Ok(draw(&sampler, scheme, seed))
}

/// One masked path from a prebuilt sampler.
pub fn draw(sampler: &CirculantSampler, scheme: &ObservationScheme, seed: u64) -> PathSample {
    let (returns1, returns2) = sampler.sample(seed);
    let (mask1, mask2) = apply_missing(scheme, seed);
    PathSample {
        returns1,
        returns2,
        mask1,
        mask2,
        seed,
    }
}
