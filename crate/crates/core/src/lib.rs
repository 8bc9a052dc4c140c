//! Scale-by-scale lead-lag estimation between two high-frequency price series.
//!
//! The pipeline runs tick data (or simulated paths) through previous-tick
//! interpolation onto an equally spaced grid, filters the returns with level-j
//! Daubechies MODWT filters, and locates the peak of each level's wavelet
//! cross-covariance over a symmetric lag grid. A circulant-embedding simulator for
//! the multi-scale cross-spectral model and a Monte Carlo harness sit on top.

pub mod error;
pub mod estimator;
pub mod filters;
pub mod ingest;
pub mod model;
pub mod montecarlo;
pub mod quadrature;
pub mod simulate;

pub use error::{Error, ErrorKind, Result};
pub use estimator::{
    cross_cov, cross_cov_curve, estimate_all_levels, estimate_lag, hry_curve, hry_lag, modwt,
    modwt_levels, CrossCovCurve, LagEstimate, LagGrid, LevelResult, WaveletCoeffs,
};
pub use filters::{
    base_filter, cascade, scaling_from_wavelet, squared_gain_g, squared_gain_h,
    squared_gain_level, BaseFilterPair, Family, LevelFilter,
};
pub use ingest::{align_to_grid, read_csv, returns_from_sample, AlignedReturns, PriceScale, TickSeries};
pub use model::{
    discretization_kernel, interpolation_kernel, limit_constant, lp_scaling, lp_wavelet,
    sigma_weight, LevelParams, ModelFile, ObservationScheme, SpectralModel,
};
pub use montecarlo::{run_mc, summarize, LagSummary, MCConfig, MCConfigFile, MCSummary};
pub use simulate::{
    apply_missing, circulant_embed_sample, target_covariance_tables, CirculantSampler,
    CovarianceTables, PathSample,
};
