//! Multi-scale cross-spectral model and the closed-form quantities that go with it.
//!
//! A [`SpectralModel`] assigns a correlation `R_j` and a lag `θ_j` to each dyadic
//! frequency band. Level `j = 1` is the finest band, `(π/(2τ), π/τ]` in physical
//! frequency, and level `j` covers `(2^{-j}π/τ, 2^{1-j}π/τ]` together with its mirror
//! image on the negative axis.

use std::f64::consts::PI;
use std::path::Path;

use log::warn;
use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::integrate;

/// Absolute tolerance used on each band half when integrating theory kernels.
pub const QUADRATURE_TOL: f64 = 1e-9;

/// Littlewood–Paley scaling function `sin(πs)/(πs)`.
pub fn lp_scaling(s: f64) -> f64 {
    if s == 0.0 {
        1.0
    } else {
        let x = PI * s;
        x.sin() / x
    }
}

/// Littlewood–Paley wavelet `2 φ(2s) − φ(s)`; its Fourier transform is the
/// indicator of `[-2π, -π) ∪ (π, 2π]`.
pub fn lp_wavelet(s: f64) -> f64 {
    2.0 * lp_scaling(2.0 * s) - lp_scaling(s)
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct LevelParams {
    /// Correlation on the band, `R_j ∈ [-1, 1]`.
    pub correlation: f64,
    /// Lag in seconds (same clock as `tau`).
    pub lag: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralModel {
    finest_level: u32,
    tau: f64,
    levels: Vec<LevelParams>,
}

impl SpectralModel {
    /// Builds a model with `J + 1` levels; `levels[j - 1]` describes level `j`.
    /// Missing trailing levels are filled with `R = 0`.
    pub fn new(finest_level: u32, tau: f64, mut levels: Vec<LevelParams>) -> Result<Self> {
        let count = finest_level as usize + 1;
        if levels.len() > count {
            return Err(Error::InvalidArgument(format!(
                "{} levels given but J = {finest_level} allows at most {count}",
                levels.len()
            )));
        }
        levels.resize(count, LevelParams::default());
        let model = SpectralModel {
            finest_level,
            tau,
            levels,
        };
        model.validate()?;
        Ok(model)
    }

    /// The simulation design: `J = 13`, `τ_J = 2^{-14}` and lags
    /// `(-1, -1, -2, -2, -3, -5, -7, -10) τ_J` on levels 1..8.
    pub fn reference() -> Self {
        let finest_level = 13;
        let tau = dyadic_tau(finest_level);
        let params = [
            (0.3, -1.0),
            (0.5, -1.0),
            (0.7, -2.0),
            (0.5, -2.0),
            (0.5, -3.0),
            (0.5, -5.0),
            (0.5, -7.0),
            (0.5, -10.0),
        ];
        let levels = params
            .iter()
            .map(|&(correlation, steps)| LevelParams {
                correlation,
                lag: steps * tau,
            })
            .collect();
        SpectralModel::new(finest_level, tau, levels).expect("reference parameters are admissible")
    }

    /// A model with a single active level.
    pub fn single_level(
        finest_level: u32,
        level: usize,
        correlation: f64,
        lag_steps: f64,
    ) -> Result<Self> {
        let tau = dyadic_tau(finest_level);
        if level == 0 || level > finest_level as usize + 1 {
            return Err(Error::InvalidLevel(level));
        }
        let mut levels = vec![LevelParams::default(); finest_level as usize + 1];
        levels[level - 1] = LevelParams {
            correlation,
            lag: lag_steps * tau,
        };
        SpectralModel::new(finest_level, tau, levels)
    }

    pub fn finest_level(&self) -> u32 {
        self.finest_level
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn levels(&self) -> &[LevelParams] {
        &self.levels
    }

    /// Parameters of level `j` (1-based).
    pub fn level(&self, j: usize) -> Option<&LevelParams> {
        j.checked_sub(1).and_then(|i| self.levels.get(i))
    }

    /// Checks the admissibility conditions: every `|R_j| ≤ 1` (which bounds the
    /// cross-spectral density by one, the bands being disjoint) and finite lags.
    pub fn validate(&self) -> Result<()> {
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "tau must be positive, got {}",
                self.tau
            )));
        }
        for (i, level) in self.levels.iter().enumerate() {
            if !level.correlation.is_finite() || level.correlation.abs() > 1.0 {
                return Err(Error::Inadmissible(format!(
                    "|R_{}| = {} exceeds 1, so the cross-spectral density would exceed 1 in modulus",
                    i + 1,
                    level.correlation.abs()
                )));
            }
            if !level.lag.is_finite() {
                return Err(Error::Inadmissible(format!("theta_{} is not finite", i + 1)));
            }
        }
        Ok(())
    }

    /// Checks `|θ_j| < δ` for every active level.
    pub fn check_lag_bound(&self, half_width: f64) -> Result<()> {
        for (i, level) in self.levels.iter().enumerate() {
            if level.correlation != 0.0 && level.lag.abs() >= half_width {
                return Err(Error::InvalidArgument(format!(
                    "|theta_{}| = {} is not inside the search half-width {half_width}",
                    i + 1,
                    level.lag.abs()
                )));
            }
        }
        Ok(())
    }

    /// Physical frequency band `(lo, hi]` (positive half) of level `j`.
    pub fn band(&self, j: usize) -> (f64, f64) {
        let hi = PI / (self.tau * 2f64.powi(j as i32 - 1));
        (0.5 * hi, hi)
    }

    /// Cross-spectral density `Σ_j R_j e^{-iθ_j λ} 1_{band j}(λ)`.
    pub fn cross_spectral_density(&self, lambda: f64) -> Complex64 {
        let abs = lambda.abs();
        for (i, level) in self.levels.iter().enumerate() {
            let (lo, hi) = self.band(i + 1);
            if abs > lo && abs <= hi {
                return Complex64::from_polar(level.correlation, -level.lag * lambda);
            }
        }
        Complex64::new(0.0, 0.0)
    }

    /// Approximate increment cross-covariance `E[Δ_k B¹ Δ_{k+l} B²]`:
    /// each band contributes `τ² · (2^{-j}/τ) · R_j · ψ(2^{-j}(l − θ_j/τ))`,
    /// the inverse Fourier transform of its indicator sampled at `lτ − θ_j`.
    pub fn increment_cross_cov(&self, lag: i64) -> f64 {
        let tau = self.tau;
        self.levels
            .iter()
            .enumerate()
            .filter(|(_, level)| level.correlation != 0.0)
            .map(|(i, level)| {
                let scale = 2f64.powi(-(i as i32 + 1));
                let shift = lag as f64 - level.lag / tau;
                tau * scale * level.correlation * lp_wavelet(scale * shift)
            })
            .sum()
    }
}

/// `τ_J = 2^{-J-1}`.
pub fn dyadic_tau(finest_level: u32) -> f64 {
    2f64.powi(-(finest_level as i32) - 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObservationScheme {
    /// Grid spacing `τ_J` in seconds.
    pub tau: f64,
    /// Number of increments.
    pub n: usize,
    pub pi1: f64,
    pub pi2: f64,
}

impl ObservationScheme {
    pub fn new(tau: f64, n: usize, pi1: f64, pi2: f64) -> Result<Self> {
        let scheme = ObservationScheme { tau, n, pi1, pi2 };
        scheme.validate()?;
        Ok(scheme)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(Error::InvalidArgument("n must be at least 1".into()));
        }
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "tau must be positive, got {}",
                self.tau
            )));
        }
        for (name, p) in [("pi1", self.pi1), ("pi2", self.pi2)] {
            if !(0.0..1.0).contains(&p) {
                return Err(Error::InvalidArgument(format!(
                    "{name} must lie in [0, 1), got {p}"
                )));
            }
        }
        Ok(())
    }
}

/// One level entry of a model file. The lag may be given in seconds or in grid units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelSpec {
    pub j: usize,
    #[serde(rename = "R")]
    pub correlation: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta_over_tau: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta_seconds: Option<f64>,
}

/// On-disk JSON model description:
/// `{J, tau, levels: [{j, R, theta_over_tau | theta_seconds}], pi1, pi2, n}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    #[serde(rename = "J")]
    pub finest_level: u32,
    /// Defaults to `2^{-J-1}`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    pub levels: Vec<LevelSpec>,
    #[serde(default)]
    pub pi1: f64,
    #[serde(default)]
    pub pi2: f64,
    pub n: usize,
}

impl ModelFile {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn from_parts(model: &SpectralModel, scheme: &ObservationScheme) -> Self {
        let levels = model
            .levels()
            .iter()
            .enumerate()
            .filter(|(_, level)| level.correlation != 0.0)
            .map(|(i, level)| LevelSpec {
                j: i + 1,
                correlation: level.correlation,
                theta_over_tau: Some(level.lag / model.tau()),
                theta_seconds: None,
            })
            .collect();
        ModelFile {
            finest_level: model.finest_level(),
            tau: Some(model.tau()),
            levels,
            pi1: scheme.pi1,
            pi2: scheme.pi2,
            n: scheme.n,
        }
    }

    pub fn tau(&self) -> f64 {
        self.tau.unwrap_or_else(|| dyadic_tau(self.finest_level))
    }

    pub fn model(&self) -> Result<SpectralModel> {
        let tau = self.tau();
        let count = self.finest_level as usize + 1;
        let mut levels = vec![LevelParams::default(); count];
        for spec in &self.levels {
            if spec.j == 0 || spec.j > count {
                return Err(Error::InvalidArgument(format!(
                    "level j = {} outside 1..={count}",
                    spec.j
                )));
            }
            let lag = match (spec.theta_over_tau, spec.theta_seconds) {
                (Some(steps), None) => steps * tau,
                (None, Some(seconds)) => seconds,
                (None, None) => 0.0,
                (Some(_), Some(_)) => {
                    return Err(Error::InvalidArgument(format!(
                        "level {}: give either theta_over_tau or theta_seconds, not both",
                        spec.j
                    )))
                }
            };
            levels[spec.j - 1] = LevelParams {
                correlation: spec.correlation,
                lag,
            };
        }
        SpectralModel::new(self.finest_level, tau, levels)
    }

    pub fn scheme(&self) -> Result<ObservationScheme> {
        ObservationScheme::new(self.tau(), self.n, self.pi1, self.pi2)
    }
}

/// Discretization kernel `D(λ) = (1/2π) |(e^{-iλ} − 1)/λ|² = (2/π) sin²(λ/2)/λ²`.
pub fn discretization_kernel(lambda: f64) -> f64 {
    if lambda.abs() < 1e-8 {
        return 1.0 / (2.0 * PI);
    }
    let s = (0.5 * lambda).sin();
    2.0 / PI * s * s / (lambda * lambda)
}

/// Previous-tick interpolation kernel
/// `Π(λ) = (1−π₁)(1−π₂) / ((1 − π₁e^{iλ})(1 − π₂e^{-iλ}))`.
pub fn interpolation_kernel(lambda: f64, pi1: f64, pi2: f64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    let numerator = (1.0 - pi1) * (1.0 - pi2);
    let denominator = (one - Complex64::from_polar(pi1, lambda))
        * (one - Complex64::from_polar(pi2, -lambda));
    Complex64::new(numerator, 0.0) / denominator
}

/// Volatility weight `Σ_t(θ)` on an observation window of length `horizon`.
pub fn sigma_weight<F1, F2>(theta: f64, t: f64, horizon: f64, sigma1: F1, sigma2: F2) -> Result<f64>
where
    F1: Fn(f64) -> f64,
    F2: Fn(f64) -> f64,
{
    if theta.abs() >= horizon {
        return Err(Error::InvalidArgument(format!(
            "|theta| = {} must be below the horizon {horizon}",
            theta.abs()
        )));
    }
    let upper = (t - theta.abs()).max(0.0);
    if upper == 0.0 {
        return Ok(0.0);
    }
    let integral = if theta >= 0.0 {
        integrate(|s| sigma1(s) * sigma2(s + theta), 0.0, upper, 1e-12)?
    } else {
        integrate(|s| sigma1(s - theta) * sigma2(s), 0.0, upper, 1e-12)?
    };
    Ok(integral / (horizon - theta.abs()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitConstant {
    pub value: f64,
    /// Imaginary residue of the band integral; cancels by Hermitian symmetry.
    pub imaginary_residue: f64,
    /// `|b| > 1/2`: non-vanishing of the band integral is not guaranteed.
    pub outside_theory: bool,
}

/// Probability limit of the level-`j` cross-covariance estimator at offset `b`
/// (in grid units) from the true lag:
/// `2^j Σ R_j ∫_{Λ_{-j}} D(λ) Π(λ) e^{ibλ} dλ`.
pub fn limit_constant(
    level: usize,
    offset: f64,
    pi1: f64,
    pi2: f64,
    correlation: f64,
    sigma: f64,
) -> Result<LimitConstant> {
    if level < 1 {
        return Err(Error::InvalidLevel(level));
    }
    let outside_theory = offset.abs() > 0.5;
    if outside_theory {
        warn!("offset b = {offset} lies outside |b| <= 1/2; the limit may vanish");
    }
    if correlation == 0.0 || sigma == 0.0 {
        return Ok(LimitConstant {
            value: 0.0,
            imaginary_residue: 0.0,
            outside_theory,
        });
    }
    let hi = PI / 2f64.powi(level as i32 - 1);
    let lo = 0.5 * hi;
    let integrand = |lambda: f64| {
        discretization_kernel(lambda)
            * interpolation_kernel(lambda, pi1, pi2)
            * Complex64::from_polar(1.0, offset * lambda)
    };
    let mut re = 0.0;
    let mut im = 0.0;
    for (a, b) in [(-hi, -lo), (lo, hi)] {
        re += integrate(|x| integrand(x).re, a, b, QUADRATURE_TOL)?;
        im += integrate(|x| integrand(x).im, a, b, QUADRATURE_TOL)?;
    }
    if im.abs() > 1e-9 {
        return Err(Error::Quadrature {
            a: lo,
            b: hi,
            error: im.abs(),
        });
    }
    Ok(LimitConstant {
        value: 2f64.powi(level as i32) * sigma * correlation * re,
        imaginary_residue: im,
        outside_theory,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lp_kernel_values() {
        assert_eq!(lp_scaling(0.0), 1.0);
        assert!(lp_scaling(1.0).abs() < 1e-15);
        assert!((lp_scaling(0.5) - 2.0 / PI).abs() < 1e-15);
        assert_eq!(lp_wavelet(0.0), 1.0);
        assert!(lp_wavelet(1.0).abs() < 1e-15);
        assert!((lp_wavelet(0.5) + 2.0 / PI).abs() < 1e-15);
    }

    #[test]
    fn density_on_bands() {
        let model = SpectralModel::single_level(5, 2, 0.7, 0.0).unwrap();
        assert_eq!(model.cross_spectral_density(0.0), Complex64::new(0.0, 0.0));
        let (lo, hi) = model.band(2);
        let mid = 0.5 * (lo + hi);
        assert!((model.cross_spectral_density(mid) - Complex64::new(0.7, 0.0)).norm() < 1e-15);
        assert!((model.cross_spectral_density(-mid) - Complex64::new(0.7, 0.0)).norm() < 1e-15);
        assert_eq!(model.cross_spectral_density(2.0 * hi), Complex64::new(0.0, 0.0));
        // finest band closes at the Nyquist frequency
        assert_eq!(model.band(1).1, PI / model.tau());
    }

    #[test]
    fn density_is_hermitian_and_bounded() {
        let model = SpectralModel::reference();
        let nyquist = PI / model.tau();
        for i in 0..100 {
            let lambda = nyquist * ((i as f64 * 0.6180339887).fract() * 2.0 - 1.0);
            let f = model.cross_spectral_density(lambda);
            let g = model.cross_spectral_density(-lambda);
            assert!((f.conj() - g).norm() < 1e-12, "{lambda}: {f} {g}");
            assert!(f.norm() <= 1.0 + 1e-15);
        }
    }

    #[test]
    fn increment_cross_cov_single_level_peak() {
        // level j contributes τ · 2^{-j} · R at its own lag
        let model = SpectralModel::single_level(13, 3, 0.7, -2.0).unwrap();
        let tau = model.tau();
        assert!((model.increment_cross_cov(-2) - tau * 0.7 / 8.0).abs() < 1e-18);
        let zero = SpectralModel::new(13, tau, vec![]).unwrap();
        assert!((-50..50).all(|l| zero.increment_cross_cov(l) == 0.0));
    }

    #[test]
    fn increment_cross_cov_mirror_symmetry() {
        let model = SpectralModel::reference();
        let mirrored_levels = model
            .levels()
            .iter()
            .map(|p| LevelParams {
                correlation: p.correlation,
                lag: -p.lag,
            })
            .collect();
        let mirrored = SpectralModel::new(13, model.tau(), mirrored_levels).unwrap();
        for l in -40..=40 {
            let a = model.increment_cross_cov(l);
            let b = mirrored.increment_cross_cov(-l);
            assert!((a - b).abs() < 1e-18, "lag {l}: {a} vs {b}");
        }
    }

    #[test]
    fn reference_cross_cov_regression() {
        // independent scalar evaluation of the 14-term kernel sum at l = 0
        let model = SpectralModel::reference();
        let tau = model.tau();
        let r = [0.3, 0.5, 0.7, 0.5, 0.5, 0.5, 0.5, 0.5];
        let steps = [-1.0, -1.0, -2.0, -2.0, -3.0, -5.0, -7.0, -10.0];
        let mut expected = 0.0;
        for j in 1..=14usize {
            let (rj, tj): (f64, f64) = if j <= 8 { (r[j - 1], steps[j - 1]) } else { (0.0, 0.0) };
            let s = -tj / 2f64.powi(j as i32);
            let psi = if s == 0.0 {
                1.0
            } else {
                let a = (2.0 * PI * s).sin() / (PI * s);
                let b = (PI * s).sin() / (PI * s);
                a - b
            };
            expected += tau * rj * psi / 2f64.powi(j as i32);
        }
        let got = model.increment_cross_cov(0);
        assert!((got - expected).abs() < 1e-15 * tau);
    }

    #[test]
    fn discretization_kernel_values() {
        assert!((discretization_kernel(0.0) - 1.0 / (2.0 * PI)).abs() < 1e-15);
        assert!((discretization_kernel(1e-10) - 1.0 / (2.0 * PI)).abs() < 1e-15);
        assert!(discretization_kernel(2.0 * PI) < 1e-30);
        let l = 0.73;
        let direct = (Complex64::from_polar(1.0, -l) - 1.0).norm_sqr() / (l * l) / (2.0 * PI);
        assert!((discretization_kernel(l) - direct).abs() < 1e-15);
    }

    #[test]
    fn interpolation_kernel_values() {
        for l in [-3.0, -0.5, 0.2, 2.5] {
            assert!((interpolation_kernel(l, 0.0, 0.0) - 1.0).norm() < 1e-15);
        }
        for (p1, p2) in [(0.5, 0.5), (0.1, 0.9), (0.3, 0.0)] {
            assert!((interpolation_kernel(0.0, p1, p2) - 1.0).norm() < 1e-15);
        }
    }

    #[test]
    fn interpolation_kernel_positive_real_part_after_shift() {
        for i in 1..=100 {
            let lambda = PI * i as f64 / 101.0;
            for k in 0..=10 {
                let b = -0.5 + k as f64 / 10.0;
                for (p1, p2) in [(0.5, 0.5), (0.9, 0.1), (0.2, 0.7)] {
                    let v = interpolation_kernel(lambda, p1, p2) * Complex64::from_polar(1.0, b * lambda);
                    assert!(v.re > 0.0, "λ = {lambda}, b = {b}, π = ({p1}, {p2})");
                }
            }
        }
    }

    #[test]
    fn sigma_weight_values() {
        let one = |_: f64| 1.0;
        for theta in [-0.5, 0.0, 0.3] {
            assert!((sigma_weight(theta, 1.0, 1.0, one, one).unwrap() - 1.0).abs() < 1e-12);
        }
        assert_eq!(sigma_weight(0.4, 0.3, 1.0, one, one).unwrap(), 0.0);
        assert_eq!(sigma_weight(-0.4, 0.4, 1.0, one, one).unwrap(), 0.0);
        let v = sigma_weight(0.0, 2.0, 2.0, |s| s, one).unwrap();
        assert!((v - 1.0).abs() < 1e-12); // T/2 with T = 2
        assert!(sigma_weight(1.5, 1.0, 1.0, one, one).is_err());
    }

    #[test]
    fn limit_constant_values() {
        assert_eq!(limit_constant(2, 0.0, 0.0, 0.0, 0.0, 1.0).unwrap().value, 0.0);
        // frozen from an independent quadrature of (2/π) sin²(λ/2)/λ² over (π/2, π], doubled twice
        let c = limit_constant(1, 0.0, 0.0, 0.0, 1.0, 1.0).unwrap();
        assert!((c.value - 0.6126508900231291).abs() < 1e-9, "{}", c.value);
        assert!(c.imaginary_residue.abs() < 1e-9);
        assert!(!c.outside_theory);
        assert!(limit_constant(1, 0.8, 0.0, 0.0, 1.0, 1.0).unwrap().outside_theory);
        assert!(limit_constant(0, 0.0, 0.0, 0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn limit_constant_sign_and_nonzero() {
        for j in 1..=6 {
            for r in [-0.7, 0.3] {
                let c = limit_constant(j, 0.0, 0.0, 0.0, r, 1.0).unwrap();
                assert_eq!(c.value.signum(), r.signum());
            }
            for b in [-0.5, -0.2, 0.0, 0.4, 0.5] {
                let c = limit_constant(j, b, 0.5, 0.5, 0.5, 1.0).unwrap();
                assert!(c.value.abs() > 1e-3, "j = {j}, b = {b}: {}", c.value);
            }
        }
    }

    #[test]
    fn admissibility() {
        let bad = SpectralModel::new(
            3,
            dyadic_tau(3),
            vec![LevelParams {
                correlation: 1.2,
                lag: 0.0,
            }],
        );
        assert!(matches!(bad, Err(Error::Inadmissible(_))));
        assert!(SpectralModel::reference().check_lag_bound(61.0 * dyadic_tau(13)).is_ok());
        assert!(SpectralModel::reference().check_lag_bound(5.0 * dyadic_tau(13)).is_err());
    }

    #[test]
    fn model_file_conversion() {
        let json = r#"{"J": 13, "levels": [{"j": 3, "R": 0.7, "theta_over_tau": -2},
                       {"j": 1, "R": 0.3, "theta_seconds": -0.001}], "pi1": 0.5, "pi2": 0.25, "n": 100}"#;
        let file: ModelFile = serde_json::from_str(json).unwrap();
        let model = file.model().unwrap();
        assert_eq!(model.tau(), dyadic_tau(13));
        assert_eq!(model.level(3).unwrap().lag, -2.0 * dyadic_tau(13));
        assert_eq!(model.level(1).unwrap().lag, -0.001);
        assert_eq!(model.level(2).unwrap().correlation, 0.0);
        let scheme = file.scheme().unwrap();
        assert_eq!((scheme.n, scheme.pi1, scheme.pi2), (100, 0.5, 0.25));

        let back = ModelFile::from_parts(&SpectralModel::reference(), &scheme);
        assert_eq!(back.model().unwrap(), SpectralModel::reference());
    }
}
