//! Daubechies wavelet and scaling filters, their level-j cascades, and the
//! closed-form squared gain functions `H_L`, `G_L` and `H_{j,L}`.
//!
//! Coefficients follow the Percival–Walden convention: `h` is the (high-pass)
//! wavelet filter, `g` the (low-pass) scaling filter, and
//! `g_p = (-1)^(p+1) h_(L-p-1)`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Wavelet filter of the least asymmetric Daubechies filter of length 8.
const LA8_WAVELET: [f64; 8] = [
    0.032223100604051466,
    0.012603967262031304,
    -0.09921954357663353,
    -0.29785779560530606,
    0.8037387518051321,
    -0.497618667632775,
    -0.029635527646002493,
    0.07576571478950221,
];

/// Wavelet filter of the least asymmetric Daubechies filter of length 20.
const LA20_WAVELET: [f64; 20] = [
    -0.00045932942100465206,
    -5.703608361849501e-05,
    0.004593173585311792,
    0.0008043589320164513,
    -0.02035493981231111,
    -0.00576491203358115,
    0.049994972077375154,
    0.03199005688242811,
    -0.035536740473819585,
    -0.3838267610670763,
    0.7695100370210979,
    -0.4716906669384429,
    -0.07088053578323157,
    0.1594942788849106,
    0.011609893903711319,
    -0.04592723923109151,
    -0.0014653825813046104,
    0.00864129927702215,
    9.563267072285273e-05,
    -0.0007701598091144599,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Haar,
    La8,
    La20,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::Haar, Family::La8, Family::La20];

    /// Filter length `L`.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(self) -> usize {
        match self {
            Family::Haar => 2,
            Family::La8 => 8,
            Family::La20 => 20,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Haar => "Haar",
            Family::La8 => "LA(8)",
            Family::La20 => "LA(20)",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace(['(', ')', '-', '_'], "").as_str() {
            "haar" | "d2" => Ok(Family::Haar),
            "la8" => Ok(Family::La8),
            "la20" => Ok(Family::La20),
            other => Err(Error::InvalidArgument(format!(
                "unknown wavelet family '{other}' (expected haar, la8 or la20)"
            ))),
        }
    }
}

/// A Daubechies wavelet filter together with its quadrature mirror scaling filter.
#[derive(Debug, Clone, PartialEq)]
pub struct BaseFilterPair {
    pub family: Family,
    pub wavelet: Vec<f64>,
    pub scaling: Vec<f64>,
}

impl BaseFilterPair {
    pub fn len(&self) -> usize {
        self.wavelet.len()
    }

    pub fn is_empty(&self) -> bool {
        self.wavelet.is_empty()
    }
}

/// Level-j wavelet filter `h_{j,p}`, `p = 0..L_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelFilter {
    pub family: Family,
    pub level: usize,
    pub coefficients: Vec<f64>,
}

impl LevelFilter {
    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// Empirical squared gain `|Σ_p h_{j,p} e^{-iλp}|²`.
    pub fn gain(&self, lambda: f64) -> f64 {
        empirical_gain(&self.coefficients, lambda)
    }

    pub fn energy(&self) -> f64 {
        self.coefficients.iter().map(|c| c * c).sum()
    }
}

pub fn base_filter(family: Family) -> BaseFilterPair {
    let wavelet: Vec<f64> = match family {
        Family::Haar => vec![FRAC_1_SQRT_2, -FRAC_1_SQRT_2],
        Family::La8 => LA8_WAVELET.to_vec(),
        Family::La20 => LA20_WAVELET.to_vec(),
    };
    let scaling = scaling_from_wavelet(&wavelet).expect("embedded filters have even length");
    BaseFilterPair {
        family,
        wavelet,
        scaling,
    }
}

/// Quadrature mirror relationship `g_p = (-1)^(p+1) h_(L-p-1)`.
pub fn scaling_from_wavelet(wavelet: &[f64]) -> Result<Vec<f64>> {
    let len = wavelet.len();
    if !len.is_multiple_of(2) {
        return Err(Error::OddFilterLength(len));
    }
    Ok((0..len)
        .map(|p| {
            let sign = if p % 2 == 0 { -1.0 } else { 1.0 };
            sign * wavelet[len - p - 1]
        })
        .collect())
}

/// `L_j = (2^j - 1)(L - 1) + 1`.
pub fn level_filter_len(base_len: usize, level: usize) -> usize {
    ((1usize << level) - 1) * (base_len - 1) + 1
}

/// Largest level whose filter fits in a series of length `n`, if any.
pub fn max_feasible_level(base_len: usize, n: usize) -> Option<usize> {
    (1..usize::BITS as usize - 1)
        .take_while(|&j| level_filter_len(base_len, j) <= n)
        .last()
}

/// Level-j wavelet filter built by the pyramid recursion
/// `h_1 = h`, `h_j = (h_{j-1} upsampled by 2) * g`.
pub fn cascade(base: &BaseFilterPair, level: usize) -> Result<LevelFilter> {
    if level < 1 {
        return Err(Error::InvalidLevel(level));
    }
    if level >= usize::BITS as usize - 2 {
        return Err(Error::InvalidArgument(format!("level {level} is too large")));
    }
    let mut current = base.wavelet.clone();
    for _ in 1..level {
        let mut upsampled = vec![0.0; 2 * (current.len() - 1) + 1];
        for (i, &c) in current.iter().enumerate() {
            upsampled[2 * i] = c;
        }
        current = convolve(&upsampled, &base.scaling);
    }
    debug_assert_eq!(current.len(), level_filter_len(base.len(), level));
    Ok(LevelFilter {
        family: base.family,
        level,
        coefficients: current,
    })
}

fn convolve(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0.0 {
            continue;
        }
        for (k, &y) in b.iter().enumerate() {
            out[i + k] += x * y;
        }
    }
    out
}

/// `|Σ_p c_p e^{-iλp}|²` evaluated by direct summation.
pub fn empirical_gain(coefficients: &[f64], lambda: f64) -> f64 {
    let (mut re, mut im) = (0.0, 0.0);
    for (p, &c) in coefficients.iter().enumerate() {
        let (s, co) = (lambda * p as f64).sin_cos();
        re += c * co;
        im -= c * s;
    }
    re * re + im * im
}

/// Squared gain of the length-`L` Daubechies wavelet filter,
/// `H_L(λ) = 2 sin^L(λ/2) Σ_{p<L/2} C(L/2-1+p, p) cos^{2p}(λ/2)`.
pub fn squared_gain_h(filter_len: usize, lambda: f64) -> f64 {
    debug_assert!(filter_len >= 2 && filter_len.is_multiple_of(2));
    let half = filter_len / 2;
    let (s, c) = (lambda / 2.0).sin_cos();
    let c2 = c * c;
    let mut binom = 1.0;
    let mut cpow = 1.0;
    let mut sum = 0.0;
    for p in 0..half {
        if p > 0 {
            // C(half-1+p, p) = C(half-2+p, p-1) * (half-1+p) / p
            binom *= (half - 1 + p) as f64 / p as f64;
            cpow *= c2;
        }
        sum += binom * cpow;
    }
    2.0 * s.powi(filter_len as i32) * sum
}

/// Squared gain of the scaling filter, `G_L(λ) = H_L(λ - π)`.
pub fn squared_gain_g(filter_len: usize, lambda: f64) -> f64 {
    squared_gain_h(filter_len, lambda - PI)
}

/// `H_{j,L}(λ) = H_L(2^{j-1}λ) Π_{i=0}^{j-2} G_L(2^i λ)`.
pub fn squared_gain_level(level: usize, filter_len: usize, lambda: f64) -> f64 {
    debug_assert!(level >= 1);
    let top = squared_gain_h(filter_len, 2f64.powi(level as i32 - 1) * lambda);
    (0..level.saturating_sub(1)).fold(top, |acc, i| {
        acc * squared_gain_g(filter_len, 2f64.powi(i as i32) * lambda)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn equispaced(points: usize) -> impl Iterator<Item = f64> {
        (0..points).map(move |i| PI * i as f64 / (points - 1) as f64)
    }

    #[test]
    fn haar_coefficients() {
        let pair = base_filter(Family::Haar);
        let expected = [
            (0.7071067811865475, -0.7071067811865475),
            (0.7071067811865475, 0.7071067811865475),
        ];
        for (got, (a, b)) in [&pair.wavelet, &pair.scaling].into_iter().zip(expected) {
            assert!((got[0] - a).abs() < 1e-15 && (got[1] - b).abs() < 1e-15);
        }
    }

    #[test]
    fn base_filter_invariants() {
        for family in Family::ALL {
            let pair = base_filter(family);
            assert_eq!(pair.len(), family.len());
            let energy: f64 = pair.wavelet.iter().map(|h| h * h).sum();
            let sum_h: f64 = pair.wavelet.iter().sum();
            let sum_g: f64 = pair.scaling.iter().sum();
            assert!((energy - 1.0).abs() < 1e-14, "{family}: energy {energy}");
            assert!(sum_h.abs() < 1e-14, "{family}: Σh = {sum_h}");
            assert!((sum_g - 2f64.sqrt()).abs() < 1e-14, "{family}: Σg = {sum_g}");
        }
    }

    #[test]
    fn scaling_from_wavelet_formula() {
        assert_eq!(scaling_from_wavelet(&[1.0, 2.0]).unwrap(), vec![-2.0, 1.0]);
        assert!(matches!(
            scaling_from_wavelet(&[1.0, 2.0, 3.0]),
            Err(Error::OddFilterLength(3))
        ));
    }

    #[test]
    fn la8_gain_matches_closed_form() {
        let pair = base_filter(Family::La8);
        for lambda in equispaced(1024) {
            let h = empirical_gain(&pair.wavelet, lambda);
            let g = empirical_gain(&pair.scaling, lambda);
            assert!((h - squared_gain_h(8, lambda)).abs() < 1e-10);
            assert!((g - squared_gain_g(8, lambda)).abs() < 1e-10);
        }
    }

    #[test]
    fn closed_form_gain_values() {
        assert!((squared_gain_h(2, PI) - 2.0).abs() < 1e-15);
        for len in [2, 8, 20] {
            assert_eq!(squared_gain_h(len, 0.0), 0.0);
            assert!(squared_gain_g(len, PI).abs() < 1e-15);
        }
        assert!((squared_gain_g(2, 0.0) - 2.0).abs() < 1e-15);
        let h8 = squared_gain_h(8, PI / 2.0);
        assert!((h8 + squared_gain_g(8, PI / 2.0) - 2.0).abs() < 1e-12);
        assert!((squared_gain_g(20, 1.0) - (2.0 - squared_gain_h(20, 1.0))).abs() < 1e-12);
    }

    #[test]
    fn level_gain_reductions() {
        for lambda in [0.1, 0.7, 2.0, 3.0] {
            let level1 = squared_gain_level(1, 20, lambda);
            assert!((level1 - squared_gain_h(20, lambda)).abs() <= 1e-14 * level1);
            let direct = squared_gain_h(2, 2.0 * lambda) * squared_gain_g(2, lambda);
            assert!((squared_gain_level(2, 2, lambda) - direct).abs() < 1e-15);
        }
        for j in 1..6 {
            assert_eq!(squared_gain_level(j, 8, 0.0), 0.0);
        }
    }

    #[test]
    fn cascade_haar() {
        let pair = base_filter(Family::Haar);
        let level1 = cascade(&pair, 1).unwrap();
        assert_eq!(level1.coefficients, pair.wavelet);
        let level2 = cascade(&pair, 2).unwrap();
        assert_eq!(level2.len(), 4);
        for (got, want) in level2.coefficients.iter().zip([0.5, 0.5, -0.5, -0.5]) {
            assert!((got - want).abs() < 1e-15);
        }
        assert!(matches!(cascade(&pair, 0), Err(Error::InvalidLevel(0))));
    }

    #[test]
    fn cascade_lengths() {
        assert_eq!(cascade(&base_filter(Family::La8), 3).unwrap().len(), 50);
        for family in Family::ALL {
            let pair = base_filter(family);
            for j in 1..=8 {
                let filter = cascade(&pair, j).unwrap();
                assert_eq!(filter.len(), level_filter_len(family.len(), j));
                assert!((filter.energy() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn feasible_levels() {
        assert_eq!(max_feasible_level(20, 15000), Some(9));
        assert_eq!(max_feasible_level(2, 1), None);
        assert_eq!(max_feasible_level(2, 2), Some(1));
        assert_eq!(max_feasible_level(8, 50), Some(3));
    }

    #[test]
    fn family_parsing() {
        assert_eq!("LA(20)".parse::<Family>().unwrap(), Family::La20);
        assert_eq!("la8".parse::<Family>().unwrap(), Family::La8);
        assert_eq!("Haar".parse::<Family>().unwrap(), Family::Haar);
        assert!("db4".parse::<Family>().is_err());
    }
}
