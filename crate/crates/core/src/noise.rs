//! Reproducible additive Gaussian noise.
//!
//! Noise is counter-based: the value at bin `i` of trial `t` is a pure
//! function of `(master_seed, t, i)`. Each trial is a separate ChaCha8 stream
//! keyed by the master seed, and each bin owns a fixed pair of 64-bit words
//! inside that stream which are turned into one normal variate with the
//! Box–Muller transform. Any sub-window of a trial can therefore be generated
//! without touching the rest of it, and the values never depend on the order
//! or the thread in which trials or windows are produced.

use std::f64::consts::TAU;
use std::ops::Range;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::SpectralGrid;

/// 32-bit words consumed per bin (two u64 draws).
const WORDS_PER_BIN: u128 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub sigma: f64,
    pub master_seed: u64,
}

impl NoiseModel {
    pub fn new(sigma: f64, master_seed: u64) -> Result<Self> {
        if !(sigma.is_finite() && sigma >= 0.0) {
            return Err(Error::param("sigma", format!("must be non-negative, got {sigma}")));
        }
        Ok(Self { sigma, master_seed })
    }

    pub fn unit(master_seed: u64) -> Self {
        Self {
            sigma: 1.0,
            master_seed,
        }
    }

    fn stream(&self, trial: u64, first_bin: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(trial);
        rng.set_word_pos(first_bin as u128 * WORDS_PER_BIN);
        rng
    }

    /// Fills `out` with the noise of `trial` at flat bins `first_bin..first_bin + out.len()`.
    pub fn fill(&self, trial: u64, first_bin: usize, out: &mut [f64]) {
        if self.sigma == 0.0 {
            out.fill(0.0);
            return;
        }
        let mut rng = self.stream(trial, first_bin);
        for v in out.iter_mut() {
            *v = self.sigma * standard_normal(&mut rng);
        }
    }

    pub fn window(&self, trial: u64, bins: Range<usize>) -> Vec<f64> {
        let mut out = vec![0.0; bins.len()];
        self.fill(trial, bins.start, &mut out);
        out
    }

    /// Full noise realization of `trial` over every point of `grid`
    /// (row-major in 2D).
    pub fn sample(&self, grid: &SpectralGrid, trial: u64) -> Vec<f64> {
        self.window(trial, 0..grid.len())
    }
}

/// Box–Muller, cosine branch. `u1` is mapped to `(0, 1]` so the log is finite.
fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    const SCALE: f64 = 1.0 / (1u64 << 53) as f64;
    let u1 = ((rng.next_u64() >> 11) + 1) as f64 * SCALE;
    let u2 = (rng.next_u64() >> 11) as f64 * SCALE;
    (-2.0 * u1.ln()).sqrt() * (TAU * u2).cos()
}

/// Derives an independent master seed for the `index`-th repetition (or any
/// other sub-experiment) from a base seed. SplitMix64 finalizer.
pub fn derive_seed(base: u64, index: u64) -> u64 {
    let mut z = base
        .wrapping_add(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(index.wrapping_mul(0xD1B5_4A32_D192_ED03));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A clean template plus a family of noisy observations `clean + noise(t)`.
#[derive(Debug, Clone)]
pub struct TrialBatch {
    pub grid: SpectralGrid,
    pub clean: Vec<f64>,
    pub n_trials: u64,
    pub noise: NoiseModel,
}

impl TrialBatch {
    pub fn new(grid: SpectralGrid, clean: Vec<f64>, n_trials: u64, noise: NoiseModel) -> Result<Self> {
        if clean.len() != grid.len() {
            return Err(Error::param(
                "clean",
                format!("template has {} points, grid has {}", clean.len(), grid.len()),
            ));
        }
        if n_trials == 0 {
            return Err(Error::param("n_trials", "must be at least 1"));
        }
        Ok(Self {
            grid,
            clean,
            n_trials,
            noise,
        })
    }

    pub fn observation(&self, trial: u64) -> Vec<f64> {
        self.observation_window(trial, 0..self.clean.len())
    }

    /// Observation restricted to flat bins `bins`; identical to the matching
    /// slice of [`TrialBatch::observation`].
    pub fn observation_window(&self, trial: u64, bins: Range<usize>) -> Vec<f64> {
        let mut y = self.noise.window(trial, bins.clone());
        for (v, s) in y.iter_mut().zip(&self.clean[bins]) {
            *v += s;
        }
        y
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn moments(v: &[f64]) -> (f64, f64) {
        let n = v.len() as f64;
        let mean = v.iter().sum::<f64>() / n;
        let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        (mean, var)
    }

    #[test]
    fn unit_normal_moments() {
        let model = NoiseModel::unit(7);
        let v = model.window(0, 0..100_000);
        let (mean, var) = moments(&v);
        assert!(mean.abs() < 0.02, "mean {mean}");
        assert!((var.sqrt() - 1.0).abs() < 0.01, "std {}", var.sqrt());
        let abs_mean = v.iter().map(|x| x.abs()).sum::<f64>() / v.len() as f64;
        assert!((abs_mean - (2.0 / std::f64::consts::PI).sqrt()).abs() < 0.01);
    }

    #[test]
    fn variance_at_one_million() {
        let model = NoiseModel::new(2.0, 99).unwrap();
        let v: Vec<f64> = (0..10).flat_map(|t| model.window(t, 0..100_000)).collect();
        let (_, var) = moments(&v);
        assert!((var / 4.0 - 1.0).abs() < 0.01, "var {var}");
    }

    #[test]
    fn zero_sigma_is_silent() {
        let model = NoiseModel::new(0.0, 1).unwrap();
        assert!(model.sample(&SpectralGrid::default_1d(), 3).iter().all(|&x| x == 0.0));
    }

    #[test]
    fn deterministic_and_windowed() {
        let grid = SpectralGrid::default_1d();
        let model = NoiseModel::unit(42);
        let a = model.sample(&grid, 5);
        let b = model.sample(&grid, 5);
        assert_eq!(a, b);
        let w = model.window(5, 1234..1300);
        assert_eq!(&a[1234..1300], &w[..]);
        assert_ne!(model.sample(&grid, 6), a);
        assert_ne!(NoiseModel::unit(43).sample(&grid, 5), a);
    }

    #[test]
    fn distinct_trials_uncorrelated() {
        let grid = SpectralGrid::default_1d();
        let model = NoiseModel::unit(11);
        let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
        for t in 0..100 {
            let a = model.sample(&grid, 2 * t);
            let b = model.sample(&grid, 2 * t + 1);
            for (x, y) in a.iter().zip(&b) {
                sxy += x * y;
                sxx += x * x;
                syy += y * y;
            }
        }
        let r = sxy / (sxx * syy).sqrt();
        assert!(r.abs() < 0.02, "correlation {r}");
    }

    #[test]
    fn rejects_negative_sigma() {
        assert!(NoiseModel::new(-1.0, 0).is_err());
        assert!(NoiseModel::new(f64::NAN, 0).is_err());
    }

    #[test]
    fn derived_seeds_differ() {
        let s: Vec<u64> = (0..16).map(|i| derive_seed(42, i)).collect();
        for i in 0..s.len() {
            for j in i + 1..s.len() {
                assert_ne!(s[i], s[j]);
            }
        }
    }

    #[test]
    fn batch_observation_window_matches_full() {
        let grid = SpectralGrid::default_1d();
        let clean: Vec<f64> = grid.axis().iter().map(|x| (-x * x).exp()).collect();
        let batch = TrialBatch::new(grid, clean.clone(), 10, NoiseModel::unit(3)).unwrap();
        let full = batch.observation(4);
        assert_eq!(&full[1990..2011], &batch.observation_window(4, 1990..2011)[..]);
        let noise = NoiseModel::unit(3).sample(&grid, 4);
        for i in 0..grid.len() {
            assert_eq!(full[i], clean[i] + noise[i]);
        }
        assert!(TrialBatch::new(grid, vec![0.0; 3], 1, NoiseModel::unit(0)).is_err());
    }
}
