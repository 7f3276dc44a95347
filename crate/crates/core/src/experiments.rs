//! Monte Carlo detection experiments.
//!
//! Every experiment is driven by a [`Condition`]: a unit-amplitude template,
//! its ROI, and the window of bins the statistics need. Within one condition
//! all amplitudes reuse the same noise trials. Distinct conditions of a
//! repetition use disjoint trial indices of one master seed, and each
//! repetition gets its own master seed derived from the base seed.
//!
//! Trials are evaluated in parallel but collected in trial order, so every
//! result is identical under any thread count.

use std::ops::Range;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::detection::{asnr, gamma_discrete, psnr, StatisticKind};
use crate::error::{Error, Result};
use crate::grid::{Dim, SpectralGrid};
use crate::lineshape::{Family, LineshapeSpec};
use crate::noise::{derive_seed, NoiseModel};
use crate::roi::{extract_roi, extract_roi_2d, RoiMask};
use crate::stats::{fraction_at_least, Summary};
use crate::voigt::VoigtConfig;

/// A prepared lineshape condition.
#[derive(Debug, Clone)]
pub struct Condition {
    pub family: Family,
    pub fwhm_bins: f64,
    pub grid: SpectralGrid,
    /// Unit-amplitude clean template over the whole grid.
    pub unit: Vec<f64>,
    pub roi: RoiMask,
    window: Range<usize>,
    local_roi: RoiMask,
    local_peak: usize,
}

impl Condition {
    pub fn prepare(family: Family, fwhm_bins: f64, grid: &SpectralGrid, eta: f64, voigt: &VoigtConfig) -> Result<Self> {
        if !(fwhm_bins > 0.0 && fwhm_bins.is_finite()) {
            return Err(Error::param("fwhm_bins", format!("must be positive, got {fwhm_bins}")));
        }
        let spec = LineshapeSpec::from_bins(family, 1.0, fwhm_bins, grid);
        let unit = spec.evaluate(grid, voigt)?;
        Self::from_template(family, fwhm_bins, grid, unit, eta)
    }

    /// Condition for an arbitrary unit-amplitude template. The ROI is always
    /// taken from this clean template.
    pub fn from_template(family: Family, fwhm_bins: f64, grid: &SpectralGrid, unit: Vec<f64>, eta: f64) -> Result<Self> {
        let roi = match grid.dim() {
            Dim::One => extract_roi(&unit, eta)?,
            Dim::Two => extract_roi_2d(&unit, grid.points_per_axis(), eta)?,
        };
        let window = roi.bounding_range();
        let local_roi = RoiMask {
            indices: roi.indices.iter().map(|i| i - window.start).collect(),
            peak: roi.peak - window.start,
            ..roi.clone()
        };
        Ok(Self {
            family,
            fwhm_bins,
            grid: *grid,
            local_peak: local_roi.peak,
            unit,
            roi,
            window,
            local_roi,
        })
    }

    pub fn peak_index(&self) -> usize {
        self.roi.peak
    }

    /// Noiseless aSNR / pSNR ratio.
    pub fn gamma(&self) -> f64 {
        gamma_discrete(&self.unit, &self.roi).expect("template has a positive peak")
    }

    /// `(pSNR, aSNR)` of trial `trial` for every amplitude, pushed in order.
    /// The ROI window of the template is observed with the same noise for
    /// every amplitude.
    pub fn trial_statistics(&self, amplitudes: &[f64], noise: &NoiseModel, trial: u64) -> Result<Vec<(f64, f64)>> {
        let n = noise.window(trial, self.window.clone());
        let clean = &self.unit[self.window.clone()];
        let mut y = vec![0.0; n.len()];
        amplitudes
            .iter()
            .map(|&a| {
                for ((v, s), e) in y.iter_mut().zip(clean).zip(&n) {
                    *v = a * s + e;
                }
                Ok((psnr(&y, self.local_peak, noise.sigma)?, asnr(&y, &self.local_roi, noise.sigma)?))
            })
            .collect()
    }

    /// Statistic samples over trials `first_trial..first_trial + n_mc`,
    /// indexed `[amplitude][trial]`.
    pub fn sample(&self, amplitudes: &[f64], noise: &NoiseModel, first_trial: u64, n_mc: usize) -> Result<Samples> {
        if n_mc == 0 {
            return Err(Error::param("n_mc", "must be at least 1"));
        }
        let per_trial: Vec<Vec<(f64, f64)>> = (0..n_mc as u64)
            .into_par_iter()
            .map(|t| self.trial_statistics(amplitudes, noise, first_trial + t))
            .collect::<Result<_>>()?;
        let mut psnr = vec![Vec::with_capacity(n_mc); amplitudes.len()];
        let mut asnr = vec![Vec::with_capacity(n_mc); amplitudes.len()];
        for trial in &per_trial {
            for (k, &(p, a)) in trial.iter().enumerate() {
                psnr[k].push(p);
                asnr[k].push(a);
            }
        }
        Ok(Samples {
            amplitudes: amplitudes.to_vec(),
            psnr,
            asnr,
        })
    }
}

/// Raw statistic values per amplitude.
#[derive(Debug, Clone, PartialEq)]
pub struct Samples {
    pub amplitudes: Vec<f64>,
    pub psnr: Vec<Vec<f64>>,
    pub asnr: Vec<Vec<f64>>,
}

impl Samples {
    pub fn point(&self, k: usize, threshold: f64) -> CurvePoint {
        let p = Summary::of(&self.psnr[k]);
        let a = Summary::of(&self.asnr[k]);
        CurvePoint {
            axis: self.amplitudes[k],
            prob_psnr: fraction_at_least(&self.psnr[k], threshold),
            prob_asnr: fraction_at_least(&self.asnr[k], threshold),
            mean_psnr: p.mean,
            std_psnr: p.std,
            mean_asnr: a.mean,
            std_asnr: a.std,
        }
    }

    pub fn curve(&self, threshold: f64) -> Vec<CurvePoint> {
        (0..self.amplitudes.len()).map(|k| self.point(k, threshold)).collect()
    }
}

/// One axis point of a detection curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    /// Amplitude (amplitude sweeps) or FWHM in bins (width sweeps).
    pub axis: f64,
    pub prob_psnr: f64,
    pub prob_asnr: f64,
    pub mean_psnr: f64,
    pub std_psnr: f64,
    pub mean_asnr: f64,
    pub std_asnr: f64,
}

impl CurvePoint {
    pub fn ratio(&self) -> f64 {
        self.mean_asnr / self.mean_psnr
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectionCurve {
    pub family: Family,
    pub fwhm_bins: f64,
    pub threshold: f64,
    pub repeat: usize,
    pub points: Vec<CurvePoint>,
}

impl DetectionCurve {
    pub fn axis(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.axis).collect()
    }

    pub fn prob_psnr(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.prob_psnr).collect()
    }

    pub fn prob_asnr(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.prob_asnr).collect()
    }
}

/// Probabilities and statistic summaries of `n_mc` trials at one amplitude,
/// using trials `first_trial..`.
pub fn detection_probability(
    condition: &Condition,
    amplitude: f64,
    threshold: f64,
    n_mc: usize,
    noise: &NoiseModel,
    first_trial: u64,
) -> Result<CurvePoint> {
    Ok(condition.sample(&[amplitude], noise, first_trial, n_mc)?.point(0, threshold))
}

/// Location of the first upward crossing of a target probability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Crossing {
    At(f64),
    OutOfRange,
}

impl Crossing {
    pub fn value(&self) -> Option<f64> {
        match self {
            Crossing::At(v) => Some(*v),
            Crossing::OutOfRange => None,
        }
    }
}

/// First point where `probs` reaches `target`, by linear interpolation
/// between the bracketing axis points.
pub fn critical_amplitude(axis: &[f64], probs: &[f64], target: f64) -> Crossing {
    for i in 0..axis.len().min(probs.len()) {
        if probs[i] == target {
            return Crossing::At(axis[i]);
        }
        if i > 0 && probs[i - 1] < target && probs[i] > target {
            let t = (target - probs[i - 1]) / (probs[i] - probs[i - 1]);
            return Crossing::At(axis[i - 1] + t * (axis[i] - axis[i - 1]));
        }
    }
    Crossing::OutOfRange
}

impl DetectionCurve {
    pub fn critical(&self, kind: StatisticKind, target: f64) -> Crossing {
        let probs = match kind {
            StatisticKind::Psnr => self.prob_psnr(),
            _ => self.prob_asnr(),
        };
        critical_amplitude(&self.axis(), &probs, target)
    }
}

/// Critical amplitude of one statistic summarized over repetitions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalAmplitude {
    pub kind: StatisticKind,
    /// Mean over repetitions that crossed; NaN when none did.
    pub value: f64,
    pub std_over_repeats: f64,
    pub n_crossed: usize,
    pub n_repeats: usize,
}

impl CriticalAmplitude {
    pub fn from_crossings(kind: StatisticKind, crossings: &[Crossing]) -> Self {
        let vals: Vec<f64> = crossings.iter().filter_map(Crossing::value).collect();
        let s = Summary::of(&vals);
        Self {
            kind,
            value: s.mean,
            std_over_repeats: s.std,
            n_crossed: vals.len(),
            n_repeats: crossings.len(),
        }
    }

    /// Every repetition crossed inside the swept range.
    pub fn in_range(&self) -> bool {
        self.n_crossed == self.n_repeats && self.n_repeats > 0
    }
}

/// One row of the critical-amplitude table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalRow {
    pub family: Family,
    pub fwhm_bins: f64,
    pub threshold: f64,
    pub psnr: CriticalAmplitude,
    pub asnr: CriticalAmplitude,
}

impl CriticalRow {
    /// pSNR over aSNR critical amplitude.
    pub fn improvement_factor(&self) -> f64 {
        self.psnr.value / self.asnr.value
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    pub families: Vec<Family>,
    pub amplitudes: Vec<f64>,
    pub fwhm_bins: Vec<f64>,
    pub thresholds: Vec<f64>,
    pub n_mc: usize,
    pub n_repeats: usize,
    pub sigma: f64,
    pub grid: SpectralGrid,
    pub eta: f64,
    pub base_seed: u64,
    pub voigt: VoigtConfig,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            families: Family::ALL.to_vec(),
            amplitudes: (0..=10).map(|k| 0.5 * k as f64).collect(),
            fwhm_bins: vec![3.0, 10.0, 50.0],
            thresholds: vec![3.0, 5.0],
            n_mc: 2000,
            n_repeats: 10,
            sigma: 1.0,
            grid: SpectralGrid::default_1d(),
            eta: 0.5,
            base_seed: 42,
            voigt: VoigtConfig::default(),
        }
    }
}

impl SweepConfig {
    /// Width-sweep defaults: amplitudes 1, 2, 3 and widths 1..=50 bins.
    pub fn width_sweep_default() -> Self {
        Self {
            amplitudes: vec![1.0, 2.0, 3.0],
            fwhm_bins: (1..=50).map(f64::from).collect(),
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.families.is_empty() {
            return Err(Error::param("families", "at least one family is required"));
        }
        if self.amplitudes.is_empty() || self.amplitudes.iter().any(|a| !a.is_finite()) {
            return Err(Error::param("amplitudes", "need at least one finite amplitude"));
        }
        if self.amplitudes.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::param("amplitudes", "must be strictly increasing"));
        }
        if self.fwhm_bins.is_empty() || self.fwhm_bins.iter().any(|w| !(*w > 0.0)) {
            return Err(Error::param("fwhm_bins", "need at least one positive width"));
        }
        if self.thresholds.is_empty() || self.thresholds.iter().any(|t| !t.is_finite()) {
            return Err(Error::param("thresholds", "need at least one finite threshold"));
        }
        if self.n_mc == 0 {
            return Err(Error::param("n_mc", "must be at least 1"));
        }
        if self.n_repeats == 0 {
            return Err(Error::param("n_repeats", "must be at least 1"));
        }
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(Error::param("sigma", "must be positive"));
        }
        if !(self.eta > 0.0 && self.eta < 1.0) {
            return Err(Error::param("eta", "must lie in (0, 1)"));
        }
        self.voigt.validate()
    }

    pub fn noise_for_repeat(&self, repeat: usize) -> NoiseModel {
        NoiseModel {
            sigma: self.sigma,
            master_seed: derive_seed(self.base_seed, repeat as u64),
        }
    }

    fn conditions(&self) -> Result<Vec<Condition>> {
        let mut out = Vec::with_capacity(self.families.len() * self.fwhm_bins.len());
        for &family in &self.families {
            for &w in &self.fwhm_bins {
                out.push(Condition::prepare(family, w, &self.grid, self.eta, &self.voigt)?);
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeSweep {
    /// One curve per repetition, condition and threshold.
    pub curves: Vec<DetectionCurve>,
    pub critical: Vec<CriticalRow>,
}

/// Detection curves over the amplitude grid for every family × width ×
/// threshold, and the 50 % critical amplitudes summarized over repetitions.
pub fn amplitude_sweep(config: &SweepConfig) -> Result<AmplitudeSweep> {
    config.validate()?;
    let conditions = config.conditions()?;
    let mut curves = Vec::new();
    for repeat in 0..config.n_repeats {
        let noise = config.noise_for_repeat(repeat);
        for (c, cond) in conditions.iter().enumerate() {
            let samples = cond.sample(&config.amplitudes, &noise, (c * config.n_mc) as u64, config.n_mc)?;
            for &threshold in &config.thresholds {
                curves.push(DetectionCurve {
                    family: cond.family,
                    fwhm_bins: cond.fwhm_bins,
                    threshold,
                    repeat,
                    points: samples.curve(threshold),
                });
            }
        }
    }

    let mut critical = Vec::new();
    for cond in &conditions {
        for &threshold in &config.thresholds {
            let matching: Vec<&DetectionCurve> = curves
                .iter()
                .filter(|k| k.family == cond.family && k.fwhm_bins == cond.fwhm_bins && k.threshold == threshold)
                .collect();
            let crossings = |kind| matching.iter().map(|k| k.critical(kind, 0.5)).collect::<Vec<_>>();
            critical.push(CriticalRow {
                family: cond.family,
                fwhm_bins: cond.fwhm_bins,
                threshold,
                psnr: CriticalAmplitude::from_crossings(StatisticKind::Psnr, &crossings(StatisticKind::Psnr)),
                asnr: CriticalAmplitude::from_crossings(StatisticKind::Asnr, &crossings(StatisticKind::Asnr)),
            });
        }
    }
    Ok(AmplitudeSweep { curves, critical })
}

/// One (family, amplitude, width) cell of a width sweep for one repetition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WidthPoint {
    pub family: Family,
    pub amplitude: f64,
    pub repeat: usize,
    pub n_roi: usize,
    /// Detection probabilities per configured threshold, in config order.
    pub thresholds: Vec<f64>,
    pub prob_psnr: Vec<f64>,
    pub prob_asnr: Vec<f64>,
    pub fwhm_bins: f64,
    pub mean_psnr: f64,
    pub std_psnr: f64,
    pub mean_asnr: f64,
    pub std_asnr: f64,
}

impl WidthPoint {
    /// Mean aSNR over mean pSNR.
    pub fn ratio(&self) -> f64 {
        self.mean_asnr / self.mean_psnr
    }
}

/// Ratio of mean statistics summarized over repetitions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioSummary {
    pub family: Family,
    pub amplitude: f64,
    pub fwhm_bins: f64,
    pub mean_psnr: f64,
    pub mean_asnr: f64,
    pub ratio: Summary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WidthSweep {
    pub points: Vec<WidthPoint>,
}

impl WidthSweep {
    pub fn summaries(&self) -> Vec<RatioSummary> {
        let mut keys: Vec<(Family, f64, f64)> = Vec::new();
        for p in &self.points {
            let k = (p.family, p.amplitude, p.fwhm_bins);
            if !keys.contains(&k) {
                keys.push(k);
            }
        }
        keys.into_iter()
            .map(|(family, amplitude, fwhm_bins)| {
                let cell: Vec<&WidthPoint> = self
                    .points
                    .iter()
                    .filter(|p| p.family == family && p.amplitude == amplitude && p.fwhm_bins == fwhm_bins)
                    .collect();
                let ratios: Vec<f64> = cell.iter().map(|p| p.ratio()).collect();
                let mp: Vec<f64> = cell.iter().map(|p| p.mean_psnr).collect();
                let ma: Vec<f64> = cell.iter().map(|p| p.mean_asnr).collect();
                RatioSummary {
                    family,
                    amplitude,
                    fwhm_bins,
                    mean_psnr: Summary::of(&mp).mean,
                    mean_asnr: Summary::of(&ma).mean,
                    ratio: Summary::of(&ratios),
                }
            })
            .collect()
    }

    pub fn summary(&self, family: Family, amplitude: f64, fwhm_bins: f64) -> Option<RatioSummary> {
        self.summaries()
            .into_iter()
            .find(|s| s.family == family && s.amplitude == amplitude && s.fwhm_bins == fwhm_bins)
    }
}

/// Mean statistics, their ratio and detection probabilities as a function of
/// FWHM (in bins) at each fixed amplitude.
pub fn width_sweep(config: &SweepConfig) -> Result<WidthSweep> {
    config.validate()?;
    let conditions = config.conditions()?;
    let mut points = Vec::new();
    for repeat in 0..config.n_repeats {
        let noise = config.noise_for_repeat(repeat);
        for (c, cond) in conditions.iter().enumerate() {
            let samples = cond.sample(&config.amplitudes, &noise, (c * config.n_mc) as u64, config.n_mc)?;
            for (k, &amplitude) in config.amplitudes.iter().enumerate() {
                let p = Summary::of(&samples.psnr[k]);
                let a = Summary::of(&samples.asnr[k]);
                points.push(WidthPoint {
                    family: cond.family,
                    amplitude,
                    repeat,
                    n_roi: cond.roi.n_roi(),
                    thresholds: config.thresholds.clone(),
                    prob_psnr: config.thresholds.iter().map(|&t| fraction_at_least(&samples.psnr[k], t)).collect(),
                    prob_asnr: config.thresholds.iter().map(|&t| fraction_at_least(&samples.asnr[k], t)).collect(),
                    fwhm_bins: cond.fwhm_bins,
                    mean_psnr: p.mean,
                    std_psnr: p.std,
                    mean_asnr: a.mean,
                    std_asnr: a.std,
                });
            }
        }
    }
    Ok(WidthSweep { points })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Sweep2dConfig {
    pub families: Vec<Family>,
    /// FWHM values in pixels.
    pub widths: Vec<f64>,
    pub amplitudes: Vec<f64>,
    pub n_mc: usize,
    pub sigma: f64,
    pub grid: SpectralGrid,
    pub eta: f64,
    pub base_seed: u64,
    pub voigt: VoigtConfig,
}

impl Default for Sweep2dConfig {
    fn default() -> Self {
        Self {
            families: Family::ALL.to_vec(),
            widths: (1..=20).map(f64::from).collect(),
            amplitudes: (0..=10).map(|k| 0.5 * k as f64).collect(),
            n_mc: 200,
            sigma: 1.0,
            grid: SpectralGrid::default_2d(),
            eta: 0.5,
            base_seed: 42,
            voigt: VoigtConfig::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfaceCell {
    pub width_px: f64,
    pub amplitude: f64,
    pub n_roi: usize,
    pub mean_psnr: f64,
    pub std_psnr: f64,
    pub mean_vsnr: f64,
    pub std_vsnr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Surface {
    pub family: Family,
    pub cells: Vec<SurfaceCell>,
}

impl Surface {
    pub fn max_mean_psnr(&self) -> f64 {
        self.cells.iter().map(|c| c.mean_psnr).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn max_mean_vsnr(&self) -> f64 {
        self.cells.iter().map(|c| c.mean_vsnr).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Max mean vSNR over max mean pSNR.
    pub fn enhancement(&self) -> f64 {
        self.max_mean_vsnr() / self.max_mean_psnr()
    }
}

/// Mean pSNR and vSNR over a (width, amplitude) surface of separable 2D
/// templates. All cells of all families observe the same noise fields, one
/// per trial index.
pub fn sweep_2d(config: &Sweep2dConfig) -> Result<Vec<Surface>> {
    if config.grid.dim() != Dim::Two {
        return Err(Error::param("grid", "2D sweep needs a 2D grid"));
    }
    if config.n_mc == 0 || config.widths.is_empty() || config.amplitudes.is_empty() || config.families.is_empty() {
        return Err(Error::param("sweep2d", "families, widths, amplitudes and n_mc must be non-empty"));
    }
    if !(config.sigma > 0.0) {
        return Err(Error::param("sigma", "must be positive"));
    }
    config.voigt.validate()?;
    let noise = NoiseModel {
        sigma: config.sigma,
        master_seed: derive_seed(config.base_seed, 0),
    };
    let mut surfaces = Vec::with_capacity(config.families.len());
    for &family in &config.families {
        let mut cells = Vec::new();
        for &w in &config.widths {
            let cond = Condition::prepare(family, w, &config.grid, config.eta, &config.voigt)?;
            let samples = cond.sample(&config.amplitudes, &noise, 0, config.n_mc)?;
            for (k, &amplitude) in config.amplitudes.iter().enumerate() {
                let p = Summary::of(&samples.psnr[k]);
                let v = Summary::of(&samples.asnr[k]);
                cells.push(SurfaceCell {
                    width_px: w,
                    amplitude,
                    n_roi: cond.roi.n_roi(),
                    mean_psnr: p.mean,
                    std_psnr: p.std,
                    mean_vsnr: v.mean,
                    std_vsnr: v.std,
                });
            }
        }
        surfaces.push(Surface { family, cells });
    }
    Ok(surfaces)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn crossing_arithmetic() {
        assert_eq!(critical_amplitude(&[2.5, 3.0, 3.5], &[0.3, 0.5, 0.7], 0.5), Crossing::At(3.0));
        match critical_amplitude(&[0.5, 1.0], &[0.4, 0.8], 0.5) {
            Crossing::At(v) => assert!((v - 0.625).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
        assert_eq!(critical_amplitude(&[0.0, 1.0], &[0.1, 0.2], 0.5), Crossing::OutOfRange);
        assert_eq!(critical_amplitude(&[0.0, 1.0], &[0.9, 1.0], 0.5), Crossing::OutOfRange);
    }

    #[test]
    fn critical_summary_flags_missing_crossings() {
        let c = CriticalAmplitude::from_crossings(
            StatisticKind::Asnr,
            &[Crossing::At(1.0), Crossing::OutOfRange, Crossing::At(2.0)],
        );
        assert_eq!(c.value, 1.5);
        assert_eq!(c.n_crossed, 2);
        assert!(!c.in_range());
    }

    #[test]
    fn same_noise_across_amplitudes() {
        let grid = SpectralGrid::default_1d();
        let cond = Condition::prepare(Family::Gaussian, 10.0, &grid, 0.5, &VoigtConfig::default()).unwrap();
        let noise = NoiseModel::unit(5);
        let s = cond.trial_statistics(&[0.0, 1.0], &noise, 3).unwrap();
        // aSNR is affine in amplitude under fixed noise.
        assert!((s[1].1 - s[0].1 - cond.gamma()).abs() < 1e-12);
    }

    #[test]
    fn windowed_statistics_match_full_observation() {
        let grid = SpectralGrid::default_1d();
        let cond = Condition::prepare(Family::Lorentzian, 20.0, &grid, 0.5, &VoigtConfig::default()).unwrap();
        let noise = NoiseModel::unit(8);
        let full: Vec<f64> = cond
            .unit
            .iter()
            .zip(noise.sample(&grid, 17))
            .map(|(s, n)| 0.7 * s + n)
            .collect();
        let (p, a) = cond.trial_statistics(&[0.7], &noise, 17).unwrap()[0];
        assert_eq!(p, psnr(&full, grid.center_index(), 1.0).unwrap());
        assert!((a - asnr(&full, &cond.roi, 1.0).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn config_validation() {
        let mut c = SweepConfig::default();
        assert!(c.validate().is_ok());
        c.amplitudes = vec![1.0, 0.5];
        assert!(c.validate().is_err());
        let c = SweepConfig {
            n_mc: 0,
            ..SweepConfig::default()
        };
        assert!(c.validate().is_err());
        let c = SweepConfig {
            eta: 1.5,
            ..SweepConfig::default()
        };
        assert!(c.validate().is_err());
    }

    #[test]
    fn small_2d_sweep_shape() {
        let cfg = Sweep2dConfig {
            families: vec![Family::Gaussian],
            widths: vec![4.0, 8.0],
            amplitudes: vec![0.0, 5.0],
            n_mc: 20,
            ..Sweep2dConfig::default()
        };
        let s = sweep_2d(&cfg).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].cells.len(), 4);
        // Shared noise: the peak pixel sees the same draws at every width.
        let at5: Vec<f64> = s[0].cells.iter().filter(|c| c.amplitude == 5.0).map(|c| c.mean_psnr).collect();
        assert_eq!(at5[0], at5[1]);
    }
}
