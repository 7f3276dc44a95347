//! Binary-hypothesis ROC analysis.
//!
//! H1 trials observe `amplitude · template + noise`, H0 trials observe the
//! same noise realizations alone. Both are scored through the ROI of the H1
//! template, since a zero template has no ROI of its own.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::detection::StatisticKind;
use crate::error::{Error, Result};
use crate::experiments::Condition;
use crate::grid::SpectralGrid;
use crate::lineshape::Family;
use crate::noise::{derive_seed, NoiseModel};
use crate::stats::Summary;
use crate::voigt::VoigtConfig;

/// How the signed area statistic is turned into a detection score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AsnrScore {
    /// `|aSNR|`, two-sided like the peak statistic.
    #[default]
    Magnitude,
    /// Raw signed `aSNR`, one-sided.
    Signed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RocConfig {
    pub family: Family,
    pub amplitude: f64,
    pub fwhm_bins: f64,
    pub n_mc: usize,
    pub tau_min: f64,
    pub tau_max: f64,
    pub tau_step: f64,
    pub n_repeats: usize,
    pub sigma: f64,
    pub grid: SpectralGrid,
    pub eta: f64,
    pub base_seed: u64,
    /// Trials of this condition start at `condition_index · n_mc`.
    pub condition_index: u64,
    pub asnr_score: AsnrScore,
    pub voigt: VoigtConfig,
}

impl Default for RocConfig {
    fn default() -> Self {
        Self {
            family: Family::Gaussian,
            amplitude: 0.3,
            fwhm_bins: 50.0,
            n_mc: 10_000,
            tau_min: 0.0,
            tau_max: 10.0,
            tau_step: 0.05,
            n_repeats: 10,
            sigma: 1.0,
            grid: SpectralGrid::default_1d(),
            eta: 0.5,
            base_seed: 42,
            condition_index: 0,
            asnr_score: AsnrScore::Magnitude,
            voigt: VoigtConfig::default(),
        }
    }
}

impl RocConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tau_step > 0.0) {
            return Err(Error::param("tau_step", "must be positive"));
        }
        if !(self.tau_max > self.tau_min) {
            return Err(Error::param("tau_max", "must exceed tau_min"));
        }
        if self.n_mc == 0 || self.n_repeats == 0 {
            return Err(Error::param("n_mc", "n_mc and n_repeats must be at least 1"));
        }
        if !self.amplitude.is_finite() {
            return Err(Error::param("amplitude", "must be finite"));
        }
        if !(self.sigma > 0.0) {
            return Err(Error::param("sigma", "must be positive"));
        }
        self.voigt.validate()
    }

    pub fn thresholds(&self) -> Vec<f64> {
        tau_grid(self.tau_min, self.tau_max, self.tau_step)
    }

    pub fn condition(&self) -> Result<Condition> {
        Condition::prepare(self.family, self.fwhm_bins, &self.grid, self.eta, &self.voigt)
    }
}

/// `min, min + step, …` up to `max` inclusive (within half a step).
pub fn tau_grid(min: f64, max: f64, step: f64) -> Vec<f64> {
    let n = ((max - min) / step + 1e-9).floor() as usize;
    (0..=n).map(|i| min + i as f64 * step).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Hypothesis {
    H0,
    H1,
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Hypothesis::H0 => "h0",
            Hypothesis::H1 => "h1",
        })
    }
}

/// Raw statistic values; area values are signed.
#[derive(Debug, Clone, PartialEq)]
pub struct HypothesisSamples {
    pub h0_psnr: Vec<f64>,
    pub h1_psnr: Vec<f64>,
    pub h0_asnr: Vec<f64>,
    pub h1_asnr: Vec<f64>,
}

impl HypothesisSamples {
    pub fn values(&self, kind: StatisticKind, hypothesis: Hypothesis) -> &[f64] {
        match (kind, hypothesis) {
            (StatisticKind::Psnr, Hypothesis::H0) => &self.h0_psnr,
            (StatisticKind::Psnr, Hypothesis::H1) => &self.h1_psnr,
            (_, Hypothesis::H0) => &self.h0_asnr,
            (_, Hypothesis::H1) => &self.h1_asnr,
        }
    }
}

/// `n_mc` paired H0/H1 trials of repetition `repeat`.
pub fn run_hypothesis_trials(config: &RocConfig, repeat: usize) -> Result<HypothesisSamples> {
    config.validate()?;
    let cond = config.condition()?;
    hypothesis_trials(&cond, config, repeat)
}

fn hypothesis_trials(cond: &Condition, config: &RocConfig, repeat: usize) -> Result<HypothesisSamples> {
    let noise = NoiseModel {
        sigma: config.sigma,
        master_seed: derive_seed(config.base_seed, repeat as u64),
    };
    let first = config.condition_index * config.n_mc as u64;
    let mut s = cond.sample(&[0.0, config.amplitude], &noise, first, config.n_mc)?;
    let h1_asnr = s.asnr.pop().expect("two amplitudes");
    let h0_asnr = s.asnr.pop().expect("two amplitudes");
    let h1_psnr = s.psnr.pop().expect("two amplitudes");
    let h0_psnr = s.psnr.pop().expect("two amplitudes");
    Ok(HypothesisSamples {
        h0_psnr,
        h1_psnr,
        h0_asnr,
        h1_asnr,
    })
}

/// TPR/FPR over a threshold sweep together with its AUC.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RocCurve {
    pub thresholds: Vec<f64>,
    pub fpr: Vec<f64>,
    pub tpr: Vec<f64>,
    pub auc: f64,
}

impl RocCurve {
    /// Sweep points with the fixed endpoints `(0, 0)` and `(1, 1)` appended.
    pub fn augmented_points(&self) -> Vec<(f64, f64)> {
        let mut pts: Vec<(f64, f64)> = self.fpr.iter().copied().zip(self.tpr.iter().copied()).collect();
        pts.push((0.0, 0.0));
        pts.push((1.0, 1.0));
        pts
    }
}

fn fraction_at_least_sorted(sorted: &[f64], tau: f64) -> f64 {
    let below = sorted.partition_point(|&v| v < tau);
    (sorted.len() - below) as f64 / sorted.len() as f64
}

fn sorted(values: &[f64]) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

/// `TPR(τ) = P(h1 >= τ)`, `FPR(τ) = P(h0 >= τ)` on `thresholds`; the AUC is
/// taken over the curve augmented with `(0, 0)` and `(1, 1)`.
pub fn roc_curve(h0: &[f64], h1: &[f64], thresholds: &[f64]) -> Result<RocCurve> {
    if h0.is_empty() || h1.is_empty() {
        return Err(Error::param("roc", "both hypotheses need at least one value"));
    }
    let (s0, s1) = (sorted(h0), sorted(h1));
    let fpr: Vec<f64> = thresholds.iter().map(|&t| fraction_at_least_sorted(&s0, t)).collect();
    let tpr: Vec<f64> = thresholds.iter().map(|&t| fraction_at_least_sorted(&s1, t)).collect();
    let mut curve = RocCurve {
        thresholds: thresholds.to_vec(),
        fpr,
        tpr,
        auc: f64::NAN,
    };
    curve.auc = auc(&curve.augmented_points())?;
    Ok(curve)
}

/// Trapezoidal area under `(fpr, tpr)` points after sorting by FPR, ties
/// broken by ascending TPR.
pub fn auc(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::param("roc points", "need at least two points"));
    }
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    Ok(pts
        .windows(2)
        .map(|w| (w[1].0 - w[0].0) * 0.5 * (w[0].1 + w[1].1))
        .sum())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RocResult {
    pub family: Family,
    pub fwhm_bins: f64,
    pub amplitude: f64,
    pub n_roi: usize,
    /// Curves of the first repetition.
    pub psnr: RocCurve,
    pub asnr: RocCurve,
    pub auc_psnr_repeats: Vec<f64>,
    pub auc_asnr_repeats: Vec<f64>,
}

impl RocResult {
    pub fn auc_psnr(&self) -> Summary {
        Summary::of(&self.auc_psnr_repeats)
    }

    pub fn auc_asnr(&self) -> Summary {
        Summary::of(&self.auc_asnr_repeats)
    }

    /// Relative AUC gain `(AUC_a - AUC_p) / AUC_p`.
    pub fn improvement(&self) -> f64 {
        let p = self.auc_psnr().mean;
        (self.auc_asnr().mean - p) / p
    }
}

pub fn score_asnr(values: &[f64], score: AsnrScore) -> Vec<f64> {
    match score {
        AsnrScore::Magnitude => values.iter().map(|v| v.abs()).collect(),
        AsnrScore::Signed => values.to_vec(),
    }
}

/// ROC curves and AUC for both statistics over `n_repeats` repetitions.
pub fn run_roc(config: &RocConfig) -> Result<RocResult> {
    config.validate()?;
    let cond = config.condition()?;
    let taus = config.thresholds();
    let mut first = None;
    let (mut auc_p, mut auc_a) = (Vec::new(), Vec::new());
    for repeat in 0..config.n_repeats {
        let s = hypothesis_trials(&cond, config, repeat)?;
        let p = roc_curve(&s.h0_psnr, &s.h1_psnr, &taus)?;
        let a = roc_curve(
            &score_asnr(&s.h0_asnr, config.asnr_score),
            &score_asnr(&s.h1_asnr, config.asnr_score),
            &taus,
        )?;
        auc_p.push(p.auc);
        auc_a.push(a.auc);
        if first.is_none() {
            first = Some((p, a));
        }
    }
    let (psnr, asnr) = first.expect("at least one repetition");
    Ok(RocResult {
        family: config.family,
        fwhm_bins: config.fwhm_bins,
        amplitude: config.amplitude,
        n_roi: cond.roi.n_roi(),
        psnr,
        asnr,
        auc_psnr_repeats: auc_p,
        auc_asnr_repeats: auc_a,
    })
}

/// Unit-area histogram on bins `[k · w, (k + 1) · w)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub bin_width: f64,
    pub lower_edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub density: Vec<f64>,
    pub summary: Summary,
}

impl Histogram {
    pub fn centers(&self) -> Vec<f64> {
        self.lower_edges.iter().map(|e| e + 0.5 * self.bin_width).collect()
    }

    pub fn area(&self) -> f64 {
        self.density.iter().sum::<f64>() * self.bin_width
    }
}

pub fn density_histogram(values: &[f64], bin_width: f64) -> Result<Histogram> {
    if values.is_empty() {
        return Err(Error::param("values", "histogram needs at least one value"));
    }
    if !(bin_width > 0.0 && bin_width.is_finite()) {
        return Err(Error::param("bin_width", "must be positive"));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::param("values", "must be finite"));
    }
    let bin = |v: f64| (v / bin_width).floor() as i64;
    let lo = values.iter().map(|&v| bin(v)).min().expect("non-empty");
    let hi = values.iter().map(|&v| bin(v)).max().expect("non-empty");
    let mut counts = vec![0u64; (hi - lo + 1) as usize];
    for &v in values {
        counts[(bin(v) - lo) as usize] += 1;
    }
    let norm = values.len() as f64 * bin_width;
    Ok(Histogram {
        bin_width,
        lower_edges: (lo..=hi).map(|k| k as f64 * bin_width).collect(),
        density: counts.iter().map(|&c| c as f64 / norm).collect(),
        counts,
        summary: Summary::of(values),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityPanel {
    pub kind: StatisticKind,
    pub hypothesis: Hypothesis,
    pub histogram: Histogram,
}

/// Densities of pSNR and signed aSNR under both hypotheses, first repetition.
pub fn density_experiment(config: &RocConfig, bin_width: f64) -> Result<Vec<DensityPanel>> {
    let s = run_hypothesis_trials(config, 0)?;
    let mut out = Vec::with_capacity(4);
    for kind in [StatisticKind::Psnr, StatisticKind::Asnr] {
        for hypothesis in [Hypothesis::H0, Hypothesis::H1] {
            out.push(DensityPanel {
                kind,
                hypothesis,
                histogram: density_histogram(s.values(kind, hypothesis), bin_width)?,
            });
        }
    }
    Ok(out)
}
