//! Experiment configuration files and their resolution into the per-module
//! configuration types.
//!
//! A config file is a flat JSON object. Every field is optional and falls
//! back to the default of the selected experiment; command-line flags are
//! merged on top with [`ExperimentConfig::merge`].

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiments::{Sweep2dConfig, SweepConfig};
use crate::grid::{Dim, SpectralGrid};
use crate::lineshape::{Family, GAUSS_FWHM_FACTOR};
use crate::roc::{AsnrScore, RocConfig};
use crate::table::Format;
use crate::voigt::VoigtConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    AmpSweep,
    WidthSweep,
    Roc,
    Density,
    Sweep2d,
    GammaTable,
}

impl Experiment {
    pub const ALL: [Experiment; 6] = [
        Experiment::AmpSweep,
        Experiment::WidthSweep,
        Experiment::Roc,
        Experiment::Density,
        Experiment::Sweep2d,
        Experiment::GammaTable,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Experiment::AmpSweep => "amp-sweep",
            Experiment::WidthSweep => "width-sweep",
            Experiment::Roc => "roc",
            Experiment::Density => "density",
            Experiment::Sweep2d => "sweep2d",
            Experiment::GammaTable => "gamma-table",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown experiment `{s}`")))
    }
}

/// Union of all experiment parameters. `None` means "use the default".
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub experiment: Option<Experiment>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub families: Option<Vec<Family>>,
    /// FWHM values in bins (pixels for `sweep2d`).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fwhm_bins: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub amplitudes: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub thresholds: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_mc: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_repeats: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid_spacing: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid_extent: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau_min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau_step: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub asnr_score: Option<AsnrScore>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bin_width: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub voigt: Option<VoigtConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub base_seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output_format: Option<Format>,
}

macro_rules! merge_fields {
    ($base:ident, $over:ident, $($f:ident),*) => {
        $( if $over.$f.is_some() { $base.$f = $over.$f.clone(); } )*
    };
}

/// Density defaults: a Gaussian with `b_G = 0.5` on the default 1D grid.
pub const DENSITY_B_GAUSS: f64 = 0.5;

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    /// `self` with every field set in `over` replaced.
    pub fn merge(mut self, over: &ExperimentConfig) -> Self {
        merge_fields!(
            self, over, experiment, families, fwhm_bins, amplitudes, thresholds, n_mc, n_repeats, sigma, eta,
            grid_spacing, grid_extent, tau_min, tau_max, tau_step, asnr_score, bin_width, voigt, base_seed,
            output_dir, output_format
        );
        self
    }

    pub fn experiment(&self) -> Result<Experiment> {
        self.experiment
            .ok_or_else(|| Error::Config("no experiment selected".into()))
    }

    pub fn format(&self) -> Format {
        self.output_format.unwrap_or_default()
    }

    pub fn output_dir(&self) -> PathBuf {
        self.output_dir.clone().unwrap_or_else(|| PathBuf::from("results"))
    }

    pub fn eta(&self) -> f64 {
        self.eta.unwrap_or(0.5)
    }

    fn grid(&self, default: SpectralGrid) -> Result<SpectralGrid> {
        SpectralGrid::new(
            default.dim(),
            self.grid_spacing.unwrap_or(default.spacing()),
            self.grid_extent.unwrap_or(default.half_extent()),
        )
    }

    fn reject<T>(&self, what: &str, field: &Option<T>) -> Result<()> {
        if field.is_some() {
            let e = self.experiment.map_or("this experiment".to_string(), |e| e.to_string());
            return Err(Error::Config(format!("`{what}` does not apply to {e}")));
        }
        Ok(())
    }

    fn sweep_common(&self, mut c: SweepConfig) -> Result<SweepConfig> {
        self.reject("tau_min", &self.tau_min)?;
        self.reject("tau_max", &self.tau_max)?;
        self.reject("tau_step", &self.tau_step)?;
        self.reject("asnr_score", &self.asnr_score)?;
        self.reject("bin_width", &self.bin_width)?;
        if let Some(v) = &self.families {
            c.families = v.clone();
        }
        if let Some(v) = &self.fwhm_bins {
            c.fwhm_bins = v.clone();
        }
        if let Some(v) = &self.amplitudes {
            c.amplitudes = v.clone();
        }
        if let Some(v) = &self.thresholds {
            c.thresholds = v.clone();
        }
        c.n_mc = self.n_mc.unwrap_or(c.n_mc);
        c.n_repeats = self.n_repeats.unwrap_or(c.n_repeats);
        c.sigma = self.sigma.unwrap_or(c.sigma);
        c.eta = self.eta();
        c.grid = self.grid(c.grid)?;
        c.base_seed = self.base_seed.unwrap_or(c.base_seed);
        c.voigt = self.voigt.unwrap_or(c.voigt);
        c.validate()?;
        Ok(c)
    }

    pub fn amp_sweep(&self) -> Result<SweepConfig> {
        self.sweep_common(SweepConfig::default())
    }

    pub fn width_sweep(&self) -> Result<SweepConfig> {
        self.sweep_common(SweepConfig::width_sweep_default())
    }

    /// One configuration per family × width × amplitude, with disjoint
    /// trial ranges.
    pub fn roc(&self) -> Result<Vec<RocConfig>> {
        self.reject("thresholds", &self.thresholds)?;
        self.reject("bin_width", &self.bin_width)?;
        let base = self.roc_base(RocConfig::default())?;
        let families = self
            .families
            .clone()
            .unwrap_or_else(|| vec![Family::Gaussian, Family::Lorentzian]);
        let widths = self.fwhm_bins.clone().unwrap_or_else(|| vec![3.0, 10.0, 50.0]);
        let amps = self.amplitudes.clone().unwrap_or_else(|| vec![0.3, 0.4, 0.5]);
        let mut out = Vec::new();
        for &family in &families {
            for &fwhm_bins in &widths {
                for &amplitude in &amps {
                    let c = RocConfig {
                        family,
                        fwhm_bins,
                        amplitude,
                        condition_index: out.len() as u64,
                        ..base.clone()
                    };
                    c.validate()?;
                    out.push(c);
                }
            }
        }
        if out.is_empty() {
            return Err(Error::Config("roc needs at least one family, width and amplitude".into()));
        }
        Ok(out)
    }

    fn roc_base(&self, mut c: RocConfig) -> Result<RocConfig> {
        c.n_mc = self.n_mc.unwrap_or(c.n_mc);
        c.n_repeats = self.n_repeats.unwrap_or(c.n_repeats);
        c.tau_min = self.tau_min.unwrap_or(c.tau_min);
        c.tau_max = self.tau_max.unwrap_or(c.tau_max);
        c.tau_step = self.tau_step.unwrap_or(c.tau_step);
        c.sigma = self.sigma.unwrap_or(c.sigma);
        c.eta = self.eta();
        c.grid = self.grid(c.grid)?;
        c.base_seed = self.base_seed.unwrap_or(c.base_seed);
        c.asnr_score = self.asnr_score.unwrap_or(c.asnr_score);
        c.voigt = self.voigt.unwrap_or(c.voigt);
        Ok(c)
    }

    /// Density configuration and histogram bin width. Defaults to a 0.3
    /// amplitude Gaussian with `b_G = 0.5` and 10⁵ trials.
    pub fn density(&self) -> Result<(RocConfig, f64)> {
        self.reject("thresholds", &self.thresholds)?;
        self.reject("tau_min", &self.tau_min)?;
        self.reject("tau_max", &self.tau_max)?;
        self.reject("tau_step", &self.tau_step)?;
        self.reject("n_repeats", &self.n_repeats)?;
        let mut c = self.roc_base(RocConfig {
            n_mc: 100_000,
            n_repeats: 1,
            ..RocConfig::default()
        })?;
        c.family = single(&self.families, "families", c.family)?;
        c.amplitude = single(&self.amplitudes, "amplitudes", 0.3)?;
        let default_bins = DENSITY_B_GAUSS * GAUSS_FWHM_FACTOR / c.grid.spacing();
        c.fwhm_bins = single(&self.fwhm_bins, "fwhm_bins", default_bins)?;
        c.validate()?;
        let bw = self.bin_width.unwrap_or(0.1);
        if !(bw > 0.0 && bw.is_finite()) {
            return Err(Error::param("bin_width", "must be positive"));
        }
        Ok((c, bw))
    }

    pub fn sweep2d(&self) -> Result<Sweep2dConfig> {
        self.reject("thresholds", &self.thresholds)?;
        self.reject("n_repeats", &self.n_repeats)?;
        self.reject("tau_min", &self.tau_min)?;
        self.reject("tau_max", &self.tau_max)?;
        self.reject("tau_step", &self.tau_step)?;
        self.reject("asnr_score", &self.asnr_score)?;
        self.reject("bin_width", &self.bin_width)?;
        let mut c = Sweep2dConfig::default();
        if let Some(v) = &self.families {
            c.families = v.clone();
        }
        if let Some(v) = &self.fwhm_bins {
            c.widths = v.clone();
        }
        if let Some(v) = &self.amplitudes {
            c.amplitudes = v.clone();
        }
        c.n_mc = self.n_mc.unwrap_or(c.n_mc);
        c.sigma = self.sigma.unwrap_or(c.sigma);
        c.eta = self.eta();
        c.grid = self.grid(c.grid)?;
        debug_assert_eq!(c.grid.dim(), Dim::Two);
        c.base_seed = self.base_seed.unwrap_or(c.base_seed);
        c.voigt = self.voigt.unwrap_or(c.voigt);
        if !(c.eta > 0.0 && c.eta < 1.0) {
            return Err(Error::param("eta", "must lie in (0, 1)"));
        }
        Ok(c)
    }

    /// Threshold for the analytic coefficient table.
    pub fn gamma_table(&self) -> Result<f64> {
        let eta = self.eta();
        if !(eta > 0.0 && eta < 1.0) {
            return Err(Error::param("eta", format!("must lie in (0, 1), got {eta}")));
        }
        Ok(eta)
    }
}

fn single<T: Copy>(v: &Option<Vec<T>>, name: &'static str, default: T) -> Result<T> {
    match v.as_deref() {
        None => Ok(default),
        Some([x]) => Ok(*x),
        Some(_) => Err(Error::param(name, "density takes exactly one value")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unknown_fields() {
        assert!(ExperimentConfig::from_json(r#"{"n_mcc": 3}"#).is_err());
        assert!(ExperimentConfig::from_json(r#"{"experiment": "amp-sweep", "n_mc": 3}"#).is_ok());
        assert!(ExperimentConfig::from_json(r#"{"experiment": "bogus"}"#).is_err());
    }

    #[test]
    fn flags_override_file() {
        let file = ExperimentConfig::from_json(r#"{"n_mc": 10, "base_seed": 7}"#).unwrap();
        let flags = ExperimentConfig {
            n_mc: Some(20),
            ..Default::default()
        };
        let m = file.merge(&flags);
        assert_eq!(m.n_mc, Some(20));
        assert_eq!(m.base_seed, Some(7));
    }

    #[test]
    fn defaults_resolve() {
        let c = ExperimentConfig::default().amp_sweep().unwrap();
        assert_eq!(c.fwhm_bins, vec![3.0, 10.0, 50.0]);
        assert_eq!(c.n_mc, 2000);
        let r = ExperimentConfig::default().roc().unwrap();
        assert_eq!(r.len(), 18);
        assert_eq!(r[17].condition_index, 17);
        let (d, bw) = ExperimentConfig::default().density().unwrap();
        assert!((d.fwhm_bins - 117.741).abs() < 1e-3);
        assert_eq!(bw, 0.1);
        assert_eq!(ExperimentConfig::default().sweep2d().unwrap().grid.points_per_axis(), 101);
    }

    #[test]
    fn invalid_values_are_config_errors() {
        let bad = ExperimentConfig {
            grid_spacing: Some(0.3),
            grid_extent: Some(1.0),
            ..Default::default()
        };
        assert!(bad.amp_sweep().unwrap_err().is_config());
        let bad = ExperimentConfig {
            tau_step: Some(-1.0),
            ..Default::default()
        };
        assert!(bad.roc().unwrap_err().is_config());
        let bad = ExperimentConfig {
            tau_step: Some(0.1),
            ..Default::default()
        };
        assert!(bad.amp_sweep().unwrap_err().is_config());
    }
}
