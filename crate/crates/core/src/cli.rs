//! Command-line front end.
//!
//! Exit codes: 0 on success, 2 on invalid configuration or usage, 3 on a
//! numerical failure. `ASNR_LAB_THREADS` caps the worker count.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::Value;

use crate::config::{Experiment, ExperimentConfig};
use crate::error::{Error, Result};
use crate::experiments::{amplitude_sweep, sweep_2d, width_sweep};
use crate::lineshape::Family;
use crate::roc::{density_experiment, run_roc, AsnrScore};
use crate::table::{
    critical_table, density_table, detection_curve_table, emit_table, enhancement_table, gamma_table,
    ratio_summary_table, roc_curve_table, roc_summary_table, surface_table, width_sweep_table, Format, ResultTable,
};

pub const THREADS_ENV: &str = "ASNR_LAB_THREADS";

#[derive(Debug, Parser)]
#[command(name = "asnr-lab", version, about = "Peak vs area SNR detection experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Detection probability vs amplitude and critical amplitudes.
    AmpSweep(CommonArgs),
    /// Mean statistics and their ratio vs FWHM.
    WidthSweep(CommonArgs),
    /// ROC curves and AUC under H0/H1.
    Roc(CommonArgs),
    /// Densities of pSNR and aSNR under H0/H1.
    Density(CommonArgs),
    /// 2D pSNR / vSNR surfaces over width and amplitude.
    Sweep2d(CommonArgs),
    /// Analytic improvement-factor coefficients.
    GammaTable(CommonArgs),
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// JSON config file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long = "family", value_delimiter = ',')]
    families: Option<Vec<Family>>,
    #[arg(long, value_delimiter = ',')]
    fwhm_bins: Option<Vec<f64>>,
    #[arg(long = "amplitudes", visible_alias = "amplitude", value_delimiter = ',')]
    amplitudes: Option<Vec<f64>>,
    #[arg(long = "threshold", visible_alias = "thresholds", value_delimiter = ',')]
    thresholds: Option<Vec<f64>>,
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long)]
    n_mc: Option<usize>,
    #[arg(long = "repeats")]
    n_repeats: Option<usize>,
    #[arg(long = "seed")]
    base_seed: Option<u64>,
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long)]
    grid_spacing: Option<f64>,
    #[arg(long)]
    grid_extent: Option<f64>,
    #[arg(long)]
    tau_min: Option<f64>,
    #[arg(long)]
    tau_max: Option<f64>,
    #[arg(long)]
    tau_step: Option<f64>,
    #[arg(long, value_parser = parse_score)]
    asnr_score: Option<AsnrScore>,
    #[arg(long)]
    bin_width: Option<f64>,
    #[arg(long = "out")]
    output_dir: Option<PathBuf>,
    #[arg(long = "format")]
    output_format: Option<Format>,
}

fn parse_score(s: &str) -> std::result::Result<AsnrScore, String> {
    match s {
        "magnitude" | "abs" => Ok(AsnrScore::Magnitude),
        "signed" => Ok(AsnrScore::Signed),
        other => Err(format!("unknown score `{other}` (magnitude, signed)")),
    }
}

impl CommonArgs {
    fn into_config(self, experiment: Experiment) -> (Option<PathBuf>, ExperimentConfig) {
        let cfg = ExperimentConfig {
            experiment: Some(experiment),
            families: self.families,
            fwhm_bins: self.fwhm_bins,
            amplitudes: self.amplitudes,
            thresholds: self.thresholds,
            n_mc: self.n_mc,
            n_repeats: self.n_repeats,
            sigma: self.sigma,
            eta: self.eta,
            grid_spacing: self.grid_spacing,
            grid_extent: self.grid_extent,
            tau_min: self.tau_min,
            tau_max: self.tau_max,
            tau_step: self.tau_step,
            asnr_score: self.asnr_score,
            bin_width: self.bin_width,
            voigt: None,
            base_seed: self.base_seed,
            output_dir: self.output_dir,
            output_format: self.output_format,
        };
        (self.config, cfg)
    }
}

/// Runs the CLI on `argv` (program name first) and returns the exit code.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let (experiment, args) = match cli.command {
        Command::AmpSweep(a) => (Experiment::AmpSweep, a),
        Command::WidthSweep(a) => (Experiment::WidthSweep, a),
        Command::Roc(a) => (Experiment::Roc, a),
        Command::Density(a) => (Experiment::Density, a),
        Command::Sweep2d(a) => (Experiment::Sweep2d, a),
        Command::GammaTable(a) => (Experiment::GammaTable, a),
    };
    let (file, flags) = args.into_config(experiment);
    match resolve(file.as_deref(), &flags).and_then(|cfg| with_threads(|| execute(&cfg))) {
        Ok(written) => {
            for p in written {
                println!("{}", p.display());
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    if e.is_config() {
        2
    } else {
        3
    }
}

fn resolve(file: Option<&Path>, flags: &ExperimentConfig) -> Result<ExperimentConfig> {
    let base = match file {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default(),
    };
    Ok(base.merge(flags))
}

fn with_threads<R: Send>(f: impl FnOnce() -> Result<R> + Send) -> Result<R> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => {
            let n: usize = v
                .trim()
                .parse()
                .ok()
                .filter(|&n| n > 0)
                .ok_or_else(|| Error::Config(format!("{THREADS_ENV} must be a positive integer, got `{v}`")))?;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
            pool.install(f)
        }
        Err(_) => f(),
    }
}

/// Compact label for a number in file names: integers without a
/// fractional part, other values with at most three decimals.
pub fn label(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{v:.0}")
    } else {
        let s = format!("{v:.3}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

struct Emitter {
    dir: PathBuf,
    format: Format,
    meta: serde_json::Map<String, Value>,
    start: Instant,
    written: Vec<PathBuf>,
}

impl Emitter {
    fn new(cfg: &ExperimentConfig, experiment: Experiment, resolved: &impl Serialize, seed: u64) -> Result<Self> {
        let mut meta = serde_json::Map::new();
        meta.insert("tool_version".into(), env!("CARGO_PKG_VERSION").into());
        meta.insert("experiment".into(), experiment.name().into());
        meta.insert("seed".into(), seed.into());
        meta.insert(
            "config".into(),
            serde_json::to_value(resolved).map_err(|e| Error::Config(e.to_string()))?,
        );
        Ok(Self {
            dir: cfg.output_dir().join(experiment.name()),
            format: cfg.format(),
            meta,
            start: Instant::now(),
            written: Vec::new(),
        })
    }

    fn emit(&mut self, mut table: ResultTable, stem: &str) -> Result<()> {
        for (k, v) in &self.meta {
            table.meta.insert(k.clone(), v.clone());
        }
        table.set_meta("wall_time_s", self.start.elapsed().as_secs_f64());
        let path = self.dir.join(format!("{stem}.{}", self.format.extension()));
        emit_table(&table, self.format, &path)?;
        self.written.push(path);
        Ok(())
    }
}

/// Runs the configured experiment and writes its tables. Returns the paths
/// written.
pub fn execute(cfg: &ExperimentConfig) -> Result<Vec<PathBuf>> {
    let experiment = cfg.experiment()?;
    let mut out;
    match experiment {
        Experiment::AmpSweep => {
            let c = cfg.amp_sweep()?;
            out = Emitter::new(cfg, experiment, &c, c.base_seed)?;
            let sweep = amplitude_sweep(&c)?;
            for &family in &c.families {
                for &w in &c.fwhm_bins {
                    for &t in &c.thresholds {
                        let curves: Vec<_> = sweep
                            .curves
                            .iter()
                            .filter(|k| k.family == family && k.fwhm_bins == w && k.threshold == t)
                            .cloned()
                            .collect();
                        out.emit(detection_curve_table(&curves), &format!("{family}_{}_tau{}", label(w), label(t)))?;
                    }
                }
            }
            for row in sweep.critical.iter().filter(|r| !(r.psnr.in_range() && r.asnr.in_range())) {
                eprintln!(
                    "warning: {} width {} tau {}: 50% crossing outside the amplitude range in some repeats",
                    row.family,
                    label(row.fwhm_bins),
                    label(row.threshold)
                );
            }
            out.emit(critical_table(&sweep.critical), "table1_like")?;
        }
        Experiment::WidthSweep => {
            let c = cfg.width_sweep()?;
            out = Emitter::new(cfg, experiment, &c, c.base_seed)?;
            let sweep = width_sweep(&c)?;
            for &family in &c.families {
                for &a in &c.amplitudes {
                    let pts: Vec<_> = sweep
                        .points
                        .iter()
                        .filter(|p| p.family == family && p.amplitude == a)
                        .cloned()
                        .collect();
                    out.emit(width_sweep_table(&pts), &format!("{family}_all_amp{}", label(a)))?;
                }
            }
            out.emit(ratio_summary_table(&sweep.summaries()), "ratio_summary")?;
        }
        Experiment::Roc => {
            let configs = cfg.roc()?;
            out = Emitter::new(cfg, experiment, &configs, configs[0].base_seed)?;
            let mut results = Vec::with_capacity(configs.len());
            for c in &configs {
                let r = run_roc(c)?;
                out.emit(
                    roc_curve_table(&r),
                    &format!("{}_{}_amp{}", c.family, label(c.fwhm_bins), label(c.amplitude)),
                )?;
                results.push(r);
            }
            out.emit(roc_summary_table(&results), "roc")?;
        }
        Experiment::Density => {
            let (c, bw) = cfg.density()?;
            out = Emitter::new(cfg, experiment, &serde_json::json!({"roc": c, "bin_width": bw}), c.base_seed)?;
            let panels = density_experiment(&c, bw)?;
            out.emit(
                density_table(&panels),
                &format!("{}_{}_amp{}", c.family, label(c.fwhm_bins), label(c.amplitude)),
            )?;
        }
        Experiment::Sweep2d => {
            let c = cfg.sweep2d()?;
            out = Emitter::new(cfg, experiment, &c, c.base_seed)?;
            let surfaces = sweep_2d(&c)?;
            for s in &surfaces {
                out.emit(surface_table(std::slice::from_ref(s)), &format!("{}_surface", s.family))?;
            }
            out.emit(enhancement_table(&surfaces), "enhancement")?;
        }
        Experiment::GammaTable => {
            let eta = cfg.gamma_table()?;
            out = Emitter::new(cfg, experiment, &serde_json::json!({"eta": eta}), cfg.base_seed.unwrap_or(0))?;
            out.emit(gamma_table(eta)?, &format!("gamma_eta{}", label(eta)))?;
        }
    }
    Ok(out.written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels() {
        assert_eq!(label(50.0), "50");
        assert_eq!(label(0.3), "0.3");
        assert_eq!(label(117.741_001), "117.741");
        assert_eq!(label(2.5), "2.5");
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run_cli(["asnr-lab", "nope"]), 2);
        assert_eq!(run_cli(["asnr-lab", "roc", "--n-mc", "x"]), 2);
        assert_eq!(run_cli(["asnr-lab", "--help"]), 0);
    }
}
