//! Densities of pSNR and aSNR with and without a weak broad Gaussian
//! (amplitude 0.3, `b_G = 0.5`).
//!
//! ```text
//! cargo run --release --example snr_density
//! ```

use asnr_lab::config::ExperimentConfig;
use asnr_lab::roc::density_experiment;

fn main() -> asnr_lab::Result<()> {
    let (cfg, bin_width) = ExperimentConfig::default().density()?;
    let panels = density_experiment(&cfg, bin_width)?;
    for p in &panels {
        let h = &p.histogram;
        let (mode, _) = h
            .density
            .iter()
            .enumerate()
            .fold((0, f64::MIN), |m, (i, &d)| if d > m.1 { (i, d) } else { m });
        println!(
            "{} {}: mean {:.4} std {:.4}, mode near {:.2}, {} bins",
            p.kind,
            p.hypothesis,
            h.summary.mean,
            h.summary.std,
            h.centers()[mode],
            h.counts.len()
        );
    }
    Ok(())
}
