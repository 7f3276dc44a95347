//! ROC curves and AUC for pSNR and aSNR at sub-critical amplitudes.
//!
//! ```text
//! cargo run --release --example roc_analysis
//! ```

use asnr_lab::roc::{run_roc, RocConfig};
use asnr_lab::Family;

fn main() -> asnr_lab::Result<()> {
    println!("{:<11} {:>5} {:>4} {:>14} {:>14}", "family", "width", "amp", "AUC pSNR", "AUC aSNR");
    let mut index = 0;
    for family in [Family::Gaussian, Family::Lorentzian] {
        for fwhm_bins in [3.0, 10.0, 50.0] {
            for amplitude in [0.3, 0.5] {
                let cfg = RocConfig {
                    family,
                    fwhm_bins,
                    amplitude,
                    n_repeats: 3,
                    condition_index: index,
                    ..RocConfig::default()
                };
                index += 1;
                let r = run_roc(&cfg)?;
                let (p, a) = (r.auc_psnr(), r.auc_asnr());
                println!(
                    "{:<11} {:>5} {:>4} {:>7.4}±{:.4} {:>7.4}±{:.4}",
                    family, fwhm_bins, amplitude, p.mean, p.std, a.mean, a.std
                );
            }
        }
    }
    Ok(())
}
