//! Mean aSNR / mean pSNR as the peak widens from 1 to 50 bins.
//!
//! ```text
//! cargo run --release --example width_sweep
//! ```

use asnr_lab::experiments::{width_sweep, SweepConfig};

fn main() -> asnr_lab::Result<()> {
    let cfg = SweepConfig {
        fwhm_bins: vec![1.0, 2.0, 5.0, 10.0, 20.0, 50.0],
        n_repeats: 3,
        ..SweepConfig::width_sweep_default()
    };
    let sweep = width_sweep(&cfg)?;
    println!("{:<11} {:>4} {:>5} {:>9} {:>9} {:>7}", "family", "amp", "width", "pSNR", "aSNR", "ratio");
    for s in sweep.summaries() {
        println!(
            "{:<11} {:>4} {:>5} {:>9.4} {:>9.4} {:>7.3}",
            s.family, s.amplitude, s.fwhm_bins, s.mean_psnr, s.mean_asnr, s.ratio.mean
        );
    }
    Ok(())
}
