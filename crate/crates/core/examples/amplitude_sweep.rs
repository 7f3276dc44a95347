//! Detection probability vs amplitude and the 50 % critical amplitudes of
//! both statistics.
//!
//! ```text
//! cargo run --release --example amplitude_sweep
//! ```

use asnr_lab::experiments::{amplitude_sweep, SweepConfig};

fn main() -> asnr_lab::Result<()> {
    let cfg = SweepConfig {
        n_repeats: 3,
        ..SweepConfig::default()
    };
    let sweep = amplitude_sweep(&cfg)?;

    let c = &sweep.curves[0];
    println!("{} {} bins, tau {} (repeat 0)", c.family, c.fwhm_bins, c.threshold);
    for p in &c.points {
        println!("  amp {:>3}: P(pSNR) {:.3}  P(aSNR) {:.3}", p.axis, p.prob_psnr, p.prob_asnr);
    }

    println!("\n{:<11} {:>5} {:>4} {:>9} {:>9} {:>7}", "family", "width", "tau", "pSNR", "aSNR", "factor");
    for r in &sweep.critical {
        let flag = if r.psnr.in_range() && r.asnr.in_range() { "" } else { "  (out of range)" };
        println!(
            "{:<11} {:>5} {:>4} {:>9.4} {:>9.4} {:>6.2}x{flag}",
            r.family, r.fwhm_bins, r.threshold, r.psnr.value, r.asnr.value, r.improvement_factor()
        );
    }
    Ok(())
}
