//! Noise-only statistics: pSNR follows a half-normal (mean sqrt(2/π)) and
//! aSNR a standard normal, whatever the ROI size.
//!
//! ```text
//! cargo run --release --example null_calibration -- 100000
//! ```

use asnr_lab::experiments::Condition;
use asnr_lab::stats::Summary;
use asnr_lab::{Family, NoiseModel, SpectralGrid, VoigtConfig};

fn main() -> asnr_lab::Result<()> {
    let n_mc: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(100_000);
    let grid = SpectralGrid::default_1d();
    let noise = NoiseModel::unit(42);
    println!("expected: mean pSNR {:.4}, aSNR mean 0 variance 1", (2.0 / std::f64::consts::PI).sqrt());
    for bins in [3.0, 50.0] {
        let cond = Condition::prepare(Family::Gaussian, bins, &grid, 0.5, &VoigtConfig::default())?;
        let s = cond.sample(&[0.0], &noise, 0, n_mc)?;
        let p = Summary::of(&s.psnr[0]);
        let a = Summary::of(&s.asnr[0]);
        println!(
            "{bins:>3} bins, N_ROI {:>3}: pSNR mean {:.4}  aSNR mean {:+.4} var {:.4}",
            cond.roi.n_roi(),
            p.mean,
            a.mean,
            a.variance()
        );
    }
    Ok(())
}
