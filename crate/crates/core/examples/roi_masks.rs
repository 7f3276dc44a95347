//! Regions of interest of 1D and 2D templates at several thresholds.
//!
//! ```text
//! cargo run --example roi_masks
//! ```

use asnr_lab::lineshape::eval_2d;
use asnr_lab::{extract_roi, extract_roi_2d, Family, LineshapeSpec, SpectralGrid, VoigtConfig};

fn main() -> asnr_lab::Result<()> {
    let cfg = VoigtConfig::default();
    let grid = SpectralGrid::default_1d();
    for f in Family::ALL {
        let s = LineshapeSpec::from_bins(f, 1.0, 50.0, &grid).evaluate(&grid, &cfg)?;
        let sizes: Vec<String> = [0.1, 0.25, 0.5, 0.75, 0.9]
            .iter()
            .map(|&eta| Ok(format!("{eta}:{}", extract_roi(&s, eta)?.n_roi())))
            .collect::<asnr_lab::Result<_>>()?;
        println!("{f:<11} 50 bins  {}", sizes.join("  "));
    }

    let g2 = SpectralGrid::default_2d();
    for f in Family::ALL {
        let spec = LineshapeSpec::from_bins(f, 1.0, 10.0, &g2);
        let s = eval_2d(&g2, &spec, &cfg)?;
        let roi = extract_roi_2d(&s, g2.points_per_axis(), 0.5)?;
        println!("{f:<11} 2D 10 px  N_ROI {}", roi.n_roi());
    }
    Ok(())
}
