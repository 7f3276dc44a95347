//! Equal-parameter Voigt profiles matched to a target FWHM.
//!
//! ```text
//! cargo run --example voigt_matching
//! ```

use asnr_lab::lineshape::{build_voigt, measure_fwhm, width_params, WidthParams};
use asnr_lab::{Family, SpectralGrid, VoigtConfig};

fn main() -> asnr_lab::Result<()> {
    let grid = SpectralGrid::default_1d();
    let cfg = VoigtConfig::default();
    for bins in [3.0, 10.0, 50.0, 117.74] {
        let fwhm = bins * grid.spacing();
        let WidthParams::Voigt { b_vg, b_vl } = width_params(Family::Voigt, fwhm, cfg.fine_step(grid.spacing()), &cfg)? else {
            unreachable!()
        };
        let (s, kernel) = build_voigt(&grid, 1.0, b_vg, b_vl, 0.0, &cfg)?;
        let measured = measure_fwhm(&s, grid.spacing()).unwrap_or(f64::NAN);
        println!(
            "target {fwhm:.4}: b = {b_vg:.5} (fwhm/b {:.3}), kernel fwhm {:.5}, sampled fwhm {measured:.5}, area {:.5}",
            fwhm / b_vg,
            kernel.fwhm().unwrap_or(f64::NAN),
            kernel.area(1.0)
        );
    }
    Ok(())
}
