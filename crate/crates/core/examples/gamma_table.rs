//! Analytic improvement-factor coefficients `γ / sqrt(b/Δx)` and the
//! discrete `γ` of templates on the default grid.
//!
//! ```text
//! cargo run --example gamma_table
//! ```

use asnr_lab::detection::{gamma_coefficients, gamma_discrete};
use asnr_lab::{extract_roi, Family, LineshapeSpec, SpectralGrid, VoigtConfig};

fn main() -> asnr_lab::Result<()> {
    println!("{:<11} {:>8} {:>10} {:>10}", "family", "eta", "per sqrt b", "per sqrt N");
    for eta in [0.25, 0.5, 0.75] {
        for f in Family::ALL {
            let c = gamma_coefficients(f, eta)?;
            println!("{:<11} {:>8} {:>10.4} {:>10.4}", f, eta, c.per_sqrt_b, c.per_sqrt_n);
        }
    }

    let grid = SpectralGrid::default_1d();
    println!("\ndiscrete gamma on the default grid (eta 0.5)");
    for bins in [3.0, 10.0, 50.0] {
        let row: Vec<String> = Family::ALL
            .iter()
            .map(|&f| {
                let s = LineshapeSpec::from_bins(f, 1.0, bins, &grid).evaluate(&grid, &VoigtConfig::default())?;
                let roi = extract_roi(&s, 0.5)?;
                Ok(format!("{f} {:.4} (N={})", gamma_discrete(&s, &roi)?, roi.n_roi()))
            })
            .collect::<asnr_lab::Result<_>>()?;
        println!("{bins:>4} bins: {}", row.join("  "));
    }
    Ok(())
}
