//! Volume SNR of separable 2D peaks on a 101 × 101 grid.
//!
//! ```text
//! cargo run --release --example volume_snr_2d
//! ```

use asnr_lab::experiments::{sweep_2d, Sweep2dConfig};

fn main() -> asnr_lab::Result<()> {
    let cfg = Sweep2dConfig {
        widths: vec![1.0, 5.0, 10.0, 20.0],
        amplitudes: vec![1.0, 5.0],
        ..Sweep2dConfig::default()
    };
    for s in sweep_2d(&cfg)? {
        println!("{}", s.family);
        for c in &s.cells {
            println!(
                "  width {:>2} px, amp {}: N_ROI {:>3}  pSNR {:.3}  vSNR {:.3}",
                c.width_px, c.amplitude, c.n_roi, c.mean_psnr, c.mean_vsnr
            );
        }
        println!("  enhancement {:.2}", s.enhancement());
    }
    Ok(())
}
