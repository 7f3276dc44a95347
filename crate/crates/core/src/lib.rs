//! Area-based (aSNR) and peak-based (pSNR) detection statistics for
//! spectroscopic lineshapes in additive white Gaussian noise.
//!
//! The crate is organized bottom-up:
//!
//! - [`grid`] and [`noise`]: sampling lattices and counter-based noise streams
//! - [`lineshape`] and [`voigt`]: FWHM-matched Gaussian, Lorentzian and Voigt templates
//! - [`roi`]: half-maximum (or general threshold) regions of interest
//! - [`detection`]: pSNR, aSNR, vSNR and the improvement factor γ
//! - [`experiments`]: Monte Carlo detection probabilities, sweeps and critical amplitudes
//! - [`roc`]: H0/H1 trials, ROC curves, AUC and statistic densities
//! - [`table`], [`config`] and [`cli`]: result tables, JSON configuration and the command line
//!
//! Runnable walkthroughs live in `examples/`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod config;
pub mod detection;
pub mod error;
pub mod experiments;
pub mod grid;
pub mod lineshape;
pub mod noise;
pub mod roc;
pub mod roi;
pub mod stats;
pub mod table;
pub mod voigt;

pub use detection::{asnr, gamma_analytic, psnr, vsnr, StatisticKind};
pub use error::{Error, Result};
pub use grid::{Dim, SpectralGrid};
pub use lineshape::{Family, LineshapeSpec};
pub use noise::{NoiseModel, TrialBatch};
pub use roi::{extract_roi, extract_roi_2d, RoiMask};
pub use voigt::{VoigtConfig, VoigtKernel};
