//! Peak, area and volume detection statistics, and the noiseless
//! improvement factor of the area statistic over the peak statistic.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lineshape::Family;
use crate::roi::RoiMask;
use crate::voigt::VoigtKernel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StatisticKind {
    Psnr,
    Asnr,
    Vsnr,
}

impl StatisticKind {
    pub fn name(&self) -> &'static str {
        match self {
            StatisticKind::Psnr => "psnr",
            StatisticKind::Asnr => "asnr",
            StatisticKind::Vsnr => "vsnr",
        }
    }
}

impl fmt::Display for StatisticKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for StatisticKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "psnr" => Ok(Self::Psnr),
            "asnr" => Ok(Self::Asnr),
            "vsnr" => Ok(Self::Vsnr),
            other => Err(Error::Config(format!("unknown statistic `{other}`"))),
        }
    }
}

/// A statistic value tagged with its kind. Peak values are non-negative;
/// area and volume values are signed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectionStatistic {
    pub kind: StatisticKind,
    pub value: f64,
}

fn check_sigma(sigma: f64) -> Result<()> {
    if sigma > 0.0 && sigma.is_finite() {
        Ok(())
    } else {
        Err(Error::param("sigma", format!("must be positive, got {sigma}")))
    }
}

/// `|y[peak_bin]| / sigma`.
pub fn psnr(y: &[f64], peak_bin: usize, sigma: f64) -> Result<f64> {
    check_sigma(sigma)?;
    let v = y
        .get(peak_bin)
        .ok_or_else(|| Error::param("peak_bin", format!("{peak_bin} is outside the observation")))?;
    Ok(v.abs() / sigma)
}

/// Signed ROI sum over `sigma · sqrt(N_ROI)`. The bin width cancels, so only
/// the bin sum enters.
pub fn asnr(y: &[f64], roi: &RoiMask, sigma: f64) -> Result<f64> {
    check_sigma(sigma)?;
    if roi.indices.is_empty() {
        return Err(Error::EmptyMask);
    }
    if roi.indices.last().is_some_and(|&i| i >= y.len()) {
        return Err(Error::param("roi", "mask extends past the observation"));
    }
    let sum: f64 = roi.indices.iter().map(|&i| y[i]).sum();
    Ok(sum / (sigma * (roi.n_roi() as f64).sqrt()))
}

/// 2D counterpart of [`asnr`] over a pixel mask of a row-major matrix.
pub fn vsnr(y: &[f64], roi: &RoiMask, sigma: f64) -> Result<f64> {
    asnr(y, roi, sigma)
}

/// Discrete noiseless improvement factor `Σ_ROI s / (|s(peak)| · sqrt(N_ROI))`.
pub fn gamma_discrete(clean: &[f64], roi: &RoiMask) -> Result<f64> {
    let peak = clean[roi.peak].abs();
    if peak == 0.0 {
        return Err(Error::EmptyTemplate);
    }
    Ok(asnr(clean, roi, 1.0)? / peak)
}

/// Continuous improvement factor at threshold `eta` for width parameter
/// `b` (Gaussian `b_G`, Lorentzian `b_L`, equal-parameter Voigt `b`):
///
/// `γ = ∫_{-w/2}^{w/2} s(x) dx / (s(0) · sqrt(w · Δx)) = C(eta) · sqrt(b / Δx)`.
pub fn gamma_analytic(family: Family, b_over_dx: f64, eta: f64) -> Result<f64> {
    if !(b_over_dx > 0.0 && b_over_dx.is_finite()) {
        return Err(Error::param("b_over_dx", format!("must be positive, got {b_over_dx}")));
    }
    Ok(gamma_coefficients(family, eta)?.per_sqrt_b * b_over_dx.sqrt())
}

/// `γ / sqrt(b/Δx)` and `γ / sqrt(w/Δx)` at a given threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaCoefficients {
    pub eta: f64,
    /// ROI width in units of `b`.
    pub width_over_b: f64,
    /// Signal area inside the ROI in units of `h · b`.
    pub area_over_hb: f64,
    pub per_sqrt_b: f64,
    /// Per-bin form: `γ ≈ per_sqrt_n · sqrt(N_ROI)` with `N_ROI = w / Δx`.
    pub per_sqrt_n: f64,
}

pub fn gamma_coefficients(family: Family, eta: f64) -> Result<GammaCoefficients> {
    if !(eta > 0.0 && eta < 1.0) {
        return Err(Error::param("eta", format!("must lie in (0, 1), got {eta}")));
    }
    let (width, area) = match family {
        Family::Gaussian => {
            let u = (-2.0 * eta.ln()).sqrt();
            let area = simpson(|t| (-0.5 * t * t).exp(), -u, u, 2000);
            (2.0 * u, area)
        }
        Family::Lorentzian => {
            let r = ((1.0 - eta) / eta).sqrt();
            (2.0 * r, 2.0 * r.atan())
        }
        Family::Voigt => voigt_roi_area(eta)?,
    };
    Ok(GammaCoefficients {
        eta,
        width_over_b: width,
        area_over_hb: area,
        per_sqrt_b: area / width.sqrt(),
        per_sqrt_n: area / width,
    })
}

/// Equal-parameter Voigt on a fine lattice in units of `b`.
fn voigt_roi_area(eta: f64) -> Result<(f64, f64)> {
    const STEP: f64 = 1.0 / 256.0;
    let kernel = VoigtKernel::build(1.0, 1.0, STEP, 20.0, 1e-2)?;
    let p = &kernel.normalized_profile;
    let c = p.len() / 2;
    let out = (c..p.len()).find(|&i| p[i] < eta).ok_or(Error::NoConvergence {
        fwhm: f64::NAN,
        reason: format!("voigt profile does not fall below {eta} inside its span"),
    })?;
    let frac = (p[out - 1] - eta) / (p[out - 1] - p[out]);
    let half_width = (out - 1 - c) as f64 * STEP + frac * STEP;
    // Trapezoid over whole samples from the centre, then the partial step
    // up to the crossing.
    let mut half_area = 0.0;
    for i in c..out - 1 {
        half_area += 0.5 * (p[i] + p[i + 1]) * STEP;
    }
    half_area += 0.5 * (p[out - 1] + eta) * frac * STEP;
    Ok((2.0 * half_width, 2.0 * half_area))
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let n = panels + panels % 2;
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + i as f64 * h);
    }
    acc * h / 3.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{Dim, SpectralGrid};
    use crate::lineshape::{eval_gaussian, GAUSS_FWHM_FACTOR};
    use crate::roi::extract_roi;

    #[test]
    fn psnr_is_absolute() {
        assert_eq!(psnr(&[0.0, -2.5, 0.0], 1, 1.0).unwrap(), 2.5);
        assert_eq!(psnr(&[3.0], 0, 2.0).unwrap(), 1.5);
        assert!(psnr(&[1.0], 0, 0.0).is_err());
        assert!(psnr(&[1.0], 3, 1.0).is_err());
    }

    #[test]
    fn noiseless_gaussian_values() {
        let g = SpectralGrid::default_1d();
        let s = eval_gaussian(&g, 3.0, 1.0, 0.0);
        assert_eq!(psnr(&s, g.center_index(), 1.0).unwrap(), 3.0);

        let s = eval_gaussian(&g, 0.3, 0.5, 0.0);
        let roi = extract_roi(&s, 0.5).unwrap();
        let a = asnr(&s, &roi, 1.0).unwrap();
        assert!((a - 2.638).abs() < 0.02, "{a}");
    }

    #[test]
    fn one_bin_mask_is_signed_peak() {
        let y = [0.5, -1.25, 2.0];
        let m = RoiMask::single(1, Dim::One, 3);
        assert_eq!(asnr(&y, &m, 1.0).unwrap(), -1.25);
        assert_eq!(vsnr(&y, &m, 2.0).unwrap(), -0.625);
    }

    #[test]
    fn asnr_errors() {
        let empty = RoiMask {
            indices: vec![],
            ..RoiMask::single(0, Dim::One, 1)
        };
        assert!(matches!(asnr(&[1.0], &empty, 1.0), Err(Error::EmptyMask)));
        assert!(asnr(&[1.0], &RoiMask::single(0, Dim::One, 1), -1.0).is_err());
        assert!(asnr(&[1.0], &RoiMask::single(4, Dim::One, 1), 1.0).is_err());
    }

    #[test]
    fn gamma_reference_values() {
        let g = gamma_analytic(Family::Gaussian, 100.0, 0.5).unwrap();
        assert!((g - 12.43).abs() < 0.01, "{g}");
        let l = gamma_analytic(Family::Lorentzian, 100.0, 0.5).unwrap();
        assert!((l - 11.107).abs() < 0.01, "{l}");
        let cg = gamma_coefficients(Family::Gaussian, 0.5).unwrap();
        let cl = gamma_coefficients(Family::Lorentzian, 0.5).unwrap();
        assert!((cg.per_sqrt_n - 0.81).abs() < 0.005);
        assert!((cl.per_sqrt_n - 0.785).abs() < 0.001);
        assert!(gamma_analytic(Family::Gaussian, 1.0, 1.0).is_err());
        assert!(gamma_analytic(Family::Gaussian, 0.0, 0.5).is_err());
    }

    #[test]
    fn voigt_gamma_is_intermediate() {
        let cg = gamma_coefficients(Family::Gaussian, 0.5).unwrap();
        let cl = gamma_coefficients(Family::Lorentzian, 0.5).unwrap();
        let cv = gamma_coefficients(Family::Voigt, 0.5).unwrap();
        assert!(cv.per_sqrt_n < cg.per_sqrt_n && cv.per_sqrt_n > cl.per_sqrt_n, "{cv:?}");
    }

    #[test]
    fn discrete_gamma_tracks_analytic() {
        let g = SpectralGrid::default_1d();
        for bins in [10.0, 25.0, 50.0] {
            let b = bins * 0.01 / GAUSS_FWHM_FACTOR;
            let s = eval_gaussian(&g, 1.0, b, 0.0);
            let roi = extract_roi(&s, 0.5).unwrap();
            let d = gamma_discrete(&s, &roi).unwrap();
            let a = gamma_analytic(Family::Gaussian, b / 0.01, 0.5).unwrap();
            assert!((d / a - 1.0).abs() < 0.03, "{bins}: {d} vs {a}");
        }
    }

    #[test]
    fn simpson_exact_for_cubics() {
        let v = simpson(|x| x * x * x + 2.0 * x * x, 0.0, 1.0, 2);
        assert!((v - (0.25 + 2.0 / 3.0)).abs() < 1e-14);
    }
}
