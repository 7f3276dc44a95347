//! Gaussian, Lorentzian and Voigt templates parameterized by FWHM.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Dim, SpectralGrid};
use crate::voigt::{VoigtConfig, VoigtKernel};

/// `2·sqrt(2·ln 2)`, the Gaussian FWHM in units of `b_G`.
pub const GAUSS_FWHM_FACTOR: f64 = 2.354_820_045_030_949_3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Gaussian,
    Lorentzian,
    Voigt,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::Gaussian, Family::Lorentzian, Family::Voigt];

    pub fn name(&self) -> &'static str {
        match self {
            Family::Gaussian => "gaussian",
            Family::Lorentzian => "lorentzian",
            Family::Voigt => "voigt",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "gaussian" | "gauss" | "g" => Ok(Family::Gaussian),
            "lorentzian" | "lorentz" | "l" => Ok(Family::Lorentzian),
            "voigt" | "v" => Ok(Family::Voigt),
            other => Err(Error::Config(format!("unknown lineshape family `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum WidthParams {
    Gaussian { b_g: f64 },
    Lorentzian { b_l: f64 },
    /// Equal-parameter Voigt, `b_vg == b_vl`.
    Voigt { b_vg: f64, b_vl: f64 },
}

/// Width parameter(s) giving the requested FWHM. For Voigt the common
/// parameter `b = b_vg = b_vl` is found by bisection over `[fwhm/10, fwhm]`
/// on the FWHM measured from the fine-lattice kernel with step `fine_step`.
pub fn width_params(family: Family, fwhm: f64, fine_step: f64, cfg: &VoigtConfig) -> Result<WidthParams> {
    if !(fwhm.is_finite() && fwhm > 0.0) {
        return Err(Error::param("fwhm", format!("must be positive, got {fwhm}")));
    }
    match family {
        Family::Gaussian => Ok(WidthParams::Gaussian {
            b_g: fwhm / GAUSS_FWHM_FACTOR,
        }),
        Family::Lorentzian => Ok(WidthParams::Lorentzian { b_l: fwhm / 2.0 }),
        Family::Voigt => {
            let b = match_voigt_width(fwhm, fine_step, cfg)?;
            Ok(WidthParams::Voigt { b_vg: b, b_vl: b })
        }
    }
}

fn match_voigt_width(fwhm: f64, fine_step: f64, cfg: &VoigtConfig) -> Result<f64> {
    let measure = |b: f64| -> Result<f64> {
        let k = VoigtKernel::build(b, b, fine_step, cfg.span_factor, cfg.edge_limit)?;
        k.fwhm().ok_or_else(|| Error::NoConvergence {
            fwhm,
            reason: "profile has no half-maximum crossing inside the span".into(),
        })
    };
    let (mut lo, mut hi) = (fwhm / 10.0, fwhm);
    let (f_lo, f_hi) = (measure(lo)? - fwhm, measure(hi)? - fwhm);
    if f_lo > 0.0 || f_hi < 0.0 {
        return Err(Error::NoConvergence {
            fwhm,
            reason: format!("target not bracketed (residuals {f_lo:.3e}, {f_hi:.3e})"),
        });
    }
    let tol = 1e-7 * fwhm;
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        let r = measure(mid)? - fwhm;
        if r.abs() <= tol || (hi - lo) < 1e-12 * fwhm {
            return Ok(mid);
        }
        if r < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let b = 0.5 * (lo + hi);
    let r = (measure(b)? - fwhm).abs() / fwhm;
    if r <= 1e-3 {
        Ok(b)
    } else {
        Err(Error::NoConvergence {
            fwhm,
            reason: format!("relative residual {r:.3e} after bisection"),
        })
    }
}

pub fn eval_gaussian(grid: &SpectralGrid, amplitude: f64, b_g: f64, center: f64) -> Vec<f64> {
    grid.axis()
        .into_iter()
        .map(|x| {
            let t = (x - center) / b_g;
            amplitude * (-0.5 * t * t).exp()
        })
        .collect()
}

pub fn eval_lorentzian(grid: &SpectralGrid, amplitude: f64, b_l: f64, center: f64) -> Vec<f64> {
    grid.axis()
        .into_iter()
        .map(|x| {
            let t = (x - center) / b_l;
            amplitude / (1.0 + t * t)
        })
        .collect()
}

pub fn build_voigt(
    grid: &SpectralGrid,
    amplitude: f64,
    b_vg: f64,
    b_vl: f64,
    center: f64,
    cfg: &VoigtConfig,
) -> Result<(Vec<f64>, VoigtKernel)> {
    let kernel = VoigtKernel::with_config(b_vg, b_vl, grid.spacing(), cfg)?;
    let values = grid
        .axis()
        .into_iter()
        .map(|x| amplitude * kernel.value_at(x - center))
        .collect();
    Ok((values, kernel))
}

/// Half-maximum width of a sampled unimodal profile, with both crossings
/// located by linear interpolation between the bracketing samples. `None`
/// when the profile does not fall below half its maximum on both sides.
pub fn measure_fwhm(samples: &[f64], step: f64) -> Option<f64> {
    let (peak_idx, &peak) = samples
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))?;
    if !(peak > 0.0) {
        return None;
    }
    let half = 0.5 * peak;
    let right = (peak_idx + 1..samples.len()).find(|&i| samples[i] < half)?;
    let left = (0..peak_idx).rev().find(|&i| samples[i] < half)?;
    let cross = |inside: usize, outside: usize| {
        let (a, b) = (samples[inside], samples[outside]);
        let frac = (a - half) / (a - b);
        inside as f64 + frac * (outside as f64 - inside as f64)
    };
    Some((cross(right - 1, right) - cross(left + 1, left)) * step)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineshapeSpec {
    pub family: Family,
    pub amplitude: f64,
    /// In grid coordinate units.
    pub fwhm: f64,
    pub center: f64,
    /// Second-axis centre, used in 2D only.
    pub center_y: f64,
    pub dim: Dim,
}

impl LineshapeSpec {
    pub fn new(family: Family, amplitude: f64, fwhm: f64) -> Self {
        Self {
            family,
            amplitude,
            fwhm,
            center: 0.0,
            center_y: 0.0,
            dim: Dim::One,
        }
    }

    /// FWHM given as a (possibly fractional) number of grid bins.
    pub fn from_bins(family: Family, amplitude: f64, fwhm_bins: f64, grid: &SpectralGrid) -> Self {
        Self {
            dim: grid.dim(),
            ..Self::new(family, amplitude, fwhm_bins * grid.spacing())
        }
    }

    pub fn with_amplitude(self, amplitude: f64) -> Self {
        Self { amplitude, ..self }
    }

    pub fn width_params(&self, grid: &SpectralGrid, cfg: &VoigtConfig) -> Result<WidthParams> {
        width_params(self.family, self.fwhm, cfg.fine_step(grid.spacing()), cfg)
    }

    /// 1D template along one axis of `grid`, centred at `center`.
    fn eval_axis(&self, grid: &SpectralGrid, amplitude: f64, center: f64, params: WidthParams, cfg: &VoigtConfig) -> Result<Vec<f64>> {
        Ok(match params {
            WidthParams::Gaussian { b_g } => eval_gaussian(grid, amplitude, b_g, center),
            WidthParams::Lorentzian { b_l } => eval_lorentzian(grid, amplitude, b_l, center),
            WidthParams::Voigt { b_vg, b_vl } => build_voigt(grid, amplitude, b_vg, b_vl, center, cfg)?.0,
        })
    }

    /// Template over the whole grid; row-major `n × n` in 2D.
    pub fn evaluate(&self, grid: &SpectralGrid, cfg: &VoigtConfig) -> Result<Vec<f64>> {
        if !self.amplitude.is_finite() {
            return Err(Error::param("amplitude", "must be finite"));
        }
        let params = self.width_params(grid, cfg)?;
        match grid.dim() {
            Dim::One => self.eval_axis(grid, self.amplitude, self.center, params, cfg),
            Dim::Two => {
                let fx = self.eval_axis(grid, 1.0, self.center, params, cfg)?;
                let fy = self.eval_axis(grid, 1.0, self.center_y, params, cfg)?;
                Ok(separable_product(&fx, &fy, self.amplitude))
            }
        }
    }
}

/// `s(x_i, y_j) = amplitude · fx[i] · fy[j]`, stored at `j * n + i`.
pub fn separable_product(fx: &[f64], fy: &[f64], amplitude: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(fx.len() * fy.len());
    for &vy in fy {
        out.extend(fx.iter().map(|&vx| amplitude * vx * vy));
    }
    out
}

/// 2D separable template; `spec.dim` must be 2 and `grid` two-dimensional.
pub fn eval_2d(grid: &SpectralGrid, spec: &LineshapeSpec, cfg: &VoigtConfig) -> Result<Vec<f64>> {
    if spec.dim != Dim::Two || grid.dim() != Dim::Two {
        return Err(Error::param("dim", "eval_2d needs a 2D spec and grid"));
    }
    spec.evaluate(grid, cfg)
}

/// Trapezoidal integral of samples at uniform `step`.
pub fn trapezoid(samples: &[f64], step: f64) -> f64 {
    match samples.len() {
        0 | 1 => 0.0,
        n => step * (samples.iter().sum::<f64>() - 0.5 * (samples[0] + samples[n - 1])),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn grid() -> SpectralGrid {
        SpectralGrid::default_1d()
    }

    #[test]
    fn width_params_closed_forms() {
        let cfg = VoigtConfig::default();
        match width_params(Family::Gaussian, 2.3548, 0.0025, &cfg).unwrap() {
            WidthParams::Gaussian { b_g } => assert!((b_g - 1.0).abs() < 1e-4),
            other => panic!("{other:?}"),
        }
        assert_eq!(
            width_params(Family::Lorentzian, 2.0, 0.0025, &cfg).unwrap(),
            WidthParams::Lorentzian { b_l: 1.0 }
        );
        assert!(width_params(Family::Gaussian, 0.0, 0.0025, &cfg).is_err());
    }

    #[test]
    fn voigt_matching_hits_target() {
        let cfg = VoigtConfig::default();
        let WidthParams::Voigt { b_vg, b_vl } = width_params(Family::Voigt, 1.0, 0.0025, &cfg).unwrap() else {
            panic!()
        };
        assert_eq!(b_vg, b_vl);
        let k = VoigtKernel::build(b_vg, b_vl, 0.0025, 20.0, 1e-2).unwrap();
        let w = k.fwhm().unwrap();
        assert!((0.999..=1.001).contains(&w), "{w}");
        let olivero = 0.5346 * 2.0 * b_vl + (0.2166 * (2.0 * b_vl).powi(2) + (GAUSS_FWHM_FACTOR * b_vg).powi(2)).sqrt();
        assert!((olivero - 1.0).abs() < 0.02, "{olivero}");
    }

    #[test]
    fn gaussian_points() {
        let g = grid();
        let s = eval_gaussian(&g, 2.0, 1.0, 0.0);
        assert_eq!(s[g.center_index()], 2.0);
        let x_half = (2.0 * std::f64::consts::LN_2).sqrt();
        let one = SpectralGrid::new(Dim::One, x_half, x_half).unwrap();
        let v = eval_gaussian(&one, 1.0, 1.0, 0.0);
        assert!((v[2] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn gaussian_area() {
        let s = eval_gaussian(&grid(), 1.0, 0.5, 0.0);
        let area = trapezoid(&s, 0.01);
        assert!((area - 0.5 * (2.0 * PI).sqrt()).abs() / 1.2533 < 1e-3, "{area}");
    }

    #[test]
    fn lorentzian_points_and_truncated_area() {
        let g = grid();
        let s = eval_lorentzian(&g, 3.0, 1.0, 0.0);
        assert_eq!(s[g.center_index()], 3.0);
        let s1 = eval_lorentzian(&g, 1.0, 1.0, 0.0);
        assert!((s1[g.center_index() + 100] - 0.5).abs() < 1e-12);
        // Tails beyond ±20 carry 2·b_L/20 of the area for b_L = 0.5: about 1.6 %.
        let s = eval_lorentzian(&g, 1.0, 0.5, 0.0);
        let area = trapezoid(&s, 0.01);
        let exact_truncated = 2.0 * 0.5 * (20.0f64 / 0.5).atan();
        assert!((area - exact_truncated).abs() < 1e-5, "{area} vs {exact_truncated}");
        let deficit = 1.0 - area / (PI / 2.0);
        assert!((deficit - 0.0159).abs() < 0.001, "{deficit}");
    }

    #[test]
    fn voigt_degenerates_to_components() {
        let g = grid();
        let cfg = VoigtConfig::default();
        let (v, _) = build_voigt(&g, 1.0, 0.3, 0.3e-6, 0.0, &cfg).unwrap();
        let pure = eval_gaussian(&g, 1.0, 0.3, 0.0);
        for (a, b) in v.iter().zip(&pure) {
            if *b > 1e-6 {
                assert!((a - b).abs() / b < 1e-3);
            }
        }
        let (v, _) = build_voigt(&g, 1.0, 0.3e-6, 0.3, 0.0, &cfg).unwrap();
        let pure = eval_lorentzian(&g, 1.0, 0.3, 0.0);
        let c = g.center_index();
        for i in c - 150..=c + 150 {
            assert!((v[i] - pure[i]).abs() / pure[i] < 1e-3, "i={i}");
        }
    }

    #[test]
    fn voigt_peak_and_area() {
        let g = grid();
        let (v, k) = build_voigt(&g, 1.7, 0.5, 0.5, 0.0, &VoigtConfig::default()).unwrap();
        assert!((v[g.center_index()] - 1.7).abs() <= 1e-6 * 1.7);
        assert!((k.area(1.7) - 1.7 * k.area_unit).abs() < 1e-15);
        let w = measure_fwhm(&v, g.spacing()).unwrap();
        let olivero = 0.5346 + (0.2166 + GAUSS_FWHM_FACTOR.powi(2) * 0.25).sqrt();
        assert!((w - olivero).abs() / olivero < 0.02);
    }

    #[test]
    fn fwhm_measurement_rejects_flat_or_edge() {
        assert_eq!(measure_fwhm(&[1.0, 1.0, 1.0], 1.0), None);
        assert_eq!(measure_fwhm(&[0.0, 0.0], 1.0), None);
        let w = measure_fwhm(&[0.0, 1.0, 0.0], 1.0).unwrap();
        assert!((w - 1.0).abs() < 1e-12);
    }

    #[test]
    fn separable_2d() {
        let g2 = SpectralGrid::new(Dim::Two, 0.1, 5.0).unwrap();
        let cfg = VoigtConfig::default();
        let spec = LineshapeSpec {
            dim: Dim::Two,
            ..LineshapeSpec::new(Family::Gaussian, 5.0, GAUSS_FWHM_FACTOR)
        };
        let s = eval_2d(&g2, &spec, &cfg).unwrap();
        let n = g2.points_per_axis();
        let c = g2.center_index();
        assert!((s[c * n + c] - 5.0).abs() < 1e-12);
        let unit = eval_2d(&g2, &spec.with_amplitude(1.0), &cfg).unwrap();
        // (1, 1) is ten steps along each axis.
        assert!((unit[(c + 10) * n + c + 10] - (-1.0f64).exp()).abs() < 1e-12);
        assert!(eval_2d(&SpectralGrid::default_1d(), &spec, &cfg).is_err());
    }

    #[test]
    fn family_parsing() {
        assert_eq!("Gaussian".parse::<Family>().unwrap(), Family::Gaussian);
        assert_eq!("voigt".parse::<Family>().unwrap(), Family::Voigt);
        assert!("cauchy".parse::<Family>().is_err());
    }
}
