//! Numerically convolved Voigt profile.
//!
//! A unit-peak Gaussian and a unit-peak Lorentzian are sampled on a fine
//! symmetric lattice `[-S, S]` with step `δ`, discretely convolved and scaled
//! by `δ`, then renormalized to a unit maximum. Values on a coarser simulation
//! grid are obtained by linear interpolation of that fine profile.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lineshape::measure_fwhm;

/// Fine-lattice settings. The step is expressed relative to the simulation
/// grid spacing, the span relative to the larger width parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VoigtConfig {
    /// `δ = step_fraction · Δx`.
    pub step_fraction: f64,
    /// `S = span_factor · max(b_G, b_L)`.
    pub span_factor: f64,
    /// Largest admissible normalized profile value at `±S`.
    pub edge_limit: f64,
}

impl Default for VoigtConfig {
    fn default() -> Self {
        Self {
            step_fraction: 0.25,
            span_factor: 20.0,
            edge_limit: 1e-2,
        }
    }
}

impl VoigtConfig {
    pub fn fine_step(&self, spacing: f64) -> f64 {
        self.step_fraction * spacing
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if !(self.step_fraction > 0.0 && self.step_fraction <= 0.25) {
            return Err(Error::param(
                "voigt.step_fraction",
                format!("must lie in (0, 0.25], got {}", self.step_fraction),
            ));
        }
        if !(self.span_factor.is_finite() && self.span_factor > 0.0) {
            return Err(Error::param("voigt.span_factor", "must be positive"));
        }
        if !(self.edge_limit > 0.0 && self.edge_limit < 1.0) {
            return Err(Error::param("voigt.edge_limit", "must lie in (0, 1)"));
        }
        Ok(())
    }
}

/// Peak-normalized Voigt profile sampled at `k · fine_step` for
/// `k = -M..=M`, `M · fine_step = span`.
#[derive(Debug, Clone, PartialEq)]
pub struct VoigtKernel {
    pub fine_step: f64,
    pub span: f64,
    pub b_gauss: f64,
    pub b_lorentz: f64,
    pub normalized_profile: Vec<f64>,
    /// Trapezoidal area of the normalized profile.
    pub area_unit: f64,
}

impl VoigtKernel {
    pub fn build(b_gauss: f64, b_lorentz: f64, fine_step: f64, span_factor: f64, edge_limit: f64) -> Result<Self> {
        for (name, v) in [("b_vg", b_gauss), ("b_vl", b_lorentz), ("fine_step", fine_step)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::param(name, format!("must be positive, got {v}")));
            }
        }
        let half = (span_factor * b_gauss.max(b_lorentz) / fine_step).ceil().max(1.0) as usize;
        let span = half as f64 * fine_step;

        let gauss: Vec<f64> = (0..=half)
            .map(|k| {
                let t = k as f64 * fine_step / b_gauss;
                (-0.5 * t * t).exp()
            })
            .collect();
        let lorentz: Vec<f64> = (0..=2 * half)
            .map(|k| {
                let t = k as f64 * fine_step / b_lorentz;
                1.0 / (1.0 + t * t)
            })
            .collect();

        // Both factors are even, so only k >= 0 is computed and mirrored.
        let mut right = vec![0.0; half + 1];
        for (k, out) in right.iter_mut().enumerate() {
            let mut acc = 0.0;
            for j in -(half as i64)..=(half as i64) {
                let g = gauss[j.unsigned_abs() as usize];
                let h = lorentz[(k as i64 - j).unsigned_abs() as usize];
                acc += g * h;
            }
            *out = acc * fine_step;
        }

        let peak = right.iter().cloned().fold(f64::MIN, f64::max);
        let mut profile = Vec::with_capacity(2 * half + 1);
        profile.extend(right.iter().rev().map(|v| v / peak));
        profile.extend(right.iter().skip(1).map(|v| v / peak));

        let edge = profile[0];
        if edge > edge_limit {
            return Err(Error::VoigtSpan {
                edge,
                limit: edge_limit,
            });
        }

        let n = profile.len();
        let area_unit = fine_step * (profile.iter().sum::<f64>() - 0.5 * (profile[0] + profile[n - 1]));

        Ok(Self {
            fine_step,
            span,
            b_gauss,
            b_lorentz,
            normalized_profile: profile,
            area_unit,
        })
    }

    pub fn with_config(b_gauss: f64, b_lorentz: f64, spacing: f64, cfg: &VoigtConfig) -> Result<Self> {
        cfg.validate()?;
        Self::build(b_gauss, b_lorentz, cfg.fine_step(spacing), cfg.span_factor, cfg.edge_limit)
    }

    fn half_len(&self) -> usize {
        self.normalized_profile.len() / 2
    }

    /// Normalized profile at offset `d` from the centre, linearly
    /// interpolated; zero outside the span.
    pub fn value_at(&self, d: f64) -> f64 {
        let pos = d.abs() / self.fine_step;
        let half = self.half_len();
        if pos > half as f64 {
            return 0.0;
        }
        let lo = pos.floor() as usize;
        let frac = pos - lo as f64;
        let at = |k: usize| self.normalized_profile[half + k.min(half)];
        if frac == 0.0 {
            at(lo)
        } else {
            at(lo) * (1.0 - frac) + at(lo + 1) * frac
        }
    }

    /// FWHM measured on the fine lattice.
    pub fn fwhm(&self) -> Option<f64> {
        measure_fwhm(&self.normalized_profile, self.fine_step)
    }

    pub fn area(&self, amplitude: f64) -> f64 {
        amplitude * self.area_unit
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn olivero(b_g: f64, b_l: f64) -> f64 {
        let fl = 2.0 * b_l;
        let fg = 2.0 * (2.0 * std::f64::consts::LN_2).sqrt() * b_g;
        0.5346 * fl + (0.2166 * fl * fl + fg * fg).sqrt()
    }

    #[test]
    fn unit_peak_and_symmetry() {
        let k = VoigtKernel::build(0.5, 0.5, 0.0025, 20.0, 1e-2).unwrap();
        let max = k.normalized_profile.iter().cloned().fold(f64::MIN, f64::max);
        assert_eq!(max, 1.0);
        let n = k.normalized_profile.len();
        assert_eq!(k.normalized_profile[n / 2], 1.0);
        for i in 0..n {
            assert_eq!(k.normalized_profile[i], k.normalized_profile[n - 1 - i]);
        }
        assert!(k.fine_step <= 0.01 / 4.0);
        assert!(k.span >= 20.0 * 0.5);
    }

    #[test]
    fn fwhm_against_closed_form_approximation() {
        for b in [0.1, 0.25, 0.5] {
            let k = VoigtKernel::build(b, b, 0.0025, 20.0, 1e-2).unwrap();
            let approx = olivero(b, b);
            let rel = (k.fwhm().unwrap() - approx).abs() / approx;
            assert!(rel < 0.02, "b={b}: rel {rel}");
        }
    }

    #[test]
    fn narrow_span_rejected() {
        let err = VoigtKernel::build(0.5, 0.5, 0.0025, 2.0, 1e-2).unwrap_err();
        assert!(matches!(err, Error::VoigtSpan { .. }));
    }

    #[test]
    fn interpolation_hits_lattice_values() {
        let k = VoigtKernel::build(0.2, 0.3, 0.0025, 20.0, 1e-2).unwrap();
        let half = k.normalized_profile.len() / 2;
        assert_eq!(k.value_at(0.0), 1.0);
        assert_eq!(k.value_at(10.0 * 0.0025), k.normalized_profile[half + 10]);
        assert_eq!(k.value_at(-10.0 * 0.0025), k.normalized_profile[half + 10]);
        assert_eq!(k.value_at(k.span + 1.0), 0.0);
        let mid = k.value_at(10.5 * 0.0025);
        let expect = 0.5 * (k.normalized_profile[half + 10] + k.normalized_profile[half + 11]);
        assert!((mid - expect).abs() < 1e-15);
    }

    #[test]
    fn rejects_non_positive_widths() {
        assert!(VoigtKernel::build(0.0, 0.5, 0.0025, 20.0, 1e-2).is_err());
        assert!(VoigtKernel::build(0.5, -1.0, 0.0025, 20.0, 1e-2).is_err());
    }
}
