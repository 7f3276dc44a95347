//! Region of interest: the connected super-level set `{s >= eta · max s}` of
//! a clean template that contains the template maximum.

use std::collections::VecDeque;
use std::ops::Range;

use crate::error::{Error, Result};
use crate::grid::Dim;

#[derive(Debug, Clone, PartialEq)]
pub struct RoiMask {
    /// Sorted flat indices (row-major in 2D).
    pub indices: Vec<usize>,
    pub eta: f64,
    pub dim: Dim,
    /// Row length of the 2D template; the template length in 1D.
    pub row_len: usize,
    /// Flat index of the template maximum.
    pub peak: usize,
}

impl RoiMask {
    pub fn n_roi(&self) -> usize {
        self.indices.len()
    }

    /// Index span of a 1D mask. For 2D masks this is the span of flat indices.
    pub fn width_bins(&self) -> usize {
        match (self.indices.first(), self.indices.last()) {
            (Some(a), Some(b)) => b - a + 1,
            _ => 0,
        }
    }

    /// Smallest flat-index range covering the mask.
    pub fn bounding_range(&self) -> Range<usize> {
        match (self.indices.first(), self.indices.last()) {
            (Some(&a), Some(&b)) => a..b + 1,
            _ => 0..0,
        }
    }

    /// `(row, col)` pairs of a 2D mask.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.indices.iter().map(|&i| (i / self.row_len, i % self.row_len))
    }

    pub fn contains(&self, idx: usize) -> bool {
        self.indices.binary_search(&idx).is_ok()
    }

    /// Single-bin mask, e.g. to reduce the area statistic to the peak value.
    pub fn single(idx: usize, dim: Dim, row_len: usize) -> Self {
        Self {
            indices: vec![idx],
            eta: 1.0,
            dim,
            row_len,
            peak: idx,
        }
    }
}

fn check_eta(eta: f64) -> Result<()> {
    if eta > 0.0 && eta < 1.0 {
        Ok(())
    } else {
        Err(Error::param("eta", format!("must lie in (0, 1), got {eta}")))
    }
}

fn peak_of(clean: &[f64]) -> Result<(usize, f64)> {
    // First maximum wins on ties.
    let (idx, max) = clean
        .iter()
        .enumerate()
        .fold(None, |best: Option<(usize, f64)>, (i, &v)| match best {
            Some((_, m)) if m >= v => best,
            _ => Some((i, v)),
        })
        .ok_or(Error::EmptyTemplate)?;
    if !(max > 0.0) || !max.is_finite() {
        return Err(Error::EmptyTemplate);
    }
    Ok((idx, max))
}

/// Contiguous interval around the template maximum with `clean[i] >= eta · max`.
pub fn extract_roi(clean: &[f64], eta: f64) -> Result<RoiMask> {
    check_eta(eta)?;
    let (peak, max) = peak_of(clean)?;
    let level = eta * max;
    let mut lo = peak;
    while lo > 0 && clean[lo - 1] >= level {
        lo -= 1;
    }
    let mut hi = peak;
    while hi + 1 < clean.len() && clean[hi + 1] >= level {
        hi += 1;
    }
    Ok(RoiMask {
        indices: (lo..=hi).collect(),
        eta,
        dim: Dim::One,
        row_len: clean.len(),
        peak,
    })
}

/// 4-connected component of `{clean >= eta · max}` containing the maximum,
/// for a row-major matrix with rows of length `row_len`.
pub fn extract_roi_2d(clean: &[f64], row_len: usize, eta: f64) -> Result<RoiMask> {
    check_eta(eta)?;
    if row_len == 0 || !clean.len().is_multiple_of(row_len) {
        return Err(Error::param(
            "row_len",
            format!("{} values do not form rows of {row_len}", clean.len()),
        ));
    }
    let (peak, max) = peak_of(clean)?;
    let level = eta * max;
    let rows = clean.len() / row_len;

    let mut seen = vec![false; clean.len()];
    let mut queue = VecDeque::from([peak]);
    seen[peak] = true;
    let mut indices = Vec::new();
    while let Some(i) = queue.pop_front() {
        indices.push(i);
        let (r, c) = (i / row_len, i % row_len);
        let mut visit = |j: usize| {
            if !seen[j] && clean[j] >= level {
                seen[j] = true;
                queue.push_back(j);
            }
        };
        if r > 0 {
            visit(i - row_len);
        }
        if r + 1 < rows {
            visit(i + row_len);
        }
        if c > 0 {
            visit(i - 1);
        }
        if c + 1 < row_len {
            visit(i + 1);
        }
    }
    indices.sort_unstable();
    Ok(RoiMask {
        indices,
        eta,
        dim: Dim::Two,
        row_len,
        peak,
    })
}
