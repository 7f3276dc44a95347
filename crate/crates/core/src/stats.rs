//! Order-stable summary statistics.

use serde::{Deserialize, Serialize};

/// Neumaier-compensated sum. Results depend only on the order of `values`.
pub fn compensated_sum<'a>(values: impl IntoIterator<Item = &'a f64>) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for &v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Mean and sample standard deviation (`n - 1` denominator; zero for `n < 2`).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Summary {
    pub n: usize,
    pub mean: f64,
    pub std: f64,
}

impl Summary {
    pub fn of(values: &[f64]) -> Self {
        let n = values.len();
        if n == 0 {
            return Self {
                n,
                mean: f64::NAN,
                std: f64::NAN,
            };
        }
        let mean = compensated_sum(values) / n as f64;
        let sq: Vec<f64> = values.iter().map(|v| (v - mean) * (v - mean)).collect();
        let std = if n > 1 {
            (compensated_sum(&sq) / (n - 1) as f64).sqrt()
        } else {
            0.0
        };
        Self { n, mean, std }
    }

    pub fn variance(&self) -> f64 {
        self.std * self.std
    }
}

/// Fraction of `values` that are `>= threshold`.
pub fn fraction_at_least(values: &[f64], threshold: f64) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    values.iter().filter(|&&v| v >= threshold).count() as f64 / values.len() as f64
}
