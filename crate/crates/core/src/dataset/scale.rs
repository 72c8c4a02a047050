use std::f64::consts::TAU;

use super::Dataset;
use crate::error::{Error, Result};

/// Right end of the scaled range, just inside `2π` so that scaled values lie
/// in `[0, 2π)`.
pub const SCALE_UPPER: f64 = TAU * (1.0 - 1e-9);

/// Per-feature affine map `[min, max] → [0, SCALE_UPPER]`.
#[derive(Clone, Debug, PartialEq)]
pub struct MinMaxScaler {
    pub mins: Vec<f64>,
    pub maxs: Vec<f64>,
}

impl MinMaxScaler {
    pub fn fit(data: &Dataset) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let n = data.n_features();
        let mut mins = vec![f64::INFINITY; n];
        let mut maxs = vec![f64::NEG_INFINITY; n];
        for row in &data.features {
            for (j, &v) in row.iter().enumerate() {
                mins[j] = mins[j].min(v);
                maxs[j] = maxs[j].max(v);
            }
        }
        if let Some(j) = (0..n).find(|&j| maxs[j] <= mins[j]) {
            return Err(Error::ConstantFeature {
                feature: j,
                value: mins[j],
            });
        }
        Ok(MinMaxScaler { mins, maxs })
    }

    /// Scales one value of feature `j`, clamping into `[0, SCALE_UPPER]`.
    /// Returns the value and whether clamping happened.
    pub fn scale_value(&self, j: usize, v: f64) -> (f64, bool) {
        let s = (v - self.mins[j]) / (self.maxs[j] - self.mins[j]) * SCALE_UPPER;
        let c = s.clamp(0.0, SCALE_UPPER);
        (c, c != s)
    }

    pub fn transform(&self, data: &Dataset) -> Result<Dataset> {
        if data.n_features() != self.mins.len() && !data.is_empty() {
            return Err(Error::DimensionMismatch {
                what: "scaler feature count",
                expected: self.mins.len(),
                found: data.n_features(),
            });
        }
        let mut clamped = 0usize;
        let features = data
            .features
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .map(|(j, &v)| {
                        let (s, c) = self.scale_value(j, v);
                        clamped += c as usize;
                        s
                    })
                    .collect()
            })
            .collect();
        if clamped > 0 {
            log::warn!(
                "{clamped} feature value(s) fell outside the fitted range and were clamped"
            );
        }
        Ok(Dataset {
            features,
            ..data.clone()
        })
    }

    pub fn inverse_value(&self, j: usize, s: f64) -> f64 {
        self.mins[j] + s / SCALE_UPPER * (self.maxs[j] - self.mins[j])
    }

    pub fn inverse_transform(&self, data: &Dataset) -> Dataset {
        let features = data
            .features
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .map(|(j, &s)| self.inverse_value(j, s))
                    .collect()
            })
            .collect();
        Dataset {
            features,
            ..data.clone()
        }
    }
}

/// Fits a scaler on `data` and applies it.
pub fn minmax_scale(data: &Dataset) -> Result<(Dataset, MinMaxScaler)> {
    let scaler = MinMaxScaler::fit(data)?;
    Ok((scaler.transform(data)?, scaler))
}
