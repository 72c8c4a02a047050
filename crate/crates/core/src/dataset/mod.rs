//! Datasets: iris ingestion, synthetic ad-hoc generation, min-max scaling
//! and stratified splitting.

mod adhoc;
mod iris;
mod scale;
mod split;

use std::path::Path;

pub use adhoc::{adhoc_generate, adhoc_label_value, AdhocParams, AdhocDataset};
pub use iris::{load_iris, IRIS_CLASSES};
pub use scale::{minmax_scale, MinMaxScaler, SCALE_UPPER};
pub use split::{split, split_per_class, SplitDataset};

use crate::error::{Error, Result};

/// Samples × features matrix with one integer label per row.
///
/// Binary datasets carry labels ±1; multiclass datasets carry class ids
/// `0..n_classes`.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    pub features: Vec<Vec<f64>>,
    pub labels: Vec<i32>,
    pub n_classes: usize,
    pub provenance: String,
}

impl Dataset {
    pub fn new(
        features: Vec<Vec<f64>>,
        labels: Vec<i32>,
        n_classes: usize,
        provenance: impl Into<String>,
    ) -> Result<Self> {
        let d = Dataset {
            features,
            labels,
            n_classes,
            provenance: provenance.into(),
        };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        if self.features.len() != self.labels.len() {
            return Err(Error::DimensionMismatch {
                what: "label count",
                expected: self.features.len(),
                found: self.labels.len(),
            });
        }
        let n = self.n_features();
        if let Some(row) = self.features.iter().position(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                what: "feature row width",
                expected: n,
                found: self.features[row].len(),
            });
        }
        if let Some(&bad) = self.labels.iter().find(|&&y| !self.label_in_range(y)) {
            return Err(Error::InvalidArgument(format!(
                "label {bad} outside the range of a {}-class dataset",
                self.n_classes
            )));
        }
        Ok(())
    }

    fn label_in_range(&self, y: i32) -> bool {
        if self.is_signed() {
            y == 1 || y == -1
        } else {
            y >= 0 && (y as usize) < self.n_classes
        }
    }

    /// Binary data labelled ±1 (as opposed to class ids).
    pub fn is_signed(&self) -> bool {
        self.n_classes == 2 && self.labels.iter().any(|&y| y == -1)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn n_features(&self) -> usize {
        self.features.first().map_or(0, Vec::len)
    }

    /// Distinct labels in ascending order.
    pub fn classes(&self) -> Vec<i32> {
        let mut c = self.labels.clone();
        c.sort_unstable();
        c.dedup();
        c
    }

    pub fn subset(&self, indices: &[usize]) -> Dataset {
        Dataset {
            features: indices.iter().map(|&i| self.features[i].clone()).collect(),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
            n_classes: self.n_classes,
            provenance: self.provenance.clone(),
        }
    }

    /// Writes the `f0,…,f{n−1},label` CSV form.
    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header: Vec<String> = (0..self.n_features()).map(|i| format!("f{i}")).collect();
        header.push("label".into());
        w.write_record(&header)?;
        for (row, y) in self.features.iter().zip(&self.labels) {
            let mut rec: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            rec.push(y.to_string());
            w.write_record(&rec)?;
        }
        w.flush().map_err(|e| Error::io("<csv>", e))?;
        Ok(())
    }

    /// Reads the `f0,…,f{n−1},label` CSV form. Labels are integers; a file
    /// whose labels are all ±1 is read as a binary dataset.
    pub fn read_csv(path: &Path) -> Result<Dataset> {
        let mut r = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_path(path)
            .map_err(|e| match e.kind() {
                csv::ErrorKind::Io(_) => Error::io(
                    path,
                    std::io::Error::other(e.to_string()),
                ),
                _ => Error::Csv(e),
            })?;
        let mut features = Vec::new();
        let mut labels = Vec::new();
        for rec in r.records() {
            let rec = rec?;
            let line = rec.position().map_or(0, |p| p.line());
            let parse_err = |m: String| Error::Parse { line, message: m };
            if rec.len() < 2 {
                return Err(parse_err(format!("expected features and a label, got {} fields", rec.len())));
            }
            let row = rec
                .iter()
                .take(rec.len() - 1)
                .map(|f| f.trim().parse::<f64>().map_err(|e| parse_err(format!("`{f}`: {e}"))))
                .collect::<Result<Vec<_>>>()?;
            let y = rec[rec.len() - 1]
                .trim()
                .parse::<i32>()
                .map_err(|e| parse_err(format!("label `{}`: {e}", &rec[rec.len() - 1])))?;
            features.push(row);
            labels.push(y);
        }
        if labels.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let signed = labels.iter().all(|&y| y == 1 || y == -1) && labels.contains(&-1);
        let n_classes = if signed {
            2
        } else {
            labels.iter().copied().max().unwrap_or(0).max(0) as usize + 1
        };
        Dataset::new(features, labels, n_classes, path.display().to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip() {
        let d = Dataset::new(
            vec![vec![0.1, 2.5], vec![3.0, 0.0]],
            vec![1, -1],
            2,
            "test",
        )
        .unwrap();
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("d.csv");
        let mut buf = Vec::new();
        d.write_csv(&mut buf).unwrap();
        assert!(String::from_utf8(buf.clone()).unwrap().starts_with("f0,f1,label\n"));
        std::fs::write(&p, buf).unwrap();
        let back = Dataset::read_csv(&p).unwrap();
        assert_eq!(back.features, d.features);
        assert_eq!(back.labels, d.labels);
        assert!(back.is_signed());
    }

    #[test]
    fn validation() {
        assert!(Dataset::new(vec![vec![1.0]], vec![], 2, "x").is_err());
        assert!(Dataset::new(vec![vec![1.0], vec![1.0, 2.0]], vec![0, 1], 2, "x").is_err());
        assert!(Dataset::new(vec![vec![1.0]], vec![3], 3, "x").is_err());
    }
}
