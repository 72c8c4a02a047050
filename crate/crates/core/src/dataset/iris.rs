use std::path::Path;

use super::Dataset;
use crate::error::{Error, Result};

/// Class names in label order; the `Iris-` prefix is optional in files.
pub const IRIS_CLASSES: [&str; 3] = ["setosa", "versicolor", "virginica"];

fn class_id(name: &str) -> Option<i32> {
    let bare = name.strip_prefix("Iris-").unwrap_or(name);
    IRIS_CLASSES
        .iter()
        .position(|c| c.eq_ignore_ascii_case(bare))
        .map(|i| i as i32)
}

/// Reads the UCI iris layout: four numeric columns then a class name, no
/// header (a non-numeric first line is skipped as one).
pub fn load_iris(path: &Path) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Error::io(path, std::io::Error::other(e.to_string())))?;

    let mut features = Vec::new();
    let mut labels = Vec::new();
    for (k, rec) in reader.records().enumerate() {
        let rec = rec?;
        let line = rec.position().map_or(k as u64 + 1, |p| p.line());
        if rec.iter().all(str::is_empty) {
            continue;
        }
        if k == 0 && rec.get(0).is_some_and(|f| f.parse::<f64>().is_err()) {
            continue;
        }
        if rec.len() != 5 {
            return Err(Error::Parse {
                line,
                message: format!("expected 4 features and a class, found {} fields", rec.len()),
            });
        }
        let row = (0..4)
            .map(|i| {
                rec[i].parse::<f64>().map_err(|_| Error::Parse {
                    line,
                    message: format!("feature {i} `{}` is not a number", &rec[i]),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let label = class_id(&rec[4]).ok_or_else(|| Error::Parse {
            line,
            message: format!("unknown class `{}`", &rec[4]),
        })?;
        features.push(row);
        labels.push(label);
    }
    if labels.is_empty() {
        return Err(Error::EmptyDataset);
    }
    Dataset::new(features, labels, 3, format!("iris:{}", path.display()))
}
