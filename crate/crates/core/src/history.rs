use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One row of a training trace. EQC writes one per generation, VQC one per
/// epoch; both share this schema.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenerationRecord {
    pub generation: usize,
    pub best_loss: f64,
    pub train_acc: f64,
    pub test_acc: f64,
    pub depth: usize,
}

pub const HISTORY_HEADER: [&str; 5] = ["generation", "best_loss", "train_acc", "test_acc", "depth"];

pub fn write_history_csv<W: Write>(records: &[GenerationRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HISTORY_HEADER)?;
    for r in records {
        w.write_record(&[
            r.generation.to_string(),
            r.best_loss.to_string(),
            r.train_acc.to_string(),
            r.test_acc.to_string(),
            r.depth.to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::io("<history>", e))?;
    Ok(())
}

pub fn read_history_csv(path: &std::path::Path) -> Result<Vec<GenerationRecord>> {
    let mut r = csv::Reader::from_path(path)?;
    let mut out = Vec::new();
    for rec in r.deserialize() {
        out.push(rec?);
    }
    Ok(out)
}
