use std::io::Write;
use std::path::Path;

use serde::Serialize;
use tempfile::NamedTempFile;

use super::{history_bytes, ExperimentConfig, ExperimentSummary};
use crate::error::{Error, Result};

/// Mean, sample standard deviation (`n − 1` denominator; `NaN` for a single
/// value), minimum and maximum.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Stats {
    pub mean: f64,
    pub std: f64,
    pub min: f64,
    pub max: f64,
}

impl Stats {
    pub fn of(xs: &[f64]) -> Stats {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let std = if xs.len() > 1 {
            (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            f64::NAN
        };
        Stats {
            mean,
            std,
            min: xs.iter().copied().fold(f64::INFINITY, f64::min),
            max: xs.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        }
    }
}

/// Writes `bytes` to a temporary file in the target directory, then renames
/// it over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = NamedTempFile::new_in(dir).map_err(|e| Error::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| Error::io(path, e))?;
    tmp.as_file().sync_all().map_err(|e| Error::io(path, e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

fn loss_curve(summary: &ExperimentSummary) -> Result<Vec<u8>> {
    let len = summary.runs.iter().map(|r| r.history.len()).max().unwrap_or(0);
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["iteration", "mean_loss", "std_loss", "n_runs"])?;
    for i in 0..len {
        let xs: Vec<f64> = summary
            .runs
            .iter()
            .filter_map(|r| r.history.get(i).or(r.history.last()).map(|h| h.best_loss))
            .collect();
        let s = Stats::of(&xs);
        w.write_record([i.to_string(), s.mean.to_string(), s.std.to_string(), xs.len().to_string()])?;
    }
    w.into_inner().map_err(|e| Error::io("<loss curve>", e.into_error()))
}

#[derive(Serialize)]
struct RunRow {
    run: usize,
    seed: u64,
    iterations: usize,
    final_loss: f64,
    train_acc: f64,
    test_acc: f64,
    depth: usize,
}

fn summary_csv(summary: &ExperimentSummary) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in &summary.runs {
        w.serialize(RunRow {
            run: r.run,
            seed: r.seed,
            iterations: r.history.len(),
            final_loss: r.final_loss,
            train_acc: r.train_acc,
            test_acc: r.test_acc,
            depth: r.depth,
        })?;
    }
    w.into_inner().map_err(|e| Error::io("<summary>", e.into_error()))
}

#[derive(Serialize)]
struct SummaryFile<'a> {
    name: &'a str,
    trainer: &'a str,
    master_seed: u64,
    repetitions: usize,
    perfect_test_runs: usize,
    std_note: &'static str,
    budget: Budget,
    test_accuracy: Stats,
    train_accuracy: Stats,
    final_loss: Stats,
    config: &'a ExperimentConfig,
}

#[derive(Serialize)]
struct Budget {
    iterations: usize,
    circuit_evaluations_per_iteration: usize,
    note: &'static str,
}

fn summary_toml(cfg: &ExperimentConfig, summary: &ExperimentSummary) -> Result<String> {
    let file = SummaryFile {
        name: &summary.name,
        trainer: summary.trainer,
        master_seed: cfg.seed,
        repetitions: summary.runs.len(),
        perfect_test_runs: summary.perfect_runs(),
        std_note: "standard deviations use the unbiased (n - 1) estimator",
        budget: Budget {
            iterations: summary.iterations,
            circuit_evaluations_per_iteration: summary.evaluations_per_iteration,
            note: "EQC generations and VQC epochs are budgeted one-to-one; an EQC generation \
                   evaluates mu children, a VQC epoch evaluates two shifted circuits per parameter \
                   (each over the full training set)",
        },
        test_accuracy: summary.test_accuracy(),
        train_accuracy: summary.train_accuracy(),
        final_loss: summary.final_loss(),
        config: cfg,
    };
    toml::to_string(&file).map_err(|e| Error::InvalidArgument(format!("summary serialization: {e}")))
}

pub(super) fn write_all(cfg: &ExperimentConfig, summary: &ExperimentSummary, dir: &Path) -> Result<()> {
    for r in &summary.runs {
        write_atomic(&dir.join(format!("run_{:02}_history.csv", r.run)), &history_bytes(&r.history)?)?;
        write_atomic(&dir.join(format!("run_{:02}_circuit.txt", r.run)), r.circuit.as_bytes())?;
    }
    write_atomic(&dir.join("loss_curve.csv"), &loss_curve(summary)?)?;
    write_atomic(&dir.join("summary.csv"), &summary_csv(summary)?)?;
    write_atomic(&dir.join("summary.toml"), summary_toml(cfg, summary)?.as_bytes())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_std() {
        let s = Stats::of(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(s.mean, 2.5);
        assert!((s.std - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert_eq!((s.min, s.max), (1.0, 4.0));
        assert!(Stats::of(&[3.0]).std.is_nan());
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("a.txt");
        write_atomic(&p, b"one").unwrap();
        write_atomic(&p, b"two").unwrap();
        assert_eq!(std::fs::read(&p).unwrap(), b"two");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
