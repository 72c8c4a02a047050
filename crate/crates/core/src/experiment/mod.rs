//! Config-driven experiments: seeded repetitions of one trainer on one
//! dataset, with per-run histories, an aggregate loss curve and a summary.
//!
//! Output layout of [`run_experiment`]:
//!
//! * `run_XX_history.csv`: `generation,best_loss,train_acc,test_acc,depth`
//! * `run_XX_circuit.txt`: the trained circuit in genome text format
//! * `loss_curve.csv`: per-iteration mean and sample standard deviation of
//!   the training loss across runs (runs that stopped early are padded with
//!   their last value)
//! * `summary.csv`: one row per run
//! * `summary.toml`: aggregate statistics and evaluation-cost bookkeeping
//!
//! All files are written through a temporary file and renamed into place.

mod config;
mod output;

pub use config::{DatasetConfig, EncodingConfig, ExperimentConfig, TrainerConfig, VqcConfig};
pub use output::{write_atomic, Stats};

use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use crate::dataset::{self, adhoc_generate, load_iris, AdhocParams, Dataset, MinMaxScaler, SplitDataset};
use crate::error::{Error, Result};
use crate::evolution::{evolve, CircuitGenome, MutationConfig};
use crate::history::{write_history_csv, GenerationRecord};
use crate::seed::{derive_seed, stream};
use crate::variational::{build_ansatz, gradient_variance_probe, train_vqc, ProbeObservable, TrainConfig};

/// Result of one seeded repetition.
#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub run: usize,
    pub seed: u64,
    pub history: Vec<GenerationRecord>,
    /// Trained circuit in genome text format.
    pub circuit: String,
    pub final_loss: f64,
    pub train_acc: f64,
    pub test_acc: f64,
    pub depth: usize,
}

#[derive(Clone, Debug)]
pub struct ExperimentSummary {
    pub name: String,
    pub trainer: &'static str,
    pub runs: Vec<RunOutcome>,
    pub iterations: usize,
    pub evaluations_per_iteration: usize,
}

impl ExperimentSummary {
    pub fn test_accuracy(&self) -> Stats {
        Stats::of(&self.runs.iter().map(|r| r.test_acc).collect::<Vec<_>>())
    }

    pub fn train_accuracy(&self) -> Stats {
        Stats::of(&self.runs.iter().map(|r| r.train_acc).collect::<Vec<_>>())
    }

    pub fn final_loss(&self) -> Stats {
        Stats::of(&self.runs.iter().map(|r| r.final_loss).collect::<Vec<_>>())
    }

    /// Runs with test accuracy exactly 1.
    pub fn perfect_runs(&self) -> usize {
        self.runs.iter().filter(|r| r.test_acc == 1.0).count()
    }
}

/// Train/test data of run `run`. Dataset and split seeds depend only on the
/// master seed and the run index, so two configs with the same dataset block
/// and seed see identical splits.
pub fn run_data(cfg: &ExperimentConfig, base: Option<&Dataset>, run: usize) -> Result<SplitDataset> {
    let split_seed = derive_seed(cfg.seed, &[stream::SPLIT, run as u64]);
    match &cfg.dataset {
        DatasetConfig::Iris { train_fraction, .. } => {
            let data = base.ok_or_else(|| Error::InvalidArgument("iris data not loaded".into()))?;
            let s = dataset::split(data, *train_fraction, split_seed)?;
            let scaler = MinMaxScaler::fit(&s.train)?;
            Ok(SplitDataset {
                train: scaler.transform(&s.train)?,
                test: scaler.transform(&s.test)?,
                ..s
            })
        }
        DatasetConfig::Adhoc {
            n_dim,
            gap,
            train_per_class,
            test_per_class,
            grid,
        } => {
            let mut p = AdhocParams::new(
                *n_dim,
                *gap,
                train_per_class + test_per_class,
                derive_seed(cfg.seed, &[stream::DATA, run as u64]),
            );
            p.grid = *grid;
            let generated = adhoc_generate(&p)?;
            dataset::split_per_class(&generated.dataset, *train_per_class, split_seed)
        }
    }
}

fn load_base(cfg: &ExperimentConfig) -> Result<Option<Dataset>> {
    match &cfg.dataset {
        DatasetConfig::Iris { path, .. } => load_iris(path).map(Some),
        DatasetConfig::Adhoc { .. } => Ok(None),
    }
}

fn train_run(cfg: &ExperimentConfig, data: &SplitDataset, run: usize) -> Result<RunOutcome> {
    let clf = cfg.classifier()?;
    let seed = derive_seed(cfg.seed, &[stream::TRAIN, run as u64]);
    let (history, circuit) = match &cfg.trainer {
        TrainerConfig::Eqc(m) => {
            let mcfg = MutationConfig {
                seed: derive_seed(seed, &[m.seed]),
                ..m.clone()
            };
            let r = evolve(data, &clf, &mcfg)?;
            (r.history, r.best.to_text())
        }
        TrainerConfig::Vqc(v) => {
            let spec = cfg.ansatz().expect("vqc trainer has an ansatz");
            let tcfg = TrainConfig {
                learning_rate: v.learning_rate,
                epochs: v.epochs,
                seed,
            };
            let r = train_vqc(&spec, data, &clf, &tcfg)?;
            let genome = CircuitGenome {
                n_qubits: spec.n_qubits,
                gates: build_ansatz(&spec, &r.theta)?,
            };
            (r.history, genome.to_text())
        }
    };
    let last = history.last().cloned().ok_or(Error::EmptyDataset)?;
    Ok(RunOutcome {
        run,
        seed,
        circuit,
        final_loss: last.best_loss,
        train_acc: last.train_acc,
        test_acc: last.test_acc,
        depth: last.depth,
        history,
    })
}

/// Validates `cfg`, prepares every run's data, then trains all repetitions
/// and writes the artifacts into `out_dir`. Nothing is written when
/// validation or data preparation fails.
pub fn run_experiment(cfg: &ExperimentConfig, out_dir: &Path) -> Result<ExperimentSummary> {
    execute(cfg, Some(out_dir))
}

/// Same as [`run_experiment`] without touching the filesystem beyond reading
/// the dataset.
pub fn run_in_memory(cfg: &ExperimentConfig) -> Result<ExperimentSummary> {
    execute(cfg, None)
}

fn execute(cfg: &ExperimentConfig, out_dir: Option<&Path>) -> Result<ExperimentSummary> {
    cfg.validate()?;
    let base = load_base(cfg)?;
    let splits = (0..cfg.repetitions)
        .map(|r| run_data(cfg, base.as_ref(), r))
        .collect::<Result<Vec<_>>>()?;
    let clf = cfg.classifier()?;
    for s in &splits {
        clf.validate(&s.train)?;
        clf.validate(&s.test)?;
    }
    if let Some(dir) = out_dir {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let runs = splits
        .par_iter()
        .enumerate()
        .map(|(r, data)| train_run(cfg, data, r))
        .collect::<Result<Vec<_>>>()?;
    let summary = ExperimentSummary {
        name: cfg.display_name(),
        trainer: cfg.trainer.label(),
        iterations: cfg.trainer.iterations(),
        evaluations_per_iteration: match &cfg.trainer {
            TrainerConfig::Eqc(m) => m.mu,
            TrainerConfig::Vqc(_) => 2 * cfg.ansatz().map_or(0, |a| a.n_params()),
        },
        runs,
    };
    if let Some(dir) = out_dir {
        output::write_all(cfg, &summary, dir)?;
    }
    Ok(summary)
}

/// An accuracy supplied from outside (e.g. a classical baseline).
#[derive(Clone, Debug, PartialEq)]
pub struct ExternalScore {
    pub name: String,
    pub test_accuracy: f64,
}

impl std::str::FromStr for ExternalScore {
    type Err = Error;

    /// `name=accuracy`.
    fn from_str(s: &str) -> Result<Self> {
        let (name, acc) = s
            .split_once('=')
            .ok_or_else(|| Error::InvalidArgument(format!("expected name=accuracy, got `{s}`")))?;
        let test_accuracy: f64 = acc
            .trim()
            .parse()
            .map_err(|e| Error::InvalidArgument(format!("accuracy `{acc}`: {e}")))?;
        if !(0.0..=1.0).contains(&test_accuracy) || name.trim().is_empty() {
            return Err(Error::InvalidArgument(format!("bad external score `{s}`")));
        }
        Ok(ExternalScore {
            name: name.trim().to_string(),
            test_accuracy,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub model: String,
    pub source: String,
    pub n_runs: usize,
    pub mean_test_acc: f64,
    pub std_test_acc: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Comparison {
    pub rows: Vec<ComparisonRow>,
}

impl Comparison {
    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.rows {
            w.serialize(r)?;
        }
        w.into_inner().map_err(|e| Error::io("<comparison>", e.into_error()))
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{:<16} {:<10} {:>6} {:>14} {:>12}\n", "model", "source", "runs", "mean_test_acc", "std");
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{:<16} {:<10} {:>6} {:>14.4} {:>12.4}",
                r.model, r.source, r.n_runs, r.mean_test_acc, r.std_test_acc
            );
        }
        s
    }
}

/// Runs both experiments on identical data (same dataset block, master seed
/// and repetitions are required) and tabulates mean test accuracy. Each
/// experiment writes its artifacts to `out_dir/<name>`; the table goes to
/// `comparison.csv` and `comparison.txt`.
pub fn compare_models(
    a: &ExperimentConfig,
    b: &ExperimentConfig,
    external: &[ExternalScore],
    out_dir: &Path,
) -> Result<Comparison> {
    if a.dataset != b.dataset {
        return Err(Error::config("dataset", "compared experiments must use the same dataset block"));
    }
    if a.seed != b.seed || a.repetitions != b.repetitions {
        return Err(Error::config(
            "seed",
            "compared experiments must share the master seed and repetition count",
        ));
    }
    let (na, nb) = (a.display_name(), b.display_name());
    if na == nb {
        return Err(Error::config("name", format!("both experiments are named `{na}`")));
    }
    a.validate()?;
    b.validate()?;
    let sa = run_experiment(a, &out_dir.join(&na))?;
    let sb = run_experiment(b, &out_dir.join(&nb))?;
    let mut rows: Vec<ComparisonRow> = [sa, sb]
        .iter()
        .map(|s| {
            let t = s.test_accuracy();
            ComparisonRow {
                model: s.name.clone(),
                source: "simulated".into(),
                n_runs: s.runs.len(),
                mean_test_acc: t.mean,
                std_test_acc: t.std,
            }
        })
        .collect();
    rows.extend(external.iter().map(|e| ComparisonRow {
        model: e.name.clone(),
        source: "external".into(),
        n_runs: 0,
        mean_test_acc: e.test_accuracy,
        std_test_acc: f64::NAN,
    }));
    let table = Comparison { rows };
    write_atomic(&out_dir.join("comparison.csv"), &table.to_csv()?)?;
    write_atomic(&out_dir.join("comparison.txt"), table.to_text().as_bytes())?;
    Ok(table)
}

pub const PROBE_MAX_QUBITS: usize = 12;

/// Gradient variance for each `n` in `n_list`, in order.
pub fn probe_plateau(
    n_list: &[usize],
    layers: usize,
    samples: usize,
    seed_value: u64,
    observable: ProbeObservable,
) -> Result<Vec<(usize, f64)>> {
    if n_list.is_empty() {
        return Err(Error::InvalidArgument("n_list is empty".into()));
    }
    if let Some(&n) = n_list.iter().find(|&&n| n > PROBE_MAX_QUBITS || n == 0) {
        return Err(Error::TooManyQubits {
            what: "plateau probe",
            n,
            max: PROBE_MAX_QUBITS,
        });
    }
    n_list
        .iter()
        .map(|&n| Ok((n, gradient_variance_probe(n, layers, samples, seed_value, observable)?)))
        .collect()
}

pub fn plateau_csv(rows: &[(usize, f64)]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["n", "variance"])?;
    for (n, v) in rows {
        w.write_record([n.to_string(), v.to_string()])?;
    }
    w.into_inner().map_err(|e| Error::io("<plateau>", e.into_error()))
}

/// Generates an ad-hoc dataset and writes `path` (CSV) plus
/// `path.meta.toml` describing how it was produced.
pub fn write_adhoc(params: &AdhocParams, path: &Path) -> Result<Dataset> {
    let generated = adhoc_generate(params)?;
    let mut csv_bytes = Vec::new();
    generated.dataset.write_csv(&mut csv_bytes)?;
    let meta = toml::to_string(&generated.metadata())
        .map_err(|e| Error::InvalidArgument(format!("metadata serialization: {e}")))?;
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    write_atomic(path, &csv_bytes)?;
    let mut meta_path = path.as_os_str().to_owned();
    meta_path.push(".meta.toml");
    write_atomic(Path::new(&meta_path), meta.as_bytes())?;
    Ok(generated.dataset)
}

pub(crate) fn history_bytes(records: &[GenerationRecord]) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    write_history_csv(records, &mut buf)?;
    Ok(buf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoding::LossKind;
    use crate::feature_map::FeatureMapKind;
    use crate::model::EstimatorMode;

    fn adhoc_cfg(trainer: TrainerConfig) -> ExperimentConfig {
        ExperimentConfig {
            name: None,
            seed: 11,
            repetitions: 2,
            output_dir: None,
            dataset: DatasetConfig::Adhoc {
                n_dim: 2,
                gap: 0.3,
                train_per_class: 6,
                test_per_class: 3,
                grid: Some(40),
            },
            feature_map: FeatureMapKind::ZzFull,
            encoding: EncodingConfig::Parity {
                mask: None,
                threshold: 0.0,
            },
            loss: LossKind::Mse,
            estimator: EstimatorMode::Exact,
            trainer,
        }
    }

    fn eqc(generations: usize) -> TrainerConfig {
        TrainerConfig::Eqc(MutationConfig {
            max_generations: generations,
            ..MutationConfig::default()
        })
    }

    fn vqc() -> TrainerConfig {
        TrainerConfig::Vqc(VqcConfig {
            layers: 1,
            learning_rate: 0.2,
            epochs: 5,
            entangler_angle: std::f64::consts::FRAC_PI_2,
        })
    }

    #[test]
    fn splits_are_shared_across_trainers() {
        let a = adhoc_cfg(eqc(3));
        let b = adhoc_cfg(vqc());
        for r in 0..2 {
            let sa = run_data(&a, None, r).unwrap();
            let sb = run_data(&b, None, r).unwrap();
            assert_eq!(sa.train, sb.train);
            assert_eq!(sa.test, sb.test);
        }
        assert_ne!(run_data(&a, None, 0).unwrap().train, run_data(&a, None, 1).unwrap().train);
    }

    #[test]
    fn writes_expected_files() {
        let dir = tempfile::tempdir().unwrap();
        let s = run_experiment(&adhoc_cfg(eqc(5)), dir.path()).unwrap();
        assert_eq!(s.runs.len(), 2);
        assert_eq!(s.evaluations_per_iteration, 4);
        for f in [
            "run_00_history.csv",
            "run_01_history.csv",
            "run_00_circuit.txt",
            "loss_curve.csv",
            "summary.csv",
            "summary.toml",
        ] {
            assert!(dir.path().join(f).is_file(), "{f}");
        }
        let toml_text = std::fs::read_to_string(dir.path().join("summary.toml")).unwrap();
        assert!(toml_text.contains("n - 1"));
    }

    #[test]
    fn invalid_config_writes_nothing() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("never");
        let mut cfg = adhoc_cfg(eqc(5));
        cfg.dataset = DatasetConfig::Iris {
            path: "does-not-matter.csv".into(),
            train_fraction: 0.65,
        };
        assert!(run_experiment(&cfg, &out).is_err());
        assert!(!out.exists());
    }

    #[test]
    fn comparison_rows() {
        let dir = tempfile::tempdir().unwrap();
        let ext = vec!["SVC=0.9".parse::<ExternalScore>().unwrap()];
        let t = compare_models(&adhoc_cfg(eqc(3)), &adhoc_cfg(vqc()), &ext, dir.path()).unwrap();
        assert_eq!(t.rows.len(), 3);
        assert_eq!(t.rows[2].source, "external");
        assert!(dir.path().join("comparison.csv").is_file());
        assert!(dir.path().join("EQC").join("summary.csv").is_file());
        let mut other = adhoc_cfg(vqc());
        other.seed = 12;
        assert!(compare_models(&adhoc_cfg(eqc(3)), &other, &[], dir.path()).is_err());
    }

    #[test]
    fn external_score_parsing() {
        assert!("x".parse::<ExternalScore>().is_err());
        assert!("a=1.5".parse::<ExternalScore>().is_err());
        assert_eq!("SVC = 0.97".parse::<ExternalScore>().unwrap().test_accuracy, 0.97);
    }

    #[test]
    fn probe_rejects_large_n() {
        assert!(probe_plateau(&[2, 13], 1, 30, 0, ProbeObservable::Global).is_err());
        assert!(probe_plateau(&[], 1, 30, 0, ProbeObservable::Global).is_err());
        let rows = probe_plateau(&[1, 2], 2, 30, 0, ProbeObservable::Global).unwrap();
        assert_eq!(rows.len(), 2);
        assert!(rows.iter().all(|r| r.1 > 0.0));
    }
}
