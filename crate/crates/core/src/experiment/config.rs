use std::f64::consts::FRAC_PI_2;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::encoding::{default_partition, BinaryParityEncoding, LabelEncoding, LossKind, MultiHotEncoding};
use crate::error::{Error, Result};
use crate::evolution::MutationConfig;
use crate::feature_map::{FeatureMapKind, FeatureMapSpec};
use crate::model::{Classifier, EstimatorMode};
use crate::sim::PauliZObservable;
use crate::variational::AnsatzSpec;

fn default_repetitions() -> usize {
    10
}

fn default_train_fraction() -> f64 {
    0.65
}

/// One experiment: a dataset, a classifier pipeline, a trainer, and how many
/// seeded repetitions to run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Label used in tables and as the sub-directory name in comparisons.
    #[serde(default)]
    pub name: Option<String>,
    /// Master seed; every per-run seed is derived from it and the run index.
    pub seed: u64,
    #[serde(default = "default_repetitions")]
    pub repetitions: usize,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    pub dataset: DatasetConfig,
    pub feature_map: FeatureMapKind,
    pub encoding: EncodingConfig,
    pub loss: LossKind,
    #[serde(default)]
    pub estimator: EstimatorMode,
    pub trainer: TrainerConfig,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DatasetConfig {
    /// UCI iris CSV; relative paths resolve against the config file's
    /// directory. Features are min-max scaled to `[0, 2π)` using the
    /// training split only.
    Iris {
        path: PathBuf,
        #[serde(default = "default_train_fraction")]
        train_fraction: f64,
    },
    /// Freshly generated ad-hoc data for every run.
    Adhoc {
        n_dim: usize,
        gap: f64,
        train_per_class: usize,
        test_per_class: usize,
        #[serde(default)]
        grid: Option<usize>,
    },
}

impl DatasetConfig {
    pub fn n_features(&self) -> usize {
        match self {
            DatasetConfig::Iris { .. } => 4,
            DatasetConfig::Adhoc { n_dim, .. } => *n_dim,
        }
    }

    pub fn n_classes(&self) -> usize {
        match self {
            DatasetConfig::Iris { .. } => 3,
            DatasetConfig::Adhoc { .. } => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum EncodingConfig {
    /// Binary labels from a Z-parity observable; `mask` defaults to all
    /// qubits.
    Parity {
        #[serde(default)]
        mask: Option<Vec<bool>>,
        #[serde(default)]
        threshold: f64,
    },
    /// Consecutive equal-size buckets starting at basis index 1.
    Default,
    Buckets { buckets: Vec<Vec<usize>> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VqcConfig {
    pub layers: usize,
    #[serde(default = "default_learning_rate")]
    pub learning_rate: f64,
    #[serde(default = "default_epochs")]
    pub epochs: usize,
    #[serde(default = "default_entangler")]
    pub entangler_angle: f64,
}

fn default_learning_rate() -> f64 {
    0.1
}

fn default_epochs() -> usize {
    500
}

fn default_entangler() -> f64 {
    FRAC_PI_2
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TrainerConfig {
    /// `seed` inside the block is mixed into each run's derived seed.
    Eqc(MutationConfig),
    Vqc(VqcConfig),
}

impl TrainerConfig {
    pub fn label(&self) -> &'static str {
        match self {
            TrainerConfig::Eqc(_) => "EQC",
            TrainerConfig::Vqc(_) => "VQC",
        }
    }

    pub fn iterations(&self) -> usize {
        match self {
            TrainerConfig::Eqc(m) => m.max_generations,
            TrainerConfig::Vqc(v) => v.epochs,
        }
    }
}

impl ExperimentConfig {
    /// Parses TOML text. Relative dataset paths are resolved against
    /// `base_dir`.
    pub fn from_toml_str(text: &str, base_dir: &Path) -> Result<Self> {
        let mut cfg: ExperimentConfig = toml::from_str(text)?;
        if let DatasetConfig::Iris { path, .. } = &mut cfg.dataset {
            if path.is_relative() {
                *path = base_dir.join(&*path);
            }
        }
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        Self::from_toml_str(&text, base)
    }

    pub fn display_name(&self) -> String {
        self.name.clone().unwrap_or_else(|| self.trainer.label().to_string())
    }

    pub fn n_qubits(&self) -> usize {
        self.dataset.n_features()
    }

    pub fn feature_map_spec(&self) -> FeatureMapSpec {
        let n = self.n_qubits();
        match self.feature_map {
            FeatureMapKind::ZzFull => FeatureMapSpec::zz_full(n),
            FeatureMapKind::RxProduct => FeatureMapSpec::rx_product(n),
        }
    }

    pub fn label_encoding(&self) -> Result<LabelEncoding> {
        let n = self.n_qubits();
        let k = self.dataset.n_classes();
        match &self.encoding {
            EncodingConfig::Parity { mask, threshold } => {
                if k != 2 {
                    return Err(Error::config(
                        "encoding.kind",
                        format!("parity encoding is binary but the dataset has {k} classes"),
                    ));
                }
                let obs = match mask {
                    Some(m) if m.len() != n => {
                        return Err(Error::config(
                            "encoding.mask",
                            format!("mask has {} entries for {n} qubits", m.len()),
                        ))
                    }
                    Some(m) => PauliZObservable::new(m.clone()),
                    None => PauliZObservable::global(n),
                }
                .map_err(|e| Error::config("encoding.mask", e.to_string()))?;
                Ok(LabelEncoding::Binary(BinaryParityEncoding {
                    observable: obs,
                    threshold: *threshold,
                }))
            }
            EncodingConfig::Default => default_partition(n, k)
                .map(LabelEncoding::MultiHot)
                .map_err(|e| Error::config("encoding.kind", e.to_string())),
            EncodingConfig::Buckets { buckets } => {
                if buckets.len() != k {
                    return Err(Error::config(
                        "encoding.buckets",
                        format!("{} buckets for {k} classes", buckets.len()),
                    ));
                }
                MultiHotEncoding::new(n, buckets.clone())
                    .map(LabelEncoding::MultiHot)
                    .map_err(|e| Error::config("encoding.buckets", e.to_string()))
            }
        }
    }

    pub fn classifier(&self) -> Result<Classifier> {
        let mut clf = Classifier::new(self.feature_map_spec(), self.label_encoding()?, self.loss);
        clf.mode = self.estimator;
        Ok(clf)
    }

    pub fn ansatz(&self) -> Option<AnsatzSpec> {
        match &self.trainer {
            TrainerConfig::Vqc(v) => Some(AnsatzSpec {
                n_qubits: self.n_qubits(),
                layers: v.layers,
                entangler_angle: v.entangler_angle,
            }),
            TrainerConfig::Eqc(_) => None,
        }
    }

    /// Consistency checks; errors name the offending field.
    pub fn validate(&self) -> Result<()> {
        if self.repetitions == 0 {
            return Err(Error::config("repetitions", "must be at least 1"));
        }
        match &self.dataset {
            DatasetConfig::Iris { train_fraction, .. } => {
                if !(*train_fraction > 0.0 && *train_fraction < 1.0) {
                    return Err(Error::config("dataset.train_fraction", "must lie in (0, 1)"));
                }
            }
            DatasetConfig::Adhoc {
                n_dim,
                gap,
                train_per_class,
                test_per_class,
                ..
            } => {
                if !(2..=3).contains(n_dim) {
                    return Err(Error::config("dataset.n_dim", "ad-hoc data supports 2 or 3 dimensions"));
                }
                if !(*gap >= 0.0 && *gap < 1.0) {
                    return Err(Error::config("dataset.gap", "must lie in [0, 1)"));
                }
                if *train_per_class == 0 || *test_per_class == 0 {
                    return Err(Error::config(
                        "dataset.train_per_class",
                        "train and test sizes per class must both be at least 1",
                    ));
                }
            }
        }
        let clf = self.classifier()?;
        if !clf.encoding.accepts_loss(self.loss) {
            return Err(Error::config(
                "loss",
                format!("{:?} does not fit the {} encoding", self.loss, if clf.encoding.is_binary() { "parity" } else { "multi-hot" }),
            ));
        }
        if let EstimatorMode::Shots { shots: 0, .. } = self.estimator {
            return Err(Error::config("estimator.shots", "must be at least 1"));
        }
        match &self.trainer {
            TrainerConfig::Eqc(m) => m.validate().map_err(|e| Error::config("trainer", e.to_string()))?,
            TrainerConfig::Vqc(v) => {
                if v.layers == 0 {
                    return Err(Error::config("trainer.layers", "must be at least 1"));
                }
                if !(v.learning_rate > 0.0) {
                    return Err(Error::config("trainer.learning_rate", "must be positive"));
                }
                if v.epochs == 0 {
                    return Err(Error::config("trainer.epochs", "must be at least 1"));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const ADHOC_EQC: &str = r#"
        seed = 7
        repetitions = 2
        feature_map = "zz_full"
        loss = "mse"

        [dataset]
        kind = "adhoc"
        n_dim = 2
        gap = 0.3
        train_per_class = 20
        test_per_class = 10

        [encoding]
        kind = "parity"

        [trainer]
        kind = "eqc"
        mu = 4
        max_generations = 50
    "#;

    #[test]
    fn parses_and_validates() {
        let cfg = ExperimentConfig::from_toml_str(ADHOC_EQC, Path::new(".")).unwrap();
        cfg.validate().unwrap();
        assert_eq!(cfg.display_name(), "EQC");
        match &cfg.trainer {
            TrainerConfig::Eqc(m) => {
                assert_eq!(m.max_generations, 50);
                assert_eq!(m.p_insert, 0.5);
            }
            _ => panic!("wrong trainer"),
        }
        assert_eq!(cfg.estimator, EstimatorMode::Exact);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let bad = ADHOC_EQC.replace("mu = 4", "mu = 4\nlambda = 3");
        assert!(matches!(
            ExperimentConfig::from_toml_str(&bad, Path::new(".")),
            Err(Error::Toml(_))
        ));
    }

    #[test]
    fn binary_encoding_on_three_classes_fails() {
        let text = r#"
            seed = 1
            feature_map = "rx_product"
            loss = "mse"
            [dataset]
            kind = "iris"
            path = "iris.csv"
            [encoding]
            kind = "parity"
            [trainer]
            kind = "vqc"
            layers = 2
        "#;
        let cfg = ExperimentConfig::from_toml_str(text, Path::new("/data")).unwrap();
        assert!(matches!(&cfg.dataset, DatasetConfig::Iris { path, .. } if path == Path::new("/data/iris.csv")));
        assert!(matches!(cfg.validate(), Err(Error::Config { path, .. }) if path == "encoding.kind"));
    }

    #[test]
    fn loss_must_fit_encoding() {
        let bad = ADHOC_EQC.replace("loss = \"mse\"", "loss = \"cross_entropy\"");
        let cfg = ExperimentConfig::from_toml_str(&bad, Path::new(".")).unwrap();
        assert!(matches!(cfg.validate(), Err(Error::Config { path, .. }) if path == "loss"));
    }
}
