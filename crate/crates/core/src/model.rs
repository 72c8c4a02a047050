//! The classifier pipeline shared by both trainers:
//! `|Ψ(x)⟩ = W · U_Φ(x)|0…0⟩`, measured in the Z basis and turned into an
//! estimate by the label encoding.

use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::encoding::{dataset_loss, Estimate, LabelEncoding, LossKind};
use crate::error::{Error, Result};
use crate::feature_map::{prepare_state, FeatureMapSpec};
use crate::seed;
use crate::sim::{sample_histogram, Gate, StateVector};

/// How the measured distribution is obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EstimatorMode {
    /// Probabilities read directly from the amplitudes.
    #[default]
    Exact,
    /// Empirical frequencies from `shots` samples per circuit.
    Shots { shots: u64, seed: u64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Classifier {
    pub map: FeatureMapSpec,
    pub encoding: LabelEncoding,
    pub loss: LossKind,
    pub mode: EstimatorMode,
}

/// Feature-map states computed once per dataset, with their labels.
#[derive(Clone, Debug)]
pub struct PreparedData {
    pub states: Vec<StateVector>,
    pub labels: Vec<i32>,
}

impl PreparedData {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Evaluation {
    pub loss: f64,
    pub accuracy: f64,
}

impl Classifier {
    pub fn new(map: FeatureMapSpec, encoding: LabelEncoding, loss: LossKind) -> Self {
        Classifier {
            map,
            encoding,
            loss,
            mode: EstimatorMode::Exact,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.map.n_qubits()
    }

    /// Checks that map, encoding, loss and labels fit together.
    pub fn validate(&self, data: &Dataset) -> Result<()> {
        self.map.validate()?;
        if self.encoding.n_qubits() != self.map.n_qubits() {
            return Err(Error::DimensionMismatch {
                what: "encoding qubit count",
                expected: self.map.n_qubits(),
                found: self.encoding.n_qubits(),
            });
        }
        if !self.encoding.accepts_loss(self.loss) {
            return Err(Error::Encoding(format!(
                "loss {:?} cannot be used with a {} encoding",
                self.loss,
                if self.encoding.is_binary() { "binary parity" } else { "multi-hot" }
            )));
        }
        if !data.is_empty() && data.n_features() != self.map.n_features {
            return Err(Error::DimensionMismatch {
                what: "dataset dimension vs feature map",
                expected: self.map.n_features,
                found: data.n_features(),
            });
        }
        if data.n_classes != self.encoding.n_classes() {
            return Err(Error::Encoding(format!(
                "dataset has {} classes but the encoding distinguishes {}",
                data.n_classes,
                self.encoding.n_classes()
            )));
        }
        for &y in &data.labels {
            self.encoding.check_label(y)?;
        }
        if let EstimatorMode::Shots { shots: 0, .. } = self.mode {
            return Err(Error::InvalidArgument("shots must be at least 1".into()));
        }
        Ok(())
    }

    pub fn prepare(&self, data: &Dataset) -> Result<PreparedData> {
        self.validate(data)?;
        let states = data
            .features
            .iter()
            .map(|x| prepare_state(&self.map, x))
            .collect::<Result<Vec<_>>>()?;
        Ok(PreparedData {
            states,
            labels: data.labels.clone(),
        })
    }

    /// Estimate for one prepared state after the trainable gates.
    ///
    /// `key` identifies the evaluation in shots mode so that sampling is
    /// reproducible; it is ignored in exact mode.
    pub fn estimate(&self, prepared: &StateVector, gates: &[Gate], key: &[u64]) -> Result<Estimate> {
        let mut state = prepared.clone();
        state.apply_all(gates)?;
        let probabilities = state.probabilities();
        match self.mode {
            EstimatorMode::Exact => self.encoding.estimate(&probabilities),
            EstimatorMode::Shots { shots, seed: s } => {
                let mut path = vec![seed::stream::SHOTS];
                path.extend_from_slice(key);
                let counts = sample_histogram(&probabilities, shots, seed::derive_seed(s, &path))?;
                let freq: Vec<f64> = counts.iter().map(|&c| c as f64 / shots as f64).collect();
                self.encoding.estimate(&freq)
            }
        }
    }

    pub fn estimates(&self, data: &PreparedData, gates: &[Gate], key: &[u64]) -> Result<Vec<Estimate>> {
        data.states
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let mut k = key.to_vec();
                k.push(i as u64);
                self.estimate(s, gates, &k)
            })
            .collect()
    }

    pub fn accuracy_of(&self, estimates: &[Estimate], labels: &[i32]) -> f64 {
        if labels.is_empty() {
            return f64::NAN;
        }
        let hits = estimates
            .iter()
            .zip(labels)
            .filter(|(e, &y)| self.encoding.predict(e) == y)
            .count();
        hits as f64 / labels.len() as f64
    }

    /// Mean loss and accuracy of the circuit `gates` over `data`.
    pub fn evaluate(&self, data: &PreparedData, gates: &[Gate], key: &[u64]) -> Result<Evaluation> {
        if data.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let est = self.estimates(data, gates, key)?;
        Ok(Evaluation {
            loss: dataset_loss(&est, &data.labels, self.loss)?,
            accuracy: self.accuracy_of(&est, &data.labels),
        })
    }

    /// Accuracy only; `NaN` on an empty set.
    pub fn accuracy(&self, data: &PreparedData, gates: &[Gate], key: &[u64]) -> Result<f64> {
        let est = self.estimates(data, gates, key)?;
        Ok(self.accuracy_of(&est, &data.labels))
    }
}
