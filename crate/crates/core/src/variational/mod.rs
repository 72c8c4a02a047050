//! Variational quantum classifier (VQC) baseline and barren-plateau
//! diagnostics.
//!
//! The ansatz is a fixed hardware-efficient layout: per layer an `RY` and an
//! `RZ` on every qubit, then a ring of `RZZ(π/2)` entanglers between
//! neighbouring qubits. Training is plain full-batch gradient descent with
//! parameter-shift gradients.

mod plateau;

pub use plateau::{
    circuit_cost, cost_gradient_matrix, gradient_variance_probe, log_variance_slope, ProbeObservable,
};

use std::f64::consts::{FRAC_PI_2, TAU};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::SplitDataset;
use crate::encoding::{sample_loss_gradient, Estimate};
use crate::error::{Error, Result};
use crate::history::GenerationRecord;
use crate::model::{Classifier, PreparedData};
use crate::seed::{self, stream};
use crate::sim::Gate;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnsatzSpec {
    pub n_qubits: usize,
    pub layers: usize,
    /// Fixed angle of the ring entanglers.
    #[serde(default = "default_entangler_angle")]
    pub entangler_angle: f64,
}

fn default_entangler_angle() -> f64 {
    FRAC_PI_2
}

impl AnsatzSpec {
    pub fn new(n_qubits: usize, layers: usize) -> Self {
        AnsatzSpec {
            n_qubits,
            layers,
            entangler_angle: FRAC_PI_2,
        }
    }

    pub fn n_params(&self) -> usize {
        2 * self.n_qubits * self.layers
    }

    /// Ring edges `(i, i+1 mod n)`; two qubits share a single edge and one
    /// qubit has none.
    pub fn ring(&self) -> Vec<(usize, usize)> {
        match self.n_qubits {
            0 | 1 => vec![],
            2 => vec![(0, 1)],
            n => (0..n).map(|i| (i, (i + 1) % n)).collect(),
        }
    }

    pub fn depth(&self) -> usize {
        self.layers * (2 * self.n_qubits + self.ring().len())
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_qubits == 0 || self.layers == 0 {
            return Err(Error::InvalidArgument(
                "ansatz needs at least one qubit and one layer".into(),
            ));
        }
        Ok(())
    }
}

/// Gate list of the ansatz with parameters `theta`. Parameter `2(l·n + q)`
/// drives the `RY` on qubit `q` in layer `l`, the next one its `RZ`.
pub fn build_ansatz(spec: &AnsatzSpec, theta: &[f64]) -> Result<Vec<Gate>> {
    spec.validate()?;
    if theta.len() != spec.n_params() {
        return Err(Error::DimensionMismatch {
            what: "ansatz parameter count",
            expected: spec.n_params(),
            found: theta.len(),
        });
    }
    let n = spec.n_qubits;
    let ring = spec.ring();
    let mut gates = Vec::with_capacity(spec.depth());
    for l in 0..spec.layers {
        for q in 0..n {
            let k = 2 * (l * n + q);
            gates.push(Gate::ry(q, theta[k]));
            gates.push(Gate::rz(q, theta[k + 1]));
        }
        gates.extend(ring.iter().map(|&(a, b)| Gate::rzz(a, b, spec.entangler_angle)));
    }
    Ok(gates)
}

fn shifted(theta: &[f64], k: usize, delta: f64) -> Vec<f64> {
    let mut t = theta.to_vec();
    t[k] += delta;
    t
}

/// Gradient of the mean training loss with respect to `theta`.
///
/// Each per-sample estimate (parity expectation or bucket probability) is an
/// expectation value, so its derivative follows exactly from the ±π/2
/// parameter-shift rule; the loss derivative is then applied by the chain
/// rule. Exact for every loss kind.
pub fn parameter_shift_gradient(
    spec: &AnsatzSpec,
    theta: &[f64],
    data: &PreparedData,
    clf: &Classifier,
) -> Result<Vec<f64>> {
    if data.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let base = clf.estimates(data, &build_ansatz(spec, theta)?, &[])?;
    loss_gradient_at(spec, theta, data, clf, &base)
}

fn loss_gradient_at(
    spec: &AnsatzSpec,
    theta: &[f64],
    data: &PreparedData,
    clf: &Classifier,
    base: &[Estimate],
) -> Result<Vec<f64>> {
    let outer: Vec<Vec<f64>> = base
        .iter()
        .zip(&data.labels)
        .map(|(e, &y)| sample_loss_gradient(e, y, clf.loss))
        .collect::<Result<_>>()?;
    let m = data.len() as f64;
    (0..theta.len())
        .into_par_iter()
        .map(|k| {
            let plus = clf.estimates(data, &build_ansatz(spec, &shifted(theta, k, FRAC_PI_2))?, &[])?;
            let minus = clf.estimates(data, &build_ansatz(spec, &shifted(theta, k, -FRAC_PI_2))?, &[])?;
            let mut g = 0.0;
            for ((p, q), dl) in plus.iter().zip(&minus).zip(&outer) {
                for ((a, b), d) in p.components().iter().zip(q.components()).zip(dl) {
                    g += d * (a - b) / 2.0;
                }
            }
            Ok(g / m)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub epochs: usize,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            learning_rate: 0.1,
            epochs: 500,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug)]
pub struct VqcResult {
    pub theta: Vec<f64>,
    pub final_loss: f64,
    pub history: Vec<GenerationRecord>,
    /// Shifted circuit evaluations per epoch (two per parameter).
    pub evaluations_per_epoch: usize,
}

/// Initial parameters, uniform in `[0, 2π)`.
pub fn initial_theta(spec: &AnsatzSpec, seed_value: u64) -> Vec<f64> {
    let mut rng = seed::rng_for(seed_value, &[stream::INIT]);
    (0..spec.n_params()).map(|_| rng.random_range(0.0..TAU)).collect()
}

/// Full-batch gradient descent `θ ← θ − η ∇L` for `cfg.epochs` epochs. The
/// history row of epoch `e` describes the parameters before its update.
pub fn train_vqc(
    spec: &AnsatzSpec,
    data: &SplitDataset,
    clf: &Classifier,
    cfg: &TrainConfig,
) -> Result<VqcResult> {
    spec.validate()?;
    if !(cfg.learning_rate >= 0.0) {
        return Err(Error::InvalidArgument("learning_rate must be non-negative".into()));
    }
    if data.train.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if spec.n_qubits != clf.n_qubits() {
        return Err(Error::DimensionMismatch {
            what: "ansatz qubit count",
            expected: clf.n_qubits(),
            found: spec.n_qubits,
        });
    }
    let train = clf.prepare(&data.train)?;
    let test = clf.prepare(&data.test)?;
    let mut theta = initial_theta(spec, cfg.seed);
    let mut history = Vec::with_capacity(cfg.epochs);
    let mut final_loss = f64::NAN;
    for epoch in 0..cfg.epochs {
        let gates = build_ansatz(spec, &theta)?;
        let base = clf.estimates(&train, &gates, &[])?;
        let loss = crate::encoding::dataset_loss(&base, &train.labels, clf.loss)?;
        let test_acc = if test.is_empty() {
            f64::NAN
        } else {
            clf.accuracy(&test, &gates, &[])?
        };
        history.push(GenerationRecord {
            generation: epoch,
            best_loss: loss,
            train_acc: clf.accuracy_of(&base, &train.labels),
            test_acc,
            depth: gates.len(),
        });
        final_loss = loss;
        if epoch + 1 == cfg.epochs {
            break;
        }
        let grad = loss_gradient_at(spec, &theta, &train, clf, &base)?;
        for (t, g) in theta.iter_mut().zip(grad) {
            *t -= cfg.learning_rate * g;
        }
    }
    Ok(VqcResult {
        theta,
        final_loss,
        history,
        evaluations_per_epoch: 2 * spec.n_params(),
    })
}
