//! Data-encoding circuits `U_Φ(x)`.
//!
//! Two maps are provided:
//!
//! * `ZzFull`: `(V_Φ(x) H^⊗n)^r` with `r = 2` by default, where
//!   `V_Φ(x) = Π_{i<j} RZZ(2 φ_ij) · Π_i RZ(2 φ_i)`, `φ_i = x_i` and
//!   `φ_ij = (π − x_i)(π − x_j)`.
//! * `RxProduct`: `⊗_i RX(x_i)`, depth one. Inputs must already be scaled
//!   into `[0, 2π)`.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sim::{run_circuit, Gate, StateVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureMapKind {
    ZzFull,
    RxProduct,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureMapSpec {
    pub kind: FeatureMapKind,
    pub n_features: usize,
    /// Number of `V_Φ H` blocks for `ZzFull`; ignored by `RxProduct`.
    pub repetitions: usize,
}

impl FeatureMapSpec {
    pub fn zz_full(n_features: usize) -> Self {
        FeatureMapSpec {
            kind: FeatureMapKind::ZzFull,
            n_features,
            repetitions: 2,
        }
    }

    pub fn rx_product(n_features: usize) -> Self {
        FeatureMapSpec {
            kind: FeatureMapKind::RxProduct,
            n_features,
            repetitions: 1,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_features
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_features == 0 {
            return Err(Error::InvalidArgument("feature map needs n_features >= 1".into()));
        }
        if self.kind == FeatureMapKind::ZzFull && self.repetitions == 0 {
            return Err(Error::InvalidArgument("ZZ feature map needs repetitions >= 1".into()));
        }
        Ok(())
    }

    pub fn gates(&self, x: &[f64]) -> Result<Vec<Gate>> {
        self.validate()?;
        match self.kind {
            FeatureMapKind::ZzFull => zz_gates(x, self.n_features, self.repetitions),
            FeatureMapKind::RxProduct => rx_product_map_gates(x, self.n_features),
        }
    }
}

fn check_dim(x: &[f64], n: usize) -> Result<()> {
    if x.len() != n {
        return Err(Error::DimensionMismatch {
            what: "feature vector length",
            expected: n,
            found: x.len(),
        });
    }
    Ok(())
}

/// Gate list of the two-repetition ZZ map, in application order
/// `H, V, H, V`.
pub fn zz_feature_map_gates(x: &[f64], n: usize) -> Result<Vec<Gate>> {
    zz_gates(x, n, 2)
}

fn zz_gates(x: &[f64], n: usize, reps: usize) -> Result<Vec<Gate>> {
    check_dim(x, n)?;
    let mut gates = Vec::with_capacity(reps * (2 * n + n * (n - 1) / 2));
    for _ in 0..reps {
        gates.extend((0..n).map(Gate::h));
        gates.extend((0..n).map(|i| Gate::rz(i, 2.0 * x[i])));
        for i in 0..n {
            for j in i + 1..n {
                gates.push(Gate::rzz(i, j, 2.0 * (PI - x[i]) * (PI - x[j])));
            }
        }
    }
    Ok(gates)
}

pub fn rx_product_map_gates(x: &[f64], n: usize) -> Result<Vec<Gate>> {
    check_dim(x, n)?;
    x.iter()
        .enumerate()
        .map(|(i, &v)| {
            if (0.0..TAU).contains(&v) {
                Ok(Gate::rx(i, v))
            } else {
                Err(Error::FeatureOutOfRange { index: i, value: v })
            }
        })
        .collect()
}

/// `U_Φ(x)|0…0⟩`.
pub fn prepare_state(spec: &FeatureMapSpec, x: &[f64]) -> Result<StateVector> {
    run_circuit(spec.n_qubits(), &spec.gates(x)?)
}
