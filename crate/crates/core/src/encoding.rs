//! Label encodings: turning a measured distribution into class estimators,
//! predictions and losses.
//!
//! Binary problems use the expectation of a Z-parity observable, labels are
//! ±1. Multiclass problems sum basis-state probabilities over disjoint index
//! buckets, one bucket per class; labels are class indices `0..k`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sim::{PauliZObservable, StateVector};

/// Smoothing constant for the logarithmic losses.
pub const LOSS_EPS: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct BinaryParityEncoding {
    pub observable: PauliZObservable,
    /// `p(x) >= threshold` predicts +1.
    pub threshold: f64,
}

impl BinaryParityEncoding {
    pub fn new(observable: PauliZObservable) -> Self {
        BinaryParityEncoding {
            observable,
            threshold: 0.0,
        }
    }
}

/// Disjoint basis-index buckets `Ω_1 … Ω_k`. Indices in no bucket are ignored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiHotEncoding {
    n_qubits: usize,
    buckets: Vec<Vec<usize>>,
}

impl MultiHotEncoding {
    pub fn new(n_qubits: usize, buckets: Vec<Vec<usize>>) -> Result<Self> {
        let dim = 1usize << n_qubits;
        if buckets.len() < 2 {
            return Err(Error::Encoding(format!(
                "need at least 2 buckets, got {}",
                buckets.len()
            )));
        }
        let mut seen = vec![false; dim];
        for (j, bucket) in buckets.iter().enumerate() {
            if bucket.is_empty() {
                return Err(Error::Encoding(format!("bucket {j} is empty")));
            }
            for &i in bucket {
                if i >= dim {
                    return Err(Error::Encoding(format!(
                        "bucket {j} holds index {i}, outside 0..{dim}"
                    )));
                }
                if seen[i] {
                    return Err(Error::Encoding(format!(
                        "index {i} appears in more than one bucket"
                    )));
                }
                seen[i] = true;
            }
        }
        Ok(MultiHotEncoding { n_qubits, buckets })
    }

    pub fn buckets(&self) -> &[Vec<usize>] {
        &self.buckets
    }

    pub fn n_classes(&self) -> usize {
        self.buckets.len()
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }
}

/// Consecutive equal blocks over `1 … 2^n − 1`: index 0 and any remainder at
/// the top are left out. `(4, 3)` gives `{1..5}, {6..10}, {11..15}`.
pub fn default_partition(n_qubits: usize, k: usize) -> Result<MultiHotEncoding> {
    let usable = (1usize << n_qubits) - 1;
    if k < 2 || k > usable {
        return Err(Error::Encoding(format!(
            "cannot split {usable} non-zero basis indices into {k} classes"
        )));
    }
    let size = usable / k;
    let buckets = (0..k)
        .map(|j| (1 + j * size..1 + (j + 1) * size).collect())
        .collect();
    MultiHotEncoding::new(n_qubits, buckets)
}

#[derive(Clone, Debug, PartialEq)]
pub enum LabelEncoding {
    Binary(BinaryParityEncoding),
    MultiHot(MultiHotEncoding),
}

impl LabelEncoding {
    pub fn n_qubits(&self) -> usize {
        match self {
            LabelEncoding::Binary(b) => b.observable.n_qubits(),
            LabelEncoding::MultiHot(m) => m.n_qubits(),
        }
    }

    pub fn n_classes(&self) -> usize {
        match self {
            LabelEncoding::Binary(_) => 2,
            LabelEncoding::MultiHot(m) => m.n_classes(),
        }
    }

    pub fn is_binary(&self) -> bool {
        matches!(self, LabelEncoding::Binary(_))
    }

    pub fn estimate(&self, probabilities: &[f64]) -> Result<Estimate> {
        match self {
            LabelEncoding::Binary(b) => {
                if probabilities.len() != 1 << b.observable.n_qubits() {
                    return Err(Error::DimensionMismatch {
                        what: "distribution length",
                        expected: 1 << b.observable.n_qubits(),
                        found: probabilities.len(),
                    });
                }
                Ok(Estimate::Parity(
                    b.observable.expectation_from_probabilities(probabilities),
                ))
            }
            LabelEncoding::MultiHot(m) => multiclass_estimates(probabilities, m).map(Estimate::Buckets),
        }
    }

    pub fn check_label(&self, label: i32) -> Result<()> {
        let ok = match self {
            LabelEncoding::Binary(_) => label == 1 || label == -1,
            LabelEncoding::MultiHot(m) => label >= 0 && (label as usize) < m.n_classes(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Encoding(format!(
                "label {label} is not valid for a {}-class {} encoding",
                self.n_classes(),
                if self.is_binary() { "parity" } else { "multi-hot" }
            )))
        }
    }

    pub fn predict(&self, estimate: &Estimate) -> i32 {
        let threshold = match self {
            LabelEncoding::Binary(b) => b.threshold,
            LabelEncoding::MultiHot(_) => 0.0,
        };
        predict_label(estimate, threshold)
    }

    /// Loss kinds that make sense for this encoding.
    pub fn accepts_loss(&self, loss: LossKind) -> bool {
        match self {
            LabelEncoding::Binary(_) => matches!(loss, LossKind::Mse | LossKind::LogLoss),
            LabelEncoding::MultiHot(_) => loss == LossKind::CrossEntropy,
        }
    }
}

/// Per-sample model output.
#[derive(Clone, Debug, PartialEq)]
pub enum Estimate {
    /// Parity expectation `p(x) ∈ [−1, 1]`.
    Parity(f64),
    /// Bucket sums `ŷ_j`.
    Buckets(Vec<f64>),
}

impl Estimate {
    /// Flat view: one value for parity, `k` values for buckets.
    pub fn components(&self) -> &[f64] {
        match self {
            Estimate::Parity(p) => std::slice::from_ref(p),
            Estimate::Buckets(v) => v,
        }
    }
}

pub fn parity_estimate(state: &StateVector, enc: &BinaryParityEncoding) -> Result<f64> {
    state.expectation_z(&enc.observable)
}

/// `ŷ_j = Σ_{i ∈ Ω_j} omega_i`.
pub fn multiclass_estimates(omega: &[f64], enc: &MultiHotEncoding) -> Result<Vec<f64>> {
    let dim = 1usize << enc.n_qubits;
    if omega.len() != dim {
        return Err(Error::Encoding(format!(
            "distribution has {} entries but buckets index a {dim}-entry space",
            omega.len()
        )));
    }
    let total: f64 = omega.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!(
            "distribution sums to {total}, expected 1"
        )));
    }
    Ok(enc
        .buckets
        .iter()
        .map(|b| b.iter().map(|&i| omega[i]).sum::<f64>().clamp(0.0, 1.0))
        .collect())
}

/// Binary: `+1` when `p >= threshold`, else `−1`. Multiclass: argmax, lowest
/// class index wins ties.
pub fn predict_label(estimate: &Estimate, threshold: f64) -> i32 {
    match estimate {
        Estimate::Parity(p) => {
            if *p >= threshold {
                1
            } else {
                -1
            }
        }
        Estimate::Buckets(v) => {
            let mut best = 0;
            for (j, &y) in v.iter().enumerate() {
                if y > v[best] {
                    best = j;
                }
            }
            best as i32
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LossKind {
    Mse,
    LogLoss,
    CrossEntropy,
}

fn kind_mismatch(kind: LossKind) -> Error {
    Error::Encoding(format!("loss {kind:?} does not match the estimate type"))
}

/// Loss of one sample.
///
/// * MSE: `(p − y)²`
/// * log-loss: `−log((1 + y·p)/2 + ε)`
/// * cross-entropy: `−log(ỹ_y + ε)` with `ỹ = ŷ / (Σ ŷ + ε)`, so mass on
///   excluded indices is renormalized away.
pub fn sample_loss(estimate: &Estimate, label: i32, kind: LossKind) -> Result<f64> {
    match (estimate, kind) {
        (Estimate::Parity(p), LossKind::Mse) => Ok((p - label as f64).powi(2)),
        (Estimate::Parity(p), LossKind::LogLoss) => {
            let arg = ((1.0 + label as f64 * p) / 2.0).max(0.0);
            Ok(-(arg + LOSS_EPS).ln())
        }
        (Estimate::Buckets(v), LossKind::CrossEntropy) => {
            let y = usize::try_from(label)
                .ok()
                .filter(|&y| y < v.len())
                .ok_or_else(|| Error::Encoding(format!("label {label} outside 0..{}", v.len())))?;
            let s: f64 = v.iter().sum::<f64>() + LOSS_EPS;
            Ok(-(v[y] / s + LOSS_EPS).ln().min(0.0))
        }
        _ => Err(kind_mismatch(kind)),
    }
}

/// Derivative of [`sample_loss`] with respect to each estimate component.
pub fn sample_loss_gradient(estimate: &Estimate, label: i32, kind: LossKind) -> Result<Vec<f64>> {
    match (estimate, kind) {
        (Estimate::Parity(p), LossKind::Mse) => Ok(vec![2.0 * (p - label as f64)]),
        (Estimate::Parity(p), LossKind::LogLoss) => {
            let y = label as f64;
            let arg = (1.0 + y * p) / 2.0;
            if arg < 0.0 {
                // clamped region: loss is flat
                return Ok(vec![0.0]);
            }
            Ok(vec![-(y / 2.0) / (arg + LOSS_EPS)])
        }
        (Estimate::Buckets(v), LossKind::CrossEntropy) => {
            let y = usize::try_from(label)
                .ok()
                .filter(|&y| y < v.len())
                .ok_or_else(|| Error::Encoding(format!("label {label} outside 0..{}", v.len())))?;
            let s: f64 = v.iter().sum::<f64>() + LOSS_EPS;
            let t = v[y] / s;
            if t + LOSS_EPS > 1.0 {
                // the loss is clamped at zero here
                return Ok(vec![0.0; v.len()]);
            }
            let outer = -1.0 / (t + LOSS_EPS);
            Ok((0..v.len())
                .map(|j| {
                    let dt = if j == y { 1.0 / s } else { 0.0 } - v[y] / (s * s);
                    outer * dt
                })
                .collect())
        }
        _ => Err(kind_mismatch(kind)),
    }
}

/// Mean loss over a dataset.
pub fn dataset_loss(outputs: &[Estimate], labels: &[i32], kind: LossKind) -> Result<f64> {
    if outputs.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if outputs.len() != labels.len() {
        return Err(Error::DimensionMismatch {
            what: "label count",
            expected: outputs.len(),
            found: labels.len(),
        });
    }
    let mut total = 0.0;
    for (o, &y) in outputs.iter().zip(labels) {
        if let Estimate::Parity(_) = o {
            if y != 1 && y != -1 {
                return Err(Error::Encoding(format!("binary label must be ±1, got {y}")));
            }
        }
        total += sample_loss(o, y, kind)?;
    }
    Ok(total / outputs.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{run_circuit, Gate};

    fn iris() -> MultiHotEncoding {
        default_partition(4, 3).unwrap()
    }

    #[test]
    fn default_partition_examples() {
        let p = iris();
        assert_eq!(
            p.buckets(),
            &[
                (1..=5).collect::<Vec<_>>(),
                (6..=10).collect(),
                (11..=15).collect()
            ]
        );
        assert_eq!(default_partition(2, 3).unwrap().buckets(), &[vec![1], vec![2], vec![3]]);
        assert_eq!(
            default_partition(3, 2).unwrap().buckets(),
            &[vec![1, 2, 3], vec![4, 5, 6]]
        );
        assert!(default_partition(2, 4).is_err());
        assert!(default_partition(3, 1).is_err());
    }

    #[test]
    fn bucket_validation() {
        assert!(MultiHotEncoding::new(2, vec![vec![1], vec![1]]).is_err());
        assert!(MultiHotEncoding::new(2, vec![vec![1], vec![4]]).is_err());
        assert!(MultiHotEncoding::new(2, vec![vec![1]]).is_err());
        assert!(MultiHotEncoding::new(2, vec![vec![1], vec![]]).is_err());
    }

    #[test]
    fn multiclass_examples() {
        let enc = iris();
        let mut omega = vec![0.0; 16];
        omega[0] = 1.0;
        assert_eq!(multiclass_estimates(&omega, &enc).unwrap(), vec![0.0, 0.0, 0.0]);

        let uniform = vec![1.0 / 16.0; 16];
        for y in multiclass_estimates(&uniform, &enc).unwrap() {
            assert!((y - 5.0 / 16.0).abs() < 1e-15);
        }

        let mut omega = vec![0.0; 16];
        omega[7] = 1.0;
        assert_eq!(multiclass_estimates(&omega, &enc).unwrap(), vec![0.0, 1.0, 0.0]);

        assert!(multiclass_estimates(&[0.5, 0.5], &enc).is_err());
        assert!(multiclass_estimates(&vec![0.1; 16], &enc).is_err());
    }

    #[test]
    fn parity_examples() {
        let enc = BinaryParityEncoding::new(PauliZObservable::global(2).unwrap());
        let s = run_circuit(2, &[]).unwrap();
        assert!((parity_estimate(&s, &enc).unwrap() - 1.0).abs() < 1e-12);
        let s = run_circuit(2, &[Gate::h(0), Gate::h(1)]).unwrap();
        assert!(parity_estimate(&s, &enc).unwrap().abs() < 1e-12);
        let single = BinaryParityEncoding::new(PauliZObservable::global(1).unwrap());
        let s = run_circuit(1, &[Gate::rx(0, 0.9)]).unwrap();
        assert!((parity_estimate(&s, &single).unwrap() - 0.9f64.cos()).abs() < 1e-12);
        let s3 = run_circuit(3, &[]).unwrap();
        assert!(parity_estimate(&s3, &enc).is_err());
    }

    #[test]
    fn prediction_rules() {
        assert_eq!(predict_label(&Estimate::Buckets(vec![0.1, 0.5, 0.2]), 0.0), 1);
        assert_eq!(predict_label(&Estimate::Parity(-0.3), 0.0), -1);
        assert_eq!(predict_label(&Estimate::Parity(0.0), 0.0), 1);
        assert_eq!(predict_label(&Estimate::Buckets(vec![0.3, 0.3, 0.1]), 0.0), 0);
    }

    #[test]
    fn loss_examples() {
        let outs = vec![Estimate::Parity(1.0), Estimate::Parity(-1.0)];
        assert_eq!(dataset_loss(&outs, &[1, -1], LossKind::Mse).unwrap(), 0.0);
        let zeros = vec![Estimate::Parity(0.0); 2];
        assert_eq!(dataset_loss(&zeros, &[1, -1], LossKind::Mse).unwrap(), 1.0);
        let onehot = vec![Estimate::Buckets(vec![0.0, 1.0, 0.0])];
        assert!(dataset_loss(&onehot, &[1], LossKind::CrossEntropy).unwrap() <= 1e-9);
        assert!(dataset_loss(&[], &[], LossKind::Mse).is_err());
        assert!(dataset_loss(&onehot, &[3], LossKind::CrossEntropy).is_err());
        assert!(dataset_loss(&outs, &[1, 0], LossKind::Mse).is_err());
        assert!(dataset_loss(&outs, &[1, -1], LossKind::CrossEntropy).is_err());
    }

    #[test]
    fn loss_gradients_match_differences() {
        let h = 1e-6;
        let cases: Vec<(Estimate, i32, LossKind)> = vec![
            (Estimate::Parity(0.3), 1, LossKind::Mse),
            (Estimate::Parity(-0.4), 1, LossKind::LogLoss),
            (Estimate::Parity(0.7), -1, LossKind::LogLoss),
            (Estimate::Buckets(vec![0.2, 0.3, 0.1]), 2, LossKind::CrossEntropy),
        ];
        for (est, y, kind) in cases {
            let g = sample_loss_gradient(&est, y, kind).unwrap();
            for (j, gj) in g.iter().enumerate() {
                let bump = |d: f64| {
                    let mut c = est.components().to_vec();
                    c[j] += d;
                    let e = match est {
                        Estimate::Parity(_) => Estimate::Parity(c[0]),
                        Estimate::Buckets(_) => Estimate::Buckets(c),
                    };
                    sample_loss(&e, y, kind).unwrap()
                };
                let fd = (bump(h) - bump(-h)) / (2.0 * h);
                assert!((fd - gj).abs() < 1e-6, "{kind:?} comp {j}: {fd} vs {gj}");
            }
        }
    }
}
