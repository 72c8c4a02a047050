//! Classifier losses recomputed from dense unitaries.

use std::f64::consts::TAU;

use nalgebra::DVector;
use num_complex::Complex64;
use proptest::prelude::*;

use eqc::dataset::Dataset;
use eqc::encoding::{default_partition, BinaryParityEncoding, LabelEncoding, LossKind};
use eqc::evolution::{fitness, CircuitGenome};
use eqc::feature_map::FeatureMapSpec;
use eqc::sim::{dense_unitary_oracle, Gate, GateKind, PauliZObservable};

fn arb_genome(n: usize) -> impl Strategy<Value = CircuitGenome> {
    let gate = (0usize..6, 0..n, 1..n, 0.0..TAU).prop_map(move |(k, a, off, t)| {
        let kind = GateKind::POOL[k];
        if kind.arity() == 2 {
            Gate::pair(kind, a, (a + off) % n, t)
        } else {
            Gate::single(kind, a, t)
        }
    });
    prop::collection::vec(gate, 0..12).prop_map(move |gates| CircuitGenome { n_qubits: n, gates })
}

/// Probabilities of `W U_Φ(x)|0⟩` from the product of dense matrices.
fn dense_probabilities(map: &FeatureMapSpec, genome: &CircuitGenome, x: &[f64]) -> Vec<f64> {
    let n = genome.n_qubits;
    let u = dense_unitary_oracle(n, &map.gates(x).unwrap()).unwrap();
    let w = dense_unitary_oracle(n, &genome.gates).unwrap();
    let mut e0 = DVector::<Complex64>::zeros(1 << n);
    e0[0] = Complex64::new(1.0, 0.0);
    (w * u * e0).iter().map(|a| a.norm_sqr()).collect()
}

fn points(n: usize, m: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(0.0..TAU, n), m)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn binary_fitness_matches_dense_pipeline(genome in arb_genome(3), xs in points(3, 5), zz in any::<bool>()) {
        let map = if zz { FeatureMapSpec::zz_full(3) } else { FeatureMapSpec::rx_product(3) };
        let labels = vec![1, -1, 1, 1, -1];
        let d = Dataset::new(xs.clone(), labels.clone(), 2, "p").unwrap();
        let enc = LabelEncoding::Binary(BinaryParityEncoding::new(PauliZObservable::global(3).unwrap()));
        let got = fitness(&genome, &d, &map, &enc, LossKind::Mse).unwrap();
        let want: f64 = xs
            .iter()
            .zip(&labels)
            .map(|(x, &y)| {
                let probs = dense_probabilities(&map, &genome, x);
                let p: f64 = probs
                    .iter()
                    .enumerate()
                    .map(|(i, q)| if i.count_ones() % 2 == 0 { *q } else { -*q })
                    .sum();
                (p - y as f64).powi(2)
            })
            .sum::<f64>()
            / xs.len() as f64;
        prop_assert!((got - want).abs() < 1e-9, "{got} vs {want}");
    }

    #[test]
    fn multiclass_fitness_matches_dense_pipeline(genome in arb_genome(4), xs in points(4, 6)) {
        let map = FeatureMapSpec::rx_product(4);
        let labels = vec![0, 1, 2, 2, 1, 0];
        let d = Dataset::new(xs.clone(), labels.clone(), 3, "p").unwrap();
        let enc = LabelEncoding::MultiHot(default_partition(4, 3).unwrap());
        let got = fitness(&genome, &d, &map, &enc, LossKind::CrossEntropy).unwrap();
        let buckets = [1..6, 6..11, 11..16];
        let want: f64 = xs
            .iter()
            .zip(&labels)
            .map(|(x, &y)| {
                let probs = dense_probabilities(&map, &genome, x);
                let yhat: Vec<f64> = buckets.iter().map(|b| probs[b.clone()].iter().sum()).collect();
                let total: f64 = yhat.iter().sum();
                -(yhat[y as usize] / (total + 1e-10) + 1e-10).ln()
            })
            .sum::<f64>()
            / xs.len() as f64;
        prop_assert!((got - want).abs() < 1e-9, "{got} vs {want}");
    }
}
