use std::collections::BTreeMap;
use std::path::PathBuf;

use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use sha2::{Digest, Sha256};

use eqc::dataset::{adhoc_generate, load_iris, minmax_scale, split, AdhocParams, Dataset};
use eqc::feature_map::zz_feature_map_gates;
use eqc::sim::dense_unitary_oracle;

fn iris_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/iris.csv")
}

#[test]
fn bundled_iris_matches_checksum() {
    let bytes = std::fs::read(iris_path()).unwrap();
    let digest: String = Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect();
    let recorded = std::fs::read_to_string(iris_path().with_extension("csv.sha256")).unwrap();
    assert_eq!(digest, recorded.split_whitespace().next().unwrap());
}

#[test]
fn iris_shape_and_class_balance() {
    let d = load_iris(&iris_path()).unwrap();
    assert_eq!((d.len(), d.n_features(), d.n_classes), (150, 4, 3));
    let mut counts = BTreeMap::new();
    for &y in &d.labels {
        *counts.entry(y).or_insert(0) += 1;
    }
    assert_eq!(counts.into_values().collect::<Vec<_>>(), vec![50, 50, 50]);
}

#[test]
fn iris_split_is_stratified_and_disjoint() {
    let d = load_iris(&iris_path()).unwrap();
    for seed in 0..5 {
        let s = split(&d, 0.65, seed).unwrap();
        let mut all: Vec<usize> = s.train_indices.iter().chain(&s.test_indices).copied().collect();
        all.sort_unstable();
        assert_eq!(all, (0..150).collect::<Vec<_>>());
        for c in 0..3 {
            let n = s.train.labels.iter().filter(|&&y| y == c).count() as f64;
            assert!((n - 0.65 * 50.0).abs() <= 1.0, "class {c}: {n}");
        }
    }
}

/// Label value recomputed from full matrices: `|Φ⟩ = U_Φ|0⟩` as the first
/// column of the dense feature-map unitary, then `⟨Φ|V† Z^⊗n V|Φ⟩`.
fn dense_label_value(x: &[f64], v: &DMatrix<Complex64>) -> f64 {
    let n = x.len();
    let u = dense_unitary_oracle(n, &zz_feature_map_gates(x, n).unwrap()).unwrap();
    let psi = v * u.column(0);
    (0..1usize << n)
        .map(|i| {
            let sign = if i.count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            sign * psi[i].norm_sqr()
        })
        .sum()
}

#[test]
fn adhoc_labels_agree_with_dense_recomputation() {
    for (n, seed) in [(2, 3u64), (3, 4)] {
        let g = adhoc_generate(&AdhocParams::new(n, 0.3, 15, seed)).unwrap();
        assert_eq!(g.dataset.len(), 30);
        for (x, &y) in g.dataset.features.iter().zip(&g.dataset.labels) {
            let f = dense_label_value(x, &g.unitary);
            assert!(f.abs() >= 0.3 - 1e-9, "margin {f}");
            assert_eq!(y, if f > 0.0 { 1 } else { -1 });
        }
        assert_eq!(g.dataset.labels.iter().filter(|&&y| y == 1).count(), 15);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn scaling_round_trips(rows in prop::collection::vec(prop::collection::vec(-50.0..50.0f64, 3), 2..20)) {
        let n = rows.len();
        let d = Dataset::new(rows, (0..n as i32).map(|i| i % 2).collect(), 2, "p").unwrap();
        prop_assume!((0..3).all(|j| {
            let col: Vec<f64> = d.features.iter().map(|r| r[j]).collect();
            col.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - col.iter().cloned().fold(f64::INFINITY, f64::min) > 1e-6
        }));
        let (s, scaler) = minmax_scale(&d).unwrap();
        for row in &s.features {
            for &v in row {
                prop_assert!((0.0..std::f64::consts::TAU).contains(&v));
            }
        }
        let back = scaler.inverse_transform(&s);
        for (a, b) in back.features.iter().flatten().zip(d.features.iter().flatten()) {
            prop_assert!((a - b).abs() < 1e-9 * (1.0 + b.abs()));
        }
    }
}
