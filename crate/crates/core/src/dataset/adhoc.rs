//! Synthetic "ad-hoc" data that a ZZ feature map separates by construction.
//!
//! A Haar-random unitary `V` is fixed from a seed. A point `x` on a regular
//! grid over `[0, 2π)^n` gets the value
//! `f(x) = ⟨Φ(x)| V† Z^⊗n V |Φ(x)⟩` with `|Φ(x)⟩` the ZZ feature-map state,
//! and label `sign f(x)`. Points with `|f(x)| < gap` are discarded, which
//! leaves a margin between the classes.

use std::f64::consts::TAU;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::Dataset;
use crate::error::{Error, Result};
use crate::feature_map::{prepare_state, FeatureMapSpec};
use crate::seed;
use crate::sim::PauliZObservable;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdhocParams {
    pub n_dim: usize,
    pub gap: f64,
    pub per_class: usize,
    pub seed: u64,
    /// Seed of the hidden unitary; derived from `seed` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v_seed: Option<u64>,
    /// Grid points per dimension; 100 for two dimensions and 20 for three
    /// when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    /// How many times the grid may be doubled when too few points clear the gap.
    #[serde(default = "default_refinements")]
    pub max_refinements: usize,
}

fn default_refinements() -> usize {
    2
}

impl AdhocParams {
    pub fn new(n_dim: usize, gap: f64, per_class: usize, seed: u64) -> Self {
        AdhocParams {
            n_dim,
            gap,
            per_class,
            seed,
            v_seed: None,
            grid: None,
            max_refinements: default_refinements(),
        }
    }

    pub fn effective_v_seed(&self) -> u64 {
        self.v_seed
            .unwrap_or_else(|| seed::derive_seed(self.seed, &[seed::stream::UNITARY]))
    }

    pub fn effective_grid(&self) -> usize {
        self.grid
            .unwrap_or(if self.n_dim == 2 { 100 } else { 20 })
    }
}

/// Generated data plus everything needed to re-derive its labels.
#[derive(Clone, Debug)]
pub struct AdhocDataset {
    pub dataset: Dataset,
    pub params: AdhocParams,
    /// Grid density actually used after any refinement.
    pub grid_used: usize,
    pub unitary: DMatrix<Complex64>,
}

/// Sidecar metadata written next to a generated dataset.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdhocMetadata {
    pub n_dim: usize,
    pub gap: f64,
    pub per_class: usize,
    pub seed: u64,
    pub v_seed: u64,
    pub grid_density: usize,
    pub feature_map: String,
    pub observable: String,
}

impl AdhocDataset {
    pub fn label_value(&self, x: &[f64]) -> Result<f64> {
        adhoc_label_value(x, &self.unitary)
    }

    pub fn metadata(&self) -> AdhocMetadata {
        AdhocMetadata {
            n_dim: self.params.n_dim,
            gap: self.params.gap,
            per_class: self.params.per_class,
            seed: self.params.seed,
            v_seed: self.params.effective_v_seed(),
            grid_density: self.grid_used,
            feature_map: "zz_full, repetitions = 2".into(),
            observable: format!("V^dagger Z^{} V", self.params.n_dim),
        }
    }
}

/// Haar-distributed unitary from the QR decomposition of a complex Gaussian
/// matrix, with the phases of `R`'s diagonal folded back into `Q`.
pub fn haar_unitary(dim: usize, seed_value: u64) -> DMatrix<Complex64> {
    let mut rng = seed::rng_for(seed_value, &[seed::stream::UNITARY]);
    let z = DMatrix::from_fn(dim, dim, |_, _| {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        Complex64::new(re, im) / std::f64::consts::SQRT_2
    });
    let qr = z.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// `⟨Φ(x)| V† Z^⊗n V |Φ(x)⟩` for the ZZ feature map of dimension `x.len()`.
pub fn adhoc_label_value(x: &[f64], unitary: &DMatrix<Complex64>) -> Result<f64> {
    let n = x.len();
    if unitary.nrows() != 1 << n || unitary.ncols() != 1 << n {
        return Err(Error::DimensionMismatch {
            what: "hidden unitary size",
            expected: 1 << n,
            found: unitary.nrows(),
        });
    }
    let phi = prepare_state(&FeatureMapSpec::zz_full(n), x)?;
    let parity = PauliZObservable::global(n)?;
    let mut value = 0.0;
    for i in 0..(1usize << n) {
        let amp: Complex64 = (0..(1usize << n))
            .map(|k| unitary[(i, k)] * phi.amplitudes()[k])
            .sum();
        value += parity.eigenvalue(i) * amp.norm_sqr();
    }
    Ok(value.clamp(-1.0, 1.0))
}

pub fn adhoc_generate(params: &AdhocParams) -> Result<AdhocDataset> {
    if params.n_dim != 2 && params.n_dim != 3 {
        return Err(Error::InvalidArgument(format!(
            "ad-hoc data supports 2 or 3 dimensions, got {}",
            params.n_dim
        )));
    }
    if !(params.gap > 0.0) {
        return Err(Error::InvalidArgument(format!("gap must be positive, got {}", params.gap)));
    }
    if params.per_class == 0 {
        return Err(Error::InvalidArgument("per_class must be at least 1".into()));
    }
    let n = params.n_dim;
    let unitary = haar_unitary(1 << n, params.effective_v_seed());
    let mut grid = params.effective_grid().max(2);
    let mut found = 0;
    for _ in 0..=params.max_refinements {
        let (pos, neg) = candidates(n, grid, params.gap, &unitary)?;
        found = pos.len().min(neg.len());
        if found >= params.per_class {
            let mut rng = seed::rng_for(params.seed, &[seed::stream::DATA, grid as u64]);
            let mut features = Vec::with_capacity(2 * params.per_class);
            let mut labels = Vec::with_capacity(2 * params.per_class);
            for (mut group, label) in [(pos, 1), (neg, -1)] {
                group.shuffle(&mut rng);
                group.truncate(params.per_class);
                labels.extend(std::iter::repeat_n(label, group.len()));
                features.extend(group);
            }
            let dataset = Dataset::new(
                features,
                labels,
                2,
                format!("adhoc:n={n},gap={},seed={}", params.gap, params.seed),
            )?;
            return Ok(AdhocDataset {
                dataset,
                params: params.clone(),
                grid_used: grid,
                unitary,
            });
        }
        grid *= 2;
    }
    Err(Error::InsufficientCandidates {
        needed: params.per_class,
        found,
        gap: params.gap,
        refinements: params.max_refinements,
    })
}

type Points = Vec<Vec<f64>>;

fn candidates(n: usize, grid: usize, gap: f64, unitary: &DMatrix<Complex64>) -> Result<(Points, Points)> {
    let step = TAU / grid as f64;
    let total = grid.pow(n as u32);
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for flat in 0..total {
        let mut rest = flat;
        let x: Vec<f64> = (0..n)
            .map(|_| {
                let k = rest % grid;
                rest /= grid;
                k as f64 * step
            })
            .collect();
        let v = adhoc_label_value(&x, unitary)?;
        if v >= gap {
            pos.push(x);
        } else if v <= -gap {
            neg.push(x);
        }
    }
    Ok((pos, neg))
}
