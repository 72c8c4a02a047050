use std::f64::consts::{FRAC_PI_2, TAU};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{build_ansatz, AnsatzSpec};
use crate::error::{Error, Result};
use crate::seed::{self, stream};
use crate::sim::{PauliZObservable, StateVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbeObservable {
    /// `Z ⊗ … ⊗ Z`.
    #[default]
    Global,
    /// `Z` on qubit 0.
    Local,
}

impl ProbeObservable {
    fn build(self, n: usize) -> Result<PauliZObservable> {
        match self {
            ProbeObservable::Global => PauliZObservable::global(n),
            ProbeObservable::Local => PauliZObservable::local(n, 0),
        }
    }
}

/// Sample variance (`n − 1` denominator) of `∂⟨O⟩/∂θ_0` over `n_samples`
/// uniformly random parameter vectors of the layered ansatz, on input
/// `|0…0⟩`.
pub fn gradient_variance_probe(
    n_qubits: usize,
    layers: usize,
    n_samples: usize,
    seed_value: u64,
    observable: ProbeObservable,
) -> Result<f64> {
    if n_samples < 30 {
        return Err(Error::InvalidArgument(format!(
            "gradient variance needs at least 30 samples, got {n_samples}"
        )));
    }
    let spec = AnsatzSpec::new(n_qubits, layers);
    spec.validate()?;
    let obs = observable.build(n_qubits)?;
    let input = StateVector::zero(n_qubits)?;
    let expectation = |theta: &[f64]| -> Result<f64> {
        let mut s = input.clone();
        s.apply_all(&build_ansatz(&spec, theta)?)?;
        s.expectation_z(&obs)
    };
    let grads: Vec<f64> = (0..n_samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = seed::rng_for(seed_value, &[stream::PROBE, i as u64]);
            let mut theta: Vec<f64> = (0..spec.n_params()).map(|_| rng.random_range(0.0..TAU)).collect();
            let t0 = theta[0];
            theta[0] = t0 + FRAC_PI_2;
            let plus = expectation(&theta)?;
            theta[0] = t0 - FRAC_PI_2;
            let minus = expectation(&theta)?;
            Ok((plus - minus) / 2.0)
        })
        .collect::<Result<_>>()?;
    let mean = grads.iter().sum::<f64>() / n_samples as f64;
    Ok(grads.iter().map(|g| (g - mean).powi(2)).sum::<f64>() / (n_samples - 1) as f64)
}

/// Least-squares slope of `ln(variance)` against `n`.
pub fn log_variance_slope(points: &[(usize, f64)]) -> f64 {
    let m = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0 as f64).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let (mx, my) = (xs.iter().sum::<f64>() / m, ys.iter().sum::<f64>() / m);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

const GRADIENT_MATRIX_MAX_QUBITS: usize = 4;

fn real_square(c: &DMatrix<Complex64>, obs: &PauliZObservable) -> Result<DMatrix<f64>> {
    let n = obs.n_qubits();
    if n > GRADIENT_MATRIX_MAX_QUBITS {
        return Err(Error::TooManyQubits {
            what: "circuit gradient matrix",
            n,
            max: GRADIENT_MATRIX_MAX_QUBITS,
        });
    }
    let dim = 1usize << n;
    if c.nrows() != dim || c.ncols() != dim {
        return Err(Error::DimensionMismatch {
            what: "circuit matrix size",
            expected: dim,
            found: c.nrows().max(c.ncols()),
        });
    }
    for j in 0..dim {
        for i in 0..dim {
            if c[(i, j)].im.abs() > 1e-12 {
                return Err(Error::NonRealMatrix { row: i, col: j });
            }
        }
    }
    Ok(c.map(|z| z.re))
}

/// `F(C) = tr[C |0⟩⟨0| Cᵀ H]` for a real circuit matrix `C` and diagonal
/// Z-type observable `H`.
pub fn circuit_cost(c: &DMatrix<Complex64>, obs: &PauliZObservable) -> Result<f64> {
    let c = real_square(c, obs)?;
    Ok((0..c.nrows()).map(|i| obs.eigenvalue(i) * c[(i, 0)].powi(2)).sum())
}

/// `∂F/∂C = 2 H C |0⟩⟨0|`: only the first column is non-zero, and it equals
/// `2 H` times the first column of `C`.
pub fn cost_gradient_matrix(c: &DMatrix<Complex64>, obs: &PauliZObservable) -> Result<DMatrix<f64>> {
    let c = real_square(c, obs)?;
    let dim = c.nrows();
    let mut g = DMatrix::zeros(dim, dim);
    for i in 0..dim {
        g[(i, 0)] = 2.0 * obs.eigenvalue(i) * c[(i, 0)];
    }
    Ok(g)
}
