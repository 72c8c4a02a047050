use crate::error::{Error, Result};

/// Tensor product of `Z` and `I` factors, one flag per qubit (`true` = `Z`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PauliZObservable {
    mask: Vec<bool>,
    bits: usize,
}

impl PauliZObservable {
    pub fn new(mask: Vec<bool>) -> Result<Self> {
        if !mask.iter().any(|&z| z) {
            return Err(Error::InvalidArgument(
                "observable needs at least one Z factor".into(),
            ));
        }
        let bits = mask
            .iter()
            .enumerate()
            .filter(|(_, &z)| z)
            .fold(0usize, |acc, (q, _)| acc | (1 << q));
        Ok(PauliZObservable { mask, bits })
    }

    /// `Z ⊗ … ⊗ Z` on `n` qubits.
    pub fn global(n: usize) -> Result<Self> {
        Self::new(vec![true; n])
    }

    /// `Z` on qubit `q` only.
    pub fn local(n: usize, q: usize) -> Result<Self> {
        if q >= n {
            return Err(Error::QubitOutOfRange { qubit: q, n_qubits: n });
        }
        let mut mask = vec![false; n];
        mask[q] = true;
        Self::new(mask)
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn n_qubits(&self) -> usize {
        self.mask.len()
    }

    /// Eigenvalue (±1) on basis state `|index⟩`.
    pub fn eigenvalue(&self, index: usize) -> f64 {
        if (index & self.bits).count_ones() % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    pub fn expectation_from_probabilities(&self, probabilities: &[f64]) -> f64 {
        let e: f64 = probabilities
            .iter()
            .enumerate()
            .map(|(i, p)| self.eigenvalue(i) * p)
            .sum();
        e.clamp(-1.0, 1.0)
    }
}
