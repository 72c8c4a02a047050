use num_complex::Complex64;
use rand::Rng;

use super::gate::{Gate, GateKind};
use super::observable::PauliZObservable;
use crate::error::{Error, Result};
use crate::seed;

/// Upper bound on register size; dense simulation beyond this is not a goal.
pub const MAX_QUBITS: usize = 20;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense statevector over `n_qubits` qubits.
///
/// Basis index bit `q` holds the value of qubit `q` (qubit 0 is the least
/// significant bit), so `|q1 q0⟩ = |01⟩` is index 1.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// The all-zeros state `|0…0⟩`.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::InvalidArgument("a register needs at least one qubit".into()));
        }
        if n_qubits > MAX_QUBITS {
            return Err(Error::TooManyQubits {
                what: "statevector",
                n: n_qubits,
                max: MAX_QUBITS,
            });
        }
        let mut amplitudes = vec![ZERO; 1 << n_qubits];
        amplitudes[0] = ONE;
        Ok(StateVector {
            n_qubits,
            amplitudes,
        })
    }

    /// Builds a state from raw amplitudes. The length must be a power of two
    /// and the vector must be normalized to within `1e-10`.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "amplitude count {len} is not a power of two >= 2"
            )));
        }
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidArgument(format!(
                "amplitudes have squared norm {norm}, expected 1"
            )));
        }
        Ok(StateVector {
            n_qubits: len.trailing_zeros() as usize,
            amplitudes,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Applies `gate` in place.
    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        gate.validate(self.n_qubits)?;
        let (c, s) = ((gate.angle / 2.0).cos(), (gate.angle / 2.0).sin());
        let q = gate.qubits[0];
        match gate.kind {
            GateKind::H => {
                let r = std::f64::consts::FRAC_1_SQRT_2;
                let h = Complex64::new(r, 0.0);
                self.apply_single(q, [[h, h], [h, -h]]);
            }
            GateKind::RX => {
                let (c, ms) = (Complex64::new(c, 0.0), Complex64::new(0.0, -s));
                self.apply_single(q, [[c, ms], [ms, c]]);
            }
            GateKind::RY => {
                let (c, s) = (Complex64::new(c, 0.0), Complex64::new(s, 0.0));
                self.apply_single(q, [[c, -s], [s, c]]);
            }
            GateKind::RZ => {
                let lo = Complex64::new(c, -s);
                let hi = Complex64::new(c, s);
                let mask = 1 << q;
                for (i, a) in self.amplitudes.iter_mut().enumerate() {
                    *a *= if i & mask == 0 { lo } else { hi };
                }
            }
            GateKind::RZZ => {
                let even = Complex64::new(c, -s);
                let odd = Complex64::new(c, s);
                let mask = (1 << gate.qubits[0]) | (1 << gate.qubits[1]);
                for (i, a) in self.amplitudes.iter_mut().enumerate() {
                    *a *= if (i & mask).count_ones() % 2 == 0 {
                        even
                    } else {
                        odd
                    };
                }
            }
            GateKind::RXX | GateKind::RYY => {
                // cos(θ/2)·I − i·sin(θ/2)·P⊗P couples |00⟩↔|11⟩ and |01⟩↔|10⟩.
                // X⊗X maps those pairs with sign +1; Y⊗Y gives −1 on the
                // |00⟩↔|11⟩ pair and +1 on the other.
                let c = Complex64::new(c, 0.0);
                let flip = Complex64::new(0.0, -s);
                let same_parity = if gate.kind == GateKind::RXX { flip } else { -flip };
                let (b0, b1) = (1usize << gate.qubits[0], 1usize << gate.qubits[1]);
                for i in 0..self.amplitudes.len() {
                    if i & (b0 | b1) != 0 {
                        continue;
                    }
                    let (i00, i01, i10, i11) = (i, i | b0, i | b1, i | b0 | b1);
                    let (a00, a01, a10, a11) = (
                        self.amplitudes[i00],
                        self.amplitudes[i01],
                        self.amplitudes[i10],
                        self.amplitudes[i11],
                    );
                    self.amplitudes[i00] = c * a00 + same_parity * a11;
                    self.amplitudes[i11] = c * a11 + same_parity * a00;
                    self.amplitudes[i01] = c * a01 + flip * a10;
                    self.amplitudes[i10] = c * a10 + flip * a01;
                }
            }
        }
        Ok(())
    }

    fn apply_single(&mut self, q: usize, m: [[Complex64; 2]; 2]) {
        let stride = 1usize << q;
        for i in 0..self.amplitudes.len() {
            if i & stride != 0 {
                continue;
            }
            let a = self.amplitudes[i];
            let b = self.amplitudes[i | stride];
            self.amplitudes[i] = m[0][0] * a + m[0][1] * b;
            self.amplitudes[i | stride] = m[1][0] * a + m[1][1] * b;
        }
    }

    pub fn apply_all<'a>(&mut self, gates: impl IntoIterator<Item = &'a Gate>) -> Result<()> {
        for g in gates {
            self.apply(g)?;
        }
        Ok(())
    }

    /// Measurement distribution `|α_i|²` over basis indices `0 … 2^n − 1`.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn expectation_z(&self, obs: &PauliZObservable) -> Result<f64> {
        if obs.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch {
                what: "observable mask length",
                expected: self.n_qubits,
                found: obs.n_qubits(),
            });
        }
        Ok(obs.expectation_from_probabilities(&self.probabilities()))
    }

    /// Draws `shots` basis-index samples; returns a histogram of length `2^n`.
    pub fn sample_counts(&self, shots: u64, rng_seed: u64) -> Result<Vec<u64>> {
        sample_histogram(&self.probabilities(), shots, rng_seed)
    }
}

/// Multinomial histogram of `shots` draws from a probability vector.
pub fn sample_histogram(probabilities: &[f64], shots: u64, rng_seed: u64) -> Result<Vec<u64>> {
    if shots == 0 {
        return Err(Error::InvalidArgument("shots must be at least 1".into()));
    }
    let mut cdf = Vec::with_capacity(probabilities.len());
    let mut acc = 0.0;
    for p in probabilities {
        acc += p;
        cdf.push(acc);
    }
    let total = acc;
    let mut rng = seed::rng_for(rng_seed, &[seed::stream::SHOTS]);
    let mut counts = vec![0u64; probabilities.len()];
    for _ in 0..shots {
        let u = rng.random::<f64>() * total;
        let idx = cdf.partition_point(|&c| c <= u).min(counts.len() - 1);
        counts[idx] += 1;
    }
    Ok(counts)
}

/// Applies `gate` to a copy of `state`.
pub fn apply_gate(state: &StateVector, gate: &Gate) -> Result<StateVector> {
    let mut out = state.clone();
    out.apply(gate)?;
    Ok(out)
}

/// Runs `gates` in list order on `|0…0⟩`.
pub fn run_circuit(n_qubits: usize, gates: &[Gate]) -> Result<StateVector> {
    let mut state = StateVector::zero(n_qubits)?;
    state.apply_all(gates)?;
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn hadamard_on_zero() {
        let s = run_circuit(1, &[Gate::h(0)]).unwrap();
        let r = Complex64::new(FRAC_1_SQRT_2, 0.0);
        assert!(close(s.amplitudes()[0], r) && close(s.amplitudes()[1], r));
    }

    #[test]
    fn rx_pi_is_minus_i_x() {
        let s = run_circuit(1, &[Gate::rx(0, PI)]).unwrap();
        assert!(close(s.amplitudes()[0], ZERO));
        assert!(close(s.amplitudes()[1], Complex64::new(0.0, -1.0)));
    }

    #[test]
    fn rzz_on_basis_state_is_phase_only() {
        let s = run_circuit(2, &[Gate::rzz(0, 1, 1.234)]).unwrap();
        let p = s.probabilities();
        assert!((p[0] - 1.0).abs() < 1e-12);
        assert!(p[1..].iter().all(|&x| x.abs() < 1e-12));
    }

    #[test]
    fn empty_circuit_is_ground_state() {
        let s = run_circuit(2, &[]).unwrap();
        assert_eq!(s.probabilities(), vec![1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn uniform_superposition() {
        let s = run_circuit(2, &[Gate::h(0), Gate::h(1)]).unwrap();
        for p in s.probabilities() {
            assert!((p - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn little_endian_ordering() {
        let s = run_circuit(3, &[Gate::rx(1, PI)]).unwrap();
        assert!((s.probabilities()[0b010] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn z_expectations() {
        let zz = PauliZObservable::new(vec![true, true]).unwrap();
        let s = run_circuit(2, &[]).unwrap();
        assert!((s.expectation_z(&zz).unwrap() - 1.0).abs() < 1e-12);
        let s = run_circuit(2, &[Gate::rx(0, PI)]).unwrap();
        assert!((s.expectation_z(&zz).unwrap() + 1.0).abs() < 1e-12);
        let z = PauliZObservable::new(vec![true]).unwrap();
        for theta in [0.3, 1.2, 2.9] {
            let s = run_circuit(1, &[Gate::rx(0, theta)]).unwrap();
            assert!((s.expectation_z(&z).unwrap() - theta.cos()).abs() < 1e-12);
        }
        assert!(run_circuit(1, &[]).unwrap().expectation_z(&zz).is_err());
    }

    #[test]
    fn errors_on_bad_gates() {
        assert!(matches!(
            run_circuit(2, &[Gate::ry(5, 0.1)]),
            Err(Error::QubitOutOfRange { qubit: 5, n_qubits: 2 })
        ));
        assert!(matches!(
            run_circuit(2, &[Gate::ryy(0, 0, 0.1)]),
            Err(Error::DuplicateQubit(0))
        ));
        assert!(StateVector::zero(0).is_err());
    }

    #[test]
    fn sampling_contracts() {
        let s = run_circuit(2, &[]).unwrap();
        assert_eq!(s.sample_counts(100, 3).unwrap(), vec![100, 0, 0, 0]);
        assert!(s.sample_counts(0, 3).is_err());

        let u = run_circuit(2, &[Gate::h(0), Gate::h(1)]).unwrap();
        let shots = 1_000_000;
        let counts = u.sample_counts(shots, 11).unwrap();
        assert_eq!(counts.iter().sum::<u64>(), shots);
        for c in &counts {
            assert!((*c as f64 / shots as f64 - 0.25).abs() < 0.01);
        }
        assert_eq!(counts, u.sample_counts(shots, 11).unwrap());
    }

    #[test]
    fn commuting_disjoint_rotations() {
        let a = run_circuit(2, &[Gate::rx(0, 0.7), Gate::ry(1, 1.9)]).unwrap();
        let b = run_circuit(2, &[Gate::ry(1, 1.9), Gate::rx(0, 0.7)]).unwrap();
        for (x, y) in a.amplitudes().iter().zip(b.amplitudes()) {
            assert!(close(*x, *y));
        }
    }
}
