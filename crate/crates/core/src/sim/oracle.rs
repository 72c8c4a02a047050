//! Dense matrix reference for the statevector kernels.
//!
//! Each gate is expanded to a full `2^n × 2^n` unitary built from Pauli
//! matrices and Kronecker products, and the circuit is the ordinary matrix
//! product. Slow by construction; used to cross-check the fast path.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::gate::{Gate, GateKind};
use crate::error::{Error, Result};

pub const ORACLE_MAX_QUBITS: usize = 6;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn pauli(kind: char) -> DMatrix<Complex64> {
    let z = c(0.0, 0.0);
    let o = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    match kind {
        'I' => DMatrix::from_row_slice(2, 2, &[o, z, z, o]),
        'X' => DMatrix::from_row_slice(2, 2, &[z, o, o, z]),
        'Y' => DMatrix::from_row_slice(2, 2, &[z, -i, i, z]),
        'Z' => DMatrix::from_row_slice(2, 2, &[o, z, z, -o]),
        _ => unreachable!(),
    }
}

/// Embeds per-qubit 2×2 factors into the full space. `factors[q]` acts on
/// qubit `q`; qubit 0 is the least significant index bit, so it is the
/// rightmost Kronecker factor.
pub fn embed(factors: &[DMatrix<Complex64>]) -> DMatrix<Complex64> {
    let mut out = DMatrix::from_element(1, 1, c(1.0, 0.0));
    for f in factors.iter().rev() {
        out = out.kronecker(f);
    }
    out
}

/// Full unitary of a single gate on an `n`-qubit register.
pub fn gate_unitary(n_qubits: usize, gate: &Gate) -> Result<DMatrix<Complex64>> {
    gate.validate(n_qubits)?;
    let dim = 1usize << n_qubits;
    let identity = DMatrix::<Complex64>::identity(dim, dim);
    let pauli_string = |p: char| {
        let mut factors = vec![pauli('I'); n_qubits];
        for &q in gate.targets() {
            factors[q] = pauli(p);
        }
        embed(&factors)
    };
    let rotation = |p: char| {
        let (cs, sn) = ((gate.angle / 2.0).cos(), (gate.angle / 2.0).sin());
        &identity * c(cs, 0.0) + pauli_string(p) * c(0.0, -sn)
    };
    Ok(match gate.kind {
        GateKind::H => {
            let r = std::f64::consts::FRAC_1_SQRT_2;
            (pauli_string('X') + pauli_string('Z')) * c(r, 0.0)
        }
        GateKind::RX | GateKind::RXX => rotation('X'),
        GateKind::RY | GateKind::RYY => rotation('Y'),
        GateKind::RZ | GateKind::RZZ => rotation('Z'),
    })
}

/// Product `U_d ⋯ U_1` of all gate unitaries (first gate applied first).
pub fn dense_unitary_oracle(n_qubits: usize, gates: &[Gate]) -> Result<DMatrix<Complex64>> {
    if n_qubits == 0 {
        return Err(Error::InvalidArgument("a register needs at least one qubit".into()));
    }
    if n_qubits > ORACLE_MAX_QUBITS {
        return Err(Error::TooManyQubits {
            what: "dense unitary oracle",
            n: n_qubits,
            max: ORACLE_MAX_QUBITS,
        });
    }
    let dim = 1usize << n_qubits;
    let mut u = DMatrix::<Complex64>::identity(dim, dim);
    for g in gates {
        u = gate_unitary(n_qubits, g)? * u;
    }
    Ok(u)
}

/// `max |(U†U − I)_ij|`.
pub fn unitarity_defect(u: &DMatrix<Complex64>) -> f64 {
    let prod = u.adjoint() * u;
    let id = DMatrix::<Complex64>::identity(u.nrows(), u.ncols());
    (prod - id).iter().map(|z| z.norm()).fold(0.0, f64::max)
}
