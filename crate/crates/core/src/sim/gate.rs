use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Gate kinds understood by the simulator.
///
/// Rotations realize `exp(-i θ L / 2)` with `L` the named Pauli (or Pauli
/// product for the two-qubit kinds). `H` has no angle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GateKind {
    H,
    RX,
    RY,
    RZ,
    RXX,
    RYY,
    RZZ,
}

impl GateKind {
    /// The rotation pool used for evolved circuits (no Hadamard).
    pub const POOL: [GateKind; 6] = [
        GateKind::RX,
        GateKind::RY,
        GateKind::RZ,
        GateKind::RXX,
        GateKind::RYY,
        GateKind::RZZ,
    ];
    pub const SINGLE_QUBIT_POOL: [GateKind; 3] = [GateKind::RX, GateKind::RY, GateKind::RZ];

    pub fn arity(self) -> usize {
        match self {
            GateKind::RXX | GateKind::RYY | GateKind::RZZ => 2,
            _ => 1,
        }
    }

    pub fn is_rotation(self) -> bool {
        self != GateKind::H
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::H => "H",
            GateKind::RX => "RX",
            GateKind::RY => "RY",
            GateKind::RZ => "RZ",
            GateKind::RXX => "RXX",
            GateKind::RYY => "RYY",
            GateKind::RZZ => "RZZ",
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GateKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "H" => GateKind::H,
            "RX" => GateKind::RX,
            "RY" => GateKind::RY,
            "RZ" => GateKind::RZ,
            "RXX" => GateKind::RXX,
            "RYY" => GateKind::RYY,
            "RZZ" => GateKind::RZZ,
            other => return Err(Error::InvalidArgument(format!("unknown gate kind `{other}`"))),
        })
    }
}

/// A gate instance: kind, addressed qubit(s) and rotation angle in radians.
///
/// For single-qubit kinds `qubits[1]` is ignored and kept equal to
/// `qubits[0]`; for `H` the angle is ignored and kept at zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Gate {
    pub kind: GateKind,
    pub qubits: [usize; 2],
    pub angle: f64,
}

impl Gate {
    pub fn h(q: usize) -> Self {
        Gate {
            kind: GateKind::H,
            qubits: [q, q],
            angle: 0.0,
        }
    }

    pub fn single(kind: GateKind, q: usize, angle: f64) -> Self {
        debug_assert_eq!(kind.arity(), 1);
        Gate {
            kind,
            qubits: [q, q],
            angle,
        }
    }

    pub fn pair(kind: GateKind, a: usize, b: usize, angle: f64) -> Self {
        debug_assert_eq!(kind.arity(), 2);
        Gate {
            kind,
            qubits: [a, b],
            angle,
        }
    }

    pub fn rx(q: usize, angle: f64) -> Self {
        Self::single(GateKind::RX, q, angle)
    }
    pub fn ry(q: usize, angle: f64) -> Self {
        Self::single(GateKind::RY, q, angle)
    }
    pub fn rz(q: usize, angle: f64) -> Self {
        Self::single(GateKind::RZ, q, angle)
    }
    pub fn rxx(a: usize, b: usize, angle: f64) -> Self {
        Self::pair(GateKind::RXX, a, b, angle)
    }
    pub fn ryy(a: usize, b: usize, angle: f64) -> Self {
        Self::pair(GateKind::RYY, a, b, angle)
    }
    pub fn rzz(a: usize, b: usize, angle: f64) -> Self {
        Self::pair(GateKind::RZZ, a, b, angle)
    }

    /// The addressed qubits, one or two of them.
    pub fn targets(&self) -> &[usize] {
        &self.qubits[..self.kind.arity()]
    }

    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        for &q in self.targets() {
            if q >= n_qubits {
                return Err(Error::QubitOutOfRange { qubit: q, n_qubits });
            }
        }
        if self.kind.arity() == 2 && self.qubits[0] == self.qubits[1] {
            return Err(Error::DuplicateQubit(self.qubits[0]));
        }
        Ok(())
    }
}

/// Wraps an angle into `[0, 2π)`.
pub fn wrap_angle(theta: f64) -> f64 {
    let w = theta.rem_euclid(TAU);
    // rem_euclid of a tiny negative number rounds up to exactly 2π
    if w >= TAU {
        0.0
    } else {
        w
    }
}
