use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::sim::{Gate, GateKind};

/// Variable-length circuit `C = U_d ⋯ U_1` drawn from the rotation pool.
/// Gates run in list order. The empty genome is the identity.
#[derive(Clone, Debug, PartialEq)]
pub struct CircuitGenome {
    pub n_qubits: usize,
    pub gates: Vec<Gate>,
}

impl CircuitGenome {
    pub fn empty(n_qubits: usize) -> Self {
        CircuitGenome {
            n_qubits,
            gates: Vec::new(),
        }
    }

    pub fn depth(&self) -> usize {
        self.gates.len()
    }

    pub fn validate(&self) -> Result<()> {
        for g in &self.gates {
            if !g.kind.is_rotation() {
                return Err(Error::InvalidArgument(format!(
                    "{} is not part of the evolvable gate pool",
                    g.kind
                )));
            }
            g.validate(self.n_qubits)?;
        }
        Ok(())
    }

    /// One gate per line: `KIND q0 [q1] angle`, angles in scientific notation
    /// with 17 significant digits.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for g in &self.gates {
            let _ = write!(s, "{}", g.kind);
            for q in g.targets() {
                let _ = write!(s, " {q}");
            }
            let _ = writeln!(s, " {:.16e}", g.angle);
        }
        s
    }

    /// Parses [`to_text`](Self::to_text) output. Blank lines and lines
    /// starting with `#` are skipped.
    pub fn from_text(n_qubits: usize, text: &str) -> Result<Self> {
        let mut gates = Vec::new();
        for (k, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |m: String| Error::Parse {
                line: k as u64 + 1,
                message: m,
            };
            let fields: Vec<&str> = line.split_whitespace().collect();
            let kind: GateKind = fields[0].parse().map_err(|e: Error| err(e.to_string()))?;
            let want = 2 + kind.arity();
            if fields.len() != want {
                return Err(err(format!("{kind} takes {want} fields, found {}", fields.len())));
            }
            let q = |i: usize| {
                fields[i]
                    .parse::<usize>()
                    .map_err(|e| err(format!("qubit `{}`: {e}", fields[i])))
            };
            let angle: f64 = fields[want - 1]
                .parse()
                .map_err(|e| err(format!("angle `{}`: {e}", fields[want - 1])))?;
            let gate = if kind.arity() == 2 {
                Gate::pair(kind, q(1)?, q(2)?, angle)
            } else if kind == GateKind::H {
                Gate::h(q(1)?)
            } else {
                Gate::single(kind, q(1)?, angle)
            };
            gate.validate(n_qubits).map_err(|e| err(e.to_string()))?;
            gates.push(gate);
        }
        Ok(CircuitGenome { n_qubits, gates })
    }
}
