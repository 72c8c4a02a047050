//! Dense statevector simulation of the rotation gate set.

mod gate;
mod observable;
pub mod oracle;
mod state;

pub use gate::{wrap_angle, Gate, GateKind};
pub use observable::PauliZObservable;
pub use oracle::{dense_unitary_oracle, unitarity_defect};
pub use state::{apply_gate, run_circuit, sample_histogram, StateVector, MAX_QUBITS};
