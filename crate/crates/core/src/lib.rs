//! Quantum classifiers trained either by evolving a variable-topology gate
//! list (elitist mutation) or by gradient descent on a fixed layered ansatz,
//! on top of an exact dense statevector simulator.

pub mod dataset;
pub mod encoding;
pub mod error;
pub mod evolution;
pub mod experiment;
pub mod feature_map;
pub mod history;
pub mod model;
pub mod seed;
pub mod sim;
pub mod variational;

pub use error::{Error, Result};
