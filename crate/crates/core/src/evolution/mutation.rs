use std::f64::consts::{PI, TAU};

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::genome::CircuitGenome;
use crate::error::{Error, Result};
use crate::sim::{wrap_angle, Gate, GateKind};

/// Hyper-parameters of the elitist search.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MutationConfig {
    pub p_insert: f64,
    pub p_modify: f64,
    pub p_swap: f64,
    pub p_delete: f64,
    /// Initial population size and children per generation.
    pub mu: usize,
    pub max_generations: usize,
    /// Half-width of the uniform kick applied by MODIFY, radians.
    pub angle_perturbation_scale: f64,
    /// MODIFY redraws the angle uniformly instead of perturbing it.
    pub full_redraw: bool,
    /// Stop once the best training loss drops below this.
    pub early_stop_loss: f64,
    /// Evaluate children on the rayon pool.
    pub parallel: bool,
    pub seed: u64,
}

impl Default for MutationConfig {
    fn default() -> Self {
        MutationConfig {
            p_insert: 0.50,
            p_modify: 0.30,
            p_swap: 0.10,
            p_delete: 0.10,
            mu: 4,
            max_generations: 500,
            angle_perturbation_scale: PI / 8.0,
            full_redraw: false,
            early_stop_loss: 1e-6,
            parallel: true,
            seed: 0,
        }
    }
}

impl MutationConfig {
    pub fn validate(&self) -> Result<()> {
        let ps = [self.p_insert, self.p_modify, self.p_swap, self.p_delete];
        if ps.iter().any(|&p| !(0.0..=1.0).contains(&p)) {
            return Err(Error::InvalidArgument(format!(
                "action probabilities must lie in [0, 1], got {ps:?}"
            )));
        }
        let total: f64 = ps.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "action probabilities sum to {total}, expected 1"
            )));
        }
        if self.mu == 0 {
            return Err(Error::InvalidArgument("mu must be at least 1".into()));
        }
        if self.max_generations == 0 {
            return Err(Error::InvalidArgument("max_generations must be at least 1".into()));
        }
        if !(self.angle_perturbation_scale >= 0.0) {
            return Err(Error::InvalidArgument(
                "angle_perturbation_scale must be non-negative".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MutationAction {
    Insert,
    Modify,
    Swap,
    Delete,
}

pub fn sample_action<R: Rng + ?Sized>(cfg: &MutationConfig, rng: &mut R) -> MutationAction {
    let u: f64 = rng.random();
    if u < cfg.p_insert {
        MutationAction::Insert
    } else if u < cfg.p_insert + cfg.p_modify {
        MutationAction::Modify
    } else if u < cfg.p_insert + cfg.p_modify + cfg.p_swap {
        MutationAction::Swap
    } else {
        MutationAction::Delete
    }
}

/// Uniform kind from the rotation pool (single-qubit kinds only when
/// `n_qubits == 1`), distinct uniform qubits, uniform angle in `[0, 2π)`.
pub fn random_gate<R: Rng + ?Sized>(n_qubits: usize, rng: &mut R) -> Gate {
    let pool: &[GateKind] = if n_qubits >= 2 {
        &GateKind::POOL
    } else {
        &GateKind::SINGLE_QUBIT_POOL
    };
    let kind = pool[rng.random_range(0..pool.len())];
    let angle = wrap_angle(rng.random_range(0.0..TAU));
    let a = rng.random_range(0..n_qubits);
    if kind.arity() == 2 {
        let mut b = rng.random_range(0..n_qubits - 1);
        if b >= a {
            b += 1;
        }
        Gate::pair(kind, a, b, angle)
    } else {
        Gate::single(kind, a, angle)
    }
}

/// Applies a specific action, falling back to INSERT when the action has no
/// target (empty genome, or SWAP without a two-qubit gate).
pub fn apply_action<R: Rng + ?Sized>(
    parent: &CircuitGenome,
    action: MutationAction,
    cfg: &MutationConfig,
    rng: &mut R,
) -> CircuitGenome {
    let mut child = parent.clone();
    let two_qubit: Vec<usize> = child
        .gates
        .iter()
        .enumerate()
        .filter(|(_, g)| g.kind.arity() == 2)
        .map(|(i, _)| i)
        .collect();
    let action = match action {
        _ if child.gates.is_empty() => MutationAction::Insert,
        MutationAction::Swap if two_qubit.is_empty() => MutationAction::Insert,
        a => a,
    };
    match action {
        MutationAction::Insert => {
            let gate = random_gate(child.n_qubits, rng);
            let pos = rng.random_range(0..=child.gates.len());
            child.gates.insert(pos, gate);
        }
        MutationAction::Modify => {
            let i = rng.random_range(0..child.gates.len());
            let g = &mut child.gates[i];
            g.angle = if cfg.full_redraw {
                wrap_angle(rng.random_range(0.0..TAU))
            } else {
                let s = cfg.angle_perturbation_scale;
                let kick = if s > 0.0 { rng.random_range(-s..=s) } else { 0.0 };
                wrap_angle(g.angle + kick)
            };
        }
        MutationAction::Swap => {
            let i = two_qubit[rng.random_range(0..two_qubit.len())];
            child.gates[i].qubits.swap(0, 1);
        }
        MutationAction::Delete => {
            let i = rng.random_range(0..child.gates.len());
            child.gates.remove(i);
        }
    }
    child
}

/// One mutation step: samples an action by the configured probabilities and
/// applies it to a copy of `parent`.
pub fn mutate<R: Rng + ?Sized>(parent: &CircuitGenome, cfg: &MutationConfig, rng: &mut R) -> CircuitGenome {
    let action = sample_action(cfg, rng);
    apply_action(parent, action, cfg, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::rng_for;
    use crate::sim::run_circuit;

    #[test]
    fn single_qubit_pool_when_n_is_one() {
        let mut rng = rng_for(1, &[]);
        for _ in 0..500 {
            assert!(random_gate(1, &mut rng).kind.arity() == 1);
        }
    }

    #[test]
    fn kind_frequencies_are_uniform() {
        let mut rng = rng_for(2, &[]);
        let mut counts = [0usize; 6];
        let n = 10_000;
        for _ in 0..n {
            let g = random_gate(3, &mut rng);
            counts[GateKind::POOL.iter().position(|&k| k == g.kind).unwrap()] += 1;
            assert!(g.validate(3).is_ok());
            assert!((0.0..TAU).contains(&g.angle));
        }
        for c in counts {
            assert!((c as f64 / n as f64 - 1.0 / 6.0).abs() < 0.03);
        }
    }

    #[test]
    fn gate_sequence_is_seeded() {
        let draw = |s| {
            let mut rng = rng_for(s, &[]);
            (0..20).map(|_| random_gate(4, &mut rng)).collect::<Vec<_>>()
        };
        assert_eq!(draw(9), draw(9));
        assert_ne!(draw(9), draw(10));
    }

    #[test]
    fn empty_parent_always_grows() {
        let cfg = MutationConfig::default();
        let mut rng = rng_for(3, &[]);
        let empty = CircuitGenome::empty(3);
        for a in [
            MutationAction::Insert,
            MutationAction::Modify,
            MutationAction::Swap,
            MutationAction::Delete,
        ] {
            assert_eq!(apply_action(&empty, a, &cfg, &mut rng).depth(), 1);
        }
    }

    #[test]
    fn delete_on_single_gate_empties() {
        let cfg = MutationConfig::default();
        let parent = CircuitGenome {
            n_qubits: 2,
            gates: vec![Gate::ry(1, 0.4)],
        };
        let child = apply_action(&parent, MutationAction::Delete, &cfg, &mut rng_for(0, &[]));
        assert_eq!(child.depth(), 0);
        assert_eq!(parent.depth(), 1);
    }

    #[test]
    fn swap_reverses_pair_and_keeps_state() {
        let cfg = MutationConfig::default();
        let parent = CircuitGenome {
            n_qubits: 3,
            gates: vec![Gate::rx(0, 0.3), Gate::rxx(0, 2, 1.1), Gate::rz(2, 0.8)],
        };
        let child = apply_action(&parent, MutationAction::Swap, &cfg, &mut rng_for(0, &[]));
        assert_eq!(child.gates[1], Gate::rxx(2, 0, 1.1));
        assert_eq!(child.gates[0], parent.gates[0]);
        let a = run_circuit(3, &parent.gates).unwrap();
        let b = run_circuit(3, &child.gates).unwrap();
        for (x, y) in a.amplitudes().iter().zip(b.amplitudes()) {
            assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn swap_without_pair_inserts() {
        let cfg = MutationConfig::default();
        let parent = CircuitGenome {
            n_qubits: 2,
            gates: vec![Gate::rx(0, 0.3)],
        };
        let child = apply_action(&parent, MutationAction::Swap, &cfg, &mut rng_for(4, &[]));
        assert_eq!(child.depth(), 2);
    }

    #[test]
    fn modify_changes_one_angle_within_range() {
        let cfg = MutationConfig::default();
        let parent = CircuitGenome {
            n_qubits: 2,
            gates: vec![Gate::rx(0, 0.01), Gate::ryy(0, 1, 6.27)],
        };
        let mut rng = rng_for(5, &[]);
        for _ in 0..200 {
            let child = apply_action(&parent, MutationAction::Modify, &cfg, &mut rng);
            let changed = child
                .gates
                .iter()
                .zip(&parent.gates)
                .filter(|(c, p)| c.angle != p.angle)
                .count();
            assert!(changed <= 1);
            assert!(child.gates.iter().all(|g| (0.0..TAU).contains(&g.angle)));
            assert!(child.gates.iter().zip(&parent.gates).all(|(c, p)| c.kind == p.kind && c.qubits == p.qubits));
        }
    }

    #[test]
    fn config_validation() {
        assert!(MutationConfig::default().validate().is_ok());
        let bad = MutationConfig {
            p_insert: 0.6,
            ..MutationConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = MutationConfig {
            mu: 0,
            ..MutationConfig::default()
        };
        assert!(bad.validate().is_err());
    }
}
