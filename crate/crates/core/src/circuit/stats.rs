use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{Circuit, CnotClass, Gate};

/// Resource counts. Every gate is an operation,
/// timesteps are summed over circuits run one after another, and ancillas
/// are counted once per distinct physical qubit.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircuitStats {
    pub ancillas: usize,
    pub operations: usize,
    pub f_cnots: usize,
    pub s_cnots: usize,
    pub timesteps: usize,
}

/// Aggregate statistics for a set of circuits sharing one register.
pub fn characterize(circuits: &[Circuit]) -> CircuitStats {
    let mut ancillas = BTreeSet::new();
    let mut stats = CircuitStats::default();
    for c in circuits {
        ancillas.extend(c.ancillas());
        stats.operations += c.gate_count();
        stats.timesteps += c.depth();
        for (_, g) in c.gates() {
            match g {
                Gate::Cnot {
                    class: CnotClass::F, ..
                } => stats.f_cnots += 1,
                Gate::Cnot {
                    class: CnotClass::S, ..
                } => stats.s_cnots += 1,
                _ => {}
            }
        }
    }
    stats.ancillas = ancillas.len();
    stats
}
