//! Timestep-scheduled circuits over the gate set {PREP_Z, MEAS_Z, H, CNOT}.
//!
//! Data qubits always occupy the lowest indices `0..num_data`; ancillas
//! follow. A circuit's measurement record is laid out as its syndrome bits
//! (in `measured_checks` order) followed by its flag bits (ascending qubit
//! index).

mod builder;
mod commute;
mod stats;
mod text;
mod verify;

pub use builder::{build_flag_bridge, Coupling, FlagBridgeSpec};
pub use commute::{commute_variant, gates_commute, GateRef, Reordering};
pub use stats::{characterize, CircuitStats};
pub use text::{parse_circuit_set, write_circuit_set};
pub use verify::{pull_back_z, verify_measures, CheckVerdict, FlagVerdict, VerificationReport};

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::PauliString;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Data,
    Syndrome,
    Flag,
    /// An ancilla of the shared register that this circuit does not touch.
    Inactive,
}

impl Role {
    pub fn is_ancilla(self) -> bool {
        matches!(self, Role::Syndrome | Role::Flag)
    }
}

/// s-CNOT couples data to an ancilla, f-CNOT couples two ancillas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CnotClass {
    S,
    F,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Gate {
    PrepZ(usize),
    MeasZ(usize),
    H(usize),
    Cnot {
        control: usize,
        target: usize,
        class: CnotClass,
    },
}

impl Gate {
    pub fn qubits(&self) -> impl Iterator<Item = usize> {
        let (a, b) = match *self {
            Gate::PrepZ(q) | Gate::MeasZ(q) | Gate::H(q) => (q, None),
            Gate::Cnot { control, target, .. } => (control, Some(target)),
        };
        std::iter::once(a).chain(b)
    }

    pub fn touches(&self, q: usize) -> bool {
        self.qubits().any(|x| x == q)
    }

    pub fn is_two_qubit(&self) -> bool {
        matches!(self, Gate::Cnot { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasuredCheck {
    pub syndrome: usize,
    pub check: PauliString,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    num_qubits: usize,
    roles: Vec<Role>,
    timesteps: Vec<Vec<Gate>>,
    measured_checks: Vec<MeasuredCheck>,
}

impl Circuit {
    /// Empty circuit over the given register; data qubits must form a prefix.
    pub fn new(roles: Vec<Role>) -> Result<Self> {
        let num_data = roles.iter().take_while(|r| **r == Role::Data).count();
        if roles[num_data..].contains(&Role::Data) {
            return Err(Error::Structure("data qubits must precede all ancillas".into()));
        }
        if roles.len() > crate::pauli::MAX_QUBITS {
            return Err(Error::UnsupportedSize(format!("{} qubits", roles.len())));
        }
        Ok(Circuit {
            num_qubits: roles.len(),
            roles,
            timesteps: Vec::new(),
            measured_checks: Vec::new(),
        })
    }

    /// Builds and validates in one go.
    pub fn from_parts(
        roles: Vec<Role>,
        timesteps: Vec<Vec<Gate>>,
        measured_checks: Vec<MeasuredCheck>,
    ) -> Result<Self> {
        let mut c = Circuit::new(roles)?;
        c.timesteps = timesteps;
        c.measured_checks = measured_checks;
        c.validate()?;
        Ok(c)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn num_data(&self) -> usize {
        self.roles.iter().take_while(|r| **r == Role::Data).count()
    }

    pub fn roles(&self) -> &[Role] {
        &self.roles
    }

    pub fn role(&self, q: usize) -> Role {
        self.roles[q]
    }

    pub fn timesteps(&self) -> &[Vec<Gate>] {
        &self.timesteps
    }

    pub fn measured_checks(&self) -> &[MeasuredCheck] {
        &self.measured_checks
    }

    pub fn depth(&self) -> usize {
        self.timesteps.len()
    }

    pub fn gate_count(&self) -> usize {
        self.timesteps.iter().map(Vec::len).sum()
    }

    pub fn gates(&self) -> impl Iterator<Item = (usize, &Gate)> {
        self.timesteps
            .iter()
            .enumerate()
            .flat_map(|(t, gs)| gs.iter().map(move |g| (t, g)))
    }

    /// Syndrome qubits in `measured_checks` order.
    pub fn syndrome_qubits(&self) -> Vec<usize> {
        self.measured_checks.iter().map(|m| m.syndrome).collect()
    }

    pub fn flag_qubits(&self) -> Vec<usize> {
        (0..self.num_qubits).filter(|&q| self.roles[q] == Role::Flag).collect()
    }

    pub fn ancillas(&self) -> Vec<usize> {
        (0..self.num_qubits).filter(|&q| self.roles[q].is_ancilla()).collect()
    }

    /// Number of measurement bits: syndromes then flags.
    pub fn outcome_len(&self) -> usize {
        self.measured_checks.len() + self.flag_qubits().len()
    }

    pub(crate) fn timesteps_mut(&mut self) -> &mut Vec<Vec<Gate>> {
        &mut self.timesteps
    }

    pub fn push_timestep(&mut self, gates: Vec<Gate>) {
        self.timesteps.push(gates);
    }

    pub fn add_check(&mut self, syndrome: usize, check: PauliString) {
        self.measured_checks.push(MeasuredCheck { syndrome, check });
    }

    /// Drops empty timesteps.
    pub fn compact(&mut self) {
        self.timesteps.retain(|t| !t.is_empty());
    }

    /// Structural checks: qubit ranges, disjoint timesteps, CNOT classes
    /// consistent with roles, and every active ancilla prepared before its
    /// first use and measured exactly once after its last use.
    pub fn validate(&self) -> Result<()> {
        let n = self.num_qubits;
        let num_data = self.num_data();
        let err = |msg: String| Err(Error::Structure(msg));
        for (t, gates) in self.timesteps.iter().enumerate() {
            let mut seen = HashSet::new();
            for g in gates {
                for q in g.qubits() {
                    if q >= n {
                        return err(format!("timestep {t}: qubit {q} out of range"));
                    }
                    if !seen.insert(q) {
                        return err(format!("timestep {t}: qubit {q} used twice"));
                    }
                    if self.roles[q] == Role::Inactive {
                        return err(format!("timestep {t}: inactive qubit {q} used"));
                    }
                }
                match *g {
                    Gate::PrepZ(q) | Gate::MeasZ(q) if self.roles[q] == Role::Data => {
                        return err(format!("timestep {t}: data qubit {q} prepared or measured"));
                    }
                    Gate::Cnot {
                        control,
                        target,
                        class,
                    } => {
                        let data_count = [control, target].iter().filter(|&&q| q < num_data).count();
                        let expected = match data_count {
                            0 => CnotClass::F,
                            1 => CnotClass::S,
                            _ => return err(format!("timestep {t}: CNOT between two data qubits")),
                        };
                        if class != expected {
                            return err(format!(
                                "timestep {t}: CNOT {control}->{target} should be class {expected:?}"
                            ));
                        }
                    }
                    _ => {}
                }
            }
        }
        for q in num_data..n {
            if !self.roles[q].is_ancilla() {
                continue;
            }
            let uses: Vec<(usize, Gate)> = self
                .gates()
                .filter(|(_, g)| g.touches(q))
                .map(|(t, g)| (t, *g))
                .collect();
            match (uses.first(), uses.last()) {
                (Some((_, Gate::PrepZ(_))), Some((_, Gate::MeasZ(_)))) if uses.len() >= 2 => {}
                _ => return err(format!("ancilla {q} must be prepared first and measured last")),
            }
            let preps = uses.iter().filter(|(_, g)| matches!(g, Gate::PrepZ(_))).count();
            let meas = uses.iter().filter(|(_, g)| matches!(g, Gate::MeasZ(_))).count();
            if preps != 1 || meas != 1 {
                return err(format!("ancilla {q} must be prepared and measured exactly once"));
            }
        }
        let mut syndromes = HashSet::new();
        for m in &self.measured_checks {
            if m.syndrome >= n || self.roles[m.syndrome] != Role::Syndrome {
                return err(format!("check on qubit {} which is not a syndrome qubit", m.syndrome));
            }
            if !syndromes.insert(m.syndrome) {
                return err(format!("syndrome qubit {} carries two checks", m.syndrome));
            }
            if m.check.num_qubits() != num_data {
                return err(format!(
                    "check {} spans {} qubits, circuit has {num_data} data qubits",
                    m.check,
                    m.check.num_qubits()
                ));
            }
        }
        for q in 0..n {
            if self.roles[q] == Role::Syndrome && !syndromes.contains(&q) {
                return err(format!("syndrome qubit {q} has no check"));
            }
        }
        Ok(())
    }
}
