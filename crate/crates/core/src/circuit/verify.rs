use serde::Serialize;

use super::{Circuit, Gate, Role};
use crate::error::Result;
use crate::pauli::{Pauli, PauliString};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckVerdict {
    pub syndrome: usize,
    pub target: PauliString,
    /// Data-qubit operator the measurement reports, when it is well defined.
    pub measured: Option<PauliString>,
    pub pass: bool,
    pub reason: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FlagVerdict {
    pub flag: usize,
    pub pass: bool,
    pub reason: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub checks: Vec<CheckVerdict>,
    pub flags: Vec<FlagVerdict>,
}

impl VerificationReport {
    pub fn is_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass) && self.flags.iter().all(|f| f.pass)
    }

    pub fn first_failure(&self) -> Option<String> {
        let c = self.checks.iter().find(|c| !c.pass).map(|c| {
            format!(
                "syndrome qubit {}: {}",
                c.syndrome,
                c.reason.as_deref().unwrap_or("mismatch")
            )
        });
        c.or_else(|| {
            self.flags.iter().find(|f| !f.pass).map(|f| {
                format!("flag qubit {}: {}", f.flag, f.reason.as_deref().unwrap_or("mismatch"))
            })
        })
    }
}

/// Heisenberg-picture pull-back of `Z_qubit` from its measurement to the
/// start of the circuit. Returns the data-qubit operator it equals, or a
/// reason when the outcome is not a deterministic function of the data.
pub fn pull_back_z(circuit: &Circuit, qubit: usize) -> std::result::Result<PauliString, String> {
    let n = circuit.num_qubits();
    let meas_tick = circuit
        .gates()
        .find(|(_, g)| **g == Gate::MeasZ(qubit))
        .map(|(t, _)| t)
        .ok_or_else(|| format!("qubit {qubit} is never measured"))?;
    let mut op = PauliString::single(n, qubit, Pauli::Z);
    for t in (0..meas_tick).rev() {
        for g in &circuit.timesteps()[t] {
            conjugate(&mut op, g)?;
        }
    }
    let num_data = circuit.num_data();
    if let Some(q) = op.support().find(|&q| q >= num_data) {
        return Err(format!("operator reaches unprepared qubit {q}"));
    }
    Ok(op.truncate(num_data))
}

fn conjugate(op: &mut PauliString, g: &Gate) -> std::result::Result<(), String> {
    match *g {
        Gate::H(q) => {
            let (x, z) = op.get(q).bits();
            op.set(q, Pauli::from_bits(z, x));
        }
        Gate::Cnot { control, target, .. } => {
            let (xc, zc) = op.get(control).bits();
            let (xt, zt) = op.get(target).bits();
            op.set(control, Pauli::from_bits(xc, zc ^ zt));
            op.set(target, Pauli::from_bits(xt ^ xc, zt));
        }
        Gate::PrepZ(q) => match op.get(q) {
            Pauli::I | Pauli::Z => op.set(q, Pauli::I),
            p => {
                return Err(format!(
                    "operator is {} on qubit {q} at its preparation",
                    p.as_char()
                ))
            }
        },
        Gate::MeasZ(q) => {
            if op.get(q) != Pauli::I {
                return Err(format!("operator depends on the earlier measurement of qubit {q}"));
            }
        }
    }
    Ok(())
}

/// Checks that every syndrome measurement reports its target check and that
/// every flag measurement is trivial on the data in the absence of faults.
pub fn verify_measures(circuit: &Circuit) -> Result<VerificationReport> {
    circuit.validate()?;
    let checks = circuit
        .measured_checks()
        .iter()
        .map(|m| match pull_back_z(circuit, m.syndrome) {
            Ok(op) if op == m.check => CheckVerdict {
                syndrome: m.syndrome,
                target: m.check,
                measured: Some(op),
                pass: true,
                reason: None,
            },
            Ok(op) => CheckVerdict {
                syndrome: m.syndrome,
                target: m.check,
                reason: Some(format!("measures {op} instead of {}", m.check)),
                measured: Some(op),
                pass: false,
            },
            Err(reason) => CheckVerdict {
                syndrome: m.syndrome,
                target: m.check,
                measured: None,
                pass: false,
                reason: Some(reason),
            },
        })
        .collect();
    let flags = (0..circuit.num_qubits())
        .filter(|&q| circuit.role(q) == Role::Flag)
        .map(|q| match pull_back_z(circuit, q) {
            Ok(op) if op.is_identity() => FlagVerdict {
                flag: q,
                pass: true,
                reason: None,
            },
            Ok(op) => FlagVerdict {
                flag: q,
                pass: false,
                reason: Some(format!("flag outcome depends on data operator {op}")),
            },
            Err(reason) => FlagVerdict {
                flag: q,
                pass: false,
                reason: Some(reason),
            },
        })
        .collect();
    Ok(VerificationReport { checks, flags })
}
