use serde::{Deserialize, Serialize};

use super::{Circuit, Gate};
use crate::error::{Error, Result};

/// Names the gate acting on `qubit` at timestep `tick`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateRef {
    pub tick: usize,
    pub qubit: usize,
}

/// Pairs of gates whose timesteps are exchanged, applied in order.
pub type Reordering = Vec<(GateRef, GateRef)>;

/// Whether two gates commute as operators.
///
/// CNOTs sharing a qubit commute unless one's control is the other's
/// target. Any other pair of distinct gates sharing a qubit is treated as
/// non-commuting.
pub fn gates_commute(a: &Gate, b: &Gate) -> bool {
    if a == b || !a.qubits().any(|q| b.touches(q)) {
        return true;
    }
    match (*a, *b) {
        (
            Gate::Cnot {
                control: c1,
                target: t1,
                ..
            },
            Gate::Cnot {
                control: c2,
                target: t2,
                ..
            },
        ) => c1 != t2 && t1 != c2,
        _ => false,
    }
}

fn locate(circuit: &Circuit, r: GateRef) -> Result<(usize, Gate)> {
    let gates = circuit
        .timesteps()
        .get(r.tick)
        .ok_or_else(|| Error::Commutation(format!("no timestep {}", r.tick)))?;
    gates
        .iter()
        .position(|g| g.touches(r.qubit))
        .map(|i| (i, gates[i]))
        .ok_or_else(|| Error::Commutation(format!("no gate on qubit {} at timestep {}", r.qubit, r.tick)))
}

/// Applies `reordering` and returns the new circuit. Each exchange is
/// checked: the two gates must commute with each other and with every gate
/// scheduled between them on a shared qubit, and the moved gates must fit
/// into their new timesteps.
pub fn commute_variant(circuit: &Circuit, reordering: &[(GateRef, GateRef)]) -> Result<Circuit> {
    let mut out = circuit.clone();
    for &(ra, rb) in reordering {
        let (ia, ga) = locate(&out, ra)?;
        let (ib, gb) = locate(&out, rb)?;
        if ra.tick == rb.tick {
            return Err(Error::Commutation("gates share a timestep".into()));
        }
        if !gates_commute(&ga, &gb) {
            return Err(Error::Commutation(format!("{ga:?} and {gb:?} do not commute")));
        }
        let (lo, hi) = (ra.tick.min(rb.tick), ra.tick.max(rb.tick));
        for t in lo + 1..hi {
            for g in &out.timesteps()[t] {
                for moved in [&ga, &gb] {
                    if !gates_commute(moved, g) {
                        return Err(Error::Commutation(format!(
                            "{moved:?} cannot pass {g:?} at timestep {t}"
                        )));
                    }
                }
            }
        }
        let steps = out.timesteps_mut();
        steps[ra.tick].remove(ia);
        steps[rb.tick].remove(ib);
        for (t, g) in [(rb.tick, ga), (ra.tick, gb)] {
            if let Some(q) = g.qubits().find(|&q| steps[t].iter().any(|h| h.touches(q))) {
                return Err(Error::Commutation(format!("qubit {q} already busy at timestep {t}")));
            }
            steps[t].push(g);
        }
    }
    out.validate()?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{build_flag_bridge, verify_measures, Coupling, FlagBridgeSpec};
    use crate::pauli::PauliString;

    fn bridge() -> Circuit {
        let spec = FlagBridgeSpec {
            num_qubits: 9,
            num_data: 7,
            checks: vec!["ZZZZIII".parse::<PauliString>().unwrap()],
            syndrome_qubits: vec![7],
            flag_qubits: vec![8],
            encoding_edges: vec![(8, 7)],
            couplings: [0, 1, 2, 3]
                .iter()
                .map(|&d| Coupling { data: d, ancilla: 7 })
                .collect(),
            schedule_hints: vec![],
        };
        build_flag_bridge(&spec).unwrap()
    }

    #[test]
    fn cnot_commutation_rules() {
        use crate::circuit::CnotClass::S;
        let c = |control, target| Gate::Cnot {
            control,
            target,
            class: S,
        };
        assert!(gates_commute(&c(0, 2), &c(1, 2)));
        assert!(gates_commute(&c(0, 1), &c(0, 2)));
        assert!(!gates_commute(&c(0, 1), &c(1, 2)));
        assert!(!gates_commute(&Gate::H(0), &c(0, 1)));
        assert!(gates_commute(&Gate::H(3), &c(0, 1)));
    }

    #[test]
    fn moving_first_coupling_before_encoder() {
        let c = bridge();
        // timesteps: prep, H, enc, d0, d1, d2, d3, dec, H, meas
        let swapped = commute_variant(&c, &[(GateRef { tick: 2, qubit: 7 }, GateRef { tick: 3, qubit: 7 })]).unwrap();
        assert!(verify_measures(&swapped).unwrap().is_pass());
        assert_eq!(swapped.gate_count(), c.gate_count());
        assert_eq!(
            swapped.timesteps()[2][0],
            Gate::Cnot {
                control: 0,
                target: 7,
                class: crate::circuit::CnotClass::S
            }
        );
    }

    #[test]
    fn non_commuting_swap_rejected() {
        let c = bridge();
        // H on the flag against the encoding CNOT
        let r = commute_variant(&c, &[(GateRef { tick: 1, qubit: 8 }, GateRef { tick: 2, qubit: 8 })]);
        assert!(matches!(r, Err(Error::Commutation(_))));
    }
}
