use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::{verify_measures, Circuit, CnotClass, Gate, MeasuredCheck, Role};
use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliString};

/// One s-CNOT: data qubit `data` interacts with ancilla `ancilla`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coupling {
    pub data: usize,
    pub ancilla: usize,
}

/// Description of a flag-bridge circuit measuring one or more checks.
///
/// Flags are joined to syndrome qubits by `encoding_edges` `(flag,
/// syndrome)`. A syndrome qubit contributes to its own check; a flag
/// contributes to every check whose syndrome qubit it is bridged to. The
/// couplings are applied in list order per qubit, and `schedule_hints`
/// `(a, b)` forces coupling `a` into an earlier timestep than coupling `b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlagBridgeSpec {
    pub num_qubits: usize,
    pub num_data: usize,
    pub checks: Vec<PauliString>,
    pub syndrome_qubits: Vec<usize>,
    pub flag_qubits: Vec<usize>,
    pub encoding_edges: Vec<(usize, usize)>,
    pub couplings: Vec<Coupling>,
    #[serde(default)]
    pub schedule_hints: Vec<(usize, usize)>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Frame {
    /// Flags start in |+>; measures Z-type (and mixed) checks.
    Z,
    /// Syndromes start in |+>; measures pure X-type checks.
    X,
}

/// Lays the spec out as prep | H | encode | couple | decode | H | meas, with
/// each phase packed greedily into as few timesteps as qubit conflicts allow.
pub fn build_flag_bridge(spec: &FlagBridgeSpec) -> Result<Circuit> {
    let n = spec.num_qubits;
    let nd = spec.num_data;
    let bad = |msg: String| Err(Error::Spec(msg));

    if spec.checks.is_empty() {
        return bad("no checks".into());
    }
    if spec.syndrome_qubits.len() != spec.checks.len() {
        return bad(format!(
            "{} checks but {} syndrome qubits",
            spec.checks.len(),
            spec.syndrome_qubits.len()
        ));
    }
    let mut roles = vec![Role::Inactive; n];
    for r in roles.iter_mut().take(nd) {
        *r = Role::Data;
    }
    let listed = spec
        .syndrome_qubits
        .iter()
        .map(|&q| (q, Role::Syndrome))
        .chain(spec.flag_qubits.iter().map(|&q| (q, Role::Flag)));
    for (q, role) in listed {
        if q < nd || q >= n {
            return bad(format!("ancilla {q} outside the ancilla range {nd}..{n}"));
        }
        if roles[q] != Role::Inactive {
            return bad(format!("qubit {q} listed twice"));
        }
        roles[q] = role;
    }
    for c in &spec.checks {
        if c.num_qubits() != nd {
            return bad(format!("check {c} does not span {nd} data qubits"));
        }
        if c.support().any(|q| c.get(q) == Pauli::Y) {
            return Err(Error::UnsupportedCoupling(format!(
                "check {c} has a Y letter"
            )));
        }
    }
    let frame = if spec
        .checks
        .iter()
        .all(|c| c.support().all(|q| c.get(q) == Pauli::X))
    {
        Frame::X
    } else {
        Frame::Z
    };

    // Which checks each ancilla contributes to.
    let check_of: HashMap<usize, usize> = spec
        .syndrome_qubits
        .iter()
        .enumerate()
        .map(|(j, &s)| (s, j))
        .collect();
    let mut members: HashMap<usize, BTreeSet<usize>> = HashMap::new();
    for (j, &s) in spec.syndrome_qubits.iter().enumerate() {
        members.entry(s).or_default().insert(j);
    }
    let mut seen_edges = BTreeSet::new();
    for &(f, s) in &spec.encoding_edges {
        if roles.get(f) != Some(&Role::Flag) || roles.get(s) != Some(&Role::Syndrome) {
            return bad(format!("encoding edge ({f}, {s}) must join a flag to a syndrome qubit"));
        }
        if !seen_edges.insert((f, s)) {
            return bad(format!("duplicate encoding edge ({f}, {s})"));
        }
        members.entry(f).or_default().insert(check_of[&s]);
    }
    for &f in &spec.flag_qubits {
        if !members.contains_key(&f) {
            return bad(format!("flag {f} is not bridged to any syndrome qubit"));
        }
    }

    // Each coupling must carry one letter, and the couplings together must
    // reproduce every check's support.
    let mut reached = vec![0u64; spec.checks.len()];
    let mut letters = Vec::with_capacity(spec.couplings.len());
    let mut data_letter: HashMap<usize, Pauli> = HashMap::new();
    for cp in &spec.couplings {
        if cp.data >= nd {
            return bad(format!("coupling data qubit {} is not a data qubit", cp.data));
        }
        let Some(js) = members.get(&cp.ancilla) else {
            return bad(format!("coupling ancilla {} is not an ancilla", cp.ancilla));
        };
        let mut letter = None;
        for &j in js {
            reached[j] ^= 1 << cp.data;
            let p = spec.checks[j].get(cp.data);
            if p == Pauli::I {
                continue;
            }
            match letter {
                None => letter = Some(p),
                Some(l) if l == p => {}
                Some(_) => {
                    return bad(format!(
                        "coupling ({}, {}) needs two different letters",
                        cp.data, cp.ancilla
                    ))
                }
            }
        }
        let letter = letter.unwrap_or(if frame == Frame::X { Pauli::X } else { Pauli::Z });
        match data_letter.insert(cp.data, letter) {
            Some(prev) if prev != letter => {
                return Err(Error::UnsupportedCoupling(format!(
                    "data qubit {} couples with both {} and {}",
                    cp.data,
                    prev.as_char(),
                    letter.as_char()
                )))
            }
            _ => {}
        }
        letters.push(letter);
    }
    for (j, c) in spec.checks.iter().enumerate() {
        let want = c.x_bits() | c.z_bits();
        if reached[j] != want {
            return bad(format!("couplings do not reproduce check {j} ({c})"));
        }
    }

    let roots: Vec<usize> = match frame {
        Frame::Z => spec.flag_qubits.clone(),
        Frame::X => spec.syndrome_qubits.clone(),
    };
    let mut h_layer: Vec<Gate> = roots.iter().map(|&q| Gate::H(q)).collect();
    if frame == Frame::Z {
        let mut xdata: Vec<usize> = data_letter
            .iter()
            .filter(|(_, &p)| p == Pauli::X)
            .map(|(&d, _)| d)
            .collect();
        xdata.sort_unstable();
        h_layer.extend(xdata.into_iter().map(Gate::H));
    }

    let encode: Vec<Gate> = spec
        .encoding_edges
        .iter()
        .map(|&(f, s)| {
            let (control, target) = if frame == Frame::Z { (f, s) } else { (s, f) };
            Gate::Cnot {
                control,
                target,
                class: CnotClass::F,
            }
        })
        .collect();
    let encode_layers = pack(&encode, &[])?;

    let couple: Vec<Gate> = spec
        .couplings
        .iter()
        .zip(&letters)
        .map(|(cp, &letter)| {
            let (control, target) = if letter == Pauli::X && frame == Frame::X {
                (cp.ancilla, cp.data)
            } else {
                (cp.data, cp.ancilla)
            };
            Gate::Cnot {
                control,
                target,
                class: CnotClass::S,
            }
        })
        .collect();
    let couple_layers = pack(&couple, &spec.schedule_hints)?;

    let ancillas: Vec<usize> = (nd..n).filter(|&q| roles[q].is_ancilla()).collect();
    let mut circuit = Circuit::new(roles)?;
    circuit.push_timestep(ancillas.iter().map(|&q| Gate::PrepZ(q)).collect());
    circuit.push_timestep(h_layer.clone());
    for layer in &encode_layers {
        circuit.push_timestep(layer.clone());
    }
    for layer in couple_layers {
        circuit.push_timestep(layer);
    }
    for layer in encode_layers.iter().rev() {
        circuit.push_timestep(layer.clone());
    }
    circuit.push_timestep(h_layer);
    circuit.push_timestep(ancillas.iter().map(|&q| Gate::MeasZ(q)).collect());
    circuit.compact();
    for (j, c) in spec.checks.iter().enumerate() {
        circuit.measured_checks.push(MeasuredCheck {
            syndrome: spec.syndrome_qubits[j],
            check: *c,
        });
    }
    let report = verify_measures(&circuit)?;
    if let Some(msg) = report.first_failure() {
        return bad(format!("built circuit does not measure its checks: {msg}"));
    }
    Ok(circuit)
}

/// Greedy layering that keeps list order on every qubit and honours the
/// `(before, after)` hints.
fn pack(gates: &[Gate], hints: &[(usize, usize)]) -> Result<Vec<Vec<Gate>>> {
    let mut layer_of = vec![0usize; gates.len()];
    let mut last: HashMap<usize, usize> = HashMap::new();
    for &(a, b) in hints {
        if a >= b || b >= gates.len() {
            return Err(Error::Spec(format!(
                "schedule hint ({a}, {b}) must name an earlier then a later coupling"
            )));
        }
    }
    let mut layers: Vec<Vec<Gate>> = Vec::new();
    for (i, g) in gates.iter().enumerate() {
        let mut l = g.qubits().map(|q| last.get(&q).map_or(0, |&x| x + 1)).max().unwrap_or(0);
        for &(a, _) in hints.iter().filter(|h| h.1 == i) {
            l = l.max(layer_of[a] + 1);
        }
        layer_of[i] = l;
        for q in g.qubits() {
            last.insert(q, l);
        }
        if layers.len() <= l {
            layers.resize(l + 1, Vec::new());
        }
        layers[l].push(*g);
    }
    Ok(layers)
}
