//! Circuit-level noise: fault locations, the stochastic channel attached to
//! each, and Pauli-frame propagation of faults through a circuit.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::pauli::{Bits, Pauli, PauliString};

/// Physical error rates. `p` drives gate, preparation and measurement
/// faults; `p_idle` drives idling faults.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub p: f64,
    pub p_idle: f64,
}

impl NoiseModel {
    pub fn new(p: f64, p_idle: f64) -> Result<Self> {
        for (name, v) in [("p", p), ("p_idle", p_idle)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::Config(format!("{name} = {v} is not a probability")));
            }
        }
        Ok(NoiseModel { p, p_idle })
    }

    /// Idle rate given as a fraction of `p`.
    pub fn with_idle_ratio(p: f64, ratio: f64) -> Result<Self> {
        Self::new(p, p * ratio)
    }

    pub fn probability(&self, kind: FaultKind) -> f64 {
        match kind {
            FaultKind::Idle => self.p_idle,
            _ => self.p,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FaultKind {
    /// After an H: X, Y or Z, each with probability p/3.
    Gate1,
    /// After a CNOT: one of the 15 non-identity two-qubit Paulis, each p/15.
    Gate2,
    /// After a preparation: X with probability p.
    Prep,
    /// Just before a measurement: X (an outcome flip) with probability p.
    Meas,
    /// A qubit with no gate in a timestep: X, Y or Z, each p_idle/3.
    Idle,
}

/// A place in a circuit where a fault may occur.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Location {
    pub tick: usize,
    pub kind: FaultKind,
    pub qubits: Vec<usize>,
    /// Number of gates applied before the fault is injected, counting in
    /// timestep order.
    #[serde(skip)]
    pub(crate) at: usize,
}

impl Location {
    /// Every non-identity Pauli this location's channel can produce.
    pub fn fault_paulis(&self, n: usize) -> Vec<PauliString> {
        match self.kind {
            FaultKind::Prep | FaultKind::Meas => vec![PauliString::single(n, self.qubits[0], Pauli::X)],
            FaultKind::Gate1 | FaultKind::Idle => [Pauli::X, Pauli::Y, Pauli::Z]
                .iter()
                .map(|&p| PauliString::single(n, self.qubits[0], p))
                .collect(),
            FaultKind::Gate2 => (1..16u8)
                .map(|k| {
                    let mut e = PauliString::identity(n);
                    e.set(self.qubits[0], PAULIS[(k >> 2) as usize]);
                    e.set(self.qubits[1], PAULIS[(k & 3) as usize]);
                    e
                })
                .collect(),
        }
    }
}

const PAULIS: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

/// A specific fault: `error` applied at location index `location`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fault {
    pub location: usize,
    pub error: PauliString,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Op {
    H(u32),
    Cnot(u32, u32),
    Prep(u32),
    Meas(u32, u32),
}

/// A circuit flattened for fast repeated frame simulation.
#[derive(Debug, Clone)]
pub struct CompiledCircuit {
    pub(crate) ops: Vec<Op>,
    locations: Vec<Location>,
    /// Location indices driven by `p` and by `p_idle` respectively.
    pub(crate) gate_locs: Vec<u32>,
    pub(crate) idle_locs: Vec<u32>,
    num_qubits: usize,
    num_data: usize,
    outcome_len: usize,
}

impl CompiledCircuit {
    pub fn new(circuit: &Circuit) -> Result<Self> {
        circuit.validate()?;
        let n = circuit.num_qubits();
        let mut slot = vec![u32::MAX; n];
        for (i, m) in circuit.measured_checks().iter().enumerate() {
            slot[m.syndrome] = i as u32;
        }
        let m_s = circuit.measured_checks().len();
        for (i, f) in circuit.flag_qubits().into_iter().enumerate() {
            slot[f] = (m_s + i) as u32;
        }
        let mut live = vec![false; n];
        live[..circuit.num_data()].fill(true);

        let mut ops = Vec::with_capacity(circuit.gate_count());
        let mut locations = Vec::new();
        for (tick, gates) in circuit.timesteps().iter().enumerate() {
            let mut busy = vec![false; n];
            for g in gates {
                for q in g.qubits() {
                    busy[q] = true;
                }
                let k = ops.len();
                let (op, kind, at) = match *g {
                    Gate::H(q) => (Op::H(q as u32), FaultKind::Gate1, k + 1),
                    Gate::Cnot { control, target, .. } => {
                        (Op::Cnot(control as u32, target as u32), FaultKind::Gate2, k + 1)
                    }
                    Gate::PrepZ(q) => {
                        live[q] = true;
                        (Op::Prep(q as u32), FaultKind::Prep, k + 1)
                    }
                    Gate::MeasZ(q) => {
                        live[q] = false;
                        (Op::Meas(q as u32, slot[q]), FaultKind::Meas, k)
                    }
                };
                ops.push(op);
                locations.push(Location {
                    tick,
                    kind,
                    qubits: g.qubits().collect(),
                    at,
                });
            }
            for q in 0..n {
                if live[q] && !busy[q] {
                    locations.push(Location {
                        tick,
                        kind: FaultKind::Idle,
                        qubits: vec![q],
                        at: ops.len(),
                    });
                }
            }
        }
        let gate_locs = (0..locations.len() as u32)
            .filter(|&i| locations[i as usize].kind != FaultKind::Idle)
            .collect();
        let idle_locs = (0..locations.len() as u32)
            .filter(|&i| locations[i as usize].kind == FaultKind::Idle)
            .collect();
        Ok(CompiledCircuit {
            ops,
            locations,
            gate_locs,
            idle_locs,
            num_qubits: n,
            num_data: circuit.num_data(),
            outcome_len: circuit.outcome_len(),
        })
    }

    pub fn locations(&self) -> &[Location] {
        &self.locations
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn num_data(&self) -> usize {
        self.num_data
    }

    pub fn outcome_len(&self) -> usize {
        self.outcome_len
    }

    /// Propagates the data frame `(x, z)` through the circuit with the given
    /// faults `(location, x, z)` and returns the outcome flips. The frame is
    /// updated in place; ancilla components are cleared on return.
    pub(crate) fn run(&self, x: &mut u64, z: &mut u64, faults: &mut [(u32, u64, u64)]) -> u64 {
        faults.sort_unstable_by_key(|f| self.locations[f.0 as usize].at);
        let mut next = 0;
        let mut outcomes = 0u64;
        for (k, op) in self.ops.iter().enumerate() {
            while next < faults.len() && self.locations[faults[next].0 as usize].at == k {
                *x ^= faults[next].1;
                *z ^= faults[next].2;
                next += 1;
            }
            match *op {
                Op::H(q) => {
                    let m = 1u64 << q;
                    let d = (*x ^ *z) & m;
                    *x ^= d;
                    *z ^= d;
                }
                Op::Cnot(c, t) => {
                    *x ^= ((*x >> c) & 1) << t;
                    *z ^= ((*z >> t) & 1) << c;
                }
                Op::Prep(q) => {
                    *x &= !(1u64 << q);
                    *z &= !(1u64 << q);
                }
                Op::Meas(q, s) => {
                    outcomes |= ((*x >> q) & 1) << s;
                    *x &= !(1u64 << q);
                    *z &= !(1u64 << q);
                }
            }
        }
        for f in &faults[next..] {
            *x ^= f.1;
            *z ^= f.2;
        }
        let data = if self.num_data == 64 { u64::MAX } else { (1u64 << self.num_data) - 1 };
        *x &= data;
        *z &= data;
        outcomes
    }

    /// Draws one Pauli from `loc`'s channel, conditioned on a fault occurring.
    pub(crate) fn sample_fault<R: Rng + ?Sized>(&self, loc: u32, rng: &mut R) -> (u32, u64, u64) {
        let l = &self.locations[loc as usize];
        let q0 = l.qubits[0];
        let (x, z) = match l.kind {
            FaultKind::Prep | FaultKind::Meas => (1u64 << q0, 0),
            FaultKind::Gate1 | FaultKind::Idle => single_bits(q0, rng.gen_range(1..4u8)),
            FaultKind::Gate2 => {
                let k = rng.gen_range(1..16u8);
                let (x0, z0) = single_bits(q0, k >> 2);
                let (x1, z1) = single_bits(l.qubits[1], k & 3);
                (x0 | x1, z0 | z1)
            }
        };
        (loc, x, z)
    }
}

fn single_bits(q: usize, p: u8) -> (u64, u64) {
    let (x, z) = PAULIS[p as usize].bits();
    ((x as u64) << q, (z as u64) << q)
}

/// Every single fault the noise model can place in `circuit`, in location
/// order: 3 per H, 15 per CNOT, 1 per preparation and measurement, and 3
/// per idle location when `include_idle` is set.
pub fn enumerate_single_faults(circuit: &Circuit, include_idle: bool) -> Result<Vec<Fault>> {
    let cc = CompiledCircuit::new(circuit)?;
    let n = cc.num_qubits;
    Ok(cc
        .locations
        .iter()
        .enumerate()
        .filter(|(_, l)| include_idle || l.kind != FaultKind::Idle)
        .flat_map(|(i, l)| l.fault_paulis(n).into_iter().map(move |error| Fault { location: i, error }))
        .collect())
}

/// Independently samples a fault at every location of `circuit`.
pub fn sample_faults(circuit: &Circuit, model: &NoiseModel, seed: u64) -> Result<Vec<Fault>> {
    use rand::SeedableRng;
    let cc = CompiledCircuit::new(circuit)?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut raw = Vec::new();
    for (locs, p) in [(&cc.gate_locs, model.p), (&cc.idle_locs, model.p_idle)] {
        crate::protocol::bernoulli_indices(locs.len(), p, &mut rng, |i, rng| {
            raw.push(cc.sample_fault(locs[i], rng));
        });
    }
    raw.sort_unstable_by_key(|f| f.0);
    Ok(raw
        .into_iter()
        .map(|(loc, x, z)| Fault {
            location: loc as usize,
            error: PauliString::from_words(cc.num_qubits, x, z),
        })
        .collect())
}

/// Result of pushing faults through one circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Propagation {
    /// Data error after the circuit.
    pub residual: PauliString,
    /// Outcome flips: syndrome bits, then flag bits.
    pub outcomes: Bits,
}

/// Propagates an incoming data error and a set of faults through `circuit`.
pub fn propagate(circuit: &Circuit, faults: &[Fault], input: &PauliString) -> Result<Propagation> {
    let cc = CompiledCircuit::new(circuit)?;
    propagate_compiled(&cc, faults, input)
}

pub fn propagate_compiled(cc: &CompiledCircuit, faults: &[Fault], input: &PauliString) -> Result<Propagation> {
    if input.num_qubits() != cc.num_data {
        return Err(Error::Dimension {
            expected: cc.num_data,
            found: input.num_qubits(),
        });
    }
    let mut raw = Vec::with_capacity(faults.len());
    for f in faults {
        let loc = cc.locations.get(f.location).ok_or_else(|| {
            Error::FaultBinding(format!("location {} does not exist", f.location))
        })?;
        if f.error.num_qubits() != cc.num_qubits {
            return Err(Error::Dimension {
                expected: cc.num_qubits,
                found: f.error.num_qubits(),
            });
        }
        if let Some(q) = f.error.support().find(|q| !loc.qubits.contains(q)) {
            return Err(Error::FaultBinding(format!(
                "fault acts on qubit {q}, location {} covers {:?}",
                f.location, loc.qubits
            )));
        }
        raw.push((f.location as u32, f.error.x_bits(), f.error.z_bits()));
    }
    let (mut x, mut z) = (input.x_bits(), input.z_bits());
    let outcomes = cc.run(&mut x, &mut z, &mut raw);
    Ok(Propagation {
        residual: PauliString::from_words(cc.num_data, x, z),
        outcomes: Bits::from_value(cc.outcome_len, outcomes),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{CnotClass, MeasuredCheck, Role};

    fn zz() -> Circuit {
        let s = |c, t| Gate::Cnot {
            control: c,
            target: t,
            class: CnotClass::S,
        };
        Circuit::from_parts(
            vec![Role::Data, Role::Data, Role::Syndrome],
            vec![vec![Gate::PrepZ(2)], vec![s(0, 2)], vec![s(1, 2)], vec![Gate::MeasZ(2)]],
            vec![MeasuredCheck {
                syndrome: 2,
                check: "ZZ".parse().unwrap(),
            }],
        )
        .unwrap()
    }

    #[test]
    fn locations_cover_gates_and_idles() {
        let cc = CompiledCircuit::new(&zz()).unwrap();
        let kinds: Vec<FaultKind> = cc.locations().iter().map(|l| l.kind).collect();
        use FaultKind::*;
        // tick 0: prep + 2 data idles; tick 1: cnot + idle q1; tick 2: cnot
        // + idle q0; tick 3: meas + 2 data idles
        assert_eq!(
            kinds,
            vec![Prep, Idle, Idle, Gate2, Idle, Gate2, Idle, Meas, Idle, Idle]
        );
        assert_eq!(cc.gate_locs.len(), 4);
        assert_eq!(cc.idle_locs.len(), 6);
    }

    #[test]
    fn input_errors_flip_syndrome() {
        let c = zz();
        let r = propagate(&c, &[], &"XI".parse().unwrap()).unwrap();
        assert_eq!(r.outcomes.value(), 1);
        assert_eq!(r.residual.to_string(), "XI");
        let r = propagate(&c, &[], &"XX".parse().unwrap()).unwrap();
        assert_eq!(r.outcomes.value(), 0);
    }

    #[test]
    fn measurement_fault_flips_only_outcome() {
        let c = zz();
        let f = Fault {
            location: 7,
            error: "IIX".parse().unwrap(),
        };
        let r = propagate(&c, &[f], &PauliString::identity(2)).unwrap();
        assert_eq!(r.outcomes.value(), 1);
        assert!(r.residual.is_identity());
        let wrong = Fault {
            location: 7,
            error: "XII".parse().unwrap(),
        };
        assert!(matches!(
            propagate(&c, &[wrong], &PauliString::identity(2)),
            Err(Error::FaultBinding(_))
        ));
    }

    #[test]
    fn cnot_spreads_ancilla_x_to_data() {
        // X on the ancilla after its first CNOT, then CNOT(1 -> 2): no spread
        // (X on target stays); Z on the ancilla would spread to the control.
        let c = zz();
        let f = Fault {
            location: 3,
            error: "IIZ".parse().unwrap(),
        };
        let r = propagate(&c, &[f], &PauliString::identity(2)).unwrap();
        assert_eq!(r.residual.to_string(), "IZ");
        assert_eq!(r.outcomes.value(), 0);
    }

    #[test]
    fn channel_enumeration_sizes() {
        let cc = CompiledCircuit::new(&zz()).unwrap();
        let sizes: Vec<usize> = cc.locations().iter().map(|l| l.fault_paulis(3).len()).collect();
        assert_eq!(sizes, vec![1, 3, 3, 15, 3, 15, 3, 1, 3, 3]);
    }

    #[test]
    fn single_fault_counts() {
        let h = Circuit::from_parts(vec![Role::Data], vec![vec![Gate::H(0)]], vec![]).unwrap();
        assert_eq!(enumerate_single_faults(&h, false).unwrap().len(), 3);
        let two = Circuit::from_parts(vec![Role::Data, Role::Data], vec![vec![Gate::H(0)]], vec![]).unwrap();
        assert_eq!(enumerate_single_faults(&two, true).unwrap().len(), 6);
        let empty = Circuit::from_parts(vec![Role::Data], vec![], vec![]).unwrap();
        assert!(enumerate_single_faults(&empty, true).unwrap().is_empty());
        // prep + 2 CNOTs + meas
        assert_eq!(enumerate_single_faults(&zz(), false).unwrap().len(), 1 + 15 + 15 + 1);
        assert_eq!(enumerate_single_faults(&zz(), true).unwrap().len(), 32 + 6 * 3);
    }

    #[test]
    fn sampling_extremes_and_determinism() {
        let c = zz();
        assert!(sample_faults(&c, &NoiseModel::new(0.0, 0.0).unwrap(), 1).unwrap().is_empty());
        let all = sample_faults(&c, &NoiseModel::new(1.0, 0.0).unwrap(), 1).unwrap();
        assert_eq!(all.len(), 4);
        let m = NoiseModel::new(0.3, 0.1).unwrap();
        assert_eq!(sample_faults(&c, &m, 9).unwrap(), sample_faults(&c, &m, 9).unwrap());
    }
}
