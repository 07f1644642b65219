//! Helpers shared by the integration tests.
//!
//! The oracle checks the Pauli-frame simulator against a dense statevector
//! simulation. Each trial builds a random valid circuit, runs it once
//! without faults and once with an input error and a single fault, and
//! compares the two runs. Every measurement must differ exactly where the
//! frame predicts a flip, and the final states must differ by the predicted
//! data error.

#![allow(dead_code)]

use flagbridge::circuit::{Circuit, CnotClass, Gate, MeasuredCheck, Role};
use flagbridge::noise::{enumerate_single_faults, propagate, CompiledCircuit, Fault, FaultKind};
use flagbridge::pauli::{Pauli, PauliString};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug)]
struct C(f64, f64);

impl C {
    fn norm2(self) -> f64 {
        self.0 * self.0 + self.1 * self.1
    }
}

#[derive(Clone)]
struct State {
    amps: Vec<C>,
}

impl State {
    fn bit(i: usize, q: usize) -> bool {
        i >> q & 1 == 1
    }

    fn h(&mut self, q: usize) {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        for i in 0..self.amps.len() {
            if !Self::bit(i, q) {
                let (a, b) = (self.amps[i], self.amps[i | 1 << q]);
                self.amps[i] = C((a.0 + b.0) * s, (a.1 + b.1) * s);
                self.amps[i | 1 << q] = C((a.0 - b.0) * s, (a.1 - b.1) * s);
            }
        }
    }

    fn cnot(&mut self, c: usize, t: usize) {
        for i in 0..self.amps.len() {
            if Self::bit(i, c) && !Self::bit(i, t) {
                self.amps.swap(i, i | 1 << t);
            }
        }
    }

    fn x(&mut self, q: usize) {
        for i in 0..self.amps.len() {
            if !Self::bit(i, q) {
                self.amps.swap(i, i | 1 << q);
            }
        }
    }

    fn z(&mut self, q: usize) {
        for (i, a) in self.amps.iter_mut().enumerate() {
            if Self::bit(i, q) {
                *a = C(-a.0, -a.1);
            }
        }
    }

    /// Applies a Pauli up to global phase.
    fn pauli(&mut self, q: usize, p: Pauli) {
        let (x, z) = p.bits();
        if z {
            self.z(q);
        }
        if x {
            self.x(q);
        }
    }

    fn apply(&mut self, e: &PauliString) {
        for q in 0..e.num_qubits() {
            self.pauli(q, e.get(q));
        }
    }

    fn prob_one(&self, q: usize) -> f64 {
        (0..self.amps.len())
            .filter(|&i| Self::bit(i, q))
            .map(|i| self.amps[i].norm2())
            .sum()
    }

    fn project(&mut self, q: usize, outcome: bool) {
        let p = if outcome { self.prob_one(q) } else { 1.0 - self.prob_one(q) };
        let s = 1.0 / p.sqrt();
        for (i, a) in self.amps.iter_mut().enumerate() {
            *a = if Self::bit(i, q) == outcome { C(a.0 * s, a.1 * s) } else { C(0.0, 0.0) };
        }
    }

    fn overlap(&self, other: &State) -> f64 {
        let (mut re, mut im) = (0.0, 0.0);
        for (a, b) in self.amps.iter().zip(&other.amps) {
            re += a.0 * b.0 + a.1 * b.1;
            im += a.0 * b.1 - a.1 * b.0;
        }
        (re * re + im * im).sqrt()
    }
}

/// Data qubits in either a random product of basis and Hadamard states or a
/// random dense state; ancillas in |0>.
fn initial_state(n: usize, num_data: usize, rng: &mut ChaCha8Rng) -> State {
    let mut s = State {
        amps: vec![C(0.0, 0.0); 1 << n],
    };
    if rng.gen_bool(0.5) {
        s.amps[0] = C(1.0, 0.0);
        for q in 0..num_data {
            if rng.gen_bool(0.5) {
                s.x(q);
            }
            if rng.gen_bool(0.5) {
                s.h(q);
            }
        }
    } else {
        let mut total = 0.0;
        for i in 0..1usize << num_data {
            let a = C(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            total += a.norm2();
            s.amps[i] = a;
        }
        let k = 1.0 / total.sqrt();
        for a in s.amps.iter_mut() {
            *a = C(a.0 * k, a.1 * k);
        }
    }
    s
}

pub fn random_circuit(rng: &mut ChaCha8Rng) -> Circuit {
    let n = rng.gen_range(2..=8);
    let num_data = rng.gen_range(1..n);
    let mut roles = vec![Role::Data; num_data];
    for _ in num_data..n {
        roles.push(*[Role::Syndrome, Role::Flag, Role::Flag, Role::Inactive].choose(rng).unwrap());
    }
    #[derive(Clone, Copy, PartialEq)]
    enum Life {
        Fresh,
        Live,
        Done,
    }
    let mut life: Vec<Life> = (0..n).map(|q| if q < num_data { Life::Live } else { Life::Fresh }).collect();
    let active: Vec<usize> = (0..n).filter(|&q| roles[q] != Role::Inactive).collect();
    let ancillas = active.iter().filter(|&&q| q >= num_data).count();
    let budget = rng.gen_range(2 * ancillas..=30.max(2 * ancillas));
    let mut gates: Vec<Gate> = Vec::new();
    let touch = |q: usize, gates: &mut Vec<Gate>, life: &mut Vec<Life>| {
        if life[q] == Life::Fresh {
            gates.push(Gate::PrepZ(q));
            life[q] = Life::Live;
        }
    };
    loop {
        let pending = |life: &[Life]| {
            active
                .iter()
                .filter(|&&q| q >= num_data)
                .map(|&q| match life[q] {
                    Life::Fresh => 2,
                    Life::Live => 1,
                    Life::Done => 0,
                })
                .sum::<usize>()
        };
        let usable: Vec<usize> = active.iter().copied().filter(|&q| life[q] != Life::Done).collect();
        if gates.len() + pending(&life) + 3 > budget {
            break;
        }
        match rng.gen_range(0..10) {
            0..=2 => {
                let q = *usable.choose(rng).unwrap();
                touch(q, &mut gates, &mut life);
                gates.push(Gate::H(q));
            }
            3..=8 => {
                let pairs: Vec<(usize, usize)> = usable
                    .iter()
                    .flat_map(|&a| usable.iter().map(move |&b| (a, b)))
                    .filter(|&(a, b)| a != b && (a >= num_data || b >= num_data))
                    .collect();
                let Some(&(c, t)) = pairs.choose(rng) else {
                    continue;
                };
                touch(c, &mut gates, &mut life);
                touch(t, &mut gates, &mut life);
                let class = if c < num_data || t < num_data { CnotClass::S } else { CnotClass::F };
                gates.push(Gate::Cnot { control: c, target: t, class });
            }
            _ => {
                let live: Vec<usize> = usable.iter().copied().filter(|&q| q >= num_data && life[q] == Life::Live).collect();
                if let Some(&q) = live.choose(rng) {
                    gates.push(Gate::MeasZ(q));
                    life[q] = Life::Done;
                }
            }
        }
    }
    for &q in &active {
        if q >= num_data {
            touch(q, &mut gates, &mut life);
            if life[q] == Life::Live {
                gates.push(Gate::MeasZ(q));
            }
        }
    }
    // As-soon-as-possible packing keeps each qubit's gate order.
    let mut ready = vec![0usize; n];
    let mut ticks: Vec<Vec<Gate>> = Vec::new();
    for g in gates {
        let t = g.qubits().map(|q| ready[q]).max().unwrap();
        if ticks.len() <= t {
            ticks.resize(t + 1, Vec::new());
        }
        ticks[t].push(g);
        for q in g.qubits() {
            ready[q] = t + 1;
        }
    }
    let mut syndromes: Vec<usize> = (0..n).filter(|&q| roles[q] == Role::Syndrome).collect();
    syndromes.shuffle(rng);
    let checks = syndromes
        .into_iter()
        .map(|s| MeasuredCheck {
            syndrome: s,
            check: PauliString::single(num_data, 0, Pauli::Z),
        })
        .collect();
    Circuit::from_parts(roles, ticks, checks).unwrap()
}

/// Outcome bit position of each measured qubit, matching the frame
/// simulator's layout: syndromes in check order, then flags ascending.
fn slots(c: &Circuit) -> Vec<Option<usize>> {
    let mut slot = vec![None; c.num_qubits()];
    for (i, m) in c.measured_checks().iter().enumerate() {
        slot[m.syndrome] = Some(i);
    }
    for (i, f) in c.flag_qubits().into_iter().enumerate() {
        slot[f] = Some(c.measured_checks().len() + i);
    }
    slot
}

pub struct Trial {
    pub circuit: Circuit,
    pub input: PauliString,
    pub fault: Option<Fault>,
}

/// Runs the trial through both simulators and reports the first mismatch.
pub fn compare(trial: &Trial, rng: &mut ChaCha8Rng) -> Result<(), String> {
    let c = &trial.circuit;
    let n = c.num_qubits();
    let num_data = c.num_data();
    let faults: Vec<Fault> = trial.fault.into_iter().collect();
    let predicted = propagate(c, &faults, &trial.input).map_err(|e| e.to_string())?;
    let cc = CompiledCircuit::new(c).unwrap();
    let loc = trial.fault.map(|f| (cc.locations()[f.location].clone(), f.error));

    let mut clean = initial_state(n, num_data, rng);
    let mut noisy = clean.clone();
    noisy.apply(&trial.input.extend(n));
    let slot = slots(c);
    let mut flipped = PauliString::identity(n);
    for (tick, gates) in c.timesteps().iter().enumerate() {
        if let Some((l, e)) = &loc {
            if l.tick == tick && l.kind == FaultKind::Meas {
                noisy.apply(e);
            }
        }
        for g in gates {
            match *g {
                Gate::H(q) => {
                    clean.h(q);
                    noisy.h(q);
                }
                Gate::Cnot { control, target, .. } => {
                    clean.cnot(control, target);
                    noisy.cnot(control, target);
                }
                Gate::PrepZ(q) => {
                    if clean.prob_one(q) > TOL || noisy.prob_one(q) > TOL {
                        return Err(format!("qubit {q} not fresh at preparation"));
                    }
                }
                Gate::MeasZ(q) => {
                    let p_clean = clean.prob_one(q);
                    let p_noisy = noisy.prob_one(q);
                    let flip = slot[q].is_some_and(|s| predicted.outcomes.get(s));
                    let outcome = if p_clean < TOL {
                        false
                    } else if p_clean > 1.0 - TOL {
                        true
                    } else {
                        rng.gen_bool(p_clean)
                    };
                    let expect = if flip { 1.0 - p_clean } else { p_clean };
                    if (p_noisy - expect).abs() > 1e-7 {
                        return Err(format!(
                            "tick {tick}: qubit {q} P(1) = {p_noisy}, frame predicts {expect} (flip {flip})"
                        ));
                    }
                    clean.project(q, outcome);
                    noisy.project(q, outcome ^ flip);
                    if flip {
                        flipped.set(q, Pauli::X);
                    }
                }
            }
        }
        if let Some((l, e)) = &loc {
            if l.tick == tick && l.kind != FaultKind::Meas {
                noisy.apply(e);
            }
        }
    }
    let mut expected = clean;
    expected.apply(&predicted.residual.extend(n));
    expected.apply(&flipped);
    let ov = expected.overlap(&noisy);
    if (ov - 1.0).abs() > 1e-7 {
        return Err(format!("final states differ: overlap {ov}"));
    }
    Ok(())
}

/// Runs `count` random trials, each with a random input error half the
/// time and one random fault when the circuit has any locations.
pub fn run_oracle_trials(count: usize, seed: u64) -> Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut with_fault = 0;
    for trial_no in 0..count {
        let circuit = random_circuit(&mut rng);
        if circuit.gate_count() > 30 || circuit.num_qubits() > 8 {
            return Err(format!("generator produced {} gates", circuit.gate_count()));
        }
        let num_data = circuit.num_data();
        let faults = enumerate_single_faults(&circuit, true).unwrap();
        let mut input = PauliString::identity(num_data);
        if rng.gen_bool(0.5) {
            let q = rng.gen_range(0..num_data);
            input.set(q, *[Pauli::X, Pauli::Y, Pauli::Z].choose(&mut rng).unwrap());
        }
        let fault = faults.choose(&mut rng).copied();
        with_fault += fault.is_some() as usize;
        let trial = Trial { circuit, input, fault };
        compare(&trial, &mut rng)
            .map_err(|msg| format!("trial {trial_no}: {msg}\ncircuit {:?}\nfault {:?}", trial.circuit, trial.fault))?;
    }
    Ok(with_fault)
}

/// Runs every round-1 single fault of a shipped mapping through the full
/// protocol and decoder. Passes when none ends in a logical error and each
/// leaves a stabilizer, a weight-1 error up to stabilizers, or for a CSS
/// code at most one X and one Z error. Returns the count of the last kind.
pub fn check_exhaustive_correction(name: &str) -> Result<usize, String> {
    use flagbridge::ft::enumerate_fault_records;
    use flagbridge::pauli::{logical_class, LogicalClass};
    let mut proc = flagbridge::mapping::builtin_mapping(name).map_err(|e| e.to_string())?.procedure;
    proc.build_decoder().map_err(|e| e.to_string())?;
    let code = proc.code().clone();
    let css = code.generators().iter().all(|g| g.x_bits() == 0 || g.z_bits() == 0);
    let n = code.n();
    let leader_weight = |x: u64, z: u64| code.coset_leader(&PauliString::from_words(n, x, z)).weight();
    let mut split = 0;
    for rec in enumerate_fault_records(&proc) {
        let out = proc.decode_outcome(rec.sf.clone(), rec.residual).map_err(|e| e.to_string())?;
        let after = out.residual_after_correction;
        if out.logical_failure {
            return Err(format!("{name}: {:?} fails", rec.fault));
        }
        match logical_class(&after, &code).unwrap() {
            LogicalClass::Identity => {}
            LogicalClass::Logical => return Err(format!("{name}: {:?} leaves logical {after}", rec.fault)),
            LogicalClass::Detectable if leader_weight(after.x_bits(), after.z_bits()) <= 1 => {}
            LogicalClass::Detectable
                if css && leader_weight(after.x_bits(), 0) <= 1 && leader_weight(0, after.z_bits()) <= 1 =>
            {
                split += 1
            }
            LogicalClass::Detectable => return Err(format!("{name}: {:?} leaves {after}", rec.fault)),
        }
    }
    Ok(split)
}
