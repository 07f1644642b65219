//! The two-round fault-tolerant QEC cycle.
//!
//! Round 1 runs the circuits one after another and stops at the first
//! circuit reporting a nonzero syndrome or flag. If it stopped early, a full
//! second round follows and its syndromes are decoded, using the flags of
//! the circuit that stopped round 1 when any were raised.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::{verify_measures, Circuit};
use crate::code::{for_each_pauli_of_weight, StabilizerCode};
use crate::error::{Error, Result};
use crate::lut::LookupTables;
use crate::noise::{CompiledCircuit, NoiseModel};
use crate::pauli::{classify_unchecked, syndrome_unchecked, Bits, LogicalClass, PauliString};

/// Outcome flips of one circuit execution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CircuitOutcome {
    /// In the order of the circuit's measured checks.
    pub syndrome: Bits,
    /// In ascending flag-qubit order.
    pub flags: Bits,
}

impl CircuitOutcome {
    pub fn is_trivial(&self) -> bool {
        self.syndrome.is_zero() && self.flags.is_zero()
    }
}

/// Everything measured during one cycle. `round1` holds only the circuits
/// that ran; `round2` is empty when round 1 completed without incident.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SyndromeFlagString {
    pub round1: Vec<CircuitOutcome>,
    pub round2: Vec<CircuitOutcome>,
}

impl SyndromeFlagString {
    /// Index of the circuit that ended round 1, if one did.
    pub fn triggered_at(&self) -> Option<usize> {
        match self.round1.last() {
            Some(o) if !o.is_trivial() => Some(self.round1.len() - 1),
            _ => None,
        }
    }

    /// Concatenated second-round syndrome bits.
    pub fn s2(&self) -> Option<Bits> {
        if self.round2.is_empty() {
            return None;
        }
        Some(
            self.round2
                .iter()
                .fold(Bits::zeros(0), |acc, o| acc.concat(&o.syndrome)),
        )
    }
}

/// A code together with the circuits that measure its generators, run in
/// list order (Z-type group first by convention of the built-ins).
#[derive(Debug, Clone)]
pub struct QecProcedure {
    name: String,
    code: StabilizerCode,
    circuits: Vec<Circuit>,
    compiled: Vec<CompiledCircuit>,
    /// Perfect-syndrome decoder used to close a cycle before classifying it.
    closure: Closure,
    lut: Option<LookupTables>,
}

impl QecProcedure {
    /// Checks that every circuit measures what it claims and that together
    /// the circuits measure each generator exactly once.
    pub fn new(name: impl Into<String>, code: StabilizerCode, circuits: Vec<Circuit>) -> Result<Self> {
        let pre = |m: String| Err(Error::Precondition(m));
        if circuits.is_empty() {
            return pre("procedure has no circuits".into());
        }
        let nq = circuits[0].num_qubits();
        let mut seen = vec![false; code.generators().len()];
        for (i, c) in circuits.iter().enumerate() {
            if c.num_qubits() != nq {
                return pre(format!("circuit {i} uses a register of a different size"));
            }
            if c.num_data() != code.n() {
                return pre(format!("circuit {i} has {} data qubits, code has {}", c.num_data(), code.n()));
            }
            let report = verify_measures(c)?;
            if let Some(msg) = report.first_failure() {
                return pre(format!("circuit {i} fails verification: {msg}"));
            }
            for m in c.measured_checks() {
                let Some(g) = code.generators().iter().position(|g| *g == m.check) else {
                    return pre(format!("circuit {i} measures {} which is not a generator", m.check));
                };
                if std::mem::replace(&mut seen[g], true) {
                    return pre(format!("generator {} measured twice", m.check));
                }
            }
        }
        if let Some(g) = seen.iter().position(|s| !s) {
            return pre(format!("generator {} is never measured", code.generators()[g]));
        }
        let compiled = circuits.iter().map(CompiledCircuit::new).collect::<Result<_>>()?;
        let closure = Closure::new(&code);
        Ok(QecProcedure {
            name: name.into(),
            code,
            circuits,
            compiled,
            closure,
            lut: None,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn code(&self) -> &StabilizerCode {
        &self.code
    }

    pub fn circuits(&self) -> &[Circuit] {
        &self.circuits
    }

    pub fn compiled(&self) -> &[CompiledCircuit] {
        &self.compiled
    }

    /// Total syndrome bits per round.
    pub fn m_s(&self) -> usize {
        self.circuits.iter().map(|c| c.measured_checks().len()).sum()
    }

    /// Flag bits per circuit.
    pub fn m_f(&self) -> Vec<usize> {
        self.circuits.iter().map(|c| c.flag_qubits().len()).collect()
    }

    pub fn lut(&self) -> Option<&LookupTables> {
        self.lut.as_ref()
    }

    pub fn set_lut(&mut self, lut: LookupTables) {
        self.lut = Some(lut);
    }

    /// Builds the lookup tables from the exhaustive single-fault analysis
    /// and attaches them. Fails when the procedure is not fault-tolerant.
    pub fn build_decoder(&mut self) -> Result<&LookupTables> {
        let lut = crate::lut::build_lut(self)?;
        Ok(self.lut.insert(lut))
    }

    /// Runs the noisy part of a cycle: returns the measured string and the
    /// data error left before any correction.
    pub(crate) fn execute<F: FaultSource>(&self, src: &mut F) -> (SyndromeFlagString, PauliString) {
        let (mut x, mut z) = (0u64, 0u64);
        let mut faults = Vec::new();
        let mut sf = SyndromeFlagString {
            round1: Vec::with_capacity(self.compiled.len()),
            round2: Vec::new(),
        };
        let mut triggered = false;
        for (i, cc) in self.compiled.iter().enumerate() {
            let out = self.run_one(cc, 0, i, src, &mut faults, &mut x, &mut z);
            sf.round1.push(out);
            if !out.is_trivial() {
                triggered = true;
                break;
            }
        }
        if triggered {
            for (i, cc) in self.compiled.iter().enumerate() {
                let out = self.run_one(cc, 1, i, src, &mut faults, &mut x, &mut z);
                sf.round2.push(out);
            }
        }
        (sf, PauliString::from_words(self.code.n(), x, z))
    }

    #[allow(clippy::too_many_arguments)]
    fn run_one<F: FaultSource>(
        &self,
        cc: &CompiledCircuit,
        round: usize,
        circuit: usize,
        src: &mut F,
        faults: &mut Vec<(u32, u64, u64)>,
        x: &mut u64,
        z: &mut u64,
    ) -> CircuitOutcome {
        faults.clear();
        src.faults(round, circuit, cc, faults);
        let raw = cc.run(x, z, faults);
        let m_s = self.circuits[circuit].measured_checks().len();
        let len = cc.outcome_len();
        CircuitOutcome {
            syndrome: Bits::from_value(m_s, raw),
            flags: Bits::from_value(len - m_s, raw >> m_s),
        }
    }

    /// Decodes, applies the correction, and closes the cycle with an ideal
    /// round of syndrome extraction to decide whether a logical error
    /// remains.
    pub(crate) fn finish(&self, lut: &LookupTables, sf: SyndromeFlagString, residual: PauliString) -> CycleResult {
        let correction = lut.decode(&sf);
        let after = PauliString::from_words(
            self.code.n(),
            residual.x_bits() ^ correction.x_bits(),
            residual.z_bits() ^ correction.z_bits(),
        );
        let logical_failure = self.closes_to_logical(&after);
        CycleResult {
            terminated_early_at: sf.triggered_at(),
            sf,
            residual_before_correction: residual,
            correction,
            residual_after_correction: after,
            logical_failure,
        }
    }

    /// Decodes a measured string with the attached tables and applies the
    /// correction to `residual`.
    pub fn decode_outcome(&self, sf: SyndromeFlagString, residual: PauliString) -> Result<CycleResult> {
        let lut = self
            .lut()
            .ok_or_else(|| Error::Config("procedure has no decoder; build one first".into()))?;
        Ok(self.finish(lut, sf, residual))
    }

    /// Applies the ideal minimum-weight correction for `residual`'s syndrome
    /// and reports whether the net operator is a nontrivial logical.
    pub fn closes_to_logical(&self, residual: &PauliString) -> bool {
        let fix = self.closure.correction(residual, &self.code);
        let net = PauliString::from_words(
            self.code.n(),
            residual.x_bits() ^ fix.x_bits(),
            residual.z_bits() ^ fix.z_bits(),
        );
        classify_unchecked(&net, &self.code) == LogicalClass::Logical
    }
}

/// Ideal decoder for a noiseless round. CSS codes decode the X and Z parts
/// independently; other codes use one table over all Paulis.
#[derive(Debug, Clone)]
enum Closure {
    Joint(HashMap<u64, PauliString>),
    Css {
        x: HashMap<u64, PauliString>,
        z: HashMap<u64, PauliString>,
    },
}

impl Closure {
    fn new(code: &StabilizerCode) -> Self {
        let pure = |p: &PauliString| p.x_bits() == 0 || p.z_bits() == 0;
        if code.generators().iter().all(pure) {
            // X errors are seen by the Z-type generators and vice versa.
            let num_z = code.generators().iter().filter(|g| g.x_bits() == 0).count();
            let num_x = code.generators().len() - num_z;
            let x = min_weight_table(code, 1 << num_z, |p| p.z_bits() == 0);
            let z = min_weight_table(code, 1 << num_x, |p| p.x_bits() == 0);
            Closure::Css { x, z }
        } else {
            Closure::Joint(min_weight_table(code, 1 << code.generators().len(), |_| true))
        }
    }

    fn correction(&self, residual: &PauliString, code: &StabilizerCode) -> PauliString {
        let n = code.n();
        match self {
            Closure::Joint(t) => t[&syndrome_unchecked(residual, code).value()],
            Closure::Css { x, z } => {
                let xs = syndrome_unchecked(&PauliString::from_words(n, residual.x_bits(), 0), code);
                let zs = syndrome_unchecked(&PauliString::from_words(n, 0, residual.z_bits()), code);
                let fx = x[&xs.value()];
                let fz = z[&zs.value()];
                PauliString::from_words(n, fx.x_bits(), fz.z_bits())
            }
        }
    }
}

/// Lowest-weight Pauli among those accepted by `keep` for each of the
/// `total` syndromes they reach, ties broken by canonical order.
fn min_weight_table(code: &StabilizerCode, total: usize, keep: impl Fn(&PauliString) -> bool) -> HashMap<u64, PauliString> {
    let mut table: HashMap<u64, PauliString> = HashMap::with_capacity(total);
    for w in 0..=code.n() {
        for_each_pauli_of_weight(code.n(), w, &mut |p| {
            if keep(p) {
                let e = table.entry(syndrome_unchecked(p, code).value()).or_insert(*p);
                if p.canonical_cmp(e).is_lt() {
                    *e = *p;
                }
            }
            true
        });
        if table.len() == total {
            break;
        }
    }
    table
}

/// Supplies the faults for each circuit execution of a cycle.
pub(crate) trait FaultSource {
    /// Appends `(location, x, z)` faults for circuit `circuit` of round
    /// `round` (0 or 1).
    fn faults(&mut self, round: usize, circuit: usize, cc: &CompiledCircuit, out: &mut Vec<(u32, u64, u64)>);
}

/// Exactly one fault at a fixed place.
pub(crate) struct SingleFault {
    pub round: usize,
    pub circuit: usize,
    pub fault: (u32, u64, u64),
}

impl FaultSource for SingleFault {
    fn faults(&mut self, round: usize, circuit: usize, _: &CompiledCircuit, out: &mut Vec<(u32, u64, u64)>) {
        if round == self.round && circuit == self.circuit {
            out.push(self.fault);
        }
    }
}

/// Independent faults drawn from a noise model.
pub(crate) struct Sampled<'a, R> {
    pub model: NoiseModel,
    pub rng: &'a mut R,
}

impl<R: Rng> FaultSource for Sampled<'_, R> {
    fn faults(&mut self, _: usize, _: usize, cc: &CompiledCircuit, out: &mut Vec<(u32, u64, u64)>) {
        for (locs, p) in [(&cc.gate_locs, self.model.p), (&cc.idle_locs, self.model.p_idle)] {
            bernoulli_indices(locs.len(), p, self.rng, |i, rng| {
                out.push(cc.sample_fault(locs[i], rng));
            });
        }
    }
}

/// Calls `hit` for each index in `0..len` that is selected independently
/// with probability `p`, skipping ahead geometrically between hits.
pub(crate) fn bernoulli_indices<R: Rng + ?Sized>(
    len: usize,
    p: f64,
    rng: &mut R,
    mut hit: impl FnMut(usize, &mut R),
) {
    if p <= 0.0 || len == 0 {
        return;
    }
    if p >= 1.0 {
        (0..len).for_each(|i| hit(i, rng));
        return;
    }
    let log_q = (-p).ln_1p();
    let mut i = 0usize;
    loop {
        let u: f64 = rng.gen::<f64>();
        // 1 - u lies in (0, 1], so the logarithm is finite.
        let skip = ((1.0 - u).ln() / log_q).floor();
        if skip >= (len - i) as f64 {
            return;
        }
        i += skip as usize;
        hit(i, rng);
        i += 1;
        if i >= len {
            return;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CycleResult {
    /// Circuit index at which round 1 stopped, if it did.
    pub terminated_early_at: Option<usize>,
    pub sf: SyndromeFlagString,
    pub residual_before_correction: PauliString,
    pub correction: PauliString,
    pub residual_after_correction: PauliString,
    pub logical_failure: bool,
}

/// One noisy cycle with faults drawn from a ChaCha8 stream seeded by `seed`.
pub fn run_cycle(proc: &QecProcedure, model: &NoiseModel, seed: u64) -> Result<CycleResult> {
    let lut = proc
        .lut()
        .ok_or_else(|| Error::Config("procedure has no decoder; build one first".into()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (sf, residual) = proc.execute(&mut Sampled { model: *model, rng: &mut rng });
    Ok(proc.finish(lut, sf, residual))
}
