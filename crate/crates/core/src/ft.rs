//! Exhaustive single-fault analysis of a QEC procedure.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::noise::FaultKind;
use crate::pauli::{in_group_unchecked, Bits, PauliString};
use crate::protocol::{QecProcedure, SingleFault, SyndromeFlagString};

/// Where a single fault was injected during a cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaultSite {
    /// 1 or 2.
    pub round: usize,
    pub circuit: usize,
    pub location: usize,
    pub tick: usize,
    pub kind: FaultKind,
    /// The injected Pauli over the whole register.
    pub error: PauliString,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaultRecord {
    pub fault: FaultSite,
    /// Data error left by the cycle before correction.
    pub residual: PauliString,
    pub sf: SyndromeFlagString,
}

/// What the lookup decoder sees of a cycle's measurements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum DecodeKey {
    /// Second-round syndromes only.
    Syndrome(Bits),
    /// Round 1 stopped at `circuit` with nonzero `flags`.
    Flagged { circuit: usize, flags: Bits, syndrome: Bits },
}

/// `None` when round 1 completed quietly and no correction is applied.
pub fn decode_key(sf: &SyndromeFlagString) -> Option<DecodeKey> {
    let i = sf.triggered_at()?;
    let syndrome = sf.s2()?;
    let flags = sf.round1[i].flags;
    Some(if flags.is_zero() {
        DecodeKey::Syndrome(syndrome)
    } else {
        DecodeKey::Flagged {
            circuit: i,
            flags,
            syndrome,
        }
    })
}

/// Replays the protocol once for every gate, preparation and measurement
/// fault of round 1, in circuit and location order.
///
/// With a single fault a second round only happens if that fault was in
/// round 1, so second-round locations never carry the lone fault.
pub fn enumerate_fault_records(proc: &QecProcedure) -> Vec<FaultRecord> {
    let n = proc.compiled().first().map_or(0, |c| c.num_qubits());
    let mut sites = Vec::new();
    for (ci, cc) in proc.compiled().iter().enumerate() {
        for (li, loc) in cc.locations().iter().enumerate() {
            if loc.kind == FaultKind::Idle {
                continue;
            }
            for error in loc.fault_paulis(n) {
                sites.push(FaultSite {
                    round: 1,
                    circuit: ci,
                    location: li,
                    tick: loc.tick,
                    kind: loc.kind,
                    error,
                });
            }
        }
    }
    sites
        .into_par_iter()
        .map(|site| {
            let mut src = SingleFault {
                round: 0,
                circuit: site.circuit,
                fault: (site.location as u32, site.error.x_bits(), site.error.z_bits()),
            };
            let (sf, residual) = proc.execute(&mut src);
            FaultRecord {
                fault: site,
                residual,
                sf,
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub key: Option<DecodeKey>,
    pub first: FaultRecord,
    /// A second fault with the same key whose residual is not equivalent;
    /// absent when `first` alone leaves an undetected uncorrectable error.
    pub second: Option<FaultRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FtReport {
    pub procedure: String,
    pub fault_tolerant: bool,
    pub faults_checked: usize,
    pub counterexamples: Vec<Counterexample>,
}

/// Checks the single-fault condition.
///
/// Faults that stop round 1 are grouped by the key the decoder would see;
/// within a group all residuals must agree up to a stabilizer. Faults that
/// leave round 1 silent must leave an error that an ideal next round
/// corrects (see [`QecProcedure::closes_to_logical`]).
pub fn check_fault_tolerance(proc: &QecProcedure) -> FtReport {
    let records = enumerate_fault_records(proc);
    let code = proc.code();
    let mut counterexamples = Vec::new();
    let mut groups: BTreeMap<DecodeKey, usize> = BTreeMap::new();
    for (i, rec) in records.iter().enumerate() {
        match decode_key(&rec.sf) {
            None => {
                if proc.closes_to_logical(&rec.residual) {
                    counterexamples.push(Counterexample {
                        key: None,
                        first: rec.clone(),
                        second: None,
                    });
                }
            }
            Some(key) => {
                let rep = *groups.entry(key).or_insert(i);
                let diff = PauliString::from_words(
                    code.n(),
                    rec.residual.x_bits() ^ records[rep].residual.x_bits(),
                    rec.residual.z_bits() ^ records[rep].residual.z_bits(),
                );
                if !in_group_unchecked(&diff, code) {
                    counterexamples.push(Counterexample {
                        key: Some(key),
                        first: records[rep].clone(),
                        second: Some(rec.clone()),
                    });
                }
            }
        }
    }
    FtReport {
        procedure: proc.name().to_string(),
        fault_tolerant: counterexamples.is_empty(),
        faults_checked: records.len(),
        counterexamples,
    }
}
