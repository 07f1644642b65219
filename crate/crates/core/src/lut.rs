//! Lookup-table decoder generated from the single-fault analysis.
//!
//! JSON layout:
//!
//! ```json
//! {
//!   "bit_order": "...",
//!   "n": 7,
//!   "m_s": 6,
//!   "m_f": [1, 1, 1, 1, 1, 1],
//!   "table1": { "<s2 hex>": "IIIIXII" },
//!   "table2": [ { "<f1 hex>:<s2 hex>": "IXXIIII" }, ... ]
//! }
//! ```
//!
//! `table2` has one map per circuit. Keys are hex renderings of bit strings
//! where bit 0 is the first measured bit and the least significant bit of
//! the number; each key is zero-padded to `ceil(len / 4)` digits.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ft::{check_fault_tolerance, decode_key, enumerate_fault_records, DecodeKey};
use crate::pauli::{Bits, PauliString};
use crate::protocol::{QecProcedure, SyndromeFlagString};

pub const BIT_ORDER: &str = "bit i of a key is the i-th measured bit (syndromes in circuit and check order, flags by ascending qubit) and has weight 2^i in the hex number";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LookupTables {
    n: usize,
    m_s: usize,
    m_f: Vec<usize>,
    table1: BTreeMap<Bits, PauliString>,
    /// Keyed by (circuit, first-round flags, second-round syndromes).
    table2: BTreeMap<(usize, Bits, Bits), PauliString>,
}

impl LookupTables {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m_s(&self) -> usize {
        self.m_s
    }

    pub fn m_f(&self) -> &[usize] {
        &self.m_f
    }

    pub fn table1(&self) -> &BTreeMap<Bits, PauliString> {
        &self.table1
    }

    pub fn table2(&self) -> &BTreeMap<(usize, Bits, Bits), PauliString> {
        &self.table2
    }

    /// Correction for a cycle's measurements. Flagged keys consult table 2,
    /// falling back to table 1 on a miss; unknown keys decode to identity.
    pub fn decode(&self, sf: &SyndromeFlagString) -> PauliString {
        let identity = PauliString::identity(self.n);
        let Some(key) = decode_key(sf) else {
            return identity;
        };
        let s2 = match key {
            DecodeKey::Flagged {
                circuit,
                flags,
                syndrome,
            } => {
                if let Some(c) = self.table2.get(&(circuit, flags, syndrome)) {
                    return *c;
                }
                syndrome
            }
            DecodeKey::Syndrome(s) => s,
        };
        self.table1.get(&s2).copied().unwrap_or(identity)
    }

    pub fn to_json(&self) -> String {
        let raw = RawTables {
            bit_order: BIT_ORDER.to_string(),
            n: self.n,
            m_s: self.m_s,
            m_f: self.m_f.clone(),
            table1: self.table1.iter().map(|(k, v)| (k.to_hex(), v.to_string())).collect(),
            table2: (0..self.m_f.len())
                .map(|i| {
                    self.table2
                        .range((i, Bits::zeros(0), Bits::zeros(0))..)
                        .take_while(|((c, _, _), _)| *c == i)
                        .map(|((_, f, s), v)| (format!("{}:{}", f.to_hex(), s.to_hex()), v.to_string()))
                        .collect()
                })
                .collect(),
        };
        serde_json::to_string_pretty(&raw).expect("tables serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawTables = serde_json::from_str(text)?;
        let bad = |m: String| Error::Config(format!("lookup table: {m}"));
        if raw.n == 0 || raw.n > crate::pauli::MAX_QUBITS || raw.m_s > 64 || raw.m_f.iter().any(|&f| f > 64) {
            return Err(bad("sizes out of range".into()));
        }
        if raw.table2.len() != raw.m_f.len() {
            return Err(bad(format!("{} table2 maps for {} circuits", raw.table2.len(), raw.m_f.len())));
        }
        let pauli = |s: &str| -> Result<PauliString> {
            let p: PauliString = s.parse()?;
            if p.num_qubits() != raw.n {
                return Err(bad(format!("correction {s} is not on {} qubits", raw.n)));
            }
            Ok(p)
        };
        let mut table1 = BTreeMap::new();
        for (k, v) in &raw.table1 {
            table1.insert(Bits::from_hex(raw.m_s, k)?, pauli(v)?);
        }
        let mut table2 = BTreeMap::new();
        for (i, map) in raw.table2.iter().enumerate() {
            for (k, v) in map {
                let (f, s) = k.split_once(':').ok_or_else(|| bad(format!("key {k:?} lacks ':'")))?;
                let f = Bits::from_hex(raw.m_f[i], f)?;
                let s = Bits::from_hex(raw.m_s, s)?;
                table2.insert((i, f, s), pauli(v)?);
            }
        }
        Ok(LookupTables {
            n: raw.n,
            m_s: raw.m_s,
            m_f: raw.m_f,
            table1,
            table2,
        })
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTables {
    bit_order: String,
    n: usize,
    m_s: usize,
    m_f: Vec<usize>,
    table1: BTreeMap<String, String>,
    table2: Vec<BTreeMap<String, String>>,
}

/// Builds both tables, refusing when the procedure is not fault-tolerant.
/// Each populated key maps to the canonical minimum-weight representative
/// of the residuals that produce it.
pub fn build_lut(proc: &QecProcedure) -> Result<LookupTables> {
    let report = check_fault_tolerance(proc);
    if let Some(cx) = report.counterexamples.first() {
        return Err(Error::NotFaultTolerant(format!(
            "{} counterexamples, first from fault at circuit {} location {} ({})",
            report.counterexamples.len(),
            cx.first.fault.circuit,
            cx.first.fault.location,
            cx.first.fault.error
        )));
    }
    let code = proc.code();
    let mut lut = LookupTables {
        n: code.n(),
        m_s: proc.m_s(),
        m_f: proc.m_f(),
        table1: BTreeMap::new(),
        table2: BTreeMap::new(),
    };
    for rec in enumerate_fault_records(proc) {
        let Some(key) = decode_key(&rec.sf) else {
            continue;
        };
        let leader = code.coset_leader(&rec.residual);
        match key {
            DecodeKey::Syndrome(s) => {
                lut.table1.entry(s).or_insert(leader);
            }
            DecodeKey::Flagged {
                circuit,
                flags,
                syndrome,
            } => {
                lut.table2.entry((circuit, flags, syndrome)).or_insert(leader);
            }
        }
    }
    Ok(lut)
}
