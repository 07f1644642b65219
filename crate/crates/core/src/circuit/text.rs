//! Line-oriented circuit text.
//!
//! ```text
//! circuit plaquette-0
//! qubit 0 data
//! qubit 7 syndrome
//! prep 7
//! tick
//! cnot 0 7 s
//! tick
//! meas 7
//! tick
//! check 7 Z
//! ```
//!
//! Each `tick` closes a timestep; gates after the last `tick` form one more.
//! A file may hold several circuits, each opened by a `circuit` line (the
//! rest of that line is a free-form label). `#` starts a comment.

use std::fmt::Write as _;

use super::{Circuit, CnotClass, Gate, MeasuredCheck, Role};
use crate::error::{parse_err, Result};

struct Pending {
    roles: Vec<Option<Role>>,
    timesteps: Vec<Vec<Gate>>,
    open: Vec<Gate>,
    checks: Vec<(usize, MeasuredCheck)>,
    started: usize,
}

impl Pending {
    fn new(line: usize) -> Self {
        Pending {
            roles: Vec::new(),
            timesteps: Vec::new(),
            open: Vec::new(),
            checks: Vec::new(),
            started: line,
        }
    }

    fn finish(mut self) -> Result<Circuit> {
        if !self.open.is_empty() {
            self.timesteps.push(std::mem::take(&mut self.open));
        }
        let mut roles = Vec::with_capacity(self.roles.len());
        for (q, r) in self.roles.iter().enumerate() {
            roles.push(r.ok_or_else(|| parse_err(self.started, format!("qubit {q} not declared")))?);
        }
        if roles.is_empty() {
            return Err(parse_err(self.started, "circuit declares no qubits"));
        }
        let num_data = roles.iter().filter(|r| **r == Role::Data).count();
        let mut checks = Vec::new();
        for (line, m) in self.checks {
            if m.check.num_qubits() != num_data {
                return Err(parse_err(line, format!("check must span {num_data} data qubits")));
            }
            checks.push(m);
        }
        Circuit::from_parts(roles, self.timesteps, checks)
    }
}

fn qubit(tok: Option<&str>, line: usize) -> Result<usize> {
    let tok = tok.ok_or_else(|| parse_err(line, "missing qubit index"))?;
    let q: usize = tok
        .parse()
        .map_err(|_| parse_err(line, format!("bad qubit index {tok:?}")))?;
    if q >= crate::pauli::MAX_QUBITS {
        return Err(parse_err(line, format!("qubit index {q} too large")));
    }
    Ok(q)
}

/// Parses one or more circuits.
pub fn parse_circuit_set(text: &str) -> Result<Vec<Circuit>> {
    let mut done = Vec::new();
    let mut cur: Option<Pending> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let mut toks = body.split_whitespace();
        let head = toks.next().unwrap_or_default();
        if head == "circuit" {
            if let Some(p) = cur.take() {
                done.push(p.finish()?);
            }
            cur = Some(Pending::new(line));
            continue;
        }
        let p = cur.get_or_insert_with(|| Pending::new(line));
        match head {
            "qubit" => {
                let q = qubit(toks.next(), line)?;
                let role = match toks.next() {
                    Some("data") => Role::Data,
                    Some("syndrome") => Role::Syndrome,
                    Some("flag") => Role::Flag,
                    Some("inactive") => Role::Inactive,
                    other => return Err(parse_err(line, format!("bad role {other:?}"))),
                };
                if p.roles.len() <= q {
                    p.roles.resize(q + 1, None);
                }
                if p.roles[q].replace(role).is_some() {
                    return Err(parse_err(line, format!("qubit {q} declared twice")));
                }
            }
            "tick" => p.timesteps.push(std::mem::take(&mut p.open)),
            "prep" => p.open.push(Gate::PrepZ(qubit(toks.next(), line)?)),
            "meas" => p.open.push(Gate::MeasZ(qubit(toks.next(), line)?)),
            "h" => p.open.push(Gate::H(qubit(toks.next(), line)?)),
            "cnot" => {
                let control = qubit(toks.next(), line)?;
                let target = qubit(toks.next(), line)?;
                let class = match toks.next() {
                    Some("s") => CnotClass::S,
                    Some("f") => CnotClass::F,
                    other => return Err(parse_err(line, format!("bad CNOT class {other:?}"))),
                };
                if control == target {
                    return Err(parse_err(line, "CNOT control equals target"));
                }
                p.open.push(Gate::Cnot {
                    control,
                    target,
                    class,
                });
            }
            "check" => {
                let syndrome = qubit(toks.next(), line)?;
                let check = toks
                    .next()
                    .ok_or_else(|| parse_err(line, "missing check operator"))?
                    .parse()
                    .map_err(|e| parse_err(line, format!("{e}")))?;
                p.checks.push((line, MeasuredCheck { syndrome, check }));
            }
            other => return Err(parse_err(line, format!("unknown directive {other:?}"))),
        }
        if let Some(extra) = toks.next() {
            return Err(parse_err(line, format!("unexpected token {extra:?}")));
        }
    }
    if let Some(p) = cur.take() {
        done.push(p.finish()?);
    }
    Ok(done)
}

/// Renders circuits so that [`parse_circuit_set`] returns them unchanged.
pub fn write_circuit_set(circuits: &[Circuit]) -> String {
    let mut out = String::new();
    for (i, c) in circuits.iter().enumerate() {
        let _ = writeln!(out, "circuit {i}");
        for (q, r) in c.roles().iter().enumerate() {
            let role = match r {
                Role::Data => "data",
                Role::Syndrome => "syndrome",
                Role::Flag => "flag",
                Role::Inactive => "inactive",
            };
            let _ = writeln!(out, "qubit {q} {role}");
        }
        for step in c.timesteps() {
            for g in step {
                let _ = match *g {
                    Gate::PrepZ(q) => writeln!(out, "prep {q}"),
                    Gate::MeasZ(q) => writeln!(out, "meas {q}"),
                    Gate::H(q) => writeln!(out, "h {q}"),
                    Gate::Cnot {
                        control,
                        target,
                        class,
                    } => {
                        let k = if class == CnotClass::S { 's' } else { 'f' };
                        writeln!(out, "cnot {control} {target} {k}")
                    }
                };
            }
            out.push_str("tick\n");
        }
        for m in c.measured_checks() {
            let _ = writeln!(out, "check {} {}", m.syndrome, m.check);
        }
    }
    out
}
