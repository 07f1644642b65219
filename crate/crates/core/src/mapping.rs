//! Device coupling graphs, qubit layouts, connectivity checks and the
//! shipped mappings.
//!
//! A mapping file is JSON:
//!
//! ```json
//! {
//!   "name": "steane-c3-L2",
//!   "code": "steane",
//!   "topology": "ibm20",
//!   "layout": { "0": 0, "1": 2 },
//!   "circuits": [ { "bridge": { ... } }, { "text": ["qubit 0 data", ...] } ]
//! }
//! ```
//!
//! `code` is a built-in code name or the code text format; `topology` is a
//! built-in device name or an inline topology object. Circuits run in list
//! order and share one register.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::circuit::{build_flag_bridge, parse_circuit_set, Circuit, Coupling, FlagBridgeSpec, Gate};
use crate::code::{self, StabilizerCode, STEANE_PLAQUETTES};
use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliString};
use crate::protocol::QecProcedure;

pub const BUILTIN_TOPOLOGIES: [&str; 3] = ["surface17", "ibm20", "ibm16"];

/// Largest device a topology may describe.
pub const MAX_NODES: usize = 1 << 16;

pub const BUILTIN_MAPPINGS: [&str; 8] = [
    "steane-c1-L1",
    "steane-c1-L2",
    "steane-c2-L1",
    "steane-c2-L2",
    "steane-c3-L2",
    "sc-d3",
    "fivequbit-surface17",
    "fivequbit-ibm16",
];

/// Undirected coupling graph of a device.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawTopology", into = "RawTopology")]
pub struct DeviceTopology {
    name: String,
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTopology {
    name: String,
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl TryFrom<RawTopology> for DeviceTopology {
    type Error = Error;

    fn try_from(raw: RawTopology) -> Result<Self> {
        DeviceTopology::new(raw.name, raw.n, raw.edges)
    }
}

impl From<DeviceTopology> for RawTopology {
    fn from(t: DeviceTopology) -> Self {
        RawTopology {
            name: t.name,
            n: t.n,
            edges: t.edges.into_iter().collect(),
        }
    }
}

impl DeviceTopology {
    /// Rejects self-loops, repeated edges, out-of-range nodes and devices
    /// larger than [`MAX_NODES`].
    pub fn new(name: impl Into<String>, n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let name = name.into();
        if n > MAX_NODES {
            return Err(Error::UnsupportedSize(format!("topology {name} with {n} nodes")));
        }
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::Config(format!("topology {name}: edge ({a}, {b}) leaves 0..{n}")));
            }
            if a == b {
                return Err(Error::Config(format!("topology {name}: self-loop on {a}")));
            }
            if !set.insert((a.min(b), a.max(b))) {
                return Err(Error::Config(format!("topology {name}: edge ({a}, {b}) repeated")));
            }
        }
        Ok(DeviceTopology { name, n, edges: set })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("topology serializes")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn num_nodes(&self) -> usize {
        self.n
    }

    /// Edges as `(low, high)` pairs in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    pub fn degree(&self, node: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == node || b == node).count()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &(a, b) in &self.edges {
                let w = if a == v {
                    b
                } else if b == v {
                    a
                } else {
                    continue;
                };
                if !std::mem::replace(&mut seen[w], true) {
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

/// Injective assignment of circuit qubits to device nodes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "BTreeMap<usize, usize>", into = "BTreeMap<usize, usize>")]
pub struct Layout {
    assignment: BTreeMap<usize, usize>,
}

impl TryFrom<BTreeMap<usize, usize>> for Layout {
    type Error = Error;

    fn try_from(map: BTreeMap<usize, usize>) -> Result<Self> {
        Layout::new(map)
    }
}

impl From<Layout> for BTreeMap<usize, usize> {
    fn from(l: Layout) -> Self {
        l.assignment
    }
}

impl Layout {
    pub fn new(assignment: BTreeMap<usize, usize>) -> Result<Self> {
        let mut used = BTreeMap::new();
        for (&q, &node) in &assignment {
            if let Some(other) = used.insert(node, q) {
                return Err(Error::Layout(format!("qubits {other} and {q} both sit on node {node}")));
            }
        }
        Ok(Layout { assignment })
    }

    pub fn identity(n: usize) -> Self {
        Layout {
            assignment: (0..n).map(|q| (q, q)).collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("layout serializes")
    }

    pub fn node(&self, qubit: usize) -> Option<usize> {
        self.assignment.get(&qubit).copied()
    }

    pub fn assignment(&self) -> &BTreeMap<usize, usize> {
        &self.assignment
    }
}

/// A CNOT whose qubits do not sit on adjacent nodes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LayoutViolation {
    pub circuit: usize,
    pub tick: usize,
    pub qubits: (usize, usize),
    pub nodes: (usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LayoutReport {
    pub topology: String,
    pub cnots_checked: usize,
    pub violations: Vec<LayoutViolation>,
}

impl LayoutReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks that every CNOT acts on adjacent device nodes. Every qubit that
/// is data or touched by a gate must be placed on an existing node.
pub fn validate_layout(circuits: &[Circuit], topology: &DeviceTopology, layout: &Layout) -> Result<LayoutReport> {
    let place = |q: usize| -> Result<usize> {
        let node = layout
            .node(q)
            .ok_or_else(|| Error::Layout(format!("qubit {q} is not placed")))?;
        if node >= topology.num_nodes() {
            return Err(Error::Layout(format!(
                "qubit {q} sits on node {node}, {} has {} nodes",
                topology.name(),
                topology.num_nodes()
            )));
        }
        Ok(node)
    };
    let mut report = LayoutReport {
        topology: topology.name().to_string(),
        cnots_checked: 0,
        violations: Vec::new(),
    };
    for (ci, c) in circuits.iter().enumerate() {
        for q in 0..c.num_data() {
            place(q)?;
        }
        for (tick, g) in c.gates() {
            let qs: Vec<usize> = g.qubits().collect();
            for &q in &qs {
                place(q)?;
            }
            if let Gate::Cnot { control, target, .. } = *g {
                report.cnots_checked += 1;
                let (a, b) = (place(control)?, place(target)?);
                if !topology.has_edge(a, b) {
                    report.violations.push(LayoutViolation {
                        circuit: ci,
                        tick,
                        qubits: (control, target),
                        nodes: (a, b),
                    });
                }
            }
        }
    }
    Ok(report)
}

pub fn builtin_topology(name: &str) -> Result<DeviceTopology> {
    let text = match name {
        "surface17" => include_str!("../assets/topologies/surface17.json"),
        "ibm20" => include_str!("../assets/topologies/ibm20.json"),
        "ibm16" => include_str!("../assets/topologies/ibm16.json"),
        _ => {
            return Err(Error::Unknown {
                kind: "topology",
                name: name.to_string(),
            })
        }
    };
    DeviceTopology::from_json(text)
}

pub fn builtin_code(name: &str) -> Result<StabilizerCode> {
    match name {
        "steane" => Ok(code::steane()),
        "five-qubit" => Ok(code::five_qubit()),
        "surface-d3" => Ok(code::rotated_surface_d3()),
        _ => Err(Error::Unknown {
            kind: "code",
            name: name.to_string(),
        }),
    }
}

/// One circuit of a mapping file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CircuitSource {
    Bridge(FlagBridgeSpec),
    /// Circuit text, one directive per entry.
    Text(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TopologyRef {
    Builtin(String),
    Inline(DeviceTopology),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MappingFile {
    pub name: String,
    /// Built-in code name, or a code in text format.
    pub code: String,
    pub topology: TopologyRef,
    pub layout: Layout,
    pub circuits: Vec<CircuitSource>,
}

/// A procedure placed on a device.
#[derive(Debug, Clone)]
pub struct Mapping {
    pub procedure: QecProcedure,
    pub layout: Layout,
    pub topology: DeviceTopology,
}

impl MappingFile {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn resolve_code(&self) -> Result<StabilizerCode> {
        if self.code.contains('\n') {
            StabilizerCode::from_text(&self.code)
        } else {
            builtin_code(&self.code)
        }
    }

    pub fn resolve_topology(&self) -> Result<DeviceTopology> {
        match &self.topology {
            TopologyRef::Builtin(name) => builtin_topology(name),
            TopologyRef::Inline(t) => Ok(t.clone()),
        }
    }

    /// Builds the circuits in list order without checking the layout.
    pub fn build_circuits(&self) -> Result<Vec<Circuit>> {
        let mut circuits = Vec::new();
        for (i, src) in self.circuits.iter().enumerate() {
            match src {
                CircuitSource::Bridge(spec) => circuits.push(build_flag_bridge(spec)?),
                CircuitSource::Text(lines) => {
                    let set = parse_circuit_set(&lines.join("\n"))?;
                    if set.len() != 1 {
                        return Err(Error::Config(format!(
                            "mapping {}: circuit entry {i} holds {} circuits",
                            self.name,
                            set.len()
                        )));
                    }
                    circuits.extend(set);
                }
            }
        }
        Ok(circuits)
    }

    /// Builds the circuits and procedure and checks the layout against the
    /// topology; a layout with violations is an error.
    pub fn load(&self) -> Result<Mapping> {
        let code = self.resolve_code()?;
        let topology = self.resolve_topology()?;
        let circuits = self.build_circuits()?;
        let report = validate_layout(&circuits, &topology, &self.layout)?;
        if let Some(v) = report.violations.first() {
            return Err(Error::Layout(format!(
                "mapping {}: CNOT {:?} of circuit {} at timestep {} lands on non-adjacent nodes {:?}",
                self.name, v.qubits, v.circuit, v.tick, v.nodes
            )));
        }
        let procedure = QecProcedure::new(self.name.clone(), code, circuits)?;
        Ok(Mapping {
            procedure,
            layout: self.layout.clone(),
            topology,
        })
    }
}

pub fn builtin_mapping_file(name: &str) -> Result<MappingFile> {
    let text = match name {
        "steane-c1-L1" => include_str!("../assets/mappings/steane-c1-L1.json"),
        "steane-c1-L2" => include_str!("../assets/mappings/steane-c1-L2.json"),
        "steane-c2-L1" => include_str!("../assets/mappings/steane-c2-L1.json"),
        "steane-c2-L2" => include_str!("../assets/mappings/steane-c2-L2.json"),
        "steane-c3-L2" => include_str!("../assets/mappings/steane-c3-L2.json"),
        "sc-d3" => include_str!("../assets/mappings/sc-d3.json"),
        "fivequbit-surface17" => include_str!("../assets/mappings/fivequbit-surface17.json"),
        "fivequbit-ibm16" => include_str!("../assets/mappings/fivequbit-ibm16.json"),
        _ => {
            return Err(Error::Unknown {
                kind: "mapping",
                name: name.to_string(),
            })
        }
    };
    MappingFile::from_json(text)
}

pub fn builtin_mapping(name: &str) -> Result<Mapping> {
    builtin_mapping_file(name)?.load()
}

/// Steane code measured with one bare ancilla per generator, Z group first.
/// Not fault-tolerant: a mid-circuit ancilla fault spreads to two data
/// qubits unnoticed.
pub fn bare_steane() -> QecProcedure {
    let mut circuits = Vec::new();
    for letter in [Pauli::Z, Pauli::X] {
        for plaquette in STEANE_PLAQUETTES {
            let spec = FlagBridgeSpec {
                num_qubits: 8,
                num_data: 7,
                checks: vec![PauliString::uniform(7, &plaquette, letter)],
                syndrome_qubits: vec![7],
                flag_qubits: vec![],
                encoding_edges: vec![],
                couplings: plaquette.iter().map(|&data| Coupling { data, ancilla: 7 }).collect(),
                schedule_hints: vec![],
            };
            circuits.push(build_flag_bridge(&spec).expect("bare Steane circuit builds"));
        }
    }
    QecProcedure::new("steane-bare", code::steane(), circuits).expect("bare Steane procedure is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_topologies_match_device_facts() {
        let s17 = builtin_topology("surface17").unwrap();
        assert_eq!((s17.num_nodes(), s17.max_degree()), (17, 4));
        assert_eq!(s17.edges().count(), 24);
        let ibm20 = builtin_topology("ibm20").unwrap();
        assert_eq!(ibm20.num_nodes(), 20);
        let ibm16 = builtin_topology("ibm16").unwrap();
        assert_eq!((ibm16.num_nodes(), ibm16.max_degree()), (16, 3));
        for t in [s17, ibm20, ibm16] {
            assert!(t.is_connected(), "{}", t.name());
        }
        assert!(matches!(builtin_topology("tokyo"), Err(Error::Unknown { .. })));
    }

    #[test]
    fn topology_rejects_bad_edges() {
        assert!(DeviceTopology::new("t", 2, [(0, 0)]).is_err());
        assert!(DeviceTopology::new("t", 2, [(0, 2)]).is_err());
        assert!(DeviceTopology::new("t", 2, [(0, 1), (1, 0)]).is_err());
        assert!(DeviceTopology::from_json(r#"{"name":"t","n":2,"edges":[[0,1]],"x":1}"#).is_err());
        assert!(DeviceTopology::from_json(r#"{"name":"t","n":18446744073709551615,"edges":[]}"#).is_err());
    }

    #[test]
    fn layout_must_be_injective() {
        assert!(Layout::from_json(r#"{"0": 3, "1": 3}"#).is_err());
        let l = Layout::from_json(r#"{"0": 3, "1": 4}"#).unwrap();
        assert_eq!(l.node(1), Some(4));
        assert_eq!(Layout::from_json(&l.to_json()).unwrap(), l);
    }

    #[test]
    fn bare_steane_has_six_one_ancilla_circuits() {
        let p = bare_steane();
        assert_eq!(p.circuits().len(), 6);
        assert!(p.circuits().iter().all(|c| c.flag_qubits().is_empty()));
    }
}
