//! Validated run settings and input loading.

use std::fs;
use std::path::{Path, PathBuf};

use flagbridge::circuit::{parse_circuit_set, Circuit};
use flagbridge::mapping::{
    bare_steane, builtin_mapping_file, builtin_topology, DeviceTopology, Layout, MappingFile, BUILTIN_MAPPINGS,
    BUILTIN_TOPOLOGIES,
};
use flagbridge::protocol::QecProcedure;
use serde::Serialize;

use crate::error::{usage, CliError, Result};
use crate::NoiseArgs;

/// Steane circuits with bare ancillas, which are not fault-tolerant.
pub const BARE_STEANE: &str = "bare-steane";

/// Everything a run depends on, recorded in its manifest.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    pub version: &'static str,
    pub mappings: Vec<String>,
    pub p_values: Vec<f64>,
    #[serde(rename = "pI_ratios")]
    pub pi_ratios: Vec<f64>,
    pub shots: u64,
    pub seed: u64,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    /// `default_p` fills in an empty `--p` list; without one the list is
    /// required. The idle ratio defaults to zero.
    pub fn new(
        command: &'static str,
        mappings: &[String],
        noise: &NoiseArgs,
        default_p: Option<f64>,
        shots: u64,
        out: Option<&Path>,
    ) -> Result<Self> {
        let p_values = match (noise.p.is_empty(), default_p) {
            (false, _) => noise.p.clone(),
            (true, Some(p)) => vec![p],
            (true, None) => return Err(usage("at least one --p is required")),
        };
        let pi_ratios = if noise.pi_ratio.is_empty() {
            vec![0.0]
        } else {
            noise.pi_ratio.clone()
        };
        if let Some(p) = p_values.iter().find(|p| !(**p > 0.0 && **p <= 1.0)) {
            return Err(usage(format!("--p {p} is outside (0, 1]")));
        }
        if let Some(r) = pi_ratios.iter().find(|r| !(r.is_finite() && **r >= 0.0)) {
            return Err(usage(format!("--pi-ratio {r} must be a finite non-negative number")));
        }
        if let Some(bad) = p_values.iter().flat_map(|p| pi_ratios.iter().map(move |r| p * r)).find(|pi| *pi > 1.0) {
            return Err(usage(format!("idle error rate {bad} exceeds 1")));
        }
        for m in mappings {
            check_mapping_ref(m)?;
        }
        Ok(RunConfig {
            command,
            version: env!("CARGO_PKG_VERSION"),
            mappings: mappings.to_vec(),
            p_values,
            pi_ratios,
            shots,
            seed: noise.seed,
            out: out.map(Path::to_path_buf),
        })
    }
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn is_builtin(name: &str) -> bool {
    name == BARE_STEANE || BUILTIN_MAPPINGS.contains(&name)
}

fn check_mapping_ref(spec: &str) -> Result<()> {
    if is_builtin(spec) || Path::new(spec).is_file() {
        Ok(())
    } else {
        Err(usage(format!(
            "{spec:?} is neither a built-in mapping ({}, {BARE_STEANE}) nor a file",
            BUILTIN_MAPPINGS.join(", ")
        )))
    }
}

/// A built-in mapping or a mapping JSON file. `bare-steane` has no layout.
pub fn mapping_file(spec: &str) -> Result<MappingFile> {
    check_mapping_ref(spec)?;
    if spec == BARE_STEANE {
        return Err(usage(format!("{BARE_STEANE} has no device layout")));
    }
    if BUILTIN_MAPPINGS.contains(&spec) {
        return Ok(builtin_mapping_file(spec)?);
    }
    Ok(MappingFile::from_json(&read_text(Path::new(spec))?)?)
}

pub fn procedure(spec: &str) -> Result<QecProcedure> {
    check_mapping_ref(spec)?;
    if spec == BARE_STEANE {
        return Ok(bare_steane());
    }
    Ok(mapping_file(spec)?.load()?.procedure)
}

/// Procedure with its lookup decoder built.
pub fn decodable_procedure(spec: &str) -> Result<QecProcedure> {
    let mut proc = procedure(spec)?;
    proc.build_decoder()?;
    Ok(proc)
}

pub fn circuit_file(path: &Path) -> Result<Vec<Circuit>> {
    Ok(parse_circuit_set(&read_text(path)?)?)
}

pub fn topology(spec: &str) -> Result<DeviceTopology> {
    if BUILTIN_TOPOLOGIES.contains(&spec) {
        return Ok(builtin_topology(spec)?);
    }
    let path = Path::new(spec);
    if !path.is_file() {
        return Err(usage(format!(
            "{spec:?} is neither a built-in topology ({}) nor a file",
            BUILTIN_TOPOLOGIES.join(", ")
        )));
    }
    Ok(DeviceTopology::from_json(&read_text(path)?)?)
}

pub fn layout(path: &Path) -> Result<Layout> {
    Ok(Layout::from_json(&read_text(path)?)?)
}
