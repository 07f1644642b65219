use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use flagbridge::circuit::{characterize as stats_of, CircuitStats};
use flagbridge::dataset::{export_dataset as export, round_width, DEFAULT_P};
use flagbridge::ft::{check_fault_tolerance, FaultRecord};
use flagbridge::mapping::{validate_layout as check_layout, BUILTIN_MAPPINGS};
use flagbridge::mc::{sweep, write_csv, LerPoint, RunManifest};
use flagbridge::noise::NoiseModel;
use serde::Serialize;

use crate::config::{self, RunConfig};
use crate::error::{usage, CliError, Result};
use crate::{CharacterizeArgs, CheckFtArgs, ExportArgs, Format, SimulateArgs, ValidateArgs};

fn is_stdout(out: Option<&Path>) -> bool {
    out.is_some_and(|p| p == Path::new("-"))
}

fn write_out(path: &Path, bytes: &[u8]) -> Result<()> {
    let io = |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    if path == Path::new("-") {
        std::io::stdout().lock().write_all(bytes).map_err(io)
    } else {
        fs::write(path, bytes).map_err(io)
    }
}

fn json_bytes<T: Serialize + ?Sized>(value: &T) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    Ok(bytes)
}

fn manifest_path(out: &Path) -> PathBuf {
    let mut s = OsString::from(out.as_os_str());
    s.push(".manifest.json");
    s.into()
}

#[derive(Serialize)]
struct Manifest<'a> {
    config: &'a RunConfig,
    runs: &'a [RunManifest],
}

fn write_manifest(out: &Path, config: &RunConfig, runs: &[RunManifest]) -> Result<()> {
    if is_stdout(Some(out)) {
        return Ok(());
    }
    write_out(&manifest_path(out), &json_bytes(&Manifest { config, runs })?)
}

fn describe(rec: &FaultRecord) -> String {
    let f = &rec.fault;
    format!(
        "{:?} fault {} in round {}, circuit {}, timestep {}, leaving {}",
        f.kind, f.error, f.round, f.circuit, f.tick, rec.residual
    )
}

pub fn check_ft(a: &CheckFtArgs) -> Result<bool> {
    let proc = config::procedure(&a.mapping)?;
    let report = check_fault_tolerance(&proc);
    if let Some(out) = &a.out {
        write_out(out, &json_bytes(&report)?)?;
    }
    if !is_stdout(a.out.as_deref()) {
        if report.fault_tolerant {
            println!("{}: fault-tolerant ({} single faults checked)", report.procedure, report.faults_checked);
        } else {
            println!(
                "{}: NOT fault-tolerant, {} counterexamples among {} single faults",
                report.procedure,
                report.counterexamples.len(),
                report.faults_checked
            );
            let cx = &report.counterexamples[0];
            println!("  {}", describe(&cx.first));
            match &cx.second {
                Some(second) => println!("  looks the same to the decoder as {}", describe(second)),
                None => println!("  goes unnoticed and leaves a logical error"),
            }
        }
    }
    Ok(report.fault_tolerant)
}

#[derive(Serialize)]
struct StatsRow {
    config_name: String,
    ancillas: usize,
    operations: usize,
    f_cnots: usize,
    s_cnots: usize,
    timesteps: usize,
}

impl StatsRow {
    fn new(config_name: String, s: CircuitStats) -> Self {
        StatsRow {
            config_name,
            ancillas: s.ancillas,
            operations: s.operations,
            f_cnots: s.f_cnots,
            s_cnots: s.s_cnots,
            timesteps: s.timesteps,
        }
    }
}

fn csv_bytes<T: Serialize>(rows: &[T]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(flagbridge::Error::from)?;
    }
    w.into_inner().map_err(|e| usage(e.to_string()))
}

pub fn characterize(a: &CharacterizeArgs) -> Result<bool> {
    let mut mappings = a.mapping.clone();
    if mappings.is_empty() && a.circuits.is_empty() {
        mappings = BUILTIN_MAPPINGS[..6].iter().map(|s| s.to_string()).collect();
    }
    let mut rows = Vec::new();
    for m in &mappings {
        let proc = config::procedure(m)?;
        rows.push(StatsRow::new(proc.name().to_string(), stats_of(proc.circuits())));
    }
    for path in &a.circuits {
        let name = path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned());
        rows.push(StatsRow::new(name, stats_of(&config::circuit_file(path)?)));
    }
    if let Some(out) = &a.out {
        let bytes = match a.format {
            Format::Csv => csv_bytes(&rows)?,
            Format::Json => json_bytes(&rows)?,
        };
        write_out(out, &bytes)?;
    }
    if !is_stdout(a.out.as_deref()) {
        let width = rows.iter().map(|r| r.config_name.len()).max().unwrap_or(0).max(6);
        println!("{:width$}  ancillas  operations  f-CNOTs  s-CNOTs  timesteps", "config");
        for r in &rows {
            println!(
                "{:width$}  {:>8}  {:>10}  {:>7}  {:>7}  {:>9}",
                r.config_name, r.ancillas, r.operations, r.f_cnots, r.s_cnots, r.timesteps
            );
        }
    }
    Ok(true)
}

#[derive(Serialize)]
struct LerRow<'a> {
    config_name: &'a str,
    #[serde(flatten)]
    point: LerPoint,
}

pub fn simulate(a: &SimulateArgs) -> Result<bool> {
    if a.shots == 0 {
        return Err(usage("--shots must be positive"));
    }
    let config = RunConfig::new("simulate", &a.mapping, &a.noise, None, a.shots, a.out.as_deref())?;
    let mut rows = Vec::new();
    let mut runs = Vec::new();
    for m in &config.mappings {
        let proc = config::decodable_procedure(m)?;
        let points = sweep(&proc, &config.p_values, &config.pi_ratios, config.shots, config.seed)?;
        rows.extend(points.iter().map(|pt| (proc.name().to_string(), *pt)));
        runs.push(RunManifest::new(&proc, &config.p_values, &config.pi_ratios, config.shots, config.seed, points));
    }
    if let Some(out) = &a.out {
        let bytes = match a.format {
            Format::Csv => {
                let mut buf = Vec::new();
                write_csv(&mut buf, &rows)?;
                buf
            }
            Format::Json => {
                let json: Vec<LerRow> = rows
                    .iter()
                    .map(|(name, point)| LerRow {
                        config_name: name,
                        point: *point,
                    })
                    .collect();
                json_bytes(&json)?
            }
        };
        write_out(out, &bytes)?;
        write_manifest(out, &config, &runs)?;
    }
    if !is_stdout(a.out.as_deref()) {
        for (name, pt) in &rows {
            println!(
                "{name}  p={:.3e}  pI={}p  ler={:.3e} [{:.3e}, {:.3e}]  ({}/{})",
                pt.p, pt.pi_ratio, pt.ler, pt.ci_low, pt.ci_high, pt.failures, pt.shots
            );
        }
    }
    Ok(true)
}

pub fn export_dataset(a: &ExportArgs) -> Result<bool> {
    let mapping = std::slice::from_ref(&a.mapping);
    let config = RunConfig::new("export-dataset", mapping, &a.noise, Some(DEFAULT_P), a.count as u64, Some(&a.out))?;
    let ([p], [ratio]) = (config.p_values.as_slice(), config.pi_ratios.as_slice()) else {
        return Err(usage("export-dataset takes one --p and at most one --pi-ratio"));
    };
    let proc = config::decodable_procedure(&a.mapping)?;
    let model = NoiseModel::with_idle_ratio(*p, *ratio)?;
    let mut buf = Vec::new();
    export(&proc, &model, a.count, config.seed, &mut buf)?;
    write_out(&a.out, &buf)?;
    let run = RunManifest::new(&proc, &config.p_values, &config.pi_ratios, config.shots, config.seed, Vec::new());
    write_manifest(&a.out, &config, std::slice::from_ref(&run))?;
    if let Some(code_out) = &a.code_out {
        write_out(code_out, proc.code().to_text().as_bytes())?;
    }
    if !is_stdout(Some(&a.out)) && !is_stdout(a.code_out.as_deref()) {
        println!(
            "{}: wrote {} samples with m={}, n={} to {}",
            proc.name(),
            a.count,
            round_width(&proc),
            proc.code().n(),
            a.out.display()
        );
    }
    Ok(true)
}

pub fn validate_layout(a: &ValidateArgs) -> Result<bool> {
    let (circuits, topology, layout) = match (&a.mapping, &a.circuits, &a.topology, &a.layout) {
        (Some(m), _, _, _) => {
            let file = config::mapping_file(m)?;
            (file.build_circuits()?, file.resolve_topology()?, file.layout.clone())
        }
        (None, Some(c), Some(t), Some(l)) => (config::circuit_file(c)?, config::topology(t)?, config::layout(l)?),
        _ => return Err(usage("give --mapping, or --circuits with --topology and --layout")),
    };
    let report = check_layout(&circuits, &topology, &layout)?;
    if let Some(out) = &a.out {
        write_out(out, &json_bytes(&report)?)?;
    }
    if !is_stdout(a.out.as_deref()) {
        if report.is_ok() {
            println!("{}: all {} CNOTs act on coupled nodes", report.topology, report.cnots_checked);
        } else {
            println!(
                "{}: {} of {} CNOTs act on uncoupled nodes",
                report.topology,
                report.violations.len(),
                report.cnots_checked
            );
            for v in &report.violations {
                println!(
                    "  circuit {} timestep {}: CNOT {:?} on nodes {:?}",
                    v.circuit, v.tick, v.qubits, v.nodes
                );
            }
        }
    }
    Ok(report.is_ok())
}
