//! Monte Carlo estimation of logical error rates.
//!
//! Shots are split into fixed blocks of [`BLOCK_SHOTS`]. Block `b` draws its
//! faults from ChaCha8 stream `b` under the master seed, so a point's result
//! depends only on the seed and shot count, never on the worker count.

use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::noise::NoiseModel;
use crate::protocol::{QecProcedure, Sampled};

pub const BLOCK_SHOTS: u64 = 4096;

/// Two-sided normal quantile for a 99.9% interval.
pub const Z_999: f64 = 3.2905267314919255;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LerPoint {
    pub p: f64,
    #[serde(rename = "pI_ratio")]
    pub pi_ratio: f64,
    pub shots: u64,
    pub failures: u64,
    pub ler: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub seed: u64,
}

/// Wilson score interval for `failures` out of `shots` at normal quantile
/// `z`, clamped to [0, 1].
pub fn wilson_interval(failures: u64, shots: u64, z: f64) -> (f64, f64) {
    if shots == 0 {
        return (0.0, 1.0);
    }
    let n = shots as f64;
    let phat = failures as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (phat + z2 / (2.0 * n)) / denom;
    let half = z / denom * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt();
    let low = if failures == 0 { 0.0 } else { (center - half).clamp(0.0, phat) };
    let high = if failures == shots { 1.0 } else { (center + half).clamp(phat, 1.0) };
    (low, high)
}

/// Counts logical failures over `shots` noisy cycles.
pub fn count_failures(proc: &QecProcedure, model: &NoiseModel, shots: u64, seed: u64) -> Result<u64> {
    let lut = proc
        .lut()
        .ok_or_else(|| Error::Config("procedure has no decoder; build one first".into()))?;
    if model.p == 0.0 && model.p_idle == 0.0 {
        return Ok(0);
    }
    let blocks = shots.div_ceil(BLOCK_SHOTS);
    Ok((0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b);
            let n = BLOCK_SHOTS.min(shots - b * BLOCK_SHOTS);
            let mut src = Sampled {
                model: *model,
                rng: &mut rng,
            };
            (0..n)
                .filter(|_| {
                    let (sf, residual) = proc.execute(&mut src);
                    proc.finish(lut, sf, residual).logical_failure
                })
                .count() as u64
        })
        .sum())
}

fn point(proc: &QecProcedure, p: f64, pi_ratio: f64, shots: u64, seed: u64) -> Result<LerPoint> {
    if shots == 0 {
        return Err(Error::Config("shots must be at least 1".into()));
    }
    let model = NoiseModel::with_idle_ratio(p, pi_ratio)?;
    let failures = count_failures(proc, &model, shots, seed)?;
    let (ci_low, ci_high) = wilson_interval(failures, shots, Z_999);
    Ok(LerPoint {
        p,
        pi_ratio,
        shots,
        failures,
        ler: failures as f64 / shots as f64,
        ci_low,
        ci_high,
        seed,
    })
}

/// Logical error rate of `proc` under `model` with a 99.9% Wilson interval.
pub fn estimate_ler(proc: &QecProcedure, model: &NoiseModel, shots: u64, master_seed: u64) -> Result<LerPoint> {
    let ratio = if model.p > 0.0 { model.p_idle / model.p } else { 0.0 };
    let mut pt = point(proc, model.p, ratio, shots, master_seed)?;
    pt.pi_ratio = ratio;
    Ok(pt)
}

/// Evaluates every `(p, ratio)` pair, ratios varying fastest. Every point
/// uses `master_seed`.
pub fn sweep(
    proc: &QecProcedure,
    p_values: &[f64],
    pi_ratios: &[f64],
    shots: u64,
    master_seed: u64,
) -> Result<Vec<LerPoint>> {
    let mut out = Vec::with_capacity(p_values.len() * pi_ratios.len());
    for &p in p_values {
        for &r in pi_ratios {
            out.push(point(proc, p, r, shots, master_seed)?);
        }
    }
    Ok(out)
}

/// Writes `config_name,p,pI_ratio,shots,failures,ler,ci_low,ci_high,seed`
/// rows, header first.
pub fn write_csv<W: Write>(out: W, rows: &[(String, LerPoint)]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["config_name", "p", "pI_ratio", "shots", "failures", "ler", "ci_low", "ci_high", "seed"])?;
    for (name, pt) in rows {
        w.write_record([
            name.clone(),
            pt.p.to_string(),
            pt.pi_ratio.to_string(),
            pt.shots.to_string(),
            pt.failures.to_string(),
            pt.ler.to_string(),
            pt.ci_low.to_string(),
            pt.ci_high.to_string(),
            pt.seed.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// What is needed to reproduce a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub procedure: String,
    pub code_sha256: String,
    pub circuits_sha256: String,
    pub p_values: Vec<f64>,
    #[serde(rename = "pI_ratios")]
    pub pi_ratios: Vec<f64>,
    pub shots: u64,
    pub seed: u64,
    pub block_shots: u64,
    pub rng: String,
    pub interval: String,
    pub points: Vec<LerPoint>,
}

impl RunManifest {
    pub fn new(proc: &QecProcedure, p_values: &[f64], pi_ratios: &[f64], shots: u64, seed: u64, points: Vec<LerPoint>) -> Self {
        let circuits = crate::circuit::write_circuit_set(proc.circuits());
        RunManifest {
            procedure: proc.name().to_string(),
            code_sha256: hex_digest(proc.code().to_text().as_bytes()),
            circuits_sha256: hex_digest(circuits.as_bytes()),
            p_values: p_values.to_vec(),
            pi_ratios: pi_ratios.to_vec(),
            shots,
            seed,
            block_shots: BLOCK_SHOTS,
            rng: "ChaCha8, stream = block index".into(),
            interval: format!("Wilson score, z = {Z_999}"),
            points,
        }
    }
}

fn hex_digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_bounds_contain_estimate() {
        assert_eq!(wilson_interval(0, 1000, Z_999).0, 0.0);
        let (lo, hi) = wilson_interval(10, 1000, Z_999);
        assert!(lo < 0.01 && 0.01 < hi);
        // Reference values for 10/1000 at z = 3.2905.
        assert!((lo - 0.003_690_4).abs() < 1e-5, "{lo}");
        assert!((hi - 0.026_806_9).abs() < 1e-5, "{hi}");
        assert_eq!(wilson_interval(5, 5, Z_999).1, 1.0);
    }

    #[test]
    fn csv_header_and_row() {
        let pt = LerPoint {
            p: 0.001,
            pi_ratio: 0.1,
            shots: 10,
            failures: 0,
            ler: 0.0,
            ci_low: 0.0,
            ci_high: 0.5,
            seed: 7,
        };
        let mut buf = Vec::new();
        write_csv(&mut buf, &[("x".into(), pt)]).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "config_name,p,pI_ratio,shots,failures,ler,ci_low,ci_high,seed\nx,0.001,0.1,10,0,0,0,0.5,7\n"
        );
    }
}
