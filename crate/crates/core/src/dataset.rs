//! Syndrome/error training pairs for learned decoders.
//!
//! File format, one record per line, every field `0` or `1` except the
//! first line:
//!
//! ```text
//! <m>,<n>
//! x_0,...,x_{2m-1},y_0,...,y_{2n-1},t
//! ```
//!
//! `m` is the number of syndrome plus flag bits in one full round. `x` holds
//! round 1 then round 2; within a round each circuit contributes its
//! syndrome bits then its flag bits, in circuit order. Circuits that did not
//! run read as zero. `y` holds the X bits then the Z bits of the data error
//! present before correction. `t` is 1 when the cycle entered round 2.

use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{parse_err, Error, Result};
use crate::mc::BLOCK_SHOTS;
use crate::noise::NoiseModel;
use crate::pauli::{Bits, PauliString};
use crate::protocol::{CircuitOutcome, QecProcedure, Sampled, SyndromeFlagString};

pub const DEFAULT_COUNT: usize = 100_000;
pub const DEFAULT_P: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sample {
    pub x: Vec<bool>,
    pub y: Vec<bool>,
    pub triggered: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dataset {
    pub m: usize,
    pub n: usize,
    pub samples: Vec<Sample>,
}

/// Syndrome plus flag bits in one full round.
pub fn round_width(proc: &QecProcedure) -> usize {
    proc.m_s() + proc.m_f().iter().sum::<usize>()
}

/// Encodes one measured cycle and its pre-correction data error.
pub fn encode_sample(proc: &QecProcedure, sf: &SyndromeFlagString, residual: &PauliString) -> Sample {
    let m = round_width(proc);
    let mut x = Vec::with_capacity(2 * m);
    for round in [&sf.round1, &sf.round2] {
        let start = x.len();
        push_round(&mut x, round);
        x.resize(start + m, false);
    }
    let n = proc.code().n();
    let mut y = Vec::with_capacity(2 * n);
    y.extend((0..n).map(|q| residual.x_bits() >> q & 1 == 1));
    y.extend((0..n).map(|q| residual.z_bits() >> q & 1 == 1));
    Sample {
        x,
        y,
        triggered: !sf.round2.is_empty(),
    }
}

/// Bits laid out at their full-round positions, so a truncated round 1 is
/// padded after the circuits that ran.
fn push_round(out: &mut Vec<bool>, round: &[CircuitOutcome]) {
    for o in round {
        out.extend(o.syndrome.iter());
        out.extend(o.flags.iter());
    }
}

/// Recovers the measured string from a sample's `x` bits. Round 1 is cut
/// after the first nonzero circuit when the sample entered round 2.
pub fn measured_string(proc: &QecProcedure, sample: &Sample) -> Result<SyndromeFlagString> {
    let m = round_width(proc);
    if sample.x.len() != 2 * m {
        return Err(Error::Dimension {
            expected: 2 * m,
            found: sample.x.len(),
        });
    }
    let split = |bits: &[bool]| {
        let mut out = Vec::new();
        let mut at = 0;
        for c in proc.circuits() {
            let (s, f) = (c.measured_checks().len(), c.flag_qubits().len());
            out.push(CircuitOutcome {
                syndrome: Bits::from_bools(&bits[at..at + s]),
                flags: Bits::from_bools(&bits[at + s..at + s + f]),
            });
            at += s + f;
        }
        out
    };
    let mut round1 = split(&sample.x[..m]);
    let mut round2 = Vec::new();
    if sample.triggered {
        let hit = round1.iter().position(|o| !o.is_trivial()).ok_or_else(|| {
            Error::Config("sample entered round 2 without a nonzero round-1 outcome".into())
        })?;
        round1.truncate(hit + 1);
        round2 = split(&sample.x[m..]);
    }
    Ok(SyndromeFlagString { round1, round2 })
}

/// Samples `count` independent noisy cycles, deterministically in `seed`.
pub fn sample_dataset(proc: &QecProcedure, model: &NoiseModel, count: usize, seed: u64) -> Result<Dataset> {
    if count == 0 {
        return Err(Error::Config("dataset count must be at least 1".into()));
    }
    let count = count as u64;
    let blocks = count.div_ceil(BLOCK_SHOTS);
    let samples = (0..blocks)
        .into_par_iter()
        .flat_map_iter(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b);
            let n = BLOCK_SHOTS.min(count - b * BLOCK_SHOTS);
            (0..n)
                .map(|_| {
                    let mut src = Sampled {
                        model: *model,
                        rng: &mut rng,
                    };
                    let (sf, residual) = proc.execute(&mut src);
                    encode_sample(proc, &sf, &residual)
                })
                .collect::<Vec<_>>()
        })
        .collect();
    Ok(Dataset {
        m: round_width(proc),
        n: proc.code().n(),
        samples,
    })
}

pub fn write_dataset<W: Write>(out: W, data: &Dataset) -> Result<()> {
    let mut w = csv::WriterBuilder::new().flexible(true).from_writer(out);
    w.write_record([data.m.to_string(), data.n.to_string()])?;
    let bit = |b: &bool| if *b { "1" } else { "0" };
    for s in &data.samples {
        if s.x.len() != 2 * data.m || s.y.len() != 2 * data.n {
            return Err(Error::Dimension {
                expected: 2 * (data.m + data.n),
                found: s.x.len() + s.y.len(),
            });
        }
        let row = s.x.iter().chain(&s.y).map(bit).chain([bit(&s.triggered)]);
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

/// Samples and writes in one step.
pub fn export_dataset<W: Write>(proc: &QecProcedure, model: &NoiseModel, count: usize, seed: u64, out: W) -> Result<()> {
    write_dataset(out, &sample_dataset(proc, model, count, seed)?)
}

pub fn parse_dataset(text: &str) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut records = rdr.records();
    let header = records.next().ok_or_else(|| parse_err(1, "missing `m,n` header"))??;
    let line = |r: &csv::StringRecord| r.position().map_or(0, |p| p.line() as usize);
    if header.len() != 2 {
        return Err(parse_err(line(&header), "header must be `m,n`"));
    }
    let dim = |s: &str| {
        s.trim()
            .parse::<usize>()
            .ok()
            .filter(|&v| v <= 1 << 20)
            .ok_or_else(|| parse_err(line(&header), format!("bad dimension {s:?}")))
    };
    let (m, n) = (dim(&header[0])?, dim(&header[1])?);
    let width = 2 * m + 2 * n + 1;
    let mut samples = Vec::new();
    for rec in records {
        let rec = rec?;
        let at = line(&rec);
        if rec.len() != width {
            return Err(parse_err(at, format!("expected {width} fields, found {}", rec.len())));
        }
        let mut bits = Vec::with_capacity(width);
        for f in rec.iter() {
            bits.push(match f {
                "0" => false,
                "1" => true,
                _ => return Err(parse_err(at, format!("field {f:?} is not a bit"))),
            });
        }
        let triggered = bits.pop().unwrap_or_default();
        let y = bits.split_off(2 * m);
        samples.push(Sample { x: bits, y, triggered });
    }
    Ok(Dataset { m, n, samples })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_rejects_malformed_input() {
        assert!(parse_dataset("").is_err());
        assert!(parse_dataset("1\n").is_err());
        assert!(parse_dataset("1,1,1\n").is_err());
        assert!(parse_dataset("x,1\n").is_err());
        assert!(parse_dataset("1,1\n0,0,0,0\n").is_err());
        assert!(parse_dataset("1,1\n0,0,0,0,2\n").is_err());
        let d = parse_dataset("1,1\n0,1,1,0,1\n").unwrap();
        assert_eq!(d.samples[0].x, vec![false, true]);
        assert_eq!(d.samples[0].y, vec![true, false]);
        assert!(d.samples[0].triggered);
    }

    #[test]
    fn header_only_is_empty() {
        let d = parse_dataset("3,7\n").unwrap();
        assert_eq!((d.m, d.n, d.samples.len()), (3, 7, 0));
    }
}
