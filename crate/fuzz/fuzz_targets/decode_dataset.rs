#![no_main]
use std::sync::OnceLock;

use flagbridge::dataset::{measured_string, parse_dataset};
use flagbridge::mapping::builtin_mapping;
use flagbridge::protocol::QecProcedure;
use libfuzzer_sys::fuzz_target;

fn procedure() -> &'static QecProcedure {
    static PROC: OnceLock<QecProcedure> = OnceLock::new();
    PROC.get_or_init(|| {
        let mut proc = builtin_mapping("steane-c2-L2").unwrap().procedure;
        proc.build_decoder().unwrap();
        proc
    })
}

// Rows from an untrusted dataset fed through the lookup decoder.
fn decode(text: &str) {
    let proc = procedure();
    let Ok(data) = parse_dataset(text) else {
        return;
    };
    for sample in &data.samples {
        if let Ok(sf) = measured_string(proc, sample) {
            let fix = proc.lut().unwrap().decode(&sf);
            assert_eq!(fix.num_qubits(), proc.code().n());
        }
    }
}

fuzz_target!(|text: &str| decode(text));
