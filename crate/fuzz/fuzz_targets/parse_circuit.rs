#![no_main]
use flagbridge::circuit::{characterize, parse_circuit_set, write_circuit_set};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|text: &str| {
    if let Ok(set) = parse_circuit_set(text) {
        assert_eq!(parse_circuit_set(&write_circuit_set(&set)).unwrap(), set);
        let _ = characterize(&set);
    }
});
