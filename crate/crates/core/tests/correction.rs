mod common;

use flagbridge::mapping::BUILTIN_MAPPINGS;

#[test]
fn every_single_fault_is_corrected() {
    for name in BUILTIN_MAPPINGS {
        let split = common::check_exhaustive_correction(name).unwrap_or_else(|m| panic!("{m}"));
        // Only the surface code leaves one X and one Z error on separate qubits.
        if name != "sc-d3" {
            assert_eq!(split, 0, "{name}");
        }
    }
}
