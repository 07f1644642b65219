#![no_main]
use flagbridge::lut::LookupTables;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|text: &str| {
    if let Ok(lut) = LookupTables::from_json(text) {
        assert_eq!(LookupTables::from_json(&lut.to_json()).unwrap(), lut);
    }
});
