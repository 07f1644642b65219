#![no_main]
use flagbridge::code::{validate_code, StabilizerCode};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|text: &str| {
    if let Ok(code) = StabilizerCode::from_text(text) {
        assert_eq!(StabilizerCode::from_text(&code.to_text()).unwrap(), code);
        let _ = validate_code(&code);
    }
});
