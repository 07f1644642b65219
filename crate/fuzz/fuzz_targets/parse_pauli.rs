#![no_main]
use flagbridge::pauli::{Bits, PauliString};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|text: &str| {
    if let Ok(p) = text.parse::<PauliString>() {
        assert_eq!(p.to_string().parse::<PauliString>().unwrap(), p);
    }
    if let Ok(b) = text.parse::<Bits>() {
        assert_eq!(b.to_string().parse::<Bits>().unwrap(), b);
    }
});
