#![no_main]
use flagbridge::mapping::Layout;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|text: &str| {
    if let Ok(l) = Layout::from_json(text) {
        assert_eq!(Layout::from_json(&l.to_json()).unwrap(), l);
    }
});
