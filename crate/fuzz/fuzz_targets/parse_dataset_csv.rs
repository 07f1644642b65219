#![no_main]
use flagbridge::dataset::{parse_dataset, write_dataset};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|text: &str| {
    if let Ok(data) = parse_dataset(text) {
        let mut out = Vec::new();
        write_dataset(&mut out, &data).unwrap();
        assert_eq!(parse_dataset(std::str::from_utf8(&out).unwrap()).unwrap(), data);
    }
});
