#![no_main]
use flagbridge::mapping::MappingFile;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|text: &str| {
    if let Ok(file) = MappingFile::from_json(text) {
        let _ = file.load();
    }
});
