#![no_main]
use flagbridge::mapping::DeviceTopology;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|text: &str| {
    if let Ok(t) = DeviceTopology::from_json(text) {
        assert_eq!(DeviceTopology::from_json(&t.to_json()).unwrap(), t);
        let _ = (t.max_degree(), t.is_connected());
    }
});
