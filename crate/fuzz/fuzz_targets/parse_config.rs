#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(cfg) = rwkit::parse_config(text) {
        // accepted configurations survive a round trip through their file form
        let again = serde_json::to_string(&cfg.to_file()).unwrap();
        let back = rwkit::parse_config(&again).expect("serialized config parses");
        assert_eq!(back.to_file(), cfg.to_file());
    }
});
