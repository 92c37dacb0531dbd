#![no_main]

use hexel::io::parse_run_config;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(config) = parse_run_config(data) {
        let text = serde_json::to_string(&config).expect("config serializes");
        let again = parse_run_config(text.as_bytes()).expect("own output reparses");
        assert_eq!(again, config);
    }
});
