#![no_main]

use hexel::io::parse_sweep_range;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    // parsing must never panic; accepted ranges obey the documented shape
    if let Ok(values) = parse_sweep_range(text) {
        assert!(!values.is_empty());
        assert!(values.len() <= 100_000);
        assert!(values.iter().all(|v| v.is_finite()));
        assert!(values.windows(2).all(|pair| pair[0] < pair[1]));
    }
});
