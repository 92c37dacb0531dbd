#![no_main]

use hexel::io::{parse_matrix_csv, write_csv};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    // parsing must never panic; accepted input must survive a write/reparse
    // cycle unchanged
    if let Ok(file) = parse_matrix_csv(data) {
        let text = write_csv(&file);
        let again = parse_matrix_csv(text.as_bytes()).expect("own output reparses");
        assert_eq!(again, file);
    }
});
