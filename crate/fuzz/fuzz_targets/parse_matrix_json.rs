#![no_main]

use hexel::io::{parse_matrix_json, write_json};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(file) = parse_matrix_json(data) {
        let text = write_json(&file);
        let again = parse_matrix_json(text.as_bytes()).expect("own output reparses");
        assert_eq!(again, file);
    }
});
