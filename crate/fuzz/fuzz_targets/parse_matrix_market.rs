#![no_main]

use hexel::io::{parse_matrix_market, write_matrix_market, MatrixMarketLayout};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(file) = parse_matrix_market(data) {
        // accepted input must survive both layouts; the coordinate layout
        // may canonicalize negative zero, which compares equal anyway
        for layout in [MatrixMarketLayout::Array, MatrixMarketLayout::Coordinate] {
            let text = write_matrix_market(&file, layout);
            let again = parse_matrix_market(text.as_bytes()).expect("own output reparses");
            assert_eq!(again, file);
        }
    }
});
