#![no_main]

use cstlab_core::arith::{parse_cache, render_cache};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok((header, rows)) = parse_cache(data) {
        let bytes = render_cache(&header, &rows).unwrap();
        let (h2, r2) = parse_cache(&bytes).expect("rendered cache parses");
        assert_eq!(header, h2);
        assert_eq!(rows, r2);
    }
});
