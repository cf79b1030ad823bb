#![no_main]

use atsp_core::harness::{parse_instance_file, to_tsplib};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    // JSON input goes through the other target.
    if data.first() == Some(&b'{') {
        return;
    }
    let Ok(file) = parse_instance_file(data) else {
        return;
    };
    // FULL_MATRIX output is integer-only; fractional entries are still parsed.
    if file.graph.edges().iter().any(|e| !e.cost.is_integer()) {
        return;
    }
    let text = to_tsplib(&file.name, &file.graph).expect("parsed matrix is writable");
    let back = parse_instance_file(text.as_bytes()).expect("re-parse of emitted TSPLIB");
    assert_eq!(back.graph, file.graph);
});
