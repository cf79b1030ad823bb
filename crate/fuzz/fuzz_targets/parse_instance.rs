#![no_main]

use atsp_core::harness::{parse_instance_file, to_json};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(file) = parse_instance_file(data) else {
        return;
    };
    // Anything accepted must survive a JSON round trip unchanged.
    let text = to_json(&file.name, &file.graph);
    let back = parse_instance_file(text.as_bytes()).expect("re-parse of emitted JSON");
    assert_eq!(back, file);
});
