#![no_main]

use atsp_core::rational::{format, parse};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(r) = parse(s) {
        assert_eq!(parse(&format(&r)).unwrap(), r);
    }
});
