#![no_main]

use atsp_core::harness::{gen_instance, parse_tour, verify_tour, Model};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Some((&pick, rest)) = data.split_first() else {
        return;
    };
    let model = Model::ALL[pick as usize % Model::ALL.len()];
    let g = gen_instance(model, 2 + (pick as usize >> 2) % 7, pick as u64);
    if let Ok(f) = parse_tour(&g, rest) {
        let verdict = verify_tour(&g, &f);
        if verdict.valid {
            assert!(verdict.eulerian && verdict.connected && verdict.spanning);
        }
    }
});
