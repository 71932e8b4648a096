#![no_main]

use affmon::document::{Document, MonoidBody};
use libfuzzer_sys::fuzz_target;

const MAX_DIM: usize = 4;
const MAX_GENERATORS: usize = 6;
const MAX_ENTRY: i64 = 20;

fn small(body: &MonoidBody) -> bool {
    body.ambient_dim <= MAX_DIM
        && body.generators.len() <= MAX_GENERATORS
        && body
            .generators
            .iter()
            .flatten()
            .all(|x| x.abs() <= MAX_ENTRY)
}

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(body) = Document::parse(text).and_then(Document::into_monoid) else {
        return;
    };
    if !small(&body) {
        return;
    }
    let Ok(m) = body.to_monoid() else {
        return;
    };
    let sat = m.saturation();
    assert!(sat.is_saturated());
    for g in m.generators() {
        assert!(m.contains(g));
        assert!(sat.contains(g));
    }
    assert_eq!(m.is_sharp(), m.positive_grading().is_some());
});
