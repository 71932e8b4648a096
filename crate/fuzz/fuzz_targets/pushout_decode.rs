#![no_main]

use affmon::document::{Document, MonoidBody, MorphismBody};
use affmon::{quasi_integrality, validate_pushout, Verdict};
use libfuzzer_sys::fuzz_target;

fn small_monoid(b: &MonoidBody) -> bool {
    b.ambient_dim <= 3
        && b.generators.len() <= 4
        && b.generators.iter().flatten().all(|x| x.abs() <= 10)
}

fn small(m: &MorphismBody) -> bool {
    small_monoid(&m.source)
        && small_monoid(&m.target)
        && m.matrix.iter().flatten().all(|x| x.abs() <= 10)
}

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(body) = Document::parse(text).and_then(Document::into_pushout) else {
        return;
    };
    if !small(&body.f) || !small(&body.g) {
        return;
    }
    let Ok(data) = body.to_data() else {
        return;
    };
    let _ = validate_pushout(&data);
    let report = quasi_integrality(&data);
    if report.verdict == Verdict::NotQuasiIntegral {
        let w = report.witness.expect("negative verdicts carry witnesses");
        assert!(data.m().contains(&data.f().apply(&w)));
    }
});
