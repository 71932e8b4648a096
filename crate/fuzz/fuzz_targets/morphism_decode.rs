#![no_main]

use affmon::document::Document;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(body) = Document::parse(text).and_then(Document::into_morphism) else {
        return;
    };
    let small = |b: &affmon::document::MonoidBody| {
        b.ambient_dim <= 3
            && b.generators.len() <= 5
            && b.generators.iter().flatten().all(|x| x.abs() <= 20)
    };
    if !small(&body.source)
        || !small(&body.target)
        || body.matrix.iter().flatten().any(|x| x.abs() > 20)
    {
        return;
    }
    let Ok(map) = body.to_map() else {
        return;
    };
    for g in map.source().generators() {
        assert!(map.target().contains(&map.apply(g)));
    }
    let _ = map.is_local();
    let _ = map.is_injective();
});
