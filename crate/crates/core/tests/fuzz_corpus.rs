//! Replays the checked-in fuzz seeds through the decoders.

use std::path::Path;

use affmon::document::Document;

#[test]
fn seeds_round_trip() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus");
    let mut seen = 0;
    for target in std::fs::read_dir(&root).unwrap() {
        for seed in std::fs::read_dir(target.unwrap().path()).unwrap() {
            let text = std::fs::read_to_string(seed.unwrap().path()).unwrap();
            seen += 1;
            let Ok(doc) = Document::parse(&text) else {
                continue;
            };
            assert_eq!(Document::parse(&doc.print()).unwrap(), doc);
            match doc {
                Document::Monoid(b) => {
                    let m = b.to_monoid().unwrap();
                    assert!(m.saturation().is_saturated());
                }
                Document::Morphism(b) => {
                    b.to_map().unwrap();
                }
                Document::Pushout(b) => {
                    b.to_maps().unwrap();
                }
            }
        }
    }
    assert!(seen >= 4);
}
