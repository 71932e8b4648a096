#![no_main]

use affmon::document::Document;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(doc) = Document::parse(text) {
        assert_eq!(Document::parse(&doc.print()).unwrap(), doc);
    }
});
