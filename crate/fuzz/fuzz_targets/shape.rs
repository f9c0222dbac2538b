#![no_main]

use cartdiff::Shape;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else { return };
    if let Ok(s) = Shape::parse(src) {
        assert_eq!(Shape::parse(&s.to_string()).unwrap(), s);
    }
});
