#![no_main]

use cartdiff::laws::LawReport;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else { return };
    if let Ok(r) = LawReport::parse(src) {
        assert_eq!(LawReport::parse(&r.to_string()).unwrap(), r);
    }
});
