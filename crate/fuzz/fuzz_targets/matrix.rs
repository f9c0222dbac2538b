#![no_main]

use cartdiff::biproduct::MatrixMap;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else { return };
    if let Ok(f) = MatrixMap::parse(src) {
        assert_eq!(MatrixMap::parse(&f.literal()).unwrap(), f);
    }
});
