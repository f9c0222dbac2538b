#![no_main]

use cartdiff::closed::parse_closed_term;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else { return };
    if let Ok(t) = parse_closed_term(src) {
        assert_eq!(parse_closed_term(&t.to_string()).unwrap(), t);
    }
});
