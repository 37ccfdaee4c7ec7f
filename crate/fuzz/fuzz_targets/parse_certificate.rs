#![no_main]

use kfarey::{parse_certificate, write_certificate};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(vs) = parse_certificate(s) {
        let again = parse_certificate(&write_certificate(&[], &vs)).unwrap();
        assert_eq!(again, vs);
    }
});
