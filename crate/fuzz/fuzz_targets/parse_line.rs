#![no_main]

use kfarey::ProjLine;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(line) = s.parse::<ProjLine>() {
        assert_eq!(line.to_string().parse::<ProjLine>().unwrap(), line);
    }
});
