#![no_main]

use kfarey::{continuant_numerator, LRSequence};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(seq) = s.parse::<LRSequence>() {
        assert_eq!(seq.to_string().parse::<LRSequence>().unwrap(), seq);
        if seq.len() <= 256 {
            let _ = continuant_numerator(&seq);
        }
    }
});
