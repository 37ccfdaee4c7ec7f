#![no_main]

use kfarey::FareyVertex;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(v) = s.parse::<FareyVertex>() {
        assert!(v.q() > 0 || (v.p(), v.q()) == (1, 0));
        assert_eq!(v.to_string().parse::<FareyVertex>().unwrap(), v);
    }
});
