#![no_main]

use kfarey::{incident_vertices, DualSubgraph};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(sub) = serde_json::from_slice::<DualSubgraph>(data) {
        if sub.nodes().len() <= 4096 {
            let _ = incident_vertices(&sub);
        }
        let json = serde_json::to_string(&sub).unwrap();
        let back: DualSubgraph = serde_json::from_str(&json).unwrap();
        assert_eq!(back.nodes(), sub.nodes());
        assert_eq!(back.edges(), sub.edges());
    }
});
