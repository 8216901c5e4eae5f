#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    if let Ok(s) = zerosum::io::parse_sequence_str(data) {
        // accepted input must survive a round trip
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(zerosum::io::parse_sequence_str(&text).unwrap(), s);
    }
});
