#![no_main]

use libfuzzer_sys::fuzz_target;
use mltower::io::parse_input;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(input) = parse_input(text) {
            // whatever parses must survive a round trip
            let again = serde_json::to_string(&input).unwrap();
            assert_eq!(parse_input(&again).unwrap(), input);
        }
    }
});
