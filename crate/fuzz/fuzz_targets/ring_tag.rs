#![no_main]

use libfuzzer_sys::fuzz_target;
use mltower::linalg::{GfPoly, RingTag};

fuzz_target!(|data: &[u8]| {
    if let Ok(tag) = std::str::from_utf8(data) {
        if let Ok(RingTag::GfPoly(p)) = RingTag::parse(tag) {
            assert!(GfPoly::new(p).is_ok());
        }
    }
});
