#![no_main]

use libfuzzer_sys::fuzz_target;
use mltower::io::parse_elements;
use mltower::linalg::{EuclideanDomain, GfPoly, Integers};

fn round_trip<R: EuclideanDomain>(ring: &R, list: &str) {
    if let Ok(elems) = parse_elements(ring, list) {
        for e in elems {
            assert_eq!(ring.parse_elem(&e.to_string()).unwrap(), e);
        }
    }
}

fuzz_target!(|data: &[u8]| {
    if let Ok(list) = std::str::from_utf8(data) {
        round_trip(&Integers, list);
        round_trip(&GfPoly::new(5).unwrap(), list);
    }
});
