#![no_main]

use libfuzzer_sys::fuzz_target;
use mltower::io::{decode_matrix, decode_module, decode_presentation, decode_system, decode_tower, parse_input, Caps, InputJson};
use mltower::linalg::{EuclideanDomain, GfPoly, Integers, RingTag};

// Small caps keep each run cheap; decoding must reject, never panic.
const CAPS: Caps = Caps { max_dim: 8, max_depth: 16 };

fn decode_all<R: EuclideanDomain>(ring: &R, input: &InputJson) {
    if let Some(m) = &input.matrix {
        let _ = decode_matrix(ring, m, &CAPS);
    }
    for m in [&input.module, &input.source, &input.target].into_iter().flatten() {
        let _ = decode_module(ring, m, &CAPS);
    }
    if let Some(t) = &input.tower {
        let _ = decode_tower(ring, t, &CAPS);
    }
    if let Some(s) = &input.system {
        let _ = decode_system(ring, s, &CAPS);
    }
    if let Some(p) = &input.presentation {
        let _ = decode_presentation(ring, p, &CAPS);
    }
}

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(input) = parse_input(text) else { return };
    match input.ring.as_deref().map(RingTag::parse) {
        None | Some(Ok(RingTag::Integers)) => decode_all(&Integers, &input),
        Some(Ok(RingTag::GfPoly(p))) if p < 1 << 16 => decode_all(&GfPoly::new(p).unwrap(), &input),
        _ => {}
    }
});
