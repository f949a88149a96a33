//! The triplet text decoder must never panic on arbitrary input, and any
//! input it accepts must survive a re-encode/re-decode round trip.

#![no_main]

use libfuzzer_sys::fuzz_target;
use msh_core::gfmat::FpMatrix;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(matrix) = FpMatrix::from_triplet_text(text) else { return };
    let canonical = matrix.to_triplet_text();
    let reparsed = FpMatrix::from_triplet_text(&canonical)
        .expect("canonical encoding always parses");
    assert_eq!(reparsed, matrix, "round trip is bit-exact");
});
