#![no_main]

use libfuzzer_sys::fuzz_target;
use pcm_core::{io, koczkodaj_ki};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(m) = io::parse_matrix(text) {
        let ki = koczkodaj_ki(&m);
        assert!((0.0..=1.0).contains(&ki));
    }
});
