#![no_main]

use libfuzzer_sys::fuzz_target;
use pcm_core::io;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(m) = io::parse_csv(text) {
        let back = io::parse_csv(&io::to_csv(&m)).expect("written CSV parses");
        assert_eq!(back, m);
    }
});
