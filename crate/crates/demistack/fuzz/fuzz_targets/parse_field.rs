#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    // Cap the length: irreducibility testing on giant inputs is desk-scale
    // work, not a parsing concern.
    if data.len() > 128 {
        return;
    }
    if let Ok(s) = std::str::from_utf8(data) {
        let _ = demistack::numfield::parse_field(s);
    }
});
