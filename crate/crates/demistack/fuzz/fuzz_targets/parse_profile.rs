#![no_main]
use libfuzzer_sys::fuzz_target;

use demistack::search::parse_profile_bytes;

fuzz_target!(|data: &[u8]| {
    if data.len() > 4096 {
        return;
    }
    let _ = parse_profile_bytes(data);
});
