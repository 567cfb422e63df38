#![no_main]
use libfuzzer_sys::fuzz_target;

use demistack::numfield::{parse_element, parse_field, FieldSpec};
use std::sync::OnceLock;

static FIELDS: OnceLock<Vec<FieldSpec>> = OnceLock::new();

fuzz_target!(|data: &[u8]| {
    if data.len() > 256 {
        return;
    }
    let fields = FIELDS.get_or_init(|| {
        vec![
            FieldSpec::rationals(),
            parse_field("x^2+1").unwrap(),
            parse_field("x^2-x-1").unwrap(),
        ]
    });
    if let Ok(s) = std::str::from_utf8(data) {
        for field in fields {
            let _ = parse_element(field, s);
        }
    }
});
