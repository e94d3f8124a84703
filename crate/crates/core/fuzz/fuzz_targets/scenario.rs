#![no_main]

use libfuzzer_sys::fuzz_target;
use rydfermi::scenario::{validate_str, Scenario};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let diagnostics = validate_str(text);
    // validation and parsing must agree on whether the text is usable
    assert_eq!(diagnostics.is_empty(), Scenario::parse(text).is_ok());
});
