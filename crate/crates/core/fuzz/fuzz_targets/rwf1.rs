#![no_main]

use libfuzzer_sys::fuzz_target;
use rydfermi::atomic::parse_rwf1;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok((header, values)) = parse_rwf1(text) {
        assert_eq!(values.len(), header.grid.len());
        assert!(values.iter().all(|v| v.is_finite()));
    }
});
