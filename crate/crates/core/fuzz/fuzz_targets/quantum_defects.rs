#![no_main]

use libfuzzer_sys::fuzz_target;
use rydfermi::atomic::QuantumDefectTable;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(table) = QuantumDefectTable::parse(text) {
        for (_, _, _, d) in table.iter() {
            assert!(d.is_finite());
        }
    }
});
