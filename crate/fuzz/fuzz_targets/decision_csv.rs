#![no_main]

use libfuzzer_sys::fuzz_target;
use robust_rank::io::{read_decision_csv, write_decision_csv};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(dm) = read_decision_csv(text) else { return };
    // anything accepted must survive a write/read cycle unchanged
    let again = read_decision_csv(&write_decision_csv(&dm)).expect("emitted matrix re-reads");
    assert_eq!(again, dm);
    let _ = dm.min_max_normalized();
});
