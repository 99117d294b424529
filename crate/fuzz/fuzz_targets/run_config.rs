#![no_main]

use libfuzzer_sys::fuzz_target;
use robust_rank::io::{resolve_preference_order, RunConfig};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(cfg) = RunConfig::from_json(text) {
        if let Some(order) = &cfg.preference_order {
            let criteria: Vec<String> = (1..=order.len()).map(|j| format!("g{j}")).collect();
            let _ = resolve_preference_order(order, &criteria);
        }
    }
});
