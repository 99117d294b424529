#![no_main]

use libfuzzer_sys::fuzz_target;
use robust_rank::io::{parse_ranking_csv, ranking_from_labels};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(ids) = parse_ranking_csv(text) {
        let r = ranking_from_labels(&ids, &ids).expect("a ranking maps onto its own labels");
        assert_eq!(r.len(), ids.len());
    }
});
