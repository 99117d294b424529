#![no_main]

use libfuzzer_sys::fuzz_target;
use robust_rank::io::parse_pairwise_csv;
use robust_rank::social::condorcet_ranking;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok((labels, c)) = parse_pairwise_csv(text) {
        assert_eq!(labels.len(), c.dim());
        let out = condorcet_ranking(&c).expect("accepted matrices rank");
        assert_eq!(out.ranking.len(), labels.len());
    }
});
