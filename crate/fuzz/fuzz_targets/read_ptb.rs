#![no_main]

use libfuzzer_sys::fuzz_target;
use nbparse::treebank::{binarize, read_ptb, unbinarize, write_ptb, HeadRules};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(trees) = read_ptb(text) else { return };
    let rules = HeadRules::english();
    for t in trees {
        let again = read_ptb(&write_ptb(&t)).expect("written trees read back");
        assert_eq!(again, vec![t.clone()]);
        assert_eq!(
            unbinarize(&binarize(&t, &rules)).expect("binarized trees unbinarize"),
            t
        );
    }
});
