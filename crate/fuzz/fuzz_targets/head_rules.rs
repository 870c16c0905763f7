#![no_main]

use libfuzzer_sys::fuzz_target;
use nbparse::treebank::HeadRules;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(rules) = text.parse::<HeadRules>() {
        let children = ["NP", "VP", "PP", "NN", "."];
        for parent in ["S", "NP", "VP", "X"] {
            assert!(rules.head_index(parent, &children) < children.len());
        }
    }
});
