#![no_main]

use libfuzzer_sys::fuzz_target;
use nbparse::treebank::{read_tagged, read_tagged_line, write_tagged};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(lines) = read_tagged(text) {
        for (n, tokens) in lines {
            assert!(!tokens.is_empty());
            assert_eq!(
                read_tagged_line(&write_tagged(&tokens), n).expect("written lines read back"),
                tokens
            );
        }
    }
});
