#![no_main]

use libfuzzer_sys::fuzz_target;
use nbparse::scorer::Model;
use nbparse::trainer::parse;
use nbparse::treebank::Token;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(model) = text.parse::<Model>() else {
        return;
    };
    let again: Model = model.to_text().parse().expect("written models load");
    assert_eq!(again.to_text(), model.to_text());
    let words = [
        Token::new("a", "DT"),
        Token::new("b", "NN"),
        Token::new("c", "VBZ"),
    ];
    let tree = parse(&model, &words).expect("decoding always yields a tree");
    assert_eq!(tree.len(), words.len());
});
