#![no_main]

use libfuzzer_sys::fuzz_target;
use nbparse::transition::Configuration;
use nbparse::transition::{parse_transitions, NonBinarySystem, TransitionSystem};
use nbparse::treebank::Token;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(seq) = parse_transitions(text) else {
        return;
    };
    let joined: Vec<String> = seq.iter().map(|t| t.to_string()).collect();
    assert_eq!(
        parse_transitions(&joined.join(" ")).expect("written transitions parse"),
        seq
    );

    let words: Vec<Token> = (0..4).map(|i| Token::new(format!("w{i}"), "P")).collect();
    let system = NonBinarySystem::with_labels(["A", "B", "NP", "S"]);
    let mut c = Configuration::initial(words).expect("nonempty");
    for t in &seq {
        if system.apply_mut(&mut c, t).is_err() {
            break;
        }
    }
    if c.is_finished() {
        c.extract_tree()
            .expect("finished configurations hold a tree");
    }
});
