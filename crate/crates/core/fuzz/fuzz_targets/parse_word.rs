#![no_main]

use libfuzzer_sys::fuzz_target;
use weakreg::syntax::{format_word, parse_word_with, FormatMode};
use weakreg::Limits;

fuzz_target!(|text: &str| {
    let limits = Limits::with_max_height(6);
    if let Ok(w) = parse_word_with(text, &limits) {
        for mode in [FormatMode::Alias, FormatMode::Expanded] {
            let again = parse_word_with(&format_word(&w, mode), &limits).expect("formatted words re-parse");
            assert_eq!(again, w);
        }
    }
});
