#![no_main]

use libfuzzer_sys::fuzz_target;
use weakreg::fi2::{format_iword, parse_iword_with, FormatMode};
use weakreg::Limits;

fuzz_target!(|text: &str| {
    let limits = Limits::with_max_height(6);
    if let Ok(letters) = parse_iword_with(text, &limits) {
        let again = parse_iword_with(&format_iword(&letters, FormatMode::Expanded), &limits)
            .expect("formatted i-words re-parse");
        assert_eq!(again, letters);
    }
});
