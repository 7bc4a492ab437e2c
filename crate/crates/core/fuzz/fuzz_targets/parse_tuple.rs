#![no_main]

use libfuzzer_sys::fuzz_target;
use weakreg::syntax::{format_tuple, parse_tuple_with, FormatMode};
use weakreg::Limits;

fuzz_target!(|text: &str| {
    let limits = Limits::with_max_height(6);
    if let Ok(g) = parse_tuple_with(text, &limits) {
        let again = parse_tuple_with(&format_tuple(g, FormatMode::Expanded), &limits)
            .expect("formatted tuples re-parse");
        assert_eq!(again, g);
    }
});
