//! Canonical forms and structure of the free regular semigroup weakly
//! generated by one element.
//!
//! Elements are represented by their unique river-free mountains. Words are
//! expanded into mountain ranges ([`rewrite::beta1`]) and normalised by
//! uplifting rivers ([`rewrite::beta2`]); on top of that [`algebra`] decides
//! products, Green's relations, idempotents, the natural order and sandwich
//! sets, and [`fi2`] embeds the free regular semigroup weakly generated by
//! two idempotents.

pub mod algebra;
pub mod alphabet;
pub mod error;
pub mod fi2;
pub mod landscape;
pub mod rewrite;
pub mod syntax;

pub use alphabet::{Anchor, GLetter, GToken, GenTuple, Middle, Side, TupleClass};
pub use error::{CapExceeded, Limits};
pub use landscape::{Landscape, Mountain, Word};
pub use syntax::{format_word, parse_word, FormatMode, ParseError};
