//! Text grammar for words and tuples.
//!
//! ```text
//! word   := token (ws token)*
//! token  := "1" | "x" | "x'" | tuple
//! tuple  := alias | "(" item "," anchor "," middle "," anchor "," item ")"
//! item   := "1" | tuple
//! middle := item | "x"                 -- "x" only inside the base tuple
//! anchor := "1" | "x" | "x'"
//! alias  := "gxx'" | "g2e1" | "g2e2" | "g3d1" .. "g3d4"
//!         | "g{" i ".e." k "}" | "g{" i ".d." k "}"
//! ```
//!
//! Literals carry no interior whitespace. Positions in errors are byte
//! offsets into the input.

use std::fmt::Write as _;

use thiserror::Error;

use crate::alphabet::{
    level_index, level_member, name_of, named, Anchor, GLetter, GToken, GenTuple, InvalidTuple,
    Middle, TupleClass,
};
use crate::error::{CapExceeded, Limits};
use crate::landscape::Word;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("empty input")]
    Empty,
    #[error("syntax error at byte {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("invalid tuple at byte {pos}: {reason}")]
    InvalidTuple { pos: usize, reason: InvalidTuple },
    #[error("unknown alias `{name}` at byte {pos}")]
    UnknownAlias { pos: usize, name: String },
    #[error(transparent)]
    Cap(#[from] CapExceeded),
}

/// How tuples are written back out.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum FormatMode {
    /// Fixed names, then indexed aliases, falling back to literals whose
    /// entries are again aliased.
    #[default]
    Alias,
    /// Fully nested literals.
    Expanded,
}

pub fn parse_word(text: &str) -> Result<Word, ParseError> {
    parse_word_with(text, &Limits::default())
}

pub fn parse_word_with(text: &str, limits: &Limits) -> Result<Word, ParseError> {
    let mut tokens = Vec::new();
    let mut p = Parser::new(text, limits);
    loop {
        p.skip_ws();
        if p.at_end() {
            break;
        }
        tokens.push(p.token()?);
        if !p.at_end() && !p.peek_ws() {
            return Err(p.syntax("expected whitespace between tokens"));
        }
    }
    Word::from_tokens(tokens).map_err(|_| ParseError::Empty)
}

/// Parses a single tuple (literal or alias), surrounding whitespace allowed.
pub fn parse_tuple(text: &str) -> Result<GenTuple, ParseError> {
    parse_tuple_with(text, &Limits::default())
}

pub fn parse_tuple_with(text: &str, limits: &Limits) -> Result<GenTuple, ParseError> {
    let mut p = Parser::new(text, limits);
    p.skip_ws();
    if p.at_end() {
        return Err(ParseError::Empty);
    }
    let g = p.tuple(0)?;
    p.skip_ws();
    if !p.at_end() {
        return Err(p.syntax("trailing input after tuple"));
    }
    Ok(g)
}

/// Parses a single letter: `1` or a tuple.
pub fn parse_letter_with(text: &str, limits: &Limits) -> Result<GLetter, ParseError> {
    if text.trim() == "1" {
        Ok(GLetter::One)
    } else {
        parse_tuple_with(text, limits).map(GLetter::Tuple)
    }
}

struct Parser<'a> {
    text: &'a str,
    bytes: &'a [u8],
    pos: usize,
    limits: &'a Limits,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, limits: &'a Limits) -> Self {
        Parser {
            text,
            bytes: text.as_bytes(),
            pos: 0,
            limits,
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.bytes.len()
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn peek_ws(&self) -> bool {
        self.text[self.pos..]
            .chars()
            .next()
            .is_some_and(char::is_whitespace)
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.text[self.pos..].chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn syntax(&self, message: &str) -> ParseError {
        ParseError::Syntax {
            pos: self.pos,
            message: message.to_string(),
        }
    }

    fn eat(&mut self, b: u8) -> Result<(), ParseError> {
        if self.peek() == Some(b) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.syntax(&format!("expected `{}`", b as char)))
        }
    }

    /// The maximal run of identifier-ish characters at the cursor.
    fn word_at(&self) -> &'a str {
        let rest = &self.text[self.pos..];
        let end = rest
            .find(|c: char| c.is_whitespace() || matches!(c, '(' | ')' | ','))
            .unwrap_or(rest.len());
        &rest[..end]
    }

    fn token(&mut self) -> Result<GToken, ParseError> {
        let w = self.word_at();
        let anchor = match w {
            "1" => Some(Anchor::One),
            "x" => Some(Anchor::X),
            "x'" => Some(Anchor::XPrime),
            _ => None,
        };
        if let Some(a) = anchor {
            self.pos += w.len();
            return Ok(GToken::Anchor(a));
        }
        Ok(GToken::Tuple(self.tuple(0)?))
    }

    fn anchor(&mut self) -> Result<Anchor, ParseError> {
        let w = self.word_at();
        let a = match w {
            "1" => Anchor::One,
            "x" => Anchor::X,
            "x'" => Anchor::XPrime,
            _ => return Err(self.syntax("expected an anchor `1`, `x` or `x'`")),
        };
        self.pos += w.len();
        Ok(a)
    }

    fn item(&mut self, depth: u32) -> Result<GLetter, ParseError> {
        if self.word_at() == "1" {
            self.pos += 1;
            return Ok(GLetter::One);
        }
        self.tuple(depth).map(GLetter::Tuple)
    }

    fn tuple(&mut self, depth: u32) -> Result<GenTuple, ParseError> {
        // nesting depth bounds height, so this guards the recursion too
        if depth >= self.limits.max_height {
            return Err(CapExceeded::Height {
                what: "tuple literal nesting".to_string(),
                height: depth + 1,
                limit: self.limits.max_height,
            }
            .into());
        }
        let start = self.pos;
        if self.peek() != Some(b'(') {
            return self.alias();
        }
        self.pos += 1;
        let l = self.item(depth + 1)?;
        self.eat(b',')?;
        let la = self.anchor()?;
        self.eat(b',')?;
        let c = if self.word_at() == "x" {
            self.pos += 1;
            Middle::X
        } else {
            Middle::Letter(self.item(depth + 1)?)
        };
        self.eat(b',')?;
        let ra = self.anchor()?;
        self.eat(b',')?;
        let r = self.item(depth + 1)?;
        self.eat(b')')?;
        let g = GenTuple::new(l, la, c, ra, r)
            .map_err(|reason| ParseError::InvalidTuple { pos: start, reason })?;
        self.limits.check_height("tuple literal", g.height())?;
        Ok(g)
    }

    fn alias(&mut self) -> Result<GenTuple, ParseError> {
        let start = self.pos;
        let w = self.word_at();
        if w.is_empty() {
            return Err(self.syntax("expected a token"));
        }
        let unknown = || ParseError::UnknownAlias {
            pos: start,
            name: w.to_string(),
        };
        if let Some(g) = named(w) {
            self.pos += w.len();
            return Ok(g);
        }
        let inner = w
            .strip_prefix("g{")
            .and_then(|s| s.strip_suffix('}'))
            .ok_or_else(unknown)?;
        let mut parts = inner.split('.');
        let (Some(i), Some(class), Some(k), None) =
            (parts.next(), parts.next(), parts.next(), parts.next())
        else {
            return Err(unknown());
        };
        let class = match class {
            "e" => TupleClass::E,
            "d" => TupleClass::D,
            _ => return Err(unknown()),
        };
        let (Ok(i), Ok(k)) = (i.parse::<u32>(), k.parse::<usize>()) else {
            return Err(unknown());
        };
        let g = level_member(i, class, k, self.limits)?.ok_or_else(unknown)?;
        self.pos += w.len();
        Ok(g)
    }
}

pub fn format_word(w: &Word, mode: FormatMode) -> String {
    format_tokens(w.tokens(), mode)
}

pub fn format_tokens(tokens: &[GToken], mode: FormatMode) -> String {
    let mut out = String::new();
    for (k, t) in tokens.iter().enumerate() {
        if k > 0 {
            out.push(' ');
        }
        match t {
            GToken::Anchor(a) => out.push_str(a.symbol()),
            GToken::Tuple(g) => write_tuple(&mut out, *g, mode),
        }
    }
    out
}

pub fn format_letter(l: GLetter, mode: FormatMode) -> String {
    match l {
        GLetter::One => "1".to_string(),
        GLetter::Tuple(g) => format_tuple(g, mode),
    }
}

pub fn format_tuple(g: GenTuple, mode: FormatMode) -> String {
    let mut out = String::new();
    write_tuple(&mut out, g, mode);
    out
}

/// Alias-mode rendering of a tuple.
pub fn tuple_alias(g: GenTuple) -> String {
    format_tuple(g, FormatMode::Alias)
}

// class D levels above this height are too large to index
const MAX_INDEXED_D_HEIGHT: u32 = 5;

fn alias_of(g: GenTuple) -> Option<String> {
    if let Some(name) = name_of(g) {
        return Some(name.to_string());
    }
    let (class, tag) = match g.class() {
        TupleClass::E => (TupleClass::E, 'e'),
        TupleClass::D => (TupleClass::D, 'd'),
    };
    if class == TupleClass::D && g.height() > MAX_INDEXED_D_HEIGHT {
        return None;
    }
    let limits = Limits {
        max_height: u32::MAX,
        ..Limits::default()
    };
    level_index(g, &limits).map(|k| format!("g{{{}.{}.{}}}", g.height(), tag, k))
}

fn write_letter(out: &mut String, l: GLetter, mode: FormatMode) {
    match l {
        GLetter::One => out.push('1'),
        GLetter::Tuple(g) => write_tuple(out, g, mode),
    }
}

fn write_tuple(out: &mut String, g: GenTuple, mode: FormatMode) {
    if mode == FormatMode::Alias {
        if let Some(a) = alias_of(g) {
            out.push_str(&a);
            return;
        }
    }
    out.push('(');
    write_letter(out, g.left(), mode);
    let _ = write!(out, ",{},", g.left_anchor());
    match g.middle() {
        Middle::X => out.push('x'),
        Middle::Letter(c) => write_letter(out, c, mode),
    }
    let _ = write!(out, ",{},", g.right_anchor());
    write_letter(out, g.right(), mode);
    out.push(')');
}
