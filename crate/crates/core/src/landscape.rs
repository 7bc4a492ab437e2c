//! Words over the alphabet, landscapes and mountains.
//!
//! A landscape is an alternating word `g₀ a₁ g₁ … a_n g_n` of letters and
//! anchors in which every triplet `g_{i-1} a_i g_i` is anchored: one of the
//! two letters is an entry of the other, joined by the matching anchor.

use std::fmt;

use thiserror::Error;

use crate::alphabet::{Anchor, GLetter, GToken, GenTuple, Side, TupleClass};
use crate::error::{CapExceeded, Limits};
use crate::syntax::{format_tokens, FormatMode};

/// A nonempty sequence of tokens.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    tokens: Vec<GToken>,
}

#[derive(Clone, Copy, Debug, Error, PartialEq, Eq)]
#[error("a word must contain at least one token")]
pub struct EmptyWord;

impl Word {
    pub fn from_tokens(tokens: Vec<GToken>) -> Result<Word, EmptyWord> {
        if tokens.is_empty() {
            Err(EmptyWord)
        } else {
            Ok(Word { tokens })
        }
    }

    pub fn single(t: impl Into<GToken>) -> Word {
        Word {
            tokens: vec![t.into()],
        }
    }

    pub fn tokens(&self) -> &[GToken] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Plain concatenation in the free semigroup.
    pub fn concat(&self, other: &Word) -> Word {
        let mut tokens = self.tokens.clone();
        tokens.extend_from_slice(&other.tokens);
        Word { tokens }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_tokens(&self.tokens, FormatMode::Alias))
    }
}

/// `g1 a g2` with `(g1, a)` equal to `(g2^l, g2^la)` or `(g2^r, g2^ra)`.
pub fn left_anchored(g1: GLetter, a: Anchor, g2: GLetter) -> bool {
    match g2 {
        GLetter::One => false,
        GLetter::Tuple(t) => Side::BOTH
            .into_iter()
            .any(|s| t.entry(s) == g1 && t.anchor(s) == a),
    }
}

/// `g1 a g2` with `(g2, a)` equal to `(g1^l, (g1^la)')` or `(g1^r, (g1^ra)')`.
pub fn right_anchored(g1: GLetter, a: Anchor, g2: GLetter) -> bool {
    match g1 {
        GLetter::One => false,
        GLetter::Tuple(t) => Side::BOTH
            .into_iter()
            .any(|s| t.entry(s) == g2 && t.anchor(s).involute() == a),
    }
}

pub fn anchored(g1: GLetter, a: Anchor, g2: GLetter) -> bool {
    left_anchored(g1, a, g2) || right_anchored(g1, a, g2)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FaultKind {
    /// An anchor `x` or `x'` where a letter is required.
    ExpectedLetter,
    /// A tuple where an anchor is required.
    ExpectedAnchor,
    /// The word ends on an anchor.
    EndsWithAnchor,
    /// The triplet starting at the position is not anchored.
    NotAnchored,
}

/// Why a word is not a landscape; `position` is a token index.
#[derive(Clone, Copy, Debug, Error, PartialEq, Eq)]
#[error("not a landscape at token {position}: {kind:?}")]
pub struct LandscapeFault {
    pub position: usize,
    pub kind: FaultKind,
}

/// A validated landscape with rivers and ridges precomputed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Landscape {
    letters: Vec<GLetter>,
    anchors: Vec<Anchor>,
    rivers: Vec<usize>,
    ridges: Vec<usize>,
}

impl Landscape {
    pub fn trivial() -> Landscape {
        Landscape::single(GLetter::One)
    }

    pub fn single(g: GLetter) -> Landscape {
        Landscape {
            letters: vec![g],
            anchors: Vec::new(),
            rivers: Vec::new(),
            ridges: Vec::new(),
        }
    }

    /// Builds a landscape from letters and the anchors between them.
    pub fn new(letters: Vec<GLetter>, anchors: Vec<Anchor>) -> Result<Landscape, LandscapeFault> {
        assert_eq!(
            letters.len(),
            anchors.len() + 1,
            "letter/anchor alternation"
        );
        for (i, &a) in anchors.iter().enumerate() {
            if !anchored(letters[i], a, letters[i + 1]) {
                return Err(LandscapeFault {
                    position: 2 * i,
                    kind: FaultKind::NotAnchored,
                });
            }
        }
        Ok(Self::new_unchecked(letters, anchors))
    }

    pub(crate) fn new_unchecked(letters: Vec<GLetter>, anchors: Vec<Anchor>) -> Landscape {
        let mut rivers = Vec::new();
        let mut ridges = Vec::new();
        for i in 1..letters.len().saturating_sub(1) {
            let (a, b, c) = (
                letters[i - 1].height(),
                letters[i].height(),
                letters[i + 1].height(),
            );
            if a > b && c > b {
                rivers.push(i);
            } else if a < b && c < b {
                ridges.push(i);
            }
        }
        Landscape {
            letters,
            anchors,
            rivers,
            ridges,
        }
    }

    pub fn from_word(w: &Word) -> Result<Landscape, LandscapeFault> {
        let mut letters = Vec::new();
        let mut anchors = Vec::new();
        for (pos, &t) in w.tokens().iter().enumerate() {
            if pos % 2 == 0 {
                let g = t.as_letter().ok_or(LandscapeFault {
                    position: pos,
                    kind: FaultKind::ExpectedLetter,
                })?;
                if let (Some(&prev), Some(&a)) = (letters.last(), anchors.last()) {
                    if !anchored(prev, a, g) {
                        return Err(LandscapeFault {
                            position: pos - 2,
                            kind: FaultKind::NotAnchored,
                        });
                    }
                }
                letters.push(g);
            } else {
                let a = t.as_anchor().ok_or(LandscapeFault {
                    position: pos,
                    kind: FaultKind::ExpectedAnchor,
                })?;
                anchors.push(a);
            }
        }
        if w.len().is_multiple_of(2) {
            return Err(LandscapeFault {
                position: w.len() - 1,
                kind: FaultKind::EndsWithAnchor,
            });
        }
        Ok(Self::new_unchecked(letters, anchors))
    }

    pub fn to_word(&self) -> Word {
        Word::from_tokens(self.tokens()).expect("landscapes are nonempty")
    }

    pub fn tokens(&self) -> Vec<GToken> {
        let mut out = Vec::with_capacity(2 * self.letters.len() - 1);
        for (i, &g) in self.letters.iter().enumerate() {
            if i > 0 {
                out.push(GToken::Anchor(self.anchors[i - 1]));
            }
            out.push(g.into());
        }
        out
    }

    pub fn letters(&self) -> &[GLetter] {
        &self.letters
    }

    /// `anchors()[i]` sits between `letters()[i]` and `letters()[i + 1]`.
    pub fn anchors(&self) -> &[Anchor] {
        &self.anchors
    }

    /// Letter indices of rivers, ascending.
    pub fn rivers(&self) -> &[usize] {
        &self.rivers
    }

    /// Letter indices of ridges, ascending.
    pub fn ridges(&self) -> &[usize] {
        &self.ridges
    }

    /// Number of anchors.
    pub fn n(&self) -> usize {
        self.anchors.len()
    }

    pub fn token_len(&self) -> usize {
        2 * self.letters.len() - 1
    }

    pub fn sigma(&self) -> GLetter {
        self.letters[0]
    }

    pub fn tau(&self) -> GLetter {
        *self.letters.last().expect("nonempty")
    }

    /// Ridges of maximal height.
    pub fn peaks(&self) -> Vec<usize> {
        let top = self.ridges.iter().map(|&i| self.letters[i].height()).max();
        self.ridges
            .iter()
            .copied()
            .filter(|&i| Some(self.letters[i].height()) == top)
            .collect()
    }

    pub fn height(&self) -> u32 {
        self.letters.iter().map(|g| g.height()).max().unwrap_or(0)
    }

    pub fn is_uphill(&self) -> bool {
        self.n() >= 1
            && self
                .letters
                .windows(2)
                .all(|w| w[0].height() < w[1].height())
    }

    pub fn is_downhill(&self) -> bool {
        self.n() >= 1
            && self
                .letters
                .windows(2)
                .all(|w| w[0].height() > w[1].height())
    }

    pub fn is_hill(&self) -> bool {
        self.is_uphill() || self.is_downhill()
    }

    /// A downhill followed by an uphill: exactly one river and no ridge.
    pub fn is_valley(&self) -> bool {
        self.rivers.len() == 1 && self.ridges.is_empty() && {
            let i = self.rivers[0];
            i > 0 && i < self.letters.len() - 1
        }
    }

    pub fn is_canyon(&self) -> bool {
        self.is_valley() && self.sigma() == self.tau()
    }

    pub fn is_mountain_range(&self) -> bool {
        self.sigma() == GLetter::One && self.tau() == GLetter::One
    }

    pub fn is_mountain(&self) -> bool {
        self.is_mountain_range() && self.rivers.is_empty()
    }

    /// Maximal uphill prefix (the first letter alone when the word starts
    /// by going down).
    pub fn uphill_prefix(&self) -> Landscape {
        let mut k = 0;
        while k + 1 < self.letters.len() && self.letters[k].height() < self.letters[k + 1].height()
        {
            k += 1;
        }
        self.slice(0, k)
    }

    /// Maximal downhill suffix.
    pub fn downhill_suffix(&self) -> Landscape {
        let mut k = self.letters.len() - 1;
        while k > 0 && self.letters[k - 1].height() > self.letters[k].height() {
            k -= 1;
        }
        self.slice(k, self.letters.len() - 1)
    }

    /// Sub-landscape from letter `from` to letter `to`, inclusive.
    pub fn slice(&self, from: usize, to: usize) -> Landscape {
        Self::new_unchecked(
            self.letters[from..=to].to_vec(),
            self.anchors[from..to].to_vec(),
        )
    }

    pub fn is_prefix_of(&self, other: &Landscape) -> bool {
        other.letters.starts_with(&self.letters) && other.anchors.starts_with(&self.anchors)
    }

    pub fn is_suffix_of(&self, other: &Landscape) -> bool {
        other.letters.ends_with(&self.letters) && other.anchors.ends_with(&self.anchors)
    }

    pub fn analyze(&self) -> LandscapeInfo {
        LandscapeInfo {
            rivers: self.rivers.clone(),
            ridges: self.ridges.clone(),
            peaks: self.peaks(),
            height: self.height(),
            uphill: self.is_uphill(),
            downhill: self.is_downhill(),
            hill: self.is_hill(),
            valley: self.is_valley(),
            canyon: self.is_canyon(),
            mountain_range: self.is_mountain_range(),
            mountain: self.is_mountain(),
        }
    }
}

impl fmt::Display for Landscape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_tokens(&self.tokens(), FormatMode::Alias))
    }
}

/// Structural report on a landscape. Positions are letter indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LandscapeInfo {
    pub rivers: Vec<usize>,
    pub ridges: Vec<usize>,
    pub peaks: Vec<usize>,
    pub height: u32,
    pub uphill: bool,
    pub downhill: bool,
    pub hill: bool,
    pub valley: bool,
    pub canyon: bool,
    pub mountain_range: bool,
    pub mountain: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Analysis {
    NotLandscape(LandscapeFault),
    Landscape(LandscapeInfo),
}

pub fn analyze(w: &Word) -> Analysis {
    match Landscape::from_word(w) {
        Ok(l) => Analysis::Landscape(l.analyze()),
        Err(f) => Analysis::NotLandscape(f),
    }
}

#[derive(Clone, Copy, Debug, Error, PartialEq, Eq)]
#[error("junction mismatch: the left landscape ends with a different letter than the right one starts with")]
pub struct JunctionMismatch;

/// `u * v`: concatenation with the shared junction letter written once.
pub fn join(u: &Landscape, v: &Landscape) -> Result<Landscape, JunctionMismatch> {
    if u.tau() != v.sigma() {
        return Err(JunctionMismatch);
    }
    let mut letters = u.letters.clone();
    letters.extend_from_slice(&v.letters[1..]);
    let mut anchors = u.anchors.clone();
    anchors.extend_from_slice(&v.anchors);
    Ok(Landscape::new_unchecked(letters, anchors))
}

/// `g_n a_n' … a_1' g_0`.
pub fn reverse(u: &Landscape) -> Landscape {
    let letters = u.letters.iter().rev().copied().collect();
    let anchors = u.anchors.iter().rev().map(|a| a.involute()).collect();
    Landscape::new_unchecked(letters, anchors)
}

/// A landscape from `1` to `1` without rivers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mountain(Landscape);

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum NotMountain {
    #[error(transparent)]
    Landscape(#[from] LandscapeFault),
    #[error("a mountain must start and end with the letter 1")]
    Endpoints,
    #[error("a mountain has no rivers (found one at letter {0})")]
    River(usize),
}

impl Mountain {
    pub fn trivial() -> Mountain {
        Mountain(Landscape::trivial())
    }

    pub fn new(l: Landscape) -> Result<Mountain, NotMountain> {
        if !l.is_mountain_range() {
            return Err(NotMountain::Endpoints);
        }
        if let Some(&i) = l.rivers.first() {
            return Err(NotMountain::River(i));
        }
        Ok(Mountain(l))
    }

    pub fn from_word(w: &Word) -> Result<Mountain, NotMountain> {
        Mountain::new(Landscape::from_word(w)?)
    }

    pub fn landscape(&self) -> &Landscape {
        &self.0
    }

    pub fn into_landscape(self) -> Landscape {
        self.0
    }

    pub fn is_trivial(&self) -> bool {
        self.0.letters.len() == 1
    }

    fn peak_index(&self) -> usize {
        self.0.ridges.first().copied().unwrap_or(0)
    }

    /// `κ(u)`; the letter `1` for the trivial mountain.
    pub fn peak(&self) -> GLetter {
        self.0.letters[self.peak_index()]
    }

    /// `λ_l(u)`.
    pub fn left_hill(&self) -> Landscape {
        self.0.slice(0, self.peak_index())
    }

    /// `λ_r(u)`.
    pub fn right_hill(&self) -> Landscape {
        self.0.slice(self.peak_index(), self.0.letters.len() - 1)
    }

    pub fn hills(&self) -> (Landscape, Landscape) {
        (self.left_hill(), self.right_hill())
    }
}

impl fmt::Display for Mountain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

pub fn hills_of(u: &Mountain) -> (Landscape, Landscape) {
    u.hills()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Up,
    Down,
}

/// Every uphill from `1` to `g` (or downhill from `g` to `1`); `2^height`
/// of them.
///
/// At each step down from a tuple the slot holding the left entry comes
/// first; for class `E` tuples, whose two slots hold the same entry, the
/// slot carrying anchor `1` comes first.
pub fn enumerate_hills(
    g: GLetter,
    direction: Direction,
    limits: &Limits,
) -> Result<Vec<Landscape>, CapExceeded> {
    limits.check_height("hill enumeration", g.height())?;
    let ups = uphills(g);
    Ok(match direction {
        Direction::Up => ups,
        Direction::Down => ups.iter().map(reverse).collect(),
    })
}

pub(crate) fn slot_order(g: GenTuple) -> [Side; 2] {
    let first_right = g.class() == TupleClass::E && g.right_anchor() == Anchor::One;
    if first_right {
        [Side::Right, Side::Left]
    } else {
        [Side::Left, Side::Right]
    }
}

fn uphills(g: GLetter) -> Vec<Landscape> {
    let GLetter::Tuple(t) = g else {
        return vec![Landscape::trivial()];
    };
    let mut out = Vec::new();
    for s in slot_order(t) {
        for mut h in uphills(t.entry(s)) {
            h.letters.push(g);
            h.anchors.push(t.anchor(s));
            out.push(Landscape::new_unchecked(h.letters, h.anchors));
        }
    }
    out
}

/// A uniformly random uphill from `1` to `g`: one fair slot choice per
/// level.
pub fn random_uphill<R: rand::Rng + ?Sized>(g: GLetter, rng: &mut R) -> Landscape {
    let mut letters = vec![g];
    let mut anchors = Vec::new();
    let mut cur = g;
    while let GLetter::Tuple(t) = cur {
        let s = if rng.gen::<bool>() {
            Side::Left
        } else {
            Side::Right
        };
        anchors.push(t.anchor(s));
        cur = t.entry(s);
        letters.push(cur);
    }
    letters.reverse();
    anchors.reverse();
    Landscape::new_unchecked(letters, anchors)
}

/// A uniformly random downhill from `g` to `1`.
pub fn random_downhill<R: rand::Rng + ?Sized>(g: GLetter, rng: &mut R) -> Landscape {
    reverse(&random_uphill(g, rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::{enumerate_level, named, LevelClass};
    use crate::syntax::parse_word;

    fn land(s: &str) -> Landscape {
        Landscape::from_word(&parse_word(s).unwrap()).unwrap()
    }

    fn info(s: &str) -> LandscapeInfo {
        match analyze(&parse_word(s).unwrap()) {
            Analysis::Landscape(i) => i,
            Analysis::NotLandscape(f) => panic!("{s}: {f}"),
        }
    }

    #[test]
    fn beta_one_of_x_is_a_mountain() {
        let i = info("1 1 gxx' x 1");
        assert!(i.mountain);
        assert!(i.rivers.is_empty());
        assert_eq!(i.peaks, vec![1]);
    }

    #[test]
    fn canyon_with_one_river() {
        let i = info("gxx' 1 1 1 gxx'");
        assert!(i.canyon);
        assert!(i.valley);
        assert_eq!(i.rivers, vec![1]);
        assert!(!i.mountain_range);
    }

    #[test]
    fn not_landscapes() {
        assert_eq!(
            analyze(&parse_word("x x").unwrap()),
            Analysis::NotLandscape(LandscapeFault {
                position: 0,
                kind: FaultKind::ExpectedLetter
            })
        );
        assert_eq!(
            analyze(&parse_word("1 x gxx'").unwrap()),
            Analysis::NotLandscape(LandscapeFault {
                position: 0,
                kind: FaultKind::NotAnchored
            })
        );
        assert_eq!(
            analyze(&parse_word("1 1").unwrap()),
            Analysis::NotLandscape(LandscapeFault {
                position: 1,
                kind: FaultKind::EndsWithAnchor
            })
        );
        assert_eq!(
            analyze(&parse_word("1 gxx' 1").unwrap()),
            Analysis::NotLandscape(LandscapeFault {
                position: 1,
                kind: FaultKind::ExpectedAnchor
            })
        );
    }

    #[test]
    fn joins() {
        assert_eq!(
            join(&land("1 1 gxx' x 1"), &land("1 x' gxx' 1 1"))
                .unwrap()
                .to_string(),
            "1 1 gxx' x 1 x' gxx' 1 1"
        );
        assert_eq!(join(&land("1"), &land("1")).unwrap().to_string(), "1");
        assert_eq!(
            join(&land("gxx' 1 1"), &land("1 1 gxx'"))
                .unwrap()
                .to_string(),
            "gxx' 1 1 1 gxx'"
        );
        assert_eq!(
            join(&land("gxx' 1 1"), &land("gxx'")),
            Err(JunctionMismatch)
        );
    }

    #[test]
    fn reverses() {
        assert_eq!(reverse(&land("1 1 gxx' x 1")).to_string(), "1 x' gxx' 1 1");
        assert_eq!(reverse(&land("1")).to_string(), "1");
        let r = reverse(&land("gxx' 1 1"));
        assert_eq!(r.to_string(), "1 1 gxx'");
        assert!(r.is_uphill());
    }

    #[test]
    fn hills_of_mountains() {
        let u = Mountain::new(land("1 1 gxx' x 1")).unwrap();
        let (l, r) = hills_of(&u);
        assert_eq!(l.to_string(), "1 1 gxx'");
        assert_eq!(r.to_string(), "gxx' x 1");
        let (l, r) = hills_of(&Mountain::trivial());
        assert_eq!((l.to_string(), r.to_string()), ("1".into(), "1".into()));
        let u = Mountain::new(land("1 1 gxx' x g2e1 x' g3d2 x g2e2 x' gxx' 1 1")).unwrap();
        assert_eq!(u.left_hill().to_string(), "1 1 gxx' x g2e1 x' g3d2");
        assert_eq!(u.peak(), GLetter::Tuple(named("g3d2").unwrap()));
    }

    #[test]
    fn base_uphills() {
        let hs =
            enumerate_hills(GenTuple::base().into(), Direction::Up, &Limits::default()).unwrap();
        let s: Vec<String> = hs.iter().map(|h| h.to_string()).collect();
        assert_eq!(s, ["1 1 gxx'", "1 x' gxx'"]);
    }

    #[test]
    fn hill_counts_and_shapes() {
        let lim = Limits::default();
        let g2e1 = GLetter::Tuple(named("g2e1").unwrap());
        assert_eq!(
            enumerate_hills(g2e1, Direction::Down, &lim).unwrap().len(),
            4
        );
        for i in 1..=4 {
            for g in enumerate_level(i, LevelClass::All, &lim).unwrap() {
                let g = GLetter::Tuple(g);
                let ups = enumerate_hills(g, Direction::Up, &lim).unwrap();
                assert_eq!(ups.len(), 1 << i);
                let mut dedup = ups.clone();
                dedup.sort();
                dedup.dedup();
                assert_eq!(dedup.len(), ups.len());
                for h in &ups {
                    let checked = Landscape::new(h.letters().to_vec(), h.anchors().to_vec());
                    assert_eq!(checked.as_ref(), Ok(h));
                    assert!(h.is_uphill());
                    assert_eq!((h.sigma(), h.tau()), (GLetter::One, g));
                }
                for h in enumerate_hills(g, Direction::Down, &lim).unwrap() {
                    assert!(h.is_downhill());
                }
            }
        }
    }

    #[test]
    fn mountain_decomposition() {
        let lim = Limits::default();
        for i in 1..=3 {
            for g in enumerate_level(i, LevelClass::All, &lim).unwrap() {
                let g = GLetter::Tuple(g);
                let ups = enumerate_hills(g, Direction::Up, &lim).unwrap();
                let downs = enumerate_hills(g, Direction::Down, &lim).unwrap();
                for l in &ups {
                    for r in &downs {
                        let m = Mountain::new(join(l, r).unwrap()).unwrap();
                        assert_eq!(m.landscape().token_len() % 4, 1);
                        assert_eq!(&m.left_hill(), l);
                        assert_eq!(&m.right_hill(), r);
                        assert!(Landscape::from_word(&m.landscape().to_word()).is_ok());
                    }
                }
            }
        }
    }

    #[test]
    fn prefix_and_suffix_hills() {
        let u = land("1 1 gxx' x g2e1 1 gxx' x 1");
        assert_eq!(u.uphill_prefix().to_string(), "1 1 gxx' x g2e1");
        assert_eq!(u.downhill_suffix().to_string(), "g2e1 1 gxx' x 1");
        let v = land("gxx' 1 1 1 gxx'");
        assert_eq!(v.uphill_prefix().to_string(), "gxx'");
    }
}
