//! Anchors and the generator alphabet.
//!
//! The alphabet is `A ∪ G⁵` where `A = {1, x, x'}` and `G⁵` is an infinite,
//! recursively defined family of 5-tuples `(l, la, c, ra, r)`. Tuples are
//! validated once, when they are built, and hash-consed into a process-wide
//! table: two tuples are equal exactly when they are the same interned node,
//! so comparisons and hashing never walk the recursive structure.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, Mutex, OnceLock};

use thiserror::Error;

use crate::error::{CapExceeded, Limits};
use crate::landscape::Word;

/// One of the three anchors `1`, `x`, `x'`.
///
/// The derived order `1 < x < x'` is the order used by tuple enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Anchor {
    One,
    X,
    XPrime,
}

impl Anchor {
    pub const ALL: [Anchor; 3] = [Anchor::One, Anchor::X, Anchor::XPrime];

    /// The involution `'`: swaps `x` and `x'`, fixes `1`.
    pub fn involute(self) -> Anchor {
        match self {
            Anchor::One => Anchor::One,
            Anchor::X => Anchor::XPrime,
            Anchor::XPrime => Anchor::X,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Anchor::One => "1",
            Anchor::X => "x",
            Anchor::XPrime => "x'",
        }
    }

    /// Anchors a tuple of the given height may carry.
    pub fn allowed_at(self, height: u32) -> bool {
        match self {
            Anchor::One => true,
            Anchor::X => height.is_multiple_of(2),
            Anchor::XPrime => height % 2 == 1,
        }
    }
}

impl fmt::Display for Anchor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// Function involute as a free function, mirroring [`Anchor::involute`].
pub fn involute(a: Anchor) -> Anchor {
    a.involute()
}

/// `E`: equal left and right entries. `D`: distinct entries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TupleClass {
    E,
    D,
}

/// Left or right entry of a tuple.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub const BOTH: [Side; 2] = [Side::Left, Side::Right];
}

/// Where the middle entry sits inside the wings of a tuple.
///
/// `left` is the side of `g.l` holding `g.c` (the `l_a` of the construction),
/// `right` is the side of `g.r` holding `g.c` (the `r_a`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct WingSides {
    pub left: Side,
    pub right: Side,
}

/// A letter of `G' = G⁵ ∪ {1}`: the identity letter or an interned tuple.
///
/// The derived order puts `One` first and then follows [`GenTuple`]'s order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GLetter {
    One,
    Tuple(GenTuple),
}

impl GLetter {
    pub fn height(self) -> u32 {
        match self {
            GLetter::One => 0,
            GLetter::Tuple(g) => g.height(),
        }
    }

    pub fn as_tuple(self) -> Option<GenTuple> {
        match self {
            GLetter::One => None,
            GLetter::Tuple(g) => Some(g),
        }
    }

    /// Left or right entry; `None` for the letter `1`.
    pub fn entry(self, side: Side) -> Option<GLetter> {
        self.as_tuple().map(|g| g.entry(side))
    }

    pub fn anchor(self, side: Side) -> Option<Anchor> {
        self.as_tuple().map(|g| g.anchor(side))
    }
}

impl From<GenTuple> for GLetter {
    fn from(g: GenTuple) -> Self {
        GLetter::Tuple(g)
    }
}

/// A token of the full alphabet `G = A ∪ G⁵`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GToken {
    Anchor(Anchor),
    Tuple(GenTuple),
}

impl GToken {
    pub const ONE: GToken = GToken::Anchor(Anchor::One);

    /// The token read as a landscape letter, if it is one.
    pub fn as_letter(self) -> Option<GLetter> {
        match self {
            GToken::Anchor(Anchor::One) => Some(GLetter::One),
            GToken::Anchor(_) => None,
            GToken::Tuple(g) => Some(GLetter::Tuple(g)),
        }
    }

    /// The token read as an anchor, if it is one.
    pub fn as_anchor(self) -> Option<Anchor> {
        match self {
            GToken::Anchor(a) => Some(a),
            GToken::Tuple(_) => None,
        }
    }
}

impl From<GLetter> for GToken {
    fn from(l: GLetter) -> Self {
        match l {
            GLetter::One => GToken::ONE,
            GLetter::Tuple(g) => GToken::Tuple(g),
        }
    }
}

impl From<Anchor> for GToken {
    fn from(a: Anchor) -> Self {
        GToken::Anchor(a)
    }
}

impl From<GenTuple> for GToken {
    fn from(g: GenTuple) -> Self {
        GToken::Tuple(g)
    }
}

/// Middle entry of a raw tuple. Only the base tuple `(1,1,x,x',1)` uses `X`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Middle {
    X,
    Letter(GLetter),
}

impl From<GLetter> for Middle {
    fn from(l: GLetter) -> Self {
        Middle::Letter(l)
    }
}

struct Node {
    id: u32,
    left: GLetter,
    left_anchor: Anchor,
    middle: Middle,
    right_anchor: Anchor,
    right: GLetter,
    height: u32,
    class: TupleClass,
    sides: Option<WingSides>,
    // position inside the class E level; unused for class D
    e_index: u64,
}

/// An interned, validated 5-tuple of `G⁵`.
#[derive(Clone, Copy)]
pub struct GenTuple(&'static Node);

impl PartialEq for GenTuple {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.0, other.0)
    }
}

impl Eq for GenTuple {}

impl Hash for GenTuple {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.id.hash(state)
    }
}

impl Ord for GenTuple {
    /// Height first, then class (`E` before `D`), then the position inside
    /// the level: the recursive child order for class `E` and the
    /// lexicographic order on `(l, la, c, ra, r)` for class `D`.
    fn cmp(&self, other: &Self) -> Ordering {
        if self == other {
            return Ordering::Equal;
        }
        self.height()
            .cmp(&other.height())
            .then(self.class().cmp(&other.class()))
            .then_with(|| match self.class() {
                TupleClass::E => self.0.e_index.cmp(&other.0.e_index),
                TupleClass::D => self
                    .left()
                    .cmp(&other.left())
                    .then(self.left_anchor().cmp(&other.left_anchor()))
                    .then(self.middle_letter().cmp(&other.middle_letter()))
                    .then(self.right_anchor().cmp(&other.right_anchor()))
                    .then(self.right().cmp(&other.right())),
            })
    }
}

impl PartialOrd for GenTuple {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for GenTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::syntax::tuple_alias(*self))
    }
}

impl fmt::Display for GenTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::tuple_alias(*self))
    }
}

/// Why a raw 5-tuple is not a member of `G⁵`.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum InvalidTuple {
    #[error("the middle entry x is reserved for the base tuple (1,1,x,x',1)")]
    BaseMismatch,
    #[error("left and right entries of a tuple above height 1 must be tuples")]
    WingIsOne,
    #[error("height mismatch: left {left}, middle {middle}, right {right}")]
    HeightMismatch { left: u32, middle: u32, right: u32 },
    #[error("equal left and right entries must be a class E tuple")]
    EqualWingsNotE,
    #[error("middle entry and {side:?} anchor do not match any entry of the {side:?} wing")]
    SideCondition { side: Side },
    #[error("anchor {anchor} is not allowed at height {height}")]
    AnchorParity { anchor: Anchor, height: u32 },
    #[error("a class E tuple needs two distinct anchors")]
    DuplicateAnchor,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum MiddleKey {
    X,
    Letter(u32),
}

type Key = (u32, Anchor, MiddleKey, Anchor, u32);

#[derive(Default)]
struct Interner {
    table: HashMap<Key, GenTuple>,
}

fn interner() -> &'static Mutex<Interner> {
    static INTERNER: OnceLock<Mutex<Interner>> = OnceLock::new();
    INTERNER.get_or_init(|| Mutex::new(Interner::default()))
}

fn letter_key(l: GLetter) -> u32 {
    match l {
        GLetter::One => 0,
        GLetter::Tuple(g) => g.0.id,
    }
}

struct Checked {
    height: u32,
    class: TupleClass,
    sides: Option<WingSides>,
    e_index: u64,
}

fn intern(
    left: GLetter,
    left_anchor: Anchor,
    middle: Middle,
    right_anchor: Anchor,
    right: GLetter,
    checked: Checked,
) -> GenTuple {
    let key = (
        letter_key(left),
        left_anchor,
        match middle {
            Middle::X => MiddleKey::X,
            Middle::Letter(c) => MiddleKey::Letter(letter_key(c)),
        },
        right_anchor,
        letter_key(right),
    );
    let mut guard = interner().lock().unwrap_or_else(|e| e.into_inner());
    if let Some(g) = guard.table.get(&key) {
        return *g;
    }
    let id = u32::try_from(guard.table.len() + 1).expect("intern table overflow");
    let node: &'static Node = Box::leak(Box::new(Node {
        id,
        left,
        left_anchor,
        middle,
        right_anchor,
        right,
        height: checked.height,
        class: checked.class,
        sides: checked.sides,
        e_index: checked.e_index,
    }));
    let g = GenTuple(node);
    guard.table.insert(key, g);
    g
}

impl GenTuple {
    /// The base tuple `g_xx' = (1,1,x,x',1)`.
    pub fn base() -> GenTuple {
        static BASE: OnceLock<GenTuple> = OnceLock::new();
        *BASE.get_or_init(|| {
            intern(
                GLetter::One,
                Anchor::One,
                Middle::X,
                Anchor::XPrime,
                GLetter::One,
                Checked {
                    height: 1,
                    class: TupleClass::E,
                    sides: None,
                    e_index: 0,
                },
            )
        })
    }

    /// Validates a raw tuple and returns its interned representative.
    pub fn new(
        left: GLetter,
        left_anchor: Anchor,
        middle: Middle,
        right_anchor: Anchor,
        right: GLetter,
    ) -> Result<GenTuple, InvalidTuple> {
        let c = match middle {
            Middle::X => {
                return if left == GLetter::One
                    && left_anchor == Anchor::One
                    && right_anchor == Anchor::XPrime
                    && right == GLetter::One
                {
                    Ok(GenTuple::base())
                } else {
                    Err(InvalidTuple::BaseMismatch)
                };
            }
            Middle::Letter(c) => c,
        };
        let (l, r) = match (left, right) {
            (GLetter::Tuple(l), GLetter::Tuple(r)) => (l, r),
            _ => return Err(InvalidTuple::WingIsOne),
        };
        let height = l.height() + 1;
        if r.height() != l.height() || c.height() + 2 != height {
            return Err(InvalidTuple::HeightMismatch {
                left: l.height(),
                middle: c.height(),
                right: r.height(),
            });
        }
        for a in [left_anchor, right_anchor] {
            if !a.allowed_at(height) {
                return Err(InvalidTuple::AnchorParity { anchor: a, height });
            }
        }
        let matching_side = |wing: GenTuple, anchor: Anchor| {
            Side::BOTH
                .into_iter()
                .find(|&s| wing.entry(s) == c && wing.anchor(s).involute() == anchor)
        };
        if l == r {
            if l.class() != TupleClass::E {
                return Err(InvalidTuple::EqualWingsNotE);
            }
            if l.left() != c {
                return Err(InvalidTuple::SideCondition { side: Side::Left });
            }
            if left_anchor == right_anchor {
                return Err(InvalidTuple::DuplicateAnchor);
            }
            let left_side = matching_side(l, left_anchor)
                .ok_or(InvalidTuple::SideCondition { side: Side::Left })?;
            let right_side = matching_side(r, right_anchor)
                .ok_or(InvalidTuple::SideCondition { side: Side::Right })?;
            // first child of l when the left anchor inverts l's own left anchor
            let bit = u64::from(left_anchor != l.left_anchor().involute());
            Ok(intern(
                left,
                left_anchor,
                middle,
                right_anchor,
                right,
                Checked {
                    height,
                    class: TupleClass::E,
                    sides: Some(WingSides {
                        left: left_side,
                        right: right_side,
                    }),
                    e_index: 2 * l.0.e_index + bit,
                },
            ))
        } else {
            let left_side = matching_side(l, left_anchor)
                .ok_or(InvalidTuple::SideCondition { side: Side::Left })?;
            let right_side = matching_side(r, right_anchor)
                .ok_or(InvalidTuple::SideCondition { side: Side::Right })?;
            Ok(intern(
                left,
                left_anchor,
                middle,
                right_anchor,
                right,
                Checked {
                    height,
                    class: TupleClass::D,
                    sides: Some(WingSides {
                        left: left_side,
                        right: right_side,
                    }),
                    e_index: 0,
                },
            ))
        }
    }

    pub fn left(self) -> GLetter {
        self.0.left
    }

    pub fn left_anchor(self) -> Anchor {
        self.0.left_anchor
    }

    pub fn middle(self) -> Middle {
        self.0.middle
    }

    /// Middle entry as a letter; `None` only for the base tuple.
    pub fn middle_letter(self) -> Option<GLetter> {
        match self.0.middle {
            Middle::X => None,
            Middle::Letter(c) => Some(c),
        }
    }

    pub fn right_anchor(self) -> Anchor {
        self.0.right_anchor
    }

    pub fn right(self) -> GLetter {
        self.0.right
    }

    pub fn height(self) -> u32 {
        self.0.height
    }

    pub fn class(self) -> TupleClass {
        self.0.class
    }

    pub fn is_base(self) -> bool {
        self.0.height == 1
    }

    pub fn entry(self, side: Side) -> GLetter {
        match side {
            Side::Left => self.0.left,
            Side::Right => self.0.right,
        }
    }

    pub fn anchor(self, side: Side) -> Anchor {
        match side {
            Side::Left => self.0.left_anchor,
            Side::Right => self.0.right_anchor,
        }
    }

    /// Position of this tuple inside its class `E` level (0-based).
    pub(crate) fn e_index(self) -> Option<u64> {
        (self.class() == TupleClass::E).then_some(self.0.e_index)
    }

    /// Sides of the wings that hold the middle entry.
    pub fn sides(self) -> Result<WingSides, BelowHeightTwo> {
        self.0.sides.ok_or(BelowHeightTwo)
    }

    /// `g^L = (g^la)' g^l g^la` and `g^R = (g^ra)' g^r g^ra`.
    pub fn wing_triplets(self) -> Result<(Word, Word), BelowHeightTwo> {
        if self.height() < 2 {
            return Err(BelowHeightTwo);
        }
        let wing = |s: Side| {
            Word::from_tokens(vec![
                self.anchor(s).involute().into(),
                self.entry(s).into(),
                self.anchor(s).into(),
            ])
            .expect("three tokens")
        };
        Ok((wing(Side::Left), wing(Side::Right)))
    }
}

/// Operation requires a tuple of height at least 2.
#[derive(Clone, Copy, Debug, Error, PartialEq, Eq)]
#[error("operation requires a tuple of height at least 2")]
pub struct BelowHeightTwo;

/// Validates a raw tuple; see [`GenTuple::new`].
pub fn validate_tuple(
    left: GLetter,
    left_anchor: Anchor,
    middle: Middle,
    right_anchor: Anchor,
    right: GLetter,
) -> Result<GenTuple, InvalidTuple> {
    GenTuple::new(left, left_anchor, middle, right_anchor, right)
}

pub fn height(g: GLetter) -> u32 {
    g.height()
}

pub fn resolve_sides(g: GenTuple) -> Result<WingSides, BelowHeightTwo> {
    g.sides()
}

/// Which part of a level to enumerate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LevelClass {
    E,
    D,
    All,
}

/// Tuples of height `i` in deterministic order.
///
/// Class `E` follows the recursive child order from the base tuple. Class
/// `D` is sorted by the tuple order (see [`GenTuple`]'s `Ord`). `All` is the
/// `E` list followed by the `D` list.
pub fn enumerate_level(
    i: u32,
    class: LevelClass,
    limits: &Limits,
) -> Result<Vec<GenTuple>, CapExceeded> {
    limits.check_height("enumerate level", i)?;
    match class {
        LevelClass::E => Ok(e_level(i)),
        LevelClass::D => Ok(d_level(i, limits)?.to_vec()),
        LevelClass::All => {
            let mut out = e_level(i);
            out.extend(d_level(i, limits)?.iter().copied());
            Ok(out)
        }
    }
}

fn e_level(i: u32) -> Vec<GenTuple> {
    if i == 0 {
        return Vec::new();
    }
    let mut level = vec![GenTuple::base()];
    for _ in 1..i {
        level = level
            .into_iter()
            .flat_map(|g| {
                let l = GLetter::Tuple(g);
                let c = Middle::Letter(g.left());
                let la = g.left_anchor().involute();
                let ra = g.right_anchor().involute();
                [
                    GenTuple::new(l, la, c, ra, l).expect("class E child"),
                    GenTuple::new(l, ra, c, la, l).expect("class E child"),
                ]
            })
            .collect();
    }
    level
}

fn d_cache() -> &'static Mutex<HashMap<u32, Arc<Vec<GenTuple>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<GenTuple>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn d_level(i: u32, limits: &Limits) -> Result<Arc<Vec<GenTuple>>, CapExceeded> {
    if i < 3 {
        return Ok(Arc::new(Vec::new()));
    }
    if let Some(level) = d_cache().lock().unwrap_or_else(|e| e.into_inner()).get(&i) {
        return Ok(level.clone());
    }
    let mut previous = e_level(i - 1);
    previous.extend(d_level(i - 1, limits)?.iter().copied());

    // wing tuples indexed by the entry they hold, with the side holding it
    let mut holders: HashMap<GLetter, Vec<(GenTuple, Side)>> = HashMap::new();
    for &g in &previous {
        for s in Side::BOTH {
            holders.entry(g.entry(s)).or_default().push((g, s));
        }
    }
    let mut size = 0usize;
    for &l in &previous {
        for s in Side::BOTH {
            size += holders[&l.entry(s)].iter().filter(|(r, _)| *r != l).count();
        }
    }
    if size > limits.max_level_size {
        return Err(CapExceeded::LevelSize {
            what: format!("class D level {i}"),
            size,
            limit: limits.max_level_size,
        });
    }
    let mut level = Vec::with_capacity(size);
    for &l in &previous {
        for s in Side::BOTH {
            let c = l.entry(s);
            let la = l.anchor(s).involute();
            for &(r, t) in &holders[&c] {
                if r == l {
                    continue;
                }
                let g = GenTuple::new(
                    l.into(),
                    la,
                    Middle::Letter(c),
                    r.anchor(t).involute(),
                    r.into(),
                )
                .expect("constructed class D tuple is valid");
                level.push(g);
            }
        }
    }
    level.sort();
    level.dedup();
    let level = Arc::new(level);
    d_cache()
        .lock()
        .unwrap_or_else(|e| e.into_inner())
        .insert(i, level.clone());
    Ok(level)
}

/// 1-based position of `g` inside its class level, when that level can be
/// enumerated under `limits`.
pub fn level_index(g: GenTuple, limits: &Limits) -> Option<usize> {
    match g.class() {
        TupleClass::E => g.e_index().map(|k| k as usize + 1),
        TupleClass::D => {
            let level = d_level(g.height(), limits).ok()?;
            level.binary_search(&g).ok().map(|k| k + 1)
        }
    }
}

/// The `k`-th (1-based) tuple of a class level.
pub fn level_member(
    i: u32,
    class: TupleClass,
    k: usize,
    limits: &Limits,
) -> Result<Option<GenTuple>, CapExceeded> {
    if i == 0 || k == 0 {
        return Ok(None);
    }
    limits.check_height("level alias", i)?;
    match class {
        TupleClass::E => {
            if i > 63 || (k - 1) as u64 >= 1u64 << (i - 1) {
                return Ok(None);
            }
            // walk down from the base tuple following the bits of k - 1
            let bits = (k - 1) as u64;
            let mut g = GenTuple::base();
            for depth in (0..i - 1).rev() {
                let l = GLetter::Tuple(g);
                let c = Middle::Letter(g.left());
                let la = g.left_anchor().involute();
                let ra = g.right_anchor().involute();
                g = if (bits >> depth) & 1 == 0 {
                    GenTuple::new(l, la, c, ra, l)
                } else {
                    GenTuple::new(l, ra, c, la, l)
                }
                .expect("class E child");
            }
            Ok(Some(g))
        }
        TupleClass::D => Ok(d_level(i, limits)?.get(k - 1).copied()),
    }
}

/// `ε(g)`: the letter together with everything reachable through its left
/// and right entries.
pub fn ground(g: GLetter) -> BTreeSet<GLetter> {
    let mut out = BTreeSet::new();
    let mut stack = vec![g];
    while let Some(h) = stack.pop() {
        if out.insert(h) {
            if let GLetter::Tuple(t) = h {
                stack.push(t.left());
                stack.push(t.right());
            }
        }
    }
    out
}

/// `h ⪯ g` iff `h ∈ ε(g)`.
pub fn preceq(h: GLetter, g: GLetter) -> bool {
    if h.height() > g.height() {
        return false;
    }
    let mut seen = std::collections::HashSet::new();
    let mut stack = vec![g];
    while let Some(k) = stack.pop() {
        if k == h {
            return true;
        }
        if k.height() <= h.height() || !seen.insert(k) {
            continue;
        }
        if let GLetter::Tuple(t) = k {
            stack.push(t.left());
            stack.push(t.right());
        }
    }
    false
}

fn build(l: GLetter, la: Anchor, c: GLetter, ra: Anchor, r: GLetter) -> GenTuple {
    GenTuple::new(l, la, Middle::Letter(c), ra, r).expect("named tuple is valid")
}

/// The tuples with fixed names: `gxx'`, `g2e1`, `g2e2` and `g3d1`..`g3d4`.
///
/// The `g3d*` names are bound to the displayed literals, which do not follow
/// the enumeration order of level 3.
pub fn named(name: &str) -> Option<GenTuple> {
    use Anchor::*;
    let gxx = GLetter::Tuple(GenTuple::base());
    let one = GLetter::One;
    let g2e1 = || build(gxx, One, one, X, gxx);
    let g2e2 = || build(gxx, X, one, One, gxx);
    Some(match name {
        "gxx'" => GenTuple::base(),
        "g2e1" => g2e1(),
        "g2e2" => g2e2(),
        "g3d1" => build(g2e1().into(), One, gxx, One, g2e2().into()),
        "g3d2" => build(g2e1().into(), XPrime, gxx, XPrime, g2e2().into()),
        "g3d3" => build(g2e2().into(), One, gxx, One, g2e1().into()),
        "g3d4" => build(g2e2().into(), XPrime, gxx, XPrime, g2e1().into()),
        _ => return None,
    })
}

pub const NAMES: [&str; 7] = ["gxx'", "g2e1", "g2e2", "g3d1", "g3d2", "g3d3", "g3d4"];

/// Fixed name of a tuple, if it has one.
pub fn name_of(g: GenTuple) -> Option<&'static str> {
    if g.height() > 3 {
        return None;
    }
    NAMES.into_iter().find(|n| named(n) == Some(g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use Anchor::*;

    fn n(name: &str) -> GenTuple {
        named(name).unwrap()
    }

    fn t(g: GenTuple) -> GLetter {
        GLetter::Tuple(g)
    }

    #[test]
    fn involution_table() {
        assert_eq!(X.involute(), XPrime);
        assert_eq!(One.involute(), One);
        assert_eq!(XPrime.involute(), X);
        for a in Anchor::ALL {
            assert_eq!(a.involute().involute(), a);
        }
    }

    #[test]
    fn base_tuple_validates() {
        let g = GenTuple::new(GLetter::One, One, Middle::X, XPrime, GLetter::One).unwrap();
        assert_eq!(g, GenTuple::base());
        assert_eq!(g.height(), 1);
        assert_eq!(g.class(), TupleClass::E);
        assert_eq!(
            GenTuple::new(GLetter::One, One, Middle::X, X, GLetter::One),
            Err(InvalidTuple::BaseMismatch)
        );
    }

    #[test]
    fn height_three_class_e_validates() {
        let g = GenTuple::new(
            t(n("g2e1")),
            One,
            Middle::Letter(t(GenTuple::base())),
            XPrime,
            t(n("g2e1")),
        )
        .unwrap();
        assert_eq!(g.class(), TupleClass::E);
        assert_eq!(g.height(), 3);
    }

    #[test]
    fn wrong_left_anchor_is_rejected() {
        let err = GenTuple::new(
            t(n("g2e1")),
            X,
            Middle::Letter(t(GenTuple::base())),
            One,
            t(n("g2e2")),
        )
        .unwrap_err();
        // x is not an anchor of an odd-height tuple
        assert_eq!(
            err,
            InvalidTuple::AnchorParity {
                anchor: X,
                height: 3
            }
        );
    }

    #[test]
    fn invalid_reasons() {
        let gxx = t(GenTuple::base());
        assert_eq!(
            GenTuple::new(gxx, One, Middle::Letter(GLetter::One), One, gxx),
            Err(InvalidTuple::DuplicateAnchor)
        );
        assert_eq!(
            GenTuple::new(gxx, One, Middle::Letter(gxx), X, gxx),
            Err(InvalidTuple::HeightMismatch {
                left: 1,
                middle: 1,
                right: 1
            })
        );
        assert_eq!(
            GenTuple::new(GLetter::One, One, Middle::Letter(GLetter::One), X, gxx),
            Err(InvalidTuple::WingIsOne)
        );
        let g3d1 = t(n("g3d1"));
        let g2e1 = t(n("g2e1"));
        assert_eq!(
            GenTuple::new(g3d1, One, Middle::Letter(g2e1), One, g3d1),
            Err(InvalidTuple::EqualWingsNotE)
        );
        // g3d1 holds g2e2 with anchor 1, so the left anchor must be 1
        let g2e2 = t(n("g2e2"));
        let g3d3 = t(n("g3d3"));
        assert_eq!(
            GenTuple::new(g3d1, X, Middle::Letter(g2e2), One, g3d3),
            Err(InvalidTuple::SideCondition { side: Side::Left })
        );
        assert_eq!(
            GenTuple::new(g3d1, One, Middle::Letter(g2e2), X, g3d3),
            Err(InvalidTuple::SideCondition { side: Side::Right })
        );
        assert!(GenTuple::new(g3d1, One, Middle::Letter(g2e2), One, g3d3).is_ok());
    }

    #[test]
    fn heights() {
        assert_eq!(height(GLetter::One), 0);
        assert_eq!(height(t(GenTuple::base())), 1);
        assert_eq!(height(t(n("g3d1"))), 3);
    }

    #[test]
    fn side_resolution_examples() {
        assert_eq!(
            resolve_sides(n("g2e1")),
            Ok(WingSides {
                left: Side::Left,
                right: Side::Right
            })
        );
        assert_eq!(
            resolve_sides(n("g2e2")),
            Ok(WingSides {
                left: Side::Right,
                right: Side::Left
            })
        );
        assert_eq!(
            resolve_sides(n("g3d2")),
            Ok(WingSides {
                left: Side::Right,
                right: Side::Left
            })
        );
        assert_eq!(resolve_sides(GenTuple::base()), Err(BelowHeightTwo));
    }

    #[test]
    fn level_sizes() {
        let lim = Limits::default();
        let e2 = enumerate_level(2, LevelClass::E, &lim).unwrap();
        assert_eq!(e2, vec![n("g2e1"), n("g2e2")]);
        assert_eq!(enumerate_level(3, LevelClass::D, &lim).unwrap().len(), 8);
        assert!(enumerate_level(1, LevelClass::D, &lim).unwrap().is_empty());
        assert!(enumerate_level(2, LevelClass::D, &lim).unwrap().is_empty());
        for i in 1..=7 {
            assert_eq!(
                enumerate_level(i, LevelClass::E, &lim).unwrap().len(),
                1 << (i - 1)
            );
        }
        assert_eq!(enumerate_level(4, LevelClass::D, &lim).unwrap().len(), 256);
    }

    #[test]
    fn level_caps() {
        let lim = Limits::default();
        assert!(matches!(
            enumerate_level(13, LevelClass::E, &lim),
            Err(CapExceeded::Height { .. })
        ));
        assert!(matches!(
            enumerate_level(6, LevelClass::D, &lim),
            Err(CapExceeded::LevelSize { .. })
        ));
    }

    #[test]
    fn named_level_three_positions() {
        let lim = Limits::default();
        let d3 = enumerate_level(3, LevelClass::D, &lim).unwrap();
        assert_eq!(d3[0], n("g3d1"));
        assert_eq!(level_index(n("g3d2"), &lim), Some(4));
        assert_eq!(level_index(n("g2e2"), &lim), Some(2));
        for (k, g) in d3.iter().enumerate() {
            assert_eq!(level_member(3, TupleClass::D, k + 1, &lim), Ok(Some(*g)));
        }
        let e5 = enumerate_level(5, LevelClass::E, &lim).unwrap();
        for (k, g) in e5.iter().enumerate() {
            assert_eq!(level_index(*g, &lim), Some(k + 1));
            assert_eq!(level_member(5, TupleClass::E, k + 1, &lim), Ok(Some(*g)));
        }
    }

    #[test]
    fn wings() {
        let (l, r) = n("g2e1").wing_triplets().unwrap();
        assert_eq!(l.to_string(), "1 gxx' 1");
        assert_eq!(r.to_string(), "x' gxx' x");
        let (l, r) = n("g2e2").wing_triplets().unwrap();
        assert_eq!(l.to_string(), "x' gxx' x");
        assert_eq!(r.to_string(), "1 gxx' 1");
        let (l, r) = n("g3d1").wing_triplets().unwrap();
        assert_eq!(l.to_string(), "1 g2e1 1");
        assert_eq!(r.to_string(), "1 g2e2 1");
        assert!(GenTuple::base().wing_triplets().is_err());
    }

    #[test]
    fn grounds() {
        assert_eq!(ground(GLetter::One), BTreeSet::from([GLetter::One]));
        assert_eq!(
            ground(t(GenTuple::base())),
            BTreeSet::from([GLetter::One, t(GenTuple::base())])
        );
        assert_eq!(
            ground(t(n("g3d2"))),
            BTreeSet::from([
                GLetter::One,
                t(GenTuple::base()),
                t(n("g2e1")),
                t(n("g2e2")),
                t(n("g3d2"))
            ])
        );
        assert!(preceq(t(GenTuple::base()), t(n("g3d2"))));
        assert!(preceq(t(n("g3d2")), t(n("g3d2"))));
        assert!(!preceq(t(n("g3d1")), t(n("g3d2"))));
    }

    #[test]
    fn interning_is_structural() {
        let lim = Limits::default();
        let a = enumerate_level(4, LevelClass::All, &lim).unwrap();
        let b = enumerate_level(4, LevelClass::All, &lim).unwrap();
        assert_eq!(a, b);
        let g = a[100];
        let again = GenTuple::new(
            g.left(),
            g.left_anchor(),
            g.middle(),
            g.right_anchor(),
            g.right(),
        )
        .unwrap();
        assert!(std::ptr::eq(g.0, again.0));
    }
}
