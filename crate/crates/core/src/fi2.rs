//! The free regular semigroup weakly generated by two idempotents `e`, `f`,
//! modelled by i-mountains over triples, and its embedding into the one
//! generator semigroup.
//!
//! Triples are read positionally: `(l, c, r)` has left entry `l`, middle
//! `c` and right entry `r`. Uplifting an i-river `h_i` builds the triple
//! `(h_{i+1}, h_i, h_{i-1})`, mirroring the 5-tuple rule with anchors
//! dropped, so that the embedding commutes with entries and products.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, Mutex, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::algebra::{product, Element};
use crate::alphabet::{named, Anchor, GLetter, GenTuple, Middle, Side, TupleClass};
use crate::error::{CapExceeded, Limits};
use crate::landscape::{
    anchored, enumerate_hills, join, random_downhill, random_uphill, Direction, Landscape,
    Mountain, Word,
};
use crate::rewrite::Strategy;

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum IKind {
    E,
    F,
    Composite { l: ITriple, c: ILetter, r: ITriple },
}

struct INode {
    id: u32,
    kind: IKind,
    height: u32,
}

/// An interned triple: a base letter `e`, `f` or a validated `(l, c, r)`.
#[derive(Clone, Copy)]
pub struct ITriple(&'static INode);

impl PartialEq for ITriple {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.0, other.0)
    }
}

impl Eq for ITriple {}

impl Hash for ITriple {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.id.hash(state)
    }
}

impl Ord for ITriple {
    /// Height, then `e < f`, then lexicographic on `(l, c, r)`.
    fn cmp(&self, other: &Self) -> Ordering {
        if self == other {
            return Ordering::Equal;
        }
        self.height()
            .cmp(&other.height())
            .then_with(|| match (self.0.kind, other.0.kind) {
                (IKind::E, _) => Ordering::Less,
                (_, IKind::E) => Ordering::Greater,
                (IKind::F, _) => Ordering::Less,
                (_, IKind::F) => Ordering::Greater,
                (
                    IKind::Composite { l, c, r },
                    IKind::Composite {
                        l: l2,
                        c: c2,
                        r: r2,
                    },
                ) => l.cmp(&l2).then(c.cmp(&c2)).then(r.cmp(&r2)),
            })
    }
}

impl PartialOrd for ITriple {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for ITriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_itriple(*self, FormatMode::Alias))
    }
}

impl fmt::Display for ITriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_itriple(*self, FormatMode::Alias))
    }
}

/// `1` or a triple.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ILetter {
    One,
    T(ITriple),
}

impl ILetter {
    pub fn height(self) -> u32 {
        match self {
            ILetter::One => 0,
            ILetter::T(t) => t.height(),
        }
    }

    pub fn as_triple(self) -> Option<ITriple> {
        match self {
            ILetter::One => None,
            ILetter::T(t) => Some(t),
        }
    }
}

impl From<ITriple> for ILetter {
    fn from(t: ITriple) -> Self {
        ILetter::T(t)
    }
}

impl fmt::Display for ILetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ILetter::One => f.write_str("1"),
            ILetter::T(t) => t.fmt(f),
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum InvalidITriple {
    #[error("a triple with entries 1 must have middle e or f")]
    BadBase,
    #[error("left and right entries must be triples of equal height")]
    WingMismatch,
    #[error("the middle entry must be two levels below the triple")]
    HeightMismatch,
    #[error("left and right entries must differ")]
    EqualWings,
    #[error("the middle entry must be an entry of both wings")]
    MiddleNotShared,
}

fn iinterner() -> &'static Mutex<HashMap<IKind, ITriple>> {
    static T: OnceLock<Mutex<HashMap<IKind, ITriple>>> = OnceLock::new();
    T.get_or_init(|| Mutex::new(HashMap::new()))
}

fn iintern(kind: IKind, height: u32) -> ITriple {
    let mut table = iinterner().lock().unwrap_or_else(|e| e.into_inner());
    if let Some(t) = table.get(&kind) {
        return *t;
    }
    let id = u32::try_from(table.len() + 1).expect("intern table overflow");
    let t = ITriple(Box::leak(Box::new(INode { id, kind, height })));
    table.insert(kind, t);
    t
}

impl ITriple {
    pub fn e() -> ITriple {
        iintern(IKind::E, 1)
    }

    pub fn f() -> ITriple {
        iintern(IKind::F, 1)
    }

    pub fn new(l: ILetter, c: ILetter, r: ILetter) -> Result<ITriple, InvalidITriple> {
        let (l, r) = match (l, r) {
            (ILetter::One, ILetter::One) => {
                return match c {
                    ILetter::T(t) if t.is_base() => Ok(t),
                    _ => Err(InvalidITriple::BadBase),
                };
            }
            (ILetter::T(l), ILetter::T(r)) if l.height() == r.height() => (l, r),
            _ => return Err(InvalidITriple::WingMismatch),
        };
        let height = l.height() + 1;
        if c.height() + 2 != height {
            return Err(InvalidITriple::HeightMismatch);
        }
        if l == r {
            return Err(InvalidITriple::EqualWings);
        }
        let holds = |t: ITriple| t.left() == c || t.right() == c;
        if !holds(l) || !holds(r) {
            return Err(InvalidITriple::MiddleNotShared);
        }
        Ok(iintern(IKind::Composite { l, c, r }, height))
    }

    pub fn height(self) -> u32 {
        self.0.height
    }

    pub fn is_base(self) -> bool {
        self.0.height == 1
    }

    pub fn left(self) -> ILetter {
        match self.0.kind {
            IKind::Composite { l, .. } => ILetter::T(l),
            _ => ILetter::One,
        }
    }

    pub fn right(self) -> ILetter {
        match self.0.kind {
            IKind::Composite { r, .. } => ILetter::T(r),
            _ => ILetter::One,
        }
    }

    /// Middle entry; `None` for `e` and `f`.
    pub fn middle(self) -> Option<ILetter> {
        match self.0.kind {
            IKind::Composite { c, .. } => Some(c),
            _ => None,
        }
    }

    pub fn entry(self, side: Side) -> ILetter {
        match side {
            Side::Left => self.left(),
            Side::Right => self.right(),
        }
    }
}

fn ilevel_cache() -> &'static Mutex<HashMap<u32, Arc<Vec<ITriple>>>> {
    static C: OnceLock<Mutex<HashMap<u32, Arc<Vec<ITriple>>>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

fn ilevel(i: u32, limits: &Limits) -> Result<Arc<Vec<ITriple>>, CapExceeded> {
    limits.check_height("triple level enumeration", i)?;
    if i == 0 {
        return Ok(Arc::new(Vec::new()));
    }
    if i == 1 {
        return Ok(Arc::new(vec![ITriple::e(), ITriple::f()]));
    }
    if let Some(l) = ilevel_cache()
        .lock()
        .unwrap_or_else(|e| e.into_inner())
        .get(&i)
    {
        return Ok(l.clone());
    }
    let prev = ilevel(i - 1, limits)?;
    let shared = |l: ITriple, r: ITriple| -> BTreeSet<ILetter> {
        [l.left(), l.right()]
            .into_iter()
            .filter(|&c| c == r.left() || c == r.right())
            .collect()
    };
    let mut size = 0usize;
    for &l in prev.iter() {
        for &r in prev.iter() {
            if l != r {
                size += shared(l, r).len();
            }
        }
    }
    if size > limits.max_level_size {
        return Err(CapExceeded::LevelSize {
            what: format!("triple level {i}"),
            size,
            limit: limits.max_level_size,
        });
    }
    let mut out = Vec::with_capacity(size);
    for &l in prev.iter() {
        for &r in prev.iter() {
            if l == r {
                continue;
            }
            for c in shared(l, r) {
                out.push(ITriple::new(l.into(), c, r.into()).expect("shared middle"));
            }
        }
    }
    out.sort();
    let out = Arc::new(out);
    ilevel_cache()
        .lock()
        .unwrap_or_else(|e| e.into_inner())
        .insert(i, out.clone());
    Ok(out)
}

/// Triples of height `i`, sorted (height, `e < f`, then `(l, c, r)`).
pub fn enumerate_ilevel(i: u32, limits: &Limits) -> Result<Vec<ITriple>, CapExceeded> {
    Ok(ilevel(i, limits)?.to_vec())
}

/// 1-based index of a triple in its level, if the level is enumerable.
pub fn ilevel_index(t: ITriple, limits: &Limits) -> Option<usize> {
    let level = ilevel(t.height(), limits).ok()?;
    level.binary_search(&t).ok().map(|k| k + 1)
}

/// The named triples `h_{2,k}` and `h_{3,k}`.
pub fn h(i: u32, k: usize) -> Option<ITriple> {
    ilevel(i, &Limits::default())
        .ok()?
        .get(k.checked_sub(1)?)
        .copied()
}

// ---------------------------------------------------------------------------
// i-landscapes

#[derive(Clone, Copy, Debug, Error, PartialEq, Eq)]
#[error("not an i-landscape: letters {position} and {} are not joined by an entry", position + 1)]
pub struct ILandscapeFault {
    pub position: usize,
}

fn ilinked(a: ILetter, b: ILetter) -> bool {
    let holds = |hi: ILetter, lo: ILetter| match hi {
        ILetter::T(t) => t.left() == lo || t.right() == lo,
        ILetter::One => false,
    };
    (b.height() == a.height() + 1 && holds(b, a)) || (a.height() == b.height() + 1 && holds(a, b))
}

/// A sequence of letters in which neighbours are joined by an entry.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ILandscape {
    letters: Vec<ILetter>,
}

impl ILandscape {
    pub fn new(letters: Vec<ILetter>) -> Result<ILandscape, ILandscapeFault> {
        assert!(!letters.is_empty(), "i-landscapes are nonempty");
        for (k, w) in letters.windows(2).enumerate() {
            if !ilinked(w[0], w[1]) {
                return Err(ILandscapeFault { position: k });
            }
        }
        Ok(ILandscape { letters })
    }

    pub fn trivial() -> ILandscape {
        ILandscape {
            letters: vec![ILetter::One],
        }
    }

    pub fn letters(&self) -> &[ILetter] {
        &self.letters
    }

    pub fn rivers(&self) -> Vec<usize> {
        (1..self.letters.len().saturating_sub(1))
            .filter(|&i| {
                let h = self.letters[i].height();
                self.letters[i - 1].height() > h && self.letters[i + 1].height() > h
            })
            .collect()
    }

    pub fn join(&self, other: &ILandscape) -> Option<ILandscape> {
        if self.letters.last() != other.letters.first() {
            return None;
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters[1..]);
        Some(ILandscape { letters })
    }
}

impl fmt::Display for ILandscape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, l) in self.letters.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            l.fmt(f)?;
        }
        Ok(())
    }
}

/// An i-landscape from `1` to `1` without i-rivers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IMountain(ILandscape);

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum NotIMountain {
    #[error(transparent)]
    Landscape(#[from] ILandscapeFault),
    #[error("an i-mountain starts and ends with 1")]
    Endpoints,
    #[error("an i-mountain has no i-rivers (found one at letter {0})")]
    River(usize),
}

impl IMountain {
    pub fn trivial() -> IMountain {
        IMountain(ILandscape::trivial())
    }

    pub fn new(l: ILandscape) -> Result<IMountain, NotIMountain> {
        if l.letters[0] != ILetter::One || *l.letters.last().expect("nonempty") != ILetter::One {
            return Err(NotIMountain::Endpoints);
        }
        if let Some(&i) = l.rivers().first() {
            return Err(NotIMountain::River(i));
        }
        Ok(IMountain(l))
    }

    pub fn from_letters(letters: Vec<ILetter>) -> Result<IMountain, NotIMountain> {
        IMountain::new(ILandscape::new(letters)?)
    }

    /// `1 h 1` for a base letter, the generator images.
    pub fn generator(t: ITriple) -> IMountain {
        IMountain::from_letters(vec![ILetter::One, t.into(), ILetter::One])
            .expect("base letters sit on 1")
    }

    pub fn landscape(&self) -> &ILandscape {
        &self.0
    }

    pub fn letters(&self) -> &[ILetter] {
        &self.0.letters
    }

    pub fn height(&self) -> u32 {
        self.letters().iter().map(|l| l.height()).max().unwrap_or(0)
    }
}

impl fmt::Display for IMountain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IUpliftOutcome {
    Inserted(ITriple),
    Deleted,
}

/// Uplifts the i-river at letter index `i`: delete `h_i h_{i+1}` when the
/// neighbours agree, otherwise replace `h_i` by `(h_{i+1}, h_i, h_{i-1})`.
pub fn iuplift(u: &ILandscape, i: usize) -> Option<(IUpliftOutcome, ILandscape)> {
    if !u.rivers().contains(&i) {
        return None;
    }
    let (prev, here, next) = (u.letters[i - 1], u.letters[i], u.letters[i + 1]);
    if prev == next {
        let mut letters = u.letters[..i].to_vec();
        letters.extend_from_slice(&u.letters[i + 2..]);
        return Some((IUpliftOutcome::Deleted, ILandscape { letters }));
    }
    let t = ITriple::new(next, here, prev).expect("river neighbours share the river letter");
    let mut letters = u.letters.clone();
    letters[i] = t.into();
    Some((IUpliftOutcome::Inserted(t), ILandscape { letters }))
}

#[derive(Clone, Copy, Debug, Error, PartialEq, Eq)]
#[error("i-normalisation exceeded the step ceiling of {ceiling}")]
pub struct IStepCeiling {
    pub ceiling: usize,
}

/// Uplifts i-rivers until none is left.
pub fn inormalize(u: &ILandscape, strategy: Strategy) -> Result<ILandscape, IStepCeiling> {
    let ceiling = u.letters.len() * u.letters.len() * 4;
    let mut rng = match strategy {
        Strategy::Random(s) => Some(ChaCha8Rng::seed_from_u64(s)),
        _ => None,
    };
    let mut cur = u.clone();
    for _ in 0..=ceiling {
        let rivers = cur.rivers();
        if rivers.is_empty() {
            return Ok(cur);
        }
        let i = match strategy {
            Strategy::Leftmost => rivers[0],
            Strategy::LowestFirst => *rivers
                .iter()
                .min_by_key(|&&i| (cur.letters[i].height(), i))
                .expect("nonempty"),
            Strategy::Random(_) => {
                let rng = rng.as_mut().expect("seeded");
                rivers[rng.gen_range(0..rivers.len())]
            }
        };
        cur = iuplift(&cur, i).expect("picked a river").1;
    }
    Err(IStepCeiling { ceiling })
}

/// The product of i-mountains.
pub fn iproduct(u: &IMountain, v: &IMountain) -> IMountain {
    let joined = u.0.join(&v.0).expect("i-mountains meet at 1");
    let nf = inormalize(&joined, Strategy::default()).expect("i-uplifting terminates");
    IMountain::new(nf).expect("normal form of an i-mountain range")
}

// ---------------------------------------------------------------------------
// the embedding

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum EmbeddingFault {
    #[error("{0} is outside the domain of the map")]
    Domain(String),
    #[error("no unique anchor joins letters {0} and {1}")]
    Anchor(String, String),
    #[error("the image is not well formed: {0}")]
    Image(String),
}

fn g3_names() -> [GenTuple; 4] {
    ["g3d1", "g3d2", "g3d3", "g3d4"].map(|n| named(n).expect("named"))
}

/// Membership in `G°`: `g_xx'`, the class `E` tuples of height 2, the
/// four named tuples of height 3, and above that class `D` tuples whose
/// wings are again in `G°`.
pub fn in_gcirc(g: GenTuple) -> bool {
    match g.height() {
        1 => true,
        2 => g.class() == TupleClass::E,
        3 => g3_names().contains(&g),
        _ => {
            g.class() == TupleClass::D
                && [g.left(), g.right()]
                    .into_iter()
                    .all(|w| w.as_tuple().is_some_and(in_gcirc))
        }
    }
}

fn letter_in_gcirc(l: GLetter) -> bool {
    match l {
        GLetter::One => true,
        GLetter::Tuple(g) => in_gcirc(g),
    }
}

/// `G°` of height `i`, sorted.
pub fn gcirc_level(i: u32, limits: &Limits) -> Result<Vec<GenTuple>, CapExceeded> {
    limits.check_height("G° enumeration", i)?;
    Ok(match i {
        0 => Vec::new(),
        1 => vec![GenTuple::base()],
        2 => vec![named("g2e1").expect("named"), named("g2e2").expect("named")],
        3 => {
            let mut v = g3_names().to_vec();
            v.sort();
            v
        }
        _ => {
            let prev = gcirc_level(i - 1, limits)?;
            let mut out = Vec::new();
            for &l in &prev {
                for &r in &prev {
                    if l == r {
                        continue;
                    }
                    for s in Side::BOTH {
                        for t in Side::BOTH {
                            if l.entry(s) != r.entry(t) {
                                continue;
                            }
                            if let Ok(g) = GenTuple::new(
                                l.into(),
                                l.anchor(s).involute(),
                                Middle::Letter(l.entry(s)),
                                r.anchor(t).involute(),
                                r.into(),
                            ) {
                                out.push(g);
                            }
                        }
                    }
                }
                if out.len() > limits.max_level_size {
                    return Err(CapExceeded::LevelSize {
                        what: format!("G° level {i}"),
                        size: out.len(),
                        limit: limits.max_level_size,
                    });
                }
            }
            out.sort();
            out.dedup();
            out
        }
    })
}

/// Membership in `M°`: letters in `G° ∪ {1}` and every `g_xx'` flanked by
/// mutually inverse anchors. The trivial mountain is included as the
/// identity.
pub fn in_mcirc(u: &Mountain) -> bool {
    let l = u.landscape();
    l.letters().iter().enumerate().all(|(i, &g)| {
        letter_in_gcirc(g) && (g.height() != 1 || l.anchors()[i] == l.anchors()[i - 1].involute())
    })
}

/// `φ` on tuples of `G°` of height at least 2.
pub fn phi_letter(g: GenTuple) -> Result<ITriple, EmbeddingFault> {
    if g.height() < 2 || !in_gcirc(g) {
        return Err(EmbeddingFault::Domain(g.to_string()));
    }
    match g.height() {
        2 => {
            let k = if Some(g) == named("g2e1") { 1 } else { 2 };
            Ok(h(2, k).expect("level 2"))
        }
        3 => {
            let k = g3_names().iter().position(|&n| n == g).expect("in G°_3") + 1;
            Ok(h(3, k).expect("level 3"))
        }
        _ => {
            let part = |l: GLetter| match l {
                GLetter::Tuple(t) => phi_letter(t).map(ILetter::T),
                GLetter::One => Err(EmbeddingFault::Domain(g.to_string())),
            };
            let c = g.middle_letter().expect("height at least 2");
            ITriple::new(part(g.left())?, part(c)?, part(g.right())?)
                .map_err(|e| EmbeddingFault::Image(e.to_string()))
        }
    }
}

/// `ψ` on triples of height at least 2.
pub fn psi_letter(t: ITriple) -> Result<GenTuple, EmbeddingFault> {
    match t.height() {
        0 | 1 => Err(EmbeddingFault::Domain(t.to_string())),
        2 => Ok(named(if Some(t) == h(2, 1) { "g2e1" } else { "g2e2" }).expect("named")),
        3 => {
            let k = (1..=4)
                .find(|&k| h(3, k) == Some(t))
                .expect("level 3 has four triples");
            Ok(g3_names()[k - 1])
        }
        _ => {
            let part = |l: ILetter| match l {
                ILetter::T(x) => psi_letter(x),
                ILetter::One => Err(EmbeddingFault::Domain(t.to_string())),
            };
            let (l, c, r) = (
                part(t.left())?,
                part(t.middle().expect("composite"))?,
                part(t.right())?,
            );
            // the anchor a with a' = the anchor of l at the side holding c
            let anchor_towards = |w: GenTuple| -> Result<Anchor, EmbeddingFault> {
                let mut found: Vec<Anchor> = Side::BOTH
                    .into_iter()
                    .filter(|&s| w.entry(s) == GLetter::Tuple(c))
                    .map(|s| w.anchor(s).involute())
                    .collect();
                found.dedup();
                match found.as_slice() {
                    [a] => Ok(*a),
                    _ => Err(EmbeddingFault::Anchor(w.to_string(), c.to_string())),
                }
            };
            GenTuple::new(
                l.into(),
                anchor_towards(l)?,
                Middle::Letter(c.into()),
                anchor_towards(r)?,
                r.into(),
            )
            .map_err(|e| EmbeddingFault::Image(e.to_string()))
        }
    }
}

/// `φ̄`: letters through `φ`, `1 g_xx' 1 ↦ e`, `x' g_xx' x ↦ f`, anchors
/// dropped.
pub fn phi_mountain(u: &Mountain) -> Result<IMountain, EmbeddingFault> {
    if !in_mcirc(u) {
        return Err(EmbeddingFault::Domain(u.to_string()));
    }
    let l = u.landscape();
    let mut letters = Vec::with_capacity(l.letters().len());
    for (i, &g) in l.letters().iter().enumerate() {
        letters.push(match g {
            GLetter::One => ILetter::One,
            GLetter::Tuple(t) if t.is_base() => match l.anchors()[i - 1] {
                Anchor::One => ITriple::e().into(),
                _ => ITriple::f().into(),
            },
            GLetter::Tuple(t) => phi_letter(t)?.into(),
        });
    }
    IMountain::from_letters(letters).map_err(|e| EmbeddingFault::Image(e.to_string()))
}

/// `ψ̄`: letters through `ψ`, `e ↦ 1 g_xx' 1`, `f ↦ x' g_xx' x`, and the
/// unique joining anchor between two letters of height at least 2.
pub fn psi_mountain(v: &IMountain) -> Result<Mountain, EmbeddingFault> {
    let src = v.letters();
    let mut letters = Vec::with_capacity(src.len());
    for &h in src {
        letters.push(match h {
            ILetter::One => GLetter::One,
            ILetter::T(t) if t.is_base() => GLetter::Tuple(GenTuple::base()),
            ILetter::T(t) => GLetter::Tuple(psi_letter(t)?),
        });
    }
    let flank = |h: ILetter| match h {
        ILetter::T(t) if t == ITriple::e() => Some((Anchor::One, Anchor::One)),
        ILetter::T(t) if t == ITriple::f() => Some((Anchor::XPrime, Anchor::X)),
        _ => None,
    };
    let mut anchors = Vec::with_capacity(src.len().saturating_sub(1));
    for k in 1..src.len() {
        let a = if let Some((_, after)) = flank(src[k - 1]) {
            after
        } else if let Some((before, _)) = flank(src[k]) {
            before
        } else {
            let fits: Vec<Anchor> = Anchor::ALL
                .into_iter()
                .filter(|&a| anchored(letters[k - 1], a, letters[k]))
                .collect();
            match fits.as_slice() {
                [a] => *a,
                _ => {
                    return Err(EmbeddingFault::Anchor(
                        src[k - 1].to_string(),
                        src[k].to_string(),
                    ))
                }
            }
        };
        anchors.push(a);
    }
    let land =
        Landscape::new(letters, anchors).map_err(|e| EmbeddingFault::Image(e.to_string()))?;
    let m = Mountain::new(land).map_err(|e| EmbeddingFault::Image(e.to_string()))?;
    if !in_mcirc(&m) {
        return Err(EmbeddingFault::Image(format!("{m} is not in M°")));
    }
    Ok(m)
}

/// `ḡ`: `[g]` for even height and for odd height `2n+1` whose middle chain
/// `g^{c^{n-1}}` is `g3d1` or `g3d3`; `[x' g x]` otherwise.
pub fn gbar(g: GenTuple) -> Result<Element, EmbeddingFault> {
    if g.height() < 2 || !in_gcirc(g) {
        return Err(EmbeddingFault::Domain(g.to_string()));
    }
    let plain = if g.height().is_multiple_of(2) {
        true
    } else {
        let n = (g.height() - 1) / 2;
        let mut cur = g;
        for _ in 1..n {
            cur = cur
                .middle_letter()
                .and_then(GLetter::as_tuple)
                .expect("odd height at least 5 has a tuple middle");
        }
        cur == named("g3d1").expect("named") || cur == named("g3d3").expect("named")
    };
    let word = if plain {
        Word::single(g)
    } else {
        Word::from_tokens(vec![Anchor::XPrime.into(), g.into(), Anchor::X.into()])
            .expect("nonempty")
    };
    let e = Element::from_word(&word).map_err(|e| EmbeddingFault::Image(e.to_string()))?;
    if !in_mcirc(e.mountain()) {
        return Err(EmbeddingFault::Image(format!("{e} is not in M°")));
    }
    Ok(e)
}

/// Every mountain of `M°` whose peak has height at most `max_height`.
pub fn enumerate_mcirc(max_height: u32, limits: &Limits) -> Result<Vec<Mountain>, CapExceeded> {
    let mut out = vec![Mountain::trivial()];
    for i in 1..=max_height {
        for g in gcirc_level(i, limits)? {
            let ups = enumerate_hills(g.into(), Direction::Up, limits)?;
            let downs = enumerate_hills(g.into(), Direction::Down, limits)?;
            for u in &ups {
                for d in &downs {
                    let m = Mountain::new(join(u, d).expect("meet at g")).expect("a mountain");
                    if in_mcirc(&m) {
                        out.push(m);
                    }
                }
            }
        }
    }
    Ok(out)
}

fn iuphills(t: ILetter) -> Vec<Vec<ILetter>> {
    let ILetter::T(x) = t else {
        return vec![vec![ILetter::One]];
    };
    let mut entries = vec![x.left()];
    if x.right() != x.left() {
        entries.push(x.right());
    }
    let mut out = Vec::new();
    for e in entries {
        for mut h in iuphills(e) {
            h.push(t);
            out.push(h);
        }
    }
    out
}

/// Every i-mountain whose peak has height at most `max_height`.
pub fn enumerate_imountains(
    max_height: u32,
    limits: &Limits,
) -> Result<Vec<IMountain>, CapExceeded> {
    let mut out = vec![IMountain::trivial()];
    for i in 1..=max_height {
        for t in enumerate_ilevel(i, limits)? {
            let ups = iuphills(t.into());
            for u in &ups {
                for d in &ups {
                    let mut letters = u.clone();
                    letters.extend(d.iter().rev().skip(1));
                    out.push(IMountain::from_letters(letters).expect("an i-mountain"));
                }
            }
        }
    }
    Ok(out)
}

/// A random mountain of `M°` with peak in `G°` of height at most
/// `max_height` (rejection sampling over random hills).
pub fn random_mcirc<R: Rng + ?Sized>(pool: &[GenTuple], rng: &mut R) -> Mountain {
    loop {
        let g: GLetter = pool[rng.gen_range(0..pool.len())].into();
        let m = Mountain::new(
            join(&random_uphill(g, rng), &random_downhill(g, rng)).expect("meet at g"),
        )
        .expect("a mountain");
        if in_mcirc(&m) {
            return m;
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EmbeddingReport {
    pub pass: bool,
    /// M° mountains checked for `ψ̄ ∘ φ̄ = id`.
    pub mountains: usize,
    /// i-mountains checked for `φ̄ ∘ ψ̄ = id`.
    pub imountains: usize,
    /// Sampled pairs checked for the homomorphism and closure laws.
    pub pairs: usize,
    pub failures: Vec<String>,
}

/// Checks that `φ̄` is a bijection onto the i-mountains (exhaustively up
/// to height `min(max_height, 3)`) and a homomorphism on `samples` random
/// pairs of `M°` up to `max_height`, with `M°` closed under products.
pub fn check_embedding(
    max_height: u32,
    samples: usize,
    seed: u64,
    limits: &Limits,
) -> Result<EmbeddingReport, CapExceeded> {
    let mut report = EmbeddingReport::default();
    let exhaustive = max_height.min(3);
    let ms = enumerate_mcirc(exhaustive, limits)?;
    let mut images = BTreeSet::new();
    for m in &ms {
        report.mountains += 1;
        match phi_mountain(m).and_then(|v| {
            images.insert(v.clone());
            psi_mountain(&v)
        }) {
            Ok(back) if back == *m => {}
            Ok(back) => report.failures.push(format!("ψ̄φ̄({m}) = {back}")),
            Err(e) => report.failures.push(format!("{m}: {e}")),
        }
    }
    if images.len() != ms.len() {
        report.failures.push(format!(
            "φ̄ is not injective: {} images of {} mountains",
            images.len(),
            ms.len()
        ));
    }
    for v in enumerate_imountains(exhaustive, limits)? {
        report.imountains += 1;
        match psi_mountain(&v).and_then(|m| phi_mountain(&m)) {
            Ok(back) if back == v => {}
            Ok(back) => report.failures.push(format!("φ̄ψ̄({v}) = {back}")),
            Err(e) => report.failures.push(format!("{v}: {e}")),
        }
    }
    if report.imountains != report.mountains {
        report.failures.push(format!(
            "{} M° mountains but {} i-mountains",
            report.mountains, report.imountains
        ));
    }

    let mut pool = Vec::new();
    for i in 1..=max_height {
        pool.extend(gcirc_level(i, limits)?);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        if pool.is_empty() {
            break;
        }
        let u = random_mcirc(&pool, &mut rng);
        let v = random_mcirc(&pool, &mut rng);
        report.pairs += 1;
        for x in [&u, &v] {
            match phi_mountain(x).and_then(|i| psi_mountain(&i)) {
                Ok(back) if back == *x => {}
                other => report.failures.push(format!("ψ̄φ̄({x}) = {other:?}")),
            }
        }
        let uv = product(
            &Element::from_mountain(u.clone()),
            &Element::from_mountain(v.clone()),
        );
        if !in_mcirc(uv.mountain()) {
            report.failures.push(format!("{u} ⊙ {v} = {uv} leaves M°"));
            continue;
        }
        let lhs = phi_mountain(uv.mountain());
        let rhs = phi_mountain(&u).and_then(|a| Ok(iproduct(&a, &phi_mountain(&v)?)));
        match (lhs, rhs) {
            (Ok(a), Ok(b)) if a == b => {}
            (a, b) => report
                .failures
                .push(format!("φ̄({u} ⊙ {v}): {a:?} vs {b:?}")),
        }
    }
    report.pass = report.failures.is_empty();
    Ok(report)
}

// ---------------------------------------------------------------------------
// i-word grammar:  token := "1" | "e" | "f" | "(" item "," item "," item ")"
//                         | "h{" i "." k "}"

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum IParseError {
    #[error("empty input")]
    Empty,
    #[error("syntax error at byte {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("invalid triple at byte {pos}: {reason}")]
    InvalidTriple { pos: usize, reason: InvalidITriple },
    #[error("unknown alias `{name}` at byte {pos}")]
    UnknownAlias { pos: usize, name: String },
    #[error(transparent)]
    Cap(#[from] CapExceeded),
}

pub use crate::syntax::FormatMode;

pub fn parse_iword(text: &str) -> Result<Vec<ILetter>, IParseError> {
    parse_iword_with(text, &Limits::default())
}

pub fn parse_iword_with(text: &str, limits: &Limits) -> Result<Vec<ILetter>, IParseError> {
    let mut p = IParser {
        text,
        pos: 0,
        limits,
    };
    let mut out = Vec::new();
    loop {
        p.skip_ws();
        if p.pos >= text.len() {
            break;
        }
        out.push(p.item(0)?);
        if p.pos < text.len() && !p.rest().starts_with(char::is_whitespace) {
            return Err(p.syntax("expected whitespace between tokens"));
        }
    }
    if out.is_empty() {
        return Err(IParseError::Empty);
    }
    Ok(out)
}

struct IParser<'a> {
    text: &'a str,
    pos: usize,
    limits: &'a Limits,
}

impl<'a> IParser<'a> {
    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn skip_ws(&mut self) {
        let r = self.rest();
        self.pos += r.len() - r.trim_start().len();
    }

    fn syntax(&self, message: &str) -> IParseError {
        IParseError::Syntax {
            pos: self.pos,
            message: message.to_string(),
        }
    }

    fn eat(&mut self, c: char) -> Result<(), IParseError> {
        if self.rest().starts_with(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.syntax(&format!("expected `{c}`")))
        }
    }

    fn word_at(&self) -> &'a str {
        let r = self.rest();
        let end = r
            .find(|c: char| c.is_whitespace() || matches!(c, '(' | ')' | ','))
            .unwrap_or(r.len());
        &r[..end]
    }

    fn item(&mut self, depth: u32) -> Result<ILetter, IParseError> {
        if depth >= self.limits.max_height {
            return Err(CapExceeded::Height {
                what: "triple literal nesting".to_string(),
                height: depth + 1,
                limit: self.limits.max_height,
            }
            .into());
        }
        let start = self.pos;
        if self.rest().starts_with('(') {
            self.pos += 1;
            let l = self.item(depth + 1)?;
            self.eat(',')?;
            let c = self.item(depth + 1)?;
            self.eat(',')?;
            let r = self.item(depth + 1)?;
            self.eat(')')?;
            let t = ITriple::new(l, c, r)
                .map_err(|reason| IParseError::InvalidTriple { pos: start, reason })?;
            self.limits.check_height("triple literal", t.height())?;
            return Ok(t.into());
        }
        let w = self.word_at();
        let letter = match w {
            "" => return Err(self.syntax("expected a token")),
            "1" => ILetter::One,
            "e" => ITriple::e().into(),
            "f" => ITriple::f().into(),
            _ => {
                let unknown = || IParseError::UnknownAlias {
                    pos: start,
                    name: w.to_string(),
                };
                let inner = w
                    .strip_prefix("h{")
                    .and_then(|s| s.strip_suffix('}'))
                    .ok_or_else(unknown)?;
                let (i, k) = inner.split_once('.').ok_or_else(unknown)?;
                let (Ok(i), Ok(k)) = (i.parse::<u32>(), k.parse::<usize>()) else {
                    return Err(unknown());
                };
                if i == 0 || k == 0 {
                    return Err(unknown());
                }
                let level = ilevel(i, self.limits)?;
                ILetter::T(*level.get(k - 1).ok_or_else(unknown)?)
            }
        };
        self.pos += w.len();
        Ok(letter)
    }
}

pub fn format_itriple(t: ITriple, mode: FormatMode) -> String {
    match t.0.kind {
        IKind::E => return "e".to_string(),
        IKind::F => return "f".to_string(),
        IKind::Composite { .. } => {}
    }
    if mode == FormatMode::Alias && t.height() <= 6 {
        let lim = Limits {
            max_height: u32::MAX,
            ..Limits::default()
        };
        if let Some(k) = ilevel_index(t, &lim) {
            return format!("h{{{}.{}}}", t.height(), k);
        }
    }
    let part = |l: ILetter| match l {
        ILetter::One => "1".to_string(),
        ILetter::T(x) => format_itriple(x, mode),
    };
    format!(
        "({},{},{})",
        part(t.left()),
        part(t.middle().expect("composite")),
        part(t.right())
    )
}

pub fn format_iword(letters: &[ILetter], mode: FormatMode) -> String {
    letters
        .iter()
        .map(|&l| match l {
            ILetter::One => "1".to_string(),
            ILetter::T(t) => format_itriple(t, mode),
        })
        .collect::<Vec<_>>()
        .join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_word;

    fn lim() -> Limits {
        Limits::default()
    }

    fn t(s: &str) -> ITriple {
        parse_iword(s).unwrap()[0].as_triple().unwrap()
    }

    fn im(s: &str) -> IMountain {
        IMountain::from_letters(parse_iword(s).unwrap()).unwrap()
    }

    fn mountain(s: &str) -> Mountain {
        Mountain::from_word(&parse_word(s).unwrap()).unwrap()
    }

    #[test]
    fn levels() {
        let (e, f) = (ITriple::e(), ITriple::f());
        assert_eq!(enumerate_ilevel(1, &lim()).unwrap(), vec![e, f]);
        let h2 = enumerate_ilevel(2, &lim()).unwrap();
        assert_eq!(h2, vec![t("(e,1,f)"), t("(f,1,e)")]);
        let h3 = enumerate_ilevel(3, &lim()).unwrap();
        assert_eq!(
            h3,
            vec![
                t("(h{2.1},e,h{2.2})"),
                t("(h{2.1},f,h{2.2})"),
                t("(h{2.2},e,h{2.1})"),
                t("(h{2.2},f,h{2.1})"),
            ]
        );
        assert_eq!(enumerate_ilevel(4, &lim()).unwrap().len(), 24);
        assert_eq!(t("(1,e,1)"), e);
    }

    #[test]
    fn invalid_triples() {
        assert!(matches!(
            parse_iword("(e,1,e)"),
            Err(IParseError::InvalidTriple {
                reason: InvalidITriple::EqualWings,
                ..
            })
        ));
        assert!(matches!(
            parse_iword("(e,e,f)"),
            Err(IParseError::InvalidTriple {
                reason: InvalidITriple::HeightMismatch,
                ..
            })
        ));
        assert!(matches!(
            parse_iword("h{2.3}"),
            Err(IParseError::UnknownAlias { .. })
        ));
        assert!(matches!(parse_iword(""), Err(IParseError::Empty)));
    }

    #[test]
    fn products() {
        let (e, f) = (im("1 e 1"), im("1 f 1"));
        // positional reading: the inserted triple is (f,1,e)
        assert_eq!(iproduct(&e, &f), im("1 e h{2.2} f 1"));
        assert_eq!(iproduct(&f, &e), im("1 f h{2.1} e 1"));
        assert_eq!(iproduct(&e, &e), e);
        assert_eq!(iproduct(&e, &IMountain::trivial()), e);
    }

    #[test]
    fn iconfluence() {
        let pool = enumerate_imountains(3, &lim()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let a = &pool[rng.gen_range(0..pool.len())];
            let b = &pool[rng.gen_range(0..pool.len())];
            let c = &pool[rng.gen_range(0..pool.len())];
            let j = a.0.join(&b.0).unwrap().join(&c.0).unwrap();
            let reference = inormalize(&j, Strategy::Leftmost).unwrap();
            for s in 0..10 {
                assert_eq!(inormalize(&j, Strategy::Random(s)).unwrap(), reference);
            }
        }
    }

    #[test]
    fn gcirc_membership() {
        assert!(in_gcirc(named("g3d2").unwrap()));
        assert!(in_gcirc(GenTuple::base()));
        for g in
            crate::alphabet::enumerate_level(3, crate::alphabet::LevelClass::E, &lim()).unwrap()
        {
            assert!(!in_gcirc(g));
        }
        for i in 1..=5 {
            let level = gcirc_level(i, &lim()).unwrap();
            assert!(level.iter().all(|&g| in_gcirc(g)));
            let all = crate::alphabet::enumerate_level(i, crate::alphabet::LevelClass::All, &lim())
                .unwrap();
            let filtered: Vec<_> = all.into_iter().filter(|&g| in_gcirc(g)).collect();
            let mut level_sorted = level.clone();
            level_sorted.sort();
            assert_eq!(filtered, level_sorted, "level {i}");
            if i >= 2 {
                assert_eq!(level.len(), enumerate_ilevel(i, &lim()).unwrap().len());
            }
            for g in level {
                assert!(crate::alphabet::ground(g.into())
                    .into_iter()
                    .all(letter_in_gcirc));
            }
        }
    }

    #[test]
    fn mcirc_membership() {
        let b1 = crate::rewrite::beta1_letter(named("g3d2").unwrap().into());
        assert!(!in_mcirc(&b1));
        let m = crate::rewrite::beta(&parse_word("x' g3d2 x").unwrap()).unwrap();
        assert_eq!(m.to_string(), "1 x' gxx' x g2e1 x' g3d2 x g2e2 x' gxx' x 1");
        assert!(in_mcirc(&m));
        assert!(in_mcirc(&mountain("1 1 gxx' 1 1")));
    }

    #[test]
    fn letter_maps() {
        assert_eq!(phi_letter(named("g2e1").unwrap()), Ok(h(2, 1).unwrap()));
        assert_eq!(phi_letter(named("g3d2").unwrap()), Ok(h(3, 2).unwrap()));
        assert!(phi_letter(GenTuple::base()).is_err());
        for i in 2..=5 {
            for g in gcirc_level(i, &lim()).unwrap() {
                let p = phi_letter(g).unwrap();
                assert_eq!(psi_letter(p), Ok(g));
                // entries commute with φ
                for (ge, pe) in [(g.left(), p.left()), (g.right(), p.right())] {
                    if let (GLetter::Tuple(x), ILetter::T(y)) = (ge, pe) {
                        if x.height() >= 2 {
                            assert_eq!(phi_letter(x), Ok(y));
                        }
                    }
                }
                if let (Some(GLetter::Tuple(x)), Some(ILetter::T(y))) =
                    (g.middle_letter(), p.middle())
                {
                    if x.height() >= 2 {
                        assert_eq!(phi_letter(x), Ok(y));
                    }
                }
            }
        }
    }

    #[test]
    fn mountain_maps() {
        assert_eq!(phi_mountain(&mountain("1 1 gxx' 1 1")), Ok(im("1 e 1")));
        assert_eq!(phi_mountain(&mountain("1 x' gxx' x 1")), Ok(im("1 f 1")));
        assert_eq!(psi_mountain(&im("1 f 1")), Ok(mountain("1 x' gxx' x 1")));
        assert!(phi_mountain(&mountain("1 1 gxx' x 1")).is_err());
        assert_eq!(phi_mountain(&Mountain::trivial()), Ok(IMountain::trivial()));
    }

    #[test]
    fn gbar_cases() {
        let g2e1 = named("g2e1").unwrap();
        assert_eq!(gbar(g2e1).unwrap(), Element::of_letter(g2e1.into()));
        let g3d2 = named("g3d2").unwrap();
        assert_eq!(
            gbar(g3d2).unwrap(),
            Element::from_word(&parse_word("x' g3d2 x").unwrap()).unwrap()
        );
        let g3d1 = named("g3d1").unwrap();
        assert_eq!(gbar(g3d1).unwrap(), Element::of_letter(g3d1.into()));
        for i in 2..=5 {
            for g in gcirc_level(i, &lim()).unwrap() {
                assert!(in_mcirc(gbar(g).unwrap().mountain()));
            }
        }
    }

    #[test]
    fn smallest_pair() {
        let u = crate::rewrite::beta1(&parse_word("x x'").unwrap());
        let v = crate::rewrite::beta1(&parse_word("x' x").unwrap());
        let (u, v) = (
            Element::from_mountain(
                Mountain::new(crate::rewrite::beta2(&u, Strategy::default()).unwrap()).unwrap(),
            ),
            Element::from_mountain(
                Mountain::new(crate::rewrite::beta2(&v, Strategy::default()).unwrap()).unwrap(),
            ),
        );
        let (a, b) = (
            phi_mountain(u.mountain()).unwrap(),
            phi_mountain(v.mountain()).unwrap(),
        );
        assert_eq!(a, im("1 e 1"));
        assert_eq!(b, im("1 f 1"));
        assert_eq!(
            phi_mountain(product(&u, &v).mountain()).unwrap(),
            iproduct(&a, &b)
        );
    }

    #[test]
    fn embedding_report() {
        let r = check_embedding(3, 200, 1, &lim()).unwrap();
        assert!(r.pass, "{:?}", r.failures);
        assert!(r.mountains > 1);
        let r = check_embedding(5, 100, 3, &lim()).unwrap();
        assert!(r.pass, "{:?}", r.failures);
        let r = check_embedding(0, 10, 0, &lim()).unwrap();
        assert!(r.pass);
        assert_eq!(r.mountains, 1);
    }

    #[test]
    fn iword_round_trip() {
        for i in 1..=4 {
            for x in enumerate_ilevel(i, &lim()).unwrap() {
                for mode in [FormatMode::Alias, FormatMode::Expanded] {
                    let s = format_itriple(x, mode);
                    assert_eq!(parse_iword(&s).unwrap(), vec![ILetter::T(x)], "{s}");
                }
            }
        }
    }
}
