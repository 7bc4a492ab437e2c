//! The semigroup on canonical mountains.
//!
//! Every element is stored as its unique mountain, so equality of elements
//! is equality of mountains. Predicates that have both a structural
//! characterisation (gorges, hill prefixes) and a definition by products
//! report both answers in a [`Checked`].

use std::fmt;
use std::fmt::Write as _;

use thiserror::Error;

use crate::alphabet::{preceq, GLetter};
use crate::error::{CapExceeded, Limits};
use crate::landscape::{enumerate_hills, join, reverse, Direction, Landscape, Mountain, Word};
use crate::rewrite::{beta, beta2, RewriteFault, Strategy};

/// An element of the semigroup, held as its canonical mountain.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element(Mountain);

impl Element {
    pub fn one() -> Element {
        Element(Mountain::trivial())
    }

    pub fn from_word(w: &Word) -> Result<Element, RewriteFault> {
        beta(w).map(Element)
    }

    /// Mountains are already in normal form.
    pub fn from_mountain(m: Mountain) -> Element {
        Element(m)
    }

    pub fn of_letter(g: GLetter) -> Element {
        Element::from_word(&Word::single(g)).expect("β of one letter terminates")
    }

    pub fn mountain(&self) -> &Mountain {
        &self.0
    }

    pub fn landscape(&self) -> &Landscape {
        self.0.landscape()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_trivial()
    }

    pub fn peak(&self) -> GLetter {
        self.0.peak()
    }

    pub fn left_hill(&self) -> Landscape {
        self.0.left_hill()
    }

    pub fn right_hill(&self) -> Landscape {
        self.0.right_hill()
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

fn normalize(u: &Landscape) -> Landscape {
    beta2(u, Strategy::default()).expect("uplifting terminates within the step ceiling")
}

fn element_of(u: &Landscape) -> Element {
    Element(Mountain::new(normalize(u)).expect("normal form of a mountain range"))
}

/// `u ⊙ v = β₂(u * v)`.
pub fn product(u: &Element, v: &Element) -> Element {
    element_of(&join(u.landscape(), v.landscape()).expect("mountains meet at 1"))
}

pub fn product_all<'a>(items: impl IntoIterator<Item = &'a Element>) -> Element {
    items
        .into_iter()
        .fold(Element::one(), |acc, x| product(&acc, x))
}

/// The word problem: `β(w1) = β(w2)`.
pub fn equal(w1: &Word, w2: &Word) -> Result<bool, RewriteFault> {
    Ok(beta(w1)? == beta(w2)?)
}

/// `β(reverse(u))`, an inverse of `u`.
pub fn canonical_inverse(u: &Element) -> Element {
    element_of(&reverse(u.landscape()))
}

/// A canyon that rewrites to its endpoint letter.
pub fn is_gorge(w: &Landscape) -> bool {
    w.is_canyon() && normalize(w) == Landscape::single(w.sigma())
}

/// Answer of a predicate computed two independent ways.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Checked {
    /// From hills and gorges.
    pub structural: bool,
    /// From products, straight from the definition.
    pub by_definition: bool,
}

impl Checked {
    pub fn agree(&self) -> bool {
        self.structural == self.by_definition
    }

    pub fn value(&self) -> bool {
        self.structural
    }
}

fn right_left_gorge(u: &Element, v: &Element) -> bool {
    join(&u.right_hill(), &v.left_hill()).is_ok_and(|c| is_gorge(&c))
}

pub fn is_idempotent(u: &Element) -> Checked {
    Checked {
        structural: u.is_one() || right_left_gorge(u, u),
        by_definition: product(u, u) == *u,
    }
}

pub fn is_inverse_pair(u: &Element, v: &Element) -> Checked {
    let structural = if u.is_one() || v.is_one() {
        u.is_one() && v.is_one()
    } else {
        right_left_gorge(u, v) && right_left_gorge(v, u)
    };
    Checked {
        structural,
        by_definition: product_all([u, v, u]) == *u && product_all([v, u, v]) == *v,
    }
}

/// Elements sharing `v`'s left hill: `λ_l(v) * d` for every downhill `d`
/// from `κ(v)`.
pub fn r_class(v: &Element, limits: &Limits) -> Result<Vec<Element>, CapExceeded> {
    let up = v.left_hill();
    Ok(enumerate_hills(v.peak(), Direction::Down, limits)?
        .iter()
        .map(|d| Element(Mountain::new(join(&up, d).expect("meet at κ")).expect("a mountain")))
        .collect())
}

/// Elements sharing `v`'s right hill.
pub fn l_class(v: &Element, limits: &Limits) -> Result<Vec<Element>, CapExceeded> {
    let down = v.right_hill();
    Ok(enumerate_hills(v.peak(), Direction::Up, limits)?
        .iter()
        .map(|u| Element(Mountain::new(join(u, &down).expect("meet at κ")).expect("a mountain")))
        .collect())
}

/// The natural partial order `v ≤ u`.
///
/// Structurally: `v = u`, or `λ_l(u)` is a proper prefix of `λ_l(v)`,
/// `λ_r(u)` a proper suffix of `λ_r(v)`, and the canyon cut out of `v`
/// around the position of `κ(u)` is a gorge. By definition: `v = e ⊙ u`
/// for an idempotent `e` in the R-class of `v` and `v = u ⊙ f` for an
/// idempotent `f` in its L-class.
pub fn natural_leq(v: &Element, u: &Element, limits: &Limits) -> Result<Checked, CapExceeded> {
    let structural = v == u || {
        let (lu, ru) = (u.left_hill(), u.right_hill());
        let (lv, rv) = (v.left_hill(), v.right_hill());
        lu.n() < lv.n() && ru.n() < rv.n() && lu.is_prefix_of(&lv) && ru.is_suffix_of(&rv) && {
            let k = lu.n();
            let pos = rv.n() - ru.n();
            let down = rv.slice(0, pos);
            let up = lv.slice(k, lv.n());
            join(&down, &up).is_ok_and(|c| is_gorge(&c))
        }
    };
    let by_definition = r_class(v, limits)?
        .iter()
        .any(|e| product(e, e) == *e && product(e, u) == *v)
        && l_class(v, limits)?
            .iter()
            .any(|f| product(f, f) == *f && product(u, f) == *v);
    Ok(Checked {
        structural,
        by_definition,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GreenRelation {
    R,
    L,
    J,
    H,
    D,
}

impl GreenRelation {
    pub const ALL: [GreenRelation; 5] = [
        GreenRelation::R,
        GreenRelation::L,
        GreenRelation::J,
        GreenRelation::H,
        GreenRelation::D,
    ];
}

impl fmt::Display for GreenRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GreenRelation::R => "R",
            GreenRelation::L => "L",
            GreenRelation::J => "J",
            GreenRelation::H => "H",
            GreenRelation::D => "D",
        })
    }
}

/// Position of the first argument relative to the second.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Equivalent,
    StrictlyBelow,
    StrictlyAbove,
    Incomparable,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Equivalent => "equivalent",
            Verdict::StrictlyBelow => "strictly-below",
            Verdict::StrictlyAbove => "strictly-above",
            Verdict::Incomparable => "incomparable",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GreenReport {
    pub relation: GreenRelation,
    pub verdict: Verdict,
}

/// `u ≤ v` in the preorder of the relation.
pub fn green_leq(u: &Element, v: &Element, rel: GreenRelation) -> bool {
    match rel {
        GreenRelation::R => v.left_hill().is_prefix_of(&u.left_hill()),
        GreenRelation::L => v.right_hill().is_suffix_of(&u.right_hill()),
        GreenRelation::H => green_leq(u, v, GreenRelation::R) && green_leq(u, v, GreenRelation::L),
        GreenRelation::J | GreenRelation::D => preceq(v.peak(), u.peak()),
    }
}

pub fn green_compare(u: &Element, v: &Element, rel: GreenRelation) -> GreenReport {
    let verdict = match (green_leq(u, v, rel), green_leq(v, u, rel)) {
        (true, true) => Verdict::Equivalent,
        (true, false) => Verdict::StrictlyBelow,
        (false, true) => Verdict::StrictlyAbove,
        (false, false) => Verdict::Incomparable,
    };
    GreenReport {
        relation: rel,
        verdict,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoverRelation {
    R,
    L,
    J,
}

/// Whether `upper` covers `lower`: `lower` is strictly below with nothing
/// in between.
pub fn covers(lower: &Element, upper: &Element, rel: CoverRelation) -> bool {
    match rel {
        CoverRelation::R => {
            let (l, u) = (lower.left_hill(), upper.left_hill());
            l.n() == u.n() + 1 && u.is_prefix_of(&l)
        }
        CoverRelation::L => {
            let (l, u) = (lower.right_hill(), upper.right_hill());
            l.n() == u.n() + 1 && u.is_suffix_of(&l)
        }
        CoverRelation::J => match lower.peak() {
            GLetter::One => false,
            GLetter::Tuple(k) => upper.peak() == k.left() || upper.peak() == k.right(),
        },
    }
}

/// When `u ≤_R v`, an element `w` with `v ⊙ w = u`.
///
/// Writing `u = λ_l(v) * u₁`, the witness is `reverse(λ_r(v)) * u₁`.
pub fn r_witness(u: &Element, v: &Element) -> Option<Element> {
    let lv = v.left_hill();
    if !lv.is_prefix_of(&u.left_hill()) {
        return None;
    }
    let ul = u.landscape();
    let rest = ul.slice(lv.n(), ul.n());
    Some(element_of(&join(&reverse(&v.right_hill()), &rest).ok()?))
}

/// When `u ≤_L v`, an element `w` with `w ⊙ v = u`.
pub fn l_witness(u: &Element, v: &Element) -> Option<Element> {
    let rv = v.right_hill();
    if !rv.is_suffix_of(&u.right_hill()) {
        return None;
    }
    let ul = u.landscape();
    let rest = ul.slice(0, ul.n() - rv.n());
    Some(element_of(&join(&rest, &reverse(&v.left_hill())).ok()?))
}

fn check_dclass_size(g: GLetter, limits: &Limits) -> Result<(), CapExceeded> {
    limits.check_height("D-class enumeration", g.height())?;
    let size = 1u128.checked_shl(2 * g.height()).unwrap_or(u128::MAX);
    if size > limits.max_level_size as u128 {
        return Err(CapExceeded::LevelSize {
            what: "D-class enumeration".to_string(),
            size: usize::try_from(size).unwrap_or(usize::MAX),
            limit: limits.max_level_size,
        });
    }
    Ok(())
}

/// The D-class of elements with peak `g`: every uphill to `g` joined with
/// every downhill from `g`, row by row.
pub fn dclass(g: GLetter, limits: &Limits) -> Result<Vec<Element>, CapExceeded> {
    Ok(EggBox::new(g, limits)?
        .cells
        .into_iter()
        .flatten()
        .collect())
}

/// A D-class laid out with R-classes as rows and L-classes as columns.
/// Each cell is a single H-class, i.e. one element.
#[derive(Clone, Debug)]
pub struct EggBox {
    pub peak: GLetter,
    pub rows: Vec<Landscape>,
    pub columns: Vec<Landscape>,
    pub cells: Vec<Vec<Element>>,
    pub idempotent: Vec<Vec<bool>>,
}

impl EggBox {
    pub fn new(g: GLetter, limits: &Limits) -> Result<EggBox, CapExceeded> {
        check_dclass_size(g, limits)?;
        let rows = enumerate_hills(g, Direction::Up, limits)?;
        let columns = enumerate_hills(g, Direction::Down, limits)?;
        let cells: Vec<Vec<Element>> = rows
            .iter()
            .map(|u| {
                columns
                    .iter()
                    .map(|d| {
                        Element(Mountain::new(join(u, d).expect("meet at g")).expect("a mountain"))
                    })
                    .collect()
            })
            .collect();
        let idempotent = cells
            .iter()
            .map(|row| row.iter().map(|e| is_idempotent(e).structural).collect())
            .collect();
        Ok(EggBox {
            peak: g,
            rows,
            columns,
            cells,
            idempotent,
        })
    }

    /// Graphviz rendering: one HTML table, rows are R-classes, columns are
    /// L-classes, idempotents marked with `*`.
    pub fn to_dot(&self) -> String {
        let esc = |s: String| {
            s.replace('&', "&amp;")
                .replace('<', "&lt;")
                .replace('>', "&gt;")
                .replace('"', "&quot;")
        };
        let mut out = String::new();
        out.push_str("digraph eggbox {\n  node [shape=plaintext];\n");
        let _ = writeln!(
            out,
            "  label=\"D-class of {}\";",
            esc(crate::syntax::format_letter(
                self.peak,
                crate::syntax::FormatMode::Alias
            ))
            .replace('\'', "\\'")
        );
        out.push_str("  eggbox [label=<<table border=\"0\" cellborder=\"1\" cellspacing=\"0\">\n");
        for (row, flags) in self.cells.iter().zip(&self.idempotent) {
            out.push_str("    <tr>");
            for (e, &idem) in row.iter().zip(flags) {
                let mark = if idem { "* " } else { "" };
                let _ = write!(out, "<td>{}{}</td>", mark, esc(e.to_string()));
            }
            out.push_str("</tr>\n");
        }
        out.push_str("  </table>>];\n}\n");
        out
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum SandwichError {
    #[error("the {0} argument is not idempotent")]
    NotIdempotent(&'static str),
    #[error(transparent)]
    Cap(#[from] CapExceeded),
}

/// `S(e, f) = { g ∈ E : f⊙g = g = g⊙e, e⊙g⊙f = e⊙f }`.
///
/// Such a `g` is an inverse of `e⊙f` (`(ef)g(ef) = e(fge)f = ef` and
/// `g(ef)g = (ge)(fg) = g`), and inverses lie in the same D-class, so
/// searching the idempotents of the D-class of `e⊙f` is exhaustive.
pub fn sandwich(e: &Element, f: &Element, limits: &Limits) -> Result<Vec<Element>, SandwichError> {
    if !is_idempotent(e).by_definition {
        return Err(SandwichError::NotIdempotent("first"));
    }
    if !is_idempotent(f).by_definition {
        return Err(SandwichError::NotIdempotent("second"));
    }
    let ef = product(e, f);
    let mut out = Vec::new();
    for g in dclass(ef.peak(), limits)? {
        if product(&g, &g) == g
            && product(f, &g) == g
            && product(&g, e) == g
            && product_all([e, &g, f]) == ef
        {
            out.push(g);
        }
    }
    Ok(out)
}
