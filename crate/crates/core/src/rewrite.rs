//! Canonical forms: `β₁` expands words into mountain ranges, `β₂` uplifts
//! rivers until none is left, and `β = β₂ ∘ β₁`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::alphabet::{Anchor, GLetter, GToken, GenTuple, Middle};
use crate::landscape::{join, Landscape, Mountain, Word};

fn mountain_of(letters: Vec<GLetter>, anchors: Vec<Anchor>) -> Mountain {
    Mountain::new(Landscape::new_unchecked(letters, anchors)).expect("β₁ builds mountains")
}

/// `β₁` on a single token.
pub fn beta1_letter(h: GToken) -> Mountain {
    use Anchor::*;
    let gxx = GLetter::Tuple(GenTuple::base());
    let one = GLetter::One;
    let g = match h {
        GToken::Anchor(One) => return Mountain::trivial(),
        GToken::Anchor(X) => return mountain_of(vec![one, gxx, one], vec![One, X]),
        GToken::Anchor(XPrime) => return mountain_of(vec![one, gxx, one], vec![XPrime, One]),
        GToken::Tuple(g) if g.is_base() => {
            return mountain_of(vec![one, gxx, one], vec![One, One]);
        }
        GToken::Tuple(g) => g,
    };

    // uphill: blocks  c (la)' l la  prepended while walking down the middle chain
    let mut up_letters = vec![GLetter::Tuple(g)];
    let mut up_anchors = Vec::new();
    let mut cur = g;
    loop {
        let c = cur.middle_letter().expect("height at least 2");
        up_letters.extend([cur.left(), c]);
        up_anchors.extend([cur.left_anchor(), cur.left_anchor().involute()]);
        match c {
            GLetter::Tuple(t) if t.height() >= 2 => cur = t,
            _ => break,
        }
    }
    // downhill: blocks  (ra)' r ra c  appended along the same chain
    let mut down_letters = Vec::new();
    let mut down_anchors = Vec::new();
    let mut cur = g;
    loop {
        let c = cur.middle_letter().expect("height at least 2");
        down_letters.extend([cur.right(), c]);
        down_anchors.extend([cur.right_anchor().involute(), cur.right_anchor()]);
        match c {
            GLetter::Tuple(t) if t.height() >= 2 => cur = t,
            _ => break,
        }
    }
    up_letters.reverse();
    up_anchors.reverse();
    let mut letters = up_letters;
    let mut anchors = up_anchors;
    letters.extend(down_letters);
    anchors.extend(down_anchors);
    if g.height() % 2 == 1 {
        // the chain stops at g_xx'; close it with 1 1 on both sides
        letters.insert(0, one);
        anchors.insert(0, One);
        letters.push(one);
        anchors.push(One);
    }
    mountain_of(letters, anchors)
}

/// `β₁(h₀ … h_k) = β₁(h₀) * … * β₁(h_k)`, a mountain range.
pub fn beta1(w: &Word) -> Landscape {
    let mut out = Landscape::trivial();
    for &t in w.tokens() {
        out = join(&out, beta1_letter(t).landscape()).expect("mountains start and end at 1");
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UpliftOutcome {
    /// The river was replaced by this tuple.
    Inserted(GenTuple),
    /// The river and its right neighbour were removed with their anchors.
    Deleted,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UpliftStep {
    pub input: Landscape,
    /// Letter index of the uplifted river.
    pub river: usize,
    pub outcome: UpliftOutcome,
    pub output: Landscape,
}

#[derive(Clone, Copy, Debug, Error, PartialEq, Eq)]
#[error("letter {0} is not a river")]
pub struct NotARiver(pub usize);

/// Uplifts the river at letter index `i`.
///
/// With neighbours `g_{i-1} a_i g_i a_{i+1} g_{i+1}` the candidate tuple is
/// `(g_{i+1}, a_{i+1}', g_i, a_i, g_{i-1})`. When it is not a generator
/// (equal neighbours with mutually inverse anchors) the segment
/// `a_i g_i a_{i+1} g_{i+1}` is deleted instead.
pub fn uplift(u: &Landscape, i: usize) -> Result<UpliftStep, NotARiver> {
    let (outcome, output) = uplift_raw(u, i)?;
    Ok(UpliftStep {
        input: u.clone(),
        river: i,
        outcome,
        output,
    })
}

fn uplift_raw(u: &Landscape, i: usize) -> Result<(UpliftOutcome, Landscape), NotARiver> {
    if u.rivers().binary_search(&i).is_err() {
        return Err(NotARiver(i));
    }
    let letters = u.letters();
    let anchors = u.anchors();
    let (prev, here, next) = (letters[i - 1], letters[i], letters[i + 1]);
    let (a_i, a_next) = (anchors[i - 1], anchors[i]);
    match GenTuple::new(next, a_next.involute(), Middle::Letter(here), a_i, prev) {
        Ok(h) => {
            let mut letters = letters.to_vec();
            letters[i] = GLetter::Tuple(h);
            Ok((
                UpliftOutcome::Inserted(h),
                Landscape::new_unchecked(letters, anchors.to_vec()),
            ))
        }
        Err(_) => {
            assert!(
                prev == next && a_i == a_next.involute(),
                "river candidate rejected outside the deletion case"
            );
            let mut new_letters = letters[..i].to_vec();
            new_letters.extend_from_slice(&letters[i + 2..]);
            let mut new_anchors = anchors[..i - 1].to_vec();
            new_anchors.extend_from_slice(&anchors[i + 1..]);
            Ok((
                UpliftOutcome::Deleted,
                Landscape::new_unchecked(new_letters, new_anchors),
            ))
        }
    }
}

/// Which river to uplift next.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Strategy {
    Leftmost,
    /// Leftmost river of minimal height.
    #[default]
    LowestFirst,
    /// Uniformly random river from a seeded ChaCha8 stream.
    Random(u64),
}

/// River counts by height: `r[k]` counts rivers of height `k`.
///
/// Compared lexicographically with lower heights more significant and
/// missing entries read as zero.
#[derive(Clone, Debug)]
pub struct RiverVector(pub Vec<usize>);

impl PartialEq for RiverVector {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other).is_eq()
    }
}

impl Eq for RiverVector {}

impl RiverVector {
    pub fn of(u: &Landscape) -> RiverVector {
        let mut r = Vec::new();
        for &i in u.rivers() {
            let h = u.letters()[i].height() as usize;
            if r.len() <= h {
                r.resize(h + 1, 0);
            }
            r[h] += 1;
        }
        RiverVector(r)
    }
}

impl PartialOrd for RiverVector {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RiverVector {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let n = self.0.len().max(other.0.len());
        let at = |v: &Vec<usize>, k: usize| v.get(k).copied().unwrap_or(0);
        (0..n)
            .map(|k| at(&self.0, k).cmp(&at(&other.0, k)))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum RewriteFault {
    #[error("normalisation exceeded the step ceiling of {ceiling}")]
    StepCeiling { ceiling: usize },
    #[error("river vector did not decrease at step {step}")]
    NotDecreasing { step: usize },
}

/// One recorded step of a traced normalisation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub river: usize,
    pub outcome: UpliftOutcome,
    pub rivers_after: RiverVector,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    pub normal_form: Landscape,
    pub steps: Vec<TraceStep>,
}

fn pick(u: &Landscape, strategy: Strategy, rng: &mut Option<ChaCha8Rng>) -> Option<usize> {
    let rivers = u.rivers();
    if rivers.is_empty() {
        return None;
    }
    Some(match strategy {
        Strategy::Leftmost => rivers[0],
        Strategy::LowestFirst => *rivers
            .iter()
            .min_by_key(|&&i| (u.letters()[i].height(), i))
            .expect("nonempty"),
        Strategy::Random(_) => {
            let rng = rng.as_mut().expect("seeded");
            rivers[rng.gen_range(0..rivers.len())]
        }
    })
}

fn run(u: &Landscape, strategy: Strategy, trace: bool) -> Result<Trace, RewriteFault> {
    let ceiling = u.token_len() * u.token_len();
    let mut rng = match strategy {
        Strategy::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        _ => None,
    };
    let mut cur = u.clone();
    let mut steps = Vec::new();
    let mut count = 0;
    let mut rv = trace.then(|| RiverVector::of(&cur));
    while let Some(i) = pick(&cur, strategy, &mut rng) {
        if count == ceiling {
            return Err(RewriteFault::StepCeiling { ceiling });
        }
        let (outcome, next) = uplift_raw(&cur, i).expect("picked a river");
        cur = next;
        count += 1;
        if let Some(prev) = rv.as_mut() {
            let now = RiverVector::of(&cur);
            if now >= *prev {
                return Err(RewriteFault::NotDecreasing { step: count });
            }
            steps.push(TraceStep {
                river: i,
                outcome,
                rivers_after: now.clone(),
            });
            *prev = now;
        }
    }
    Ok(Trace {
        normal_form: cur,
        steps,
    })
}

/// Uplifts rivers until none is left.
pub fn beta2(u: &Landscape, strategy: Strategy) -> Result<Landscape, RewriteFault> {
    run(u, strategy, false).map(|t| t.normal_form)
}

/// Like [`beta2`], recording every step and checking that the river
/// vector strictly decreases.
pub fn beta2_traced(u: &Landscape, strategy: Strategy) -> Result<Trace, RewriteFault> {
    run(u, strategy, true)
}

/// The canonical mountain of a word.
pub fn beta(w: &Word) -> Result<Mountain, RewriteFault> {
    let nf = beta2(&beta1(w), Strategy::default())?;
    Ok(Mountain::new(nf).expect("normal form of a mountain range is a mountain"))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfluenceReport {
    pub pass: bool,
    pub normal_form: Landscape,
    /// Step counts of the reference run followed by each random trial.
    pub step_counts: Vec<usize>,
    /// Seed and normal form of every trial that disagreed.
    pub divergences: Vec<(u64, Landscape)>,
    pub faults: Vec<(u64, RewriteFault)>,
}

/// Normalises `β₁(w)` with the default strategy and with `trials` random
/// strategies derived from `seed`, comparing the results.
pub fn check_confluence(w: &Word, trials: usize, seed: u64) -> ConfluenceReport {
    let start = beta1(w);
    let reference =
        beta2_traced(&start, Strategy::default()).expect("reference normalisation is sound");
    let mut seeds = ChaCha8Rng::seed_from_u64(seed);
    let mut report = ConfluenceReport {
        pass: true,
        normal_form: reference.normal_form.clone(),
        step_counts: vec![reference.steps.len()],
        divergences: Vec::new(),
        faults: Vec::new(),
    };
    for _ in 0..trials {
        let s: u64 = seeds.gen();
        match beta2_traced(&start, Strategy::Random(s)) {
            Ok(t) => {
                report.step_counts.push(t.steps.len());
                if t.normal_form != reference.normal_form {
                    report.divergences.push((s, t.normal_form));
                }
            }
            Err(e) => report.faults.push((s, e)),
        }
    }
    report.pass = report.divergences.is_empty() && report.faults.is_empty();
    report
}

/// `count` random words of length `1..=max_len` over `1, x, x'`, `g_xx'`
/// and the two tuples of height 2.
pub fn random_words(count: usize, max_len: usize, seed: u64) -> Vec<Word> {
    let mut pool: Vec<GToken> = Anchor::ALL.into_iter().map(GToken::from).collect();
    pool.push(GenTuple::base().into());
    for name in ["g2e1", "g2e2"] {
        pool.push(crate::alphabet::named(name).expect("named").into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let len = rng.gen_range(1..=max_len.max(1));
            let tokens = (0..len)
                .map(|_| pool[rng.gen_range(0..pool.len())])
                .collect();
            Word::from_tokens(tokens).expect("nonempty")
        })
        .collect()
}
