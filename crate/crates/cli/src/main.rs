use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use weakreg::algebra::{
    canonical_inverse, dclass, green_compare, green_leq, is_idempotent, is_inverse_pair,
    natural_leq, sandwich, EggBox, Element, GreenRelation, SandwichError, Verdict,
};
use weakreg::alphabet::{enumerate_level, LevelClass};
use weakreg::fi2::{
    check_embedding, enumerate_ilevel, format_iword, inormalize, parse_iword_with, phi_mountain,
    psi_mountain, EmbeddingFault, ILandscape, ILetter, IMountain, IParseError,
};
use weakreg::landscape::{enumerate_hills, Direction, Landscape};
use weakreg::rewrite::{check_confluence, random_words, RewriteFault, Strategy};
use weakreg::syntax::{format_tokens, format_tuple, parse_letter_with, parse_word_with};
use weakreg::{CapExceeded, FormatMode, Limits, ParseError, Word};

#[derive(Parser)]
#[command(
    name = "weakreg",
    version,
    about = "Canonical forms, Green's relations and the FI2 embedding"
)]
struct Cli {
    /// Emit one JSON document per result.
    #[arg(long, global = true)]
    json: bool,
    /// Print tuples as nested literals instead of aliases.
    #[arg(long, global = true)]
    expanded: bool,
    /// Height cap for enumerations (default 12); for `embed-check`, the
    /// sampling height (default 3).
    #[arg(long, global = true)]
    max_height: Option<u32>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Canonical mountain of a word.
    Normalize { word: String },
    /// Whether two words denote the same element.
    Eq { w1: String, w2: String },
    /// Green's relation between two words.
    Green {
        relation: GreenArg,
        w1: String,
        w2: String,
    },
    /// Whether a word denotes an idempotent.
    Idempotent { word: String },
    /// The canonical inverse of a word.
    Inverse { word: String },
    /// Whether two words denote mutually inverse elements.
    IsInverse { w1: String, w2: String },
    /// Whether w1 ≤ w2 in the natural partial order.
    NatLeq { w1: String, w2: String },
    /// Tuples of one height.
    Enum {
        i: u32,
        #[arg(default_value = "all")]
        class: ClassArg,
    },
    /// Triples of one height.
    EnumFi2 { i: u32 },
    /// The D-class of the element with the given peak.
    Dclass { letter: String },
    /// Uphills or downhills of a letter.
    Hills {
        letter: String,
        direction: DirectionArg,
    },
    /// The sandwich set of two idempotents.
    Sandwich { w1: String, w2: String },
    /// Map a mountain into FI2 or back.
    Embed { direction: EmbedArg, word: String },
    /// Check the embedding on enumerated and sampled mountains.
    EmbedCheck {
        #[arg(long, default_value_t = 500)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Strategy independence of normalisation on random words.
    Confluence {
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        max_len: usize,
        /// Number of random words.
        #[arg(long, default_value_t = 100)]
        words: usize,
        /// Check this word instead of random ones.
        #[arg(long)]
        word: Option<String>,
    },
    /// Egg-box diagram of a D-class.
    Eggbox {
        letter: String,
        #[arg(long)]
        dot: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GreenArg {
    #[value(name = "R")]
    R,
    #[value(name = "L")]
    L,
    #[value(name = "J")]
    J,
    #[value(name = "H")]
    H,
    #[value(name = "D")]
    D,
    #[value(name = "leqR")]
    LeqR,
    #[value(name = "leqL")]
    LeqL,
    #[value(name = "leqJ")]
    LeqJ,
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassArg {
    E,
    D,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum DirectionArg {
    Up,
    Down,
}

#[derive(Clone, Copy, ValueEnum)]
enum EmbedArg {
    ToFi2,
    FromFi2,
}

enum Failure {
    Usage(String),
    Cap(String),
    Fault(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Cap(_) | Failure::Fault(_) => 3,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Failure::Usage(_) => "usage",
            Failure::Cap(_) => "cap",
            Failure::Fault(_) => "fault",
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Cap(m) | Failure::Fault(m) => m,
        }
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        match e {
            ParseError::Cap(c) => Failure::Cap(c.to_string()),
            e => Failure::Usage(e.to_string()),
        }
    }
}

impl From<IParseError> for Failure {
    fn from(e: IParseError) -> Self {
        match e {
            IParseError::Cap(c) => Failure::Cap(c.to_string()),
            e => Failure::Usage(e.to_string()),
        }
    }
}

impl From<CapExceeded> for Failure {
    fn from(e: CapExceeded) -> Self {
        Failure::Cap(e.to_string())
    }
}

impl From<RewriteFault> for Failure {
    fn from(e: RewriteFault) -> Self {
        Failure::Fault(e.to_string())
    }
}

/// What a command produced: lines for plain output, a JSON payload, and
/// whether a predicate held.
struct Outcome {
    lines: Vec<String>,
    result: Value,
    holds: bool,
}

impl Outcome {
    fn predicate(holds: bool, result: Value) -> Outcome {
        Outcome {
            lines: vec![holds.to_string()],
            result,
            holds,
        }
    }

    fn listing(lines: Vec<String>) -> Outcome {
        let result = json!(lines);
        Outcome {
            lines,
            result,
            holds: true,
        }
    }
}

#[derive(Serialize)]
struct Document<'a> {
    command: &'a str,
    ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    result: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<ErrorDoc<'a>>,
}

#[derive(Serialize)]
struct ErrorDoc<'a> {
    kind: &'a str,
    message: &'a str,
}

struct Ctx {
    limits: Limits,
    mode: FormatMode,
}

impl Ctx {
    fn word(&self, s: &str) -> Result<Word, Failure> {
        Ok(parse_word_with(s, &self.limits)?)
    }

    fn element(&self, s: &str) -> Result<Element, Failure> {
        Ok(Element::from_word(&self.word(s)?)?)
    }

    fn landscape(&self, l: &Landscape) -> String {
        format_tokens(&l.tokens(), self.mode)
    }

    fn show(&self, e: &Element) -> String {
        self.landscape(e.landscape())
    }

    fn ishow(&self, letters: &[ILetter]) -> String {
        format_iword(letters, self.mode)
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Normalize { .. } => "normalize",
        Command::Eq { .. } => "eq",
        Command::Green { .. } => "green",
        Command::Idempotent { .. } => "idempotent",
        Command::Inverse { .. } => "inverse",
        Command::IsInverse { .. } => "is-inverse",
        Command::NatLeq { .. } => "nat-leq",
        Command::Enum { .. } => "enum",
        Command::EnumFi2 { .. } => "enum-fi2",
        Command::Dclass { .. } => "dclass",
        Command::Hills { .. } => "hills",
        Command::Sandwich { .. } => "sandwich",
        Command::Embed { .. } => "embed",
        Command::EmbedCheck { .. } => "embed-check",
        Command::Confluence { .. } => "confluence",
        Command::Eggbox { .. } => "eggbox",
    }
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let ctx = Ctx {
        limits: Limits::with_max_height(match cli.command {
            Command::EmbedCheck { .. } => Limits::default().max_height,
            _ => cli.max_height.unwrap_or(Limits::default().max_height),
        }),
        mode: if cli.expanded {
            FormatMode::Expanded
        } else {
            FormatMode::Alias
        },
    };
    Ok(match &cli.command {
        Command::Normalize { word } => {
            let s = ctx.show(&ctx.element(word)?);
            Outcome {
                lines: vec![s.clone()],
                result: json!(s),
                holds: true,
            }
        }
        Command::Eq { w1, w2 } => {
            let (a, b) = (ctx.element(w1)?, ctx.element(w2)?);
            Outcome::predicate(
                a == b,
                json!({ "equal": a == b, "left": ctx.show(&a), "right": ctx.show(&b) }),
            )
        }
        Command::Green { relation, w1, w2 } => {
            let (a, b) = (ctx.element(w1)?, ctx.element(w2)?);
            let leq = |rel| {
                let holds = green_leq(&a, &b, rel);
                Outcome::predicate(
                    holds,
                    json!({ "relation": format!("leq{rel}"), "holds": holds }),
                )
            };
            match relation {
                GreenArg::LeqR => leq(GreenRelation::R),
                GreenArg::LeqL => leq(GreenRelation::L),
                GreenArg::LeqJ => leq(GreenRelation::J),
                GreenArg::R | GreenArg::L | GreenArg::J | GreenArg::H | GreenArg::D => {
                    let rel = match relation {
                        GreenArg::R => GreenRelation::R,
                        GreenArg::L => GreenRelation::L,
                        GreenArg::J => GreenRelation::J,
                        GreenArg::H => GreenRelation::H,
                        _ => GreenRelation::D,
                    };
                    let report = green_compare(&a, &b, rel);
                    let verdict = report.verdict.to_string();
                    Outcome {
                        lines: vec![verdict.clone()],
                        result: json!({ "relation": rel.to_string(), "verdict": verdict }),
                        holds: report.verdict == Verdict::Equivalent,
                    }
                }
            }
        }
        Command::Idempotent { word } => {
            let c = is_idempotent(&ctx.element(word)?);
            if !c.agree() {
                return Err(Failure::Fault(format!("criteria disagree: {c:?}")));
            }
            Outcome::predicate(c.value(), json!({ "idempotent": c.value() }))
        }
        Command::Inverse { word } => {
            let s = ctx.show(&canonical_inverse(&ctx.element(word)?));
            Outcome {
                lines: vec![s.clone()],
                result: json!(s),
                holds: true,
            }
        }
        Command::IsInverse { w1, w2 } => {
            let c = is_inverse_pair(&ctx.element(w1)?, &ctx.element(w2)?);
            if !c.agree() {
                return Err(Failure::Fault(format!("criteria disagree: {c:?}")));
            }
            Outcome::predicate(c.value(), json!({ "inverse": c.value() }))
        }
        Command::NatLeq { w1, w2 } => {
            let c = natural_leq(&ctx.element(w1)?, &ctx.element(w2)?, &ctx.limits)?;
            if !c.agree() {
                return Err(Failure::Fault(format!("criteria disagree: {c:?}")));
            }
            Outcome::predicate(c.value(), json!({ "leq": c.value() }))
        }
        Command::Enum { i, class } => {
            let class = match class {
                ClassArg::E => LevelClass::E,
                ClassArg::D => LevelClass::D,
                ClassArg::All => LevelClass::All,
            };
            let level = enumerate_level(*i, class, &ctx.limits)?;
            Outcome::listing(
                level
                    .into_iter()
                    .map(|g| format_tuple(g, ctx.mode))
                    .collect(),
            )
        }
        Command::EnumFi2 { i } => {
            let level = enumerate_ilevel(*i, &ctx.limits)?;
            Outcome::listing(level.into_iter().map(|t| ctx.ishow(&[t.into()])).collect())
        }
        Command::Dclass { letter } => {
            let g = parse_letter_with(letter, &ctx.limits)?;
            Outcome::listing(
                dclass(g, &ctx.limits)?
                    .iter()
                    .map(|e| ctx.show(e))
                    .collect(),
            )
        }
        Command::Hills { letter, direction } => {
            let g = parse_letter_with(letter, &ctx.limits)?;
            let dir = match direction {
                DirectionArg::Up => Direction::Up,
                DirectionArg::Down => Direction::Down,
            };
            let hills = enumerate_hills(g, dir, &ctx.limits)?;
            Outcome::listing(hills.iter().map(|h| ctx.landscape(h)).collect())
        }
        Command::Sandwich { w1, w2 } => {
            let (e, f) = (ctx.element(w1)?, ctx.element(w2)?);
            let set = sandwich(&e, &f, &ctx.limits).map_err(|err| match err {
                SandwichError::Cap(c) => Failure::from(c),
                other => Failure::Usage(other.to_string()),
            })?;
            Outcome::listing(set.iter().map(|e| ctx.show(e)).collect())
        }
        Command::Embed { direction, word } => embed(&ctx, *direction, word)?,
        Command::EmbedCheck { samples, seed } => {
            let height = cli.max_height.unwrap_or(3);
            let report = check_embedding(height, *samples, *seed, &ctx.limits)?;
            let mut lines = vec![format!(
                "{}: {} mountains, {} i-mountains, {} pairs",
                if report.pass { "pass" } else { "fail" },
                report.mountains,
                report.imountains,
                report.pairs
            )];
            lines.extend(report.failures.iter().cloned());
            Outcome {
                lines,
                result: json!({
                    "pass": report.pass,
                    "mountains": report.mountains,
                    "imountains": report.imountains,
                    "pairs": report.pairs,
                    "failures": report.failures,
                }),
                holds: report.pass,
            }
        }
        Command::Confluence {
            trials,
            seed,
            max_len,
            words,
            word,
        } => {
            let inputs = match word {
                Some(w) => vec![ctx.word(w)?],
                None => random_words(*words, *max_len, *seed),
            };
            let mut lines = Vec::new();
            let mut records = Vec::new();
            let mut pass = true;
            for (k, w) in inputs.iter().enumerate() {
                let r = check_confluence(w, *trials, seed.wrapping_add(k as u64));
                pass &= r.pass;
                let nf = ctx.landscape(&r.normal_form);
                if !r.pass || word.is_some() {
                    lines.push(format!(
                        "{}: {} -> {} ({} divergences)",
                        if r.pass { "pass" } else { "fail" },
                        format_tokens(w.tokens(), ctx.mode),
                        nf,
                        r.divergences.len() + r.faults.len()
                    ));
                }
                records.push(json!({
                    "word": format_tokens(w.tokens(), ctx.mode),
                    "pass": r.pass,
                    "normal_form": nf,
                    "step_counts": r.step_counts,
                    "divergences": r.divergences.iter()
                        .map(|(s, l)| json!({ "seed": s, "normal_form": ctx.landscape(l) }))
                        .collect::<Vec<_>>(),
                    "faults": r.faults.iter()
                        .map(|(s, f)| json!({ "seed": s, "fault": f.to_string() }))
                        .collect::<Vec<_>>(),
                }));
            }
            lines.insert(
                0,
                format!(
                    "{}: {} words, {} trials each",
                    if pass { "pass" } else { "fail" },
                    inputs.len(),
                    trials
                ),
            );
            Outcome {
                lines,
                result: json!({ "pass": pass, "words": records }),
                holds: pass,
            }
        }
        Command::Eggbox { letter, dot } => {
            let g = parse_letter_with(letter, &ctx.limits)?;
            let egg = EggBox::new(g, &ctx.limits)?;
            let cell = |r: usize, c: usize| {
                let mark = if egg.idempotent[r][c] { "* " } else { "" };
                format!("{mark}{}", ctx.show(&egg.cells[r][c]))
            };
            let grid: Vec<Vec<String>> = (0..egg.cells.len())
                .map(|r| (0..egg.cells[r].len()).map(|c| cell(r, c)).collect())
                .collect();
            let lines = if *dot {
                vec![egg.to_dot()]
            } else {
                grid.iter().map(|row| row.join(" | ")).collect()
            };
            Outcome {
                lines,
                result: json!({
                    "rows": egg.rows.iter().map(|l| ctx.landscape(l)).collect::<Vec<_>>(),
                    "columns": egg.columns.iter().map(|l| ctx.landscape(l)).collect::<Vec<_>>(),
                    "cells": grid,
                    "dot": dot.then(|| egg.to_dot()),
                }),
                holds: true,
            }
        }
    })
}

fn embed(ctx: &Ctx, direction: EmbedArg, word: &str) -> Result<Outcome, Failure> {
    let fault = |e: EmbeddingFault| match e {
        EmbeddingFault::Domain(m) => Failure::Usage(format!("{m} is outside M°")),
        other => Failure::Fault(other.to_string()),
    };
    let s = match direction {
        EmbedArg::ToFi2 => {
            let e = ctx.element(word)?;
            let v = phi_mountain(e.mountain()).map_err(fault)?;
            ctx.ishow(v.letters())
        }
        EmbedArg::FromFi2 => {
            let letters = parse_iword_with(word, &ctx.limits)?;
            let land = ILandscape::new(letters).map_err(|e| Failure::Usage(e.to_string()))?;
            let nf = inormalize(&land, Strategy::default())
                .map_err(|e| Failure::Fault(e.to_string()))?;
            let v = IMountain::new(nf).map_err(|e| Failure::Usage(e.to_string()))?;
            ctx.show(&Element::from_mountain(psi_mountain(&v).map_err(fault)?))
        }
    };
    Ok(Outcome {
        lines: vec![s.clone()],
        result: json!(s),
        holds: true,
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let name = command_name(&cli.command);
    match run(&cli) {
        Ok(out) => {
            if cli.json {
                let doc = Document {
                    command: name,
                    ok: out.holds,
                    result: Some(out.result),
                    error: None,
                };
                println!("{}", serde_json::to_string(&doc).expect("serializable"));
            } else {
                for l in &out.lines {
                    println!("{l}");
                }
            }
            ExitCode::from(if out.holds { 0 } else { 1 })
        }
        Err(f) => {
            if cli.json {
                let doc = Document {
                    command: name,
                    ok: false,
                    result: None,
                    error: Some(ErrorDoc {
                        kind: f.kind(),
                        message: f.message(),
                    }),
                };
                println!("{}", serde_json::to_string(&doc).expect("serializable"));
            } else {
                eprintln!("error: {}", f.message());
            }
            ExitCode::from(f.code())
        }
    }
}
