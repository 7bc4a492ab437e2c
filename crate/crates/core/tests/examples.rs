//! Worked examples for each public operation, exercised through the crate
//! root as a downstream user would.

use weakreg::algebra::{
    canonical_inverse, covers, dclass, equal, green_compare, is_gorge, is_idempotent,
    is_inverse_pair, natural_leq, product, sandwich, CoverRelation, Element, GreenRelation,
    Verdict,
};
use weakreg::alphabet::{
    enumerate_level, ground, involute, named, preceq, resolve_sides, Anchor, GLetter, GenTuple,
    InvalidTuple, LevelClass, Middle, Side, TupleClass, WingSides,
};
use weakreg::fi2::{
    enumerate_ilevel, gbar, in_gcirc, in_mcirc, iproduct, parse_iword, phi_letter, phi_mountain,
    psi_letter, IMountain,
};
use weakreg::landscape::{analyze, enumerate_hills, join, reverse, Analysis, Direction};
use weakreg::rewrite::{
    beta, beta1, beta1_letter, beta2, check_confluence, uplift, Strategy, UpliftOutcome,
};
use weakreg::{format_word, parse_word, FormatMode, Landscape, Limits, Mountain, Word};

fn w(s: &str) -> Word {
    parse_word(s).unwrap()
}

fn l(s: &str) -> Landscape {
    Landscape::from_word(&w(s)).unwrap()
}

fn m(s: &str) -> Mountain {
    Mountain::from_word(&w(s)).unwrap()
}

fn e(s: &str) -> Element {
    Element::from_word(&w(s)).unwrap()
}

fn n(s: &str) -> GenTuple {
    named(s).unwrap()
}

fn lim() -> Limits {
    Limits::default()
}

#[test]
fn anchors_and_tuples() {
    assert_eq!(involute(Anchor::X), Anchor::XPrime);
    assert_eq!(involute(Anchor::XPrime), Anchor::X);
    assert_eq!(involute(Anchor::One), Anchor::One);

    let base = GenTuple::base();
    assert_eq!((base.height(), base.class()), (1, TupleClass::E));
    let g = GenTuple::new(
        n("g2e1").into(),
        Anchor::One,
        Middle::Letter(base.into()),
        Anchor::XPrime,
        n("g2e1").into(),
    )
    .unwrap();
    assert_eq!((g.height(), g.class()), (3, TupleClass::E));
    let bad = GenTuple::new(
        n("g2e1").into(),
        Anchor::X,
        Middle::Letter(base.into()),
        Anchor::One,
        n("g2e2").into(),
    );
    assert!(matches!(
        bad,
        Err(InvalidTuple::SideCondition { .. }) | Err(InvalidTuple::AnchorParity { .. })
    ));

    assert_eq!(GLetter::One.height(), 0);
    assert_eq!(n("g3d1").height(), 3);
    let sides = |s: &str| resolve_sides(n(s)).unwrap();
    assert_eq!(
        sides("g2e1"),
        WingSides {
            left: Side::Left,
            right: Side::Right
        }
    );
    assert_eq!(
        sides("g2e2"),
        WingSides {
            left: Side::Right,
            right: Side::Left
        }
    );
    assert_eq!(
        sides("g3d2"),
        WingSides {
            left: Side::Right,
            right: Side::Left
        }
    );

    let triplets = |s: &str| {
        let (a, b) = n(s).wing_triplets().unwrap();
        (a.to_string(), b.to_string())
    };
    assert_eq!(triplets("g2e1"), ("1 gxx' 1".into(), "x' gxx' x".into()));
    assert_eq!(triplets("g2e2"), ("x' gxx' x".into(), "1 gxx' 1".into()));
    assert_eq!(triplets("g3d1"), ("1 g2e1 1".into(), "1 g2e2 1".into()));
}

#[test]
fn levels_and_ground() {
    assert_eq!(
        enumerate_level(2, LevelClass::E, &lim()).unwrap(),
        vec![n("g2e1"), n("g2e2")]
    );
    assert_eq!(enumerate_level(3, LevelClass::D, &lim()).unwrap().len(), 8);
    assert!(enumerate_level(1, LevelClass::D, &lim())
        .unwrap()
        .is_empty());

    assert_eq!(
        ground(GLetter::One).into_iter().collect::<Vec<_>>(),
        vec![GLetter::One]
    );
    assert_eq!(ground(GenTuple::base().into()).len(), 2);
    let gr = ground(n("g3d2").into());
    assert_eq!(gr.len(), 5);
    for s in ["g2e1", "g2e2", "g3d2"] {
        assert!(gr.contains(&n(s).into()));
    }
    assert!(preceq(GenTuple::base().into(), n("g3d2").into()));
    assert!(preceq(n("g3d2").into(), n("g3d2").into()));
    assert!(!preceq(n("g3d1").into(), n("g3d2").into()));
}

#[test]
fn grammar() {
    assert_eq!(w("x x' x").len(), 3);
    assert_eq!(w("(1,1,x,x',1)").tokens(), &[GenTuple::base().into()]);
    assert!(parse_word("(1,1,x,x,1)").is_err());
    let single = Word::single(GenTuple::base());
    assert_eq!(format_word(&single, FormatMode::Alias), "gxx'");
    assert_eq!(format_word(&single, FormatMode::Expanded), "(1,1,x,x',1)");
    assert_eq!(format_word(&w("1 x'"), FormatMode::Alias), "1 x'");
}

#[test]
fn landscapes() {
    let Analysis::Landscape(info) = analyze(&w("1 1 gxx' x 1")) else {
        panic!()
    };
    assert!(info.mountain && info.rivers.is_empty());
    let Analysis::Landscape(info) = analyze(&w("gxx' 1 1 1 gxx'")) else {
        panic!()
    };
    assert!(info.canyon && info.rivers == vec![1]);
    let Analysis::NotLandscape(fault) = analyze(&w("x x")) else {
        panic!()
    };
    assert_eq!(fault.position, 0);

    assert_eq!(
        join(&l("1 1 gxx' x 1"), &l("1 x' gxx' 1 1")).unwrap(),
        l("1 1 gxx' x 1 x' gxx' 1 1")
    );
    assert_eq!(join(&l("1"), &l("1")).unwrap(), l("1"));
    assert_eq!(
        join(&l("gxx' 1 1"), &l("1 1 gxx'")).unwrap(),
        l("gxx' 1 1 1 gxx'")
    );

    assert_eq!(reverse(&l("1 1 gxx' x 1")), l("1 x' gxx' 1 1"));
    assert_eq!(reverse(&l("gxx' 1 1")), l("1 1 gxx'"));

    let x = m("1 1 gxx' x 1");
    assert_eq!(
        (x.left_hill(), x.right_hill()),
        (l("1 1 gxx'"), l("gxx' x 1"))
    );
    assert_eq!(Mountain::trivial().left_hill(), l("1"));
    assert_eq!(
        beta1_letter(n("g3d2").into()).left_hill(),
        l("1 1 gxx' x g2e1 x' g3d2")
    );

    let g3 = enumerate_level(3, LevelClass::All, &lim()).unwrap()[0];
    assert_eq!(
        enumerate_hills(g3.into(), Direction::Up, &lim())
            .unwrap()
            .len(),
        8
    );
    assert_eq!(
        enumerate_hills(GenTuple::base().into(), Direction::Up, &lim()).unwrap(),
        vec![l("1 1 gxx'"), l("1 x' gxx'")]
    );
    assert_eq!(
        enumerate_hills(n("g2e1").into(), Direction::Down, &lim())
            .unwrap()
            .len(),
        4
    );
}

#[test]
fn rewriting() {
    let b1 = |s: &str| beta1_letter(w(s).tokens()[0]).to_string();
    assert_eq!(b1("g2e1"), "1 1 gxx' 1 g2e1 x' gxx' x 1");
    assert_eq!(b1("g3d2"), "1 1 gxx' x g2e1 x' g3d2 x g2e2 x' gxx' 1 1");
    assert_eq!(b1("x'"), "1 x' gxx' 1 1");
    assert_eq!(beta1(&w("x x'")), l("1 1 gxx' x 1 x' gxx' 1 1"));
    assert_eq!(beta1(&w("1 1")), l("1"));
    assert_eq!(beta1(&w("x' x")), l("1 x' gxx' 1 1 1 gxx' x 1"));

    let step = uplift(&l("1 1 gxx' x 1 x' gxx' 1 1"), 2).unwrap();
    assert_eq!(
        (step.outcome, step.output),
        (UpliftOutcome::Deleted, l("1 1 gxx' 1 1"))
    );
    let step = uplift(&l("1 x' gxx' x 1 1 gxx' 1 1"), 2).unwrap();
    assert_eq!(step.outcome, UpliftOutcome::Inserted(n("g2e1")));
    assert_eq!(step.output, l("1 x' gxx' x g2e1 1 gxx' 1 1"));
    let step = uplift(&l("gxx' 1 1 1 gxx'"), 1).unwrap();
    assert_eq!(
        (step.outcome, step.output),
        (UpliftOutcome::Deleted, l("gxx'"))
    );
    assert!(uplift(&l("1 1 gxx' x 1"), 1).is_err());

    assert_eq!(
        beta2(&l("gxx' 1 1 1 gxx'"), Strategy::Leftmost).unwrap(),
        l("gxx'")
    );
    let start = beta1(&w("x' x x x'"));
    let reference = beta2(&start, Strategy::Leftmost).unwrap();
    for seed in 0..50 {
        assert_eq!(beta2(&start, Strategy::Random(seed)).unwrap(), reference);
    }
    assert_eq!(beta(&w("x x' x")).unwrap().to_string(), "1 1 gxx' x 1");
    assert_eq!(beta(&w("1 1 1")).unwrap().to_string(), "1");
    assert_eq!(
        beta(&w("x x")).unwrap().to_string(),
        "1 1 gxx' x g2e1 1 gxx' x 1"
    );

    assert!(check_confluence(&w("x x' x x'"), 100, 7).pass);
    let r = check_confluence(&w("x"), 10, 0);
    assert!(r.pass && r.step_counts.iter().all(|&c| c == 0));
}

#[test]
fn elements() {
    assert_eq!(product(&e("x"), &e("x'")).to_string(), "1 1 gxx' 1 1");
    assert_eq!(
        product(&e("x' x"), &e("x x'")).to_string(),
        "1 x' gxx' x g2e1 1 gxx' 1 1"
    );
    assert_eq!(product(&e("x x"), &Element::one()), e("x x"));

    assert!(equal(&w("x x' x"), &w("x")).unwrap());
    assert!(equal(&w("x' x x'"), &w("x'")).unwrap());
    assert!(!equal(&w("x"), &w("x'")).unwrap());

    assert_eq!(canonical_inverse(&e("x")), e("x'"));
    assert_eq!(canonical_inverse(&Element::one()), Element::one());
    assert_eq!(canonical_inverse(&e("x x'")), e("x x'"));

    assert!(is_inverse_pair(&e("x"), &e("x'")).value());
    assert!(!is_inverse_pair(&e("x"), &e("x")).value());
    assert!(is_inverse_pair(&e("x x'"), &e("x x'")).value());

    assert!(is_gorge(&l("gxx' 1 1 1 gxx'")));
    assert!(!is_gorge(&l("gxx' x 1 1 gxx'")));
    assert!(!is_gorge(&l("1 1 gxx' x 1")));

    assert!(is_idempotent(&e("x x'")).value());
    assert!(!is_idempotent(&e("x")).value());
    assert!(is_idempotent(&Element::one()).value());
}

#[test]
fn green_relations() {
    let verdict = |a: &str, b: &str, r| green_compare(&e(a), &e(b), r).verdict;
    assert_eq!(verdict("x", "x x'", GreenRelation::R), Verdict::Equivalent);
    assert_ne!(verdict("x", "x'", GreenRelation::R), Verdict::Equivalent);
    assert_eq!(verdict("x", "x'", GreenRelation::J), Verdict::Equivalent);
    for r in GreenRelation::ALL {
        assert_eq!(verdict("x x g2e1", "x x g2e1", r), Verdict::Equivalent);
    }

    let v = Element::of_letter(GenTuple::base().into());
    let u = Element::from_mountain(m("1 1 gxx' x g2e1 x' gxx' x 1"));
    assert!(covers(&u, &v, CoverRelation::R));
    assert!(!covers(&u, &u, CoverRelation::R));
    assert!(covers(
        &Element::of_letter(n("g2e1").into()),
        &v,
        CoverRelation::J
    ));

    let leq = |a: &Element, b: &Element| {
        let c = natural_leq(a, b, &lim()).unwrap();
        assert!(c.agree());
        c.value()
    };
    assert!(leq(&u, &u));
    assert!(!leq(&e("x' x"), &e("x x'")));
}

#[test]
fn dclasses_and_sandwiches() {
    let d = dclass(GenTuple::base().into(), &lim()).unwrap();
    assert_eq!(d.len(), 4);
    assert_eq!(dclass(n("g2e1").into(), &lim()).unwrap().len(), 16);
    assert_eq!(dclass(GLetter::One, &lim()).unwrap(), vec![Element::one()]);

    assert_eq!(
        sandwich(&e("x' x"), &e("x x'"), &lim()).unwrap(),
        vec![Element::of_letter(n("g2e1").into())]
    );
    assert_eq!(
        sandwich(&e("x x'"), &e("x' x"), &lim()).unwrap(),
        vec![Element::of_letter(n("g2e2").into())]
    );
    let idem = e("x x'");
    assert_eq!(sandwich(&idem, &idem, &lim()).unwrap(), vec![idem.clone()]);
    assert!(sandwich(&e("x"), &idem, &lim()).is_err());
}

#[test]
fn triples_and_embedding() {
    let im = |s: &str| IMountain::from_letters(parse_iword(s).unwrap()).unwrap();
    let h2: Vec<String> = enumerate_ilevel(2, &lim())
        .unwrap()
        .iter()
        .map(|t| t.to_string())
        .collect();
    assert_eq!(h2, ["h{2.1}", "h{2.2}"]);
    assert_eq!(
        parse_iword("(e,1,f) (f,1,e)").unwrap(),
        enumerate_ilevel(2, &lim())
            .unwrap()
            .into_iter()
            .map(Into::into)
            .collect::<Vec<_>>()
    );
    assert_eq!(enumerate_ilevel(3, &lim()).unwrap().len(), 4);
    assert_eq!(enumerate_ilevel(1, &lim()).unwrap().len(), 2);

    assert_eq!(iproduct(&im("1 e 1"), &im("1 f 1")), im("1 e (f,1,e) f 1"));
    assert_eq!(iproduct(&im("1 e 1"), &IMountain::trivial()), im("1 e 1"));
    assert_eq!(iproduct(&im("1 e 1"), &im("1 e 1")), im("1 e 1"));

    assert!(in_gcirc(n("g3d2")) && in_gcirc(GenTuple::base()));
    assert!(enumerate_level(3, LevelClass::E, &lim())
        .unwrap()
        .into_iter()
        .all(|g| !in_gcirc(g)));
    assert!(!in_mcirc(&beta1_letter(n("g3d2").into())));
    assert!(in_mcirc(&beta(&w("x' g3d2 x")).unwrap()));
    assert!(in_mcirc(&m("1 1 gxx' 1 1")));

    assert_eq!(phi_letter(n("g2e1")).unwrap().to_string(), "h{2.1}");
    assert_eq!(phi_letter(n("g3d2")).unwrap().to_string(), "h{3.2}");
    assert_eq!(
        psi_letter(phi_letter(n("g3d4")).unwrap()).unwrap(),
        n("g3d4")
    );
    assert_eq!(phi_mountain(&m("1 1 gxx' 1 1")).unwrap(), im("1 e 1"));
    assert_eq!(phi_mountain(&m("1 x' gxx' x 1")).unwrap(), im("1 f 1"));

    assert_eq!(
        gbar(n("g2e2")).unwrap(),
        Element::of_letter(n("g2e2").into())
    );
    assert_eq!(gbar(n("g3d2")).unwrap(), e("x' g3d2 x"));
    assert_eq!(gbar(n("g3d1")).unwrap(), e("g3d1"));
}
