use std::collections::BTreeSet;

use super::*;
use crate::model::VocabularyProfile;
use crate::qbf::eval_naive;
use crate::syntax::{parse_formula, parse_program, Atom};

fn f(s: &str) -> Formula {
    parse_formula(s).unwrap()
}

/// One agent `1`, atom `p`, `Γ_1 = {p}`: six variables.
fn small() -> Context {
    let profile = VocabularyProfile::new(
        vec![AgentId::from("1")],
        vec![Atom::Plain("p".into())],
        [(AgentId::from("1"), vec![f("p")])],
    )
    .unwrap();
    Context::new(&profile)
}

fn env_of(level: LevelId, bits: &[bool]) -> Assignment {
    bits.iter()
        .enumerate()
        .map(|(v, b)| (QVar::new(level, v), *b))
        .collect()
}

fn all_assignments(width: usize) -> impl Iterator<Item = Vec<bool>> {
    (0u32..1 << width).map(move |code| (0..width).map(|v| code >> v & 1 == 1).collect())
}

#[test]
fn explicit_belief_is_a_variable() {
    let ctx = small();
    let mut s = TranslationSession::new(&ctx, TranslateOptions::default());
    let root = s.root();
    let v = ctx.belief_var(&AgentId::from("1"), &f("p")).unwrap();
    assert_eq!(s.tr(&f("B(1, p)"), root).unwrap(), Qbf::var(root, v));
}

#[test]
fn explicit_belief_outside_vocabulary_is_false() {
    let ctx = small();
    let mut s = TranslationSession::new(&ctx, TranslateOptions::default());
    let root = s.root();
    assert_eq!(s.tr(&f("B(1, ~p)"), root).unwrap(), Qbf::FALSE);
}

#[test]
fn knowledge_of_truth_is_a_trivial_block() {
    let ctx = small();
    let mut s = TranslationSession::new(&ctx, TranslateOptions::default());
    let root = s.root();
    let q = s.tr(&f("K(1, true)"), root).unwrap();
    match &q {
        Qbf::Forall(l, body) => {
            assert_ne!(*l, root);
            assert_eq!(**body, Qbf::TRUE);
        }
        other => panic!("expected a block, got {other}"),
    }
    assert!(eval_naive(&q, ctx.exponent(), &Assignment::new()).unwrap());
}

#[test]
fn unknown_agent_and_derived_operators_are_rejected() {
    let ctx = small();
    let mut s = TranslationSession::new(&ctx, TranslateOptions::default());
    let root = s.root();
    assert!(matches!(
        s.tr(&f("K(2, p)"), root),
        Err(TranslateError::UnknownAgent(_))
    ));
    assert!(matches!(
        s.tr(&f("Mot(1, p)"), root),
        Err(TranslateError::Derived(_))
    ));
    assert!(matches!(
        s.tr(&f("q"), root),
        Err(TranslateError::UntrackedAtom(_))
    ));
}

#[test]
fn desc_fixes_exactly_one_assignment() {
    let ctx = small();
    let s0 = State::new()
        .with_belief("1", f("p -> rew(1)"))
        .with_atom(Atom::Plain("p".into()));
    let s = TranslationSession::new(&ctx, TranslateOptions::default());
    let d = s.desc(&s0, s.root()).unwrap();
    let target = ctx.assignment(&s0).unwrap();
    for bits in all_assignments(ctx.exponent()) {
        let value = eval_naive(&d, ctx.exponent(), &env_of(s.root(), &bits)).unwrap();
        assert_eq!(value, bits == target);
    }
}

#[test]
fn desc_of_empty_state_is_all_negative() {
    let ctx = small();
    let s = TranslationSession::new(&ctx, TranslateOptions::default());
    match s.desc(&State::new(), s.root()).unwrap() {
        Qbf::And(lits) => {
            assert_eq!(lits.len(), ctx.exponent());
            assert!(lits.iter().all(|l| matches!(l, Qbf::Not(_))));
        }
        other => panic!("unexpected {other}"),
    }
}

#[test]
fn reduce_atom_follows_valuation() {
    let ctx = small();
    for s0 in [
        State::new(),
        State::new().with_atom(Atom::Plain("p".into())),
    ] {
        let r = reduce(&ctx, &s0, &f("p"), &TranslateOptions::default()).unwrap();
        let expected = s0.holds(&Atom::Plain("p".into()));
        assert_eq!(
            eval_naive(&r.closed().formula, r.width, &Assignment::new()).unwrap(),
            expected
        );
        assert_eq!(r.instantiated().formula, Qbf::Const(expected));
    }
}

#[test]
fn test_program_copies_every_variable() {
    let ctx = small();
    let mut s = TranslationSession::new(&ctx, TranslateOptions::default());
    let (a, b) = (s.root(), s.fresh());
    let q = s.tr_prog(&parse_program("?true").unwrap(), a, b).unwrap();
    let w = ctx.exponent();
    for x in all_assignments(w) {
        for y in all_assignments(w) {
            let mut env = env_of(a, &x);
            env.extend(env_of(b, &y));
            assert_eq!(eval_naive(&q, w, &env).unwrap(), x == y);
        }
    }
}

#[test]
fn expansion_sets_the_member_and_copies_the_rest() {
    let ctx = small();
    let mut s = TranslationSession::new(&ctx, TranslateOptions::default());
    let (a, b) = (s.root(), s.fresh());
    let q = s.tr_prog(&parse_program("+(1, p)").unwrap(), a, b).unwrap();
    let v = ctx.belief_var(&AgentId::from("1"), &f("p")).unwrap();
    let w = ctx.exponent();
    for x in all_assignments(w) {
        for y in all_assignments(w) {
            let mut env = env_of(a, &x);
            env.extend(env_of(b, &y));
            let mut expected = x.clone();
            expected[v] = true;
            assert_eq!(eval_naive(&q, w, &env).unwrap(), y == expected);
        }
    }
}

#[test]
fn expansion_outside_vocabulary_has_no_successor() {
    let ctx = small();
    let mut s = TranslationSession::new(&ctx, TranslateOptions::default());
    let (a, b) = (s.root(), s.fresh());
    let q = s
        .tr_prog(&parse_program("+(1, ~p)").unwrap(), a, b)
        .unwrap();
    assert_eq!(q, Qbf::FALSE);
    let r = reduce(
        &ctx,
        &State::new(),
        &f("[+(1, ~p)] false"),
        &TranslateOptions::default(),
    )
    .unwrap();
    assert!(eval_naive(&r.instantiated().formula, r.width, &Assignment::new()).unwrap());
}

#[test]
fn forgetting_outside_vocabulary_is_identity() {
    let ctx = small();
    let s0 = State::new().with_belief("1", f("p"));
    let r = reduce(
        &ctx,
        &s0,
        &f("[-(1, ~p)] B(1, p)"),
        &TranslateOptions::default(),
    )
    .unwrap();
    assert!(eval_naive(&r.instantiated().formula, r.width, &Assignment::new()).unwrap());
}

#[test]
fn levels_are_never_rebound() {
    let ctx = small();
    let formula = f("K(1, p) & [+(1, p); -(1, p) U ?p] Attr(1, p) & <+(1, p)> RRep(1, ~p)");
    let r = reduce(&ctx, &State::new(), &formula, &TranslateOptions::default()).unwrap();
    let blocks = r.matrix.blocks();
    let distinct: BTreeSet<_> = blocks.iter().map(|(l, _)| *l).collect();
    assert_eq!(distinct.len(), blocks.len());
    assert!(!distinct.contains(&r.root));
    assert!(r.closed().formula.is_closed());
    assert_eq!(r.levels as usize, blocks.len() + 1);
}

#[test]
fn closed_and_instantiated_agree() {
    let ctx = small();
    let formulas = [
        "K(1, p)",
        "Attr(1, p) | Rep(1, ~p)",
        "[+(1, p)] K(1, p)",
        "RAttr(1, p -> rew(1))",
    ];
    for s0 in [
        State::new(),
        State::new().with_belief("1", f("p")),
        State::new()
            .with_belief("1", f("p -> rew(1)"))
            .with_atom(Atom::Plain("p".into())),
    ] {
        for text in formulas {
            let r = reduce(&ctx, &s0, &f(text), &TranslateOptions::default()).unwrap();
            let a = eval_naive(&r.closed().formula, r.width, &Assignment::new()).unwrap();
            let b = eval_naive(&r.instantiated().formula, r.width, &Assignment::new()).unwrap();
            assert_eq!(a, b, "{text}");
        }
    }
}

#[test]
fn strict_mode_drops_closure_members_from_desires() {
    let ctx = small();
    let mut s = TranslationSession::new(&ctx, TranslateOptions { strict: true });
    let (a, b) = (s.root(), s.fresh());
    assert_eq!(s.attract(&AgentId::from("1"), a, b).unwrap(), Qbf::FALSE);
    let mut s = TranslationSession::new(&ctx, TranslateOptions::default());
    let (a, b) = (s.root(), s.fresh());
    assert_ne!(s.attract(&AgentId::from("1"), a, b).unwrap(), Qbf::FALSE);
}

#[test]
fn validity_binds_the_root() {
    let ctx = small();
    let v = validity(&ctx, &f("p | ~p"), &TranslateOptions::default()).unwrap();
    assert!(eval_naive(&v.closed().formula, v.width, &Assignment::new()).unwrap());
    let v = validity(&ctx, &f("p"), &TranslateOptions::default()).unwrap();
    assert!(!eval_naive(&v.closed().formula, v.width, &Assignment::new()).unwrap());
}
