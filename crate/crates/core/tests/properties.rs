//! Validities of the logic and properties of the cognitive positions and
//! belief change, checked at every state of random small instances.

mod common;

use std::collections::BTreeSet;

use common::*;
use lca_core::model::{apply_revise, consistent_base, step_program, Checker};
use lca_core::solve::{solve_bdd, SolveOptions};
use lca_core::syntax::Position;
use lca_core::translate::{validity, TranslateOptions};
use lca_core::{AgentId, Atom, Context, Formula, Modality, Program};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

const MAX_EXPONENT: usize = 9;

/// Asserts that `f` holds at every state, by the explicit checker and by the
/// symbolic validity problem.
fn assert_valid(ctx: &Context, f: &Formula) {
    let checker = Checker::new(ctx);
    for s in all_states(ctx) {
        assert!(checker.check(&s, f).unwrap(), "{f} fails at {s:?}");
    }
    let v = validity(ctx, f, &TranslateOptions::default()).unwrap();
    assert!(
        solve_bdd(&v.closed(), &SolveOptions::default()).unwrap(),
        "{f} not valid symbolically"
    );
}

/// An instance whose context also tracks the reward and punishment atoms of
/// every agent.
fn instance_with_outcomes(rng: &mut ChaCha8Rng) -> Instance {
    let mut inst = random_instance(rng, MAX_EXPONENT - 2);
    let outcomes = inst
        .agents
        .iter()
        .flat_map(|i| [Atom::Reward(i.clone()), Atom::Punish(i.clone())]);
    inst.profile.track(outcomes);
    inst.ctx = Context::new(&inst.profile);
    inst
}

fn pick_agent(rng: &mut ChaCha8Rng, inst: &Instance) -> (usize, AgentId) {
    let k = rng.gen_range(0..inst.agents.len());
    (k, inst.agents[k].clone())
}

/// A member of `Γ_k⁺` of the form `α → outcome`, returning `α`; any
/// base-language formula when there is none.
fn premise(rng: &mut ChaCha8Rng, inst: &Instance, k: usize, reward: bool) -> Formula {
    let i = &inst.agents[k];
    let premises: Vec<&Formula> = inst
        .gamma_plus(k)
        .iter()
        .filter_map(|m| {
            if reward {
                m.reward_premise(i)
            } else {
                m.punish_premise(i)
            }
        })
        .collect();
    match premises.choose(rng) {
        Some(a) if rng.gen_bool(0.9) => (*a).clone(),
        _ => random_l0(rng, &inst.atoms, 1),
    }
}

fn axiom_suite(seed: u64, instance: impl Fn(&mut ChaCha8Rng, &Instance) -> Formula) {
    let mut rng = rng(seed);
    for _ in 0..50 {
        let inst = instance_with_outcomes(&mut rng);
        let f = instance(&mut rng, &inst);
        assert_valid(&inst.ctx, &f);
    }
}

#[test]
fn a1_distribution_of_implicit_belief() {
    axiom_suite(101, |rng, inst| {
        let (_, i) = pick_agent(rng, inst);
        let (phi, psi) = (random_formula(rng, inst, 1), random_formula(rng, inst, 1));
        let k = |f: Formula| Formula::modal(Modality::Knows, i.clone(), f);
        k(phi.clone().implies(psi.clone())).implies(k(phi).implies(k(psi)))
    });
}

#[test]
fn a2_window_modalities() {
    for (n, m) in Modality::ALL[1..].iter().enumerate() {
        axiom_suite(102 + 1000 * n as u64, |rng, inst| {
            let (_, i) = pick_agent(rng, inst);
            let (phi, psi) = (random_formula(rng, inst, 1), random_formula(rng, inst, 1));
            let w = |f: Formula| Formula::modal(*m, i.clone(), f);
            w(phi.clone())
                .and(w(phi.not().and(psi.clone())))
                .implies(w(psi))
        });
    }
}

#[test]
fn a3_explicit_implies_implicit() {
    axiom_suite(103, |rng, inst| {
        let (k, i) = pick_agent(rng, inst);
        let a = member_or_other(rng, inst, k);
        Formula::believes(i.clone(), a.clone()).implies(Formula::modal(Modality::Knows, i, a))
    });
}

#[test]
fn a4_reward_belief_attracts() {
    axiom_suite(104, |rng, inst| {
        let (k, i) = pick_agent(rng, inst);
        let a = premise(rng, inst, k, true);
        Formula::believes(i.clone(), a.clone().implies(Formula::reward(i.clone())))
            .implies(Formula::modal(Modality::Attract, i, a))
    });
}

#[test]
fn a5_punishment_belief_repulses() {
    axiom_suite(105, |rng, inst| {
        let (k, i) = pick_agent(rng, inst);
        let a = premise(rng, inst, k, false);
        Formula::believes(i.clone(), a.clone().implies(Formula::punish(i.clone())))
            .implies(Formula::modal(Modality::Repulse, i, a))
    });
}

fn implication(seed: u64, from: Modality, to: Modality, negate: bool) {
    axiom_suite(seed, move |rng, inst| {
        let (_, i) = pick_agent(rng, inst);
        let phi = random_formula(rng, inst, 1);
        let arg = if negate {
            phi.clone().not()
        } else {
            phi.clone()
        };
        Formula::modal(from, i.clone(), phi).implies(Formula::modal(to, i, arg))
    });
}

#[test]
fn a6_attraction_is_realistic() {
    implication(106, Modality::Attract, Modality::RealAttract, false);
}

#[test]
fn a7_repulsion_is_realistic() {
    implication(107, Modality::Repulse, Modality::RealRepulse, false);
}

#[test]
fn a8_known_negation_is_realistically_attractive() {
    implication(108, Modality::Knows, Modality::RealAttract, true);
}

#[test]
fn a9_known_negation_is_realistically_repulsive() {
    implication(109, Modality::Knows, Modality::RealRepulse, true);
}

fn outcome_axiom(seed: u64, m: Modality, reward: bool) {
    axiom_suite(seed, move |rng, inst| {
        let (_, i) = pick_agent(rng, inst);
        let phi = random_formula(rng, inst, 1);
        let outcome = if reward {
            Formula::reward(i.clone())
        } else {
            Formula::punish(i.clone())
        };
        Formula::modal(m, i.clone(), phi.clone()).implies(Formula::modal(
            Modality::Knows,
            i,
            phi.implies(outcome),
        ))
    });
}

#[test]
fn a10_realistic_attraction_is_known_rewarding() {
    outcome_axiom(110, Modality::RealAttract, true);
}

#[test]
fn a11_realistic_repulsion_is_known_punishing() {
    outcome_axiom(111, Modality::RealRepulse, false);
}

#[test]
fn r2_window_of_negated_validities() {
    let mut rng = rng(112);
    for _ in 0..50 {
        let inst = instance_with_outcomes(&mut rng);
        let (_, i) = pick_agent(&mut rng, &inst);
        let psi = random_formula(&mut rng, &inst, 1);
        let valid = match rng.gen_range(0..3) {
            0 => psi.clone().or(psi.not()),
            1 => Formula::modal(Modality::Knows, i.clone(), psi.clone().implies(psi)),
            _ => Formula::believes(i.clone(), psi_l0(&mut rng, &inst)).implies(Formula::modal(
                Modality::Knows,
                i.clone(),
                Formula::Top,
            )),
        };
        assert_valid(&inst.ctx, &valid);
        let m = Modality::ALL[rng.gen_range(1..5)];
        assert_valid(&inst.ctx, &Formula::modal(m, i, valid.not()));
    }
}

fn psi_l0(rng: &mut ChaCha8Rng, inst: &Instance) -> Formula {
    random_l0(rng, &inst.atoms, 1)
}

/// Runs `property` on every state of 100 random instances.
fn position_suite(seed: u64, property: impl Fn(&mut ChaCha8Rng, &Instance) -> Formula) {
    let mut rng = rng(seed);
    for _ in 0..100 {
        let inst = random_instance(&mut rng, MAX_EXPONENT);
        let f = property(&mut rng, &inst);
        let checker = Checker::new(&inst.ctx);
        for s in all_states(&inst.ctx) {
            assert!(checker.check(&s, &f).unwrap(), "{f} fails at {s:?}");
        }
    }
}

#[test]
fn motivation_excludes_demotivation() {
    position_suite(201, |rng, inst| {
        let (_, i) = pick_agent(rng, inst);
        let phi = random_formula(rng, inst, 1);
        let realistic = rng.gen_bool(0.5);
        Formula::position(Position::Motivated, realistic, i.clone(), phi.clone())
            .implies(Formula::position(Position::Demotivated, realistic, i, phi).not())
    });
}

#[test]
fn exactly_one_cognitive_position() {
    let mut rng = rng(202);
    for _ in 0..100 {
        let inst = random_instance(&mut rng, MAX_EXPONENT);
        let (_, i) = pick_agent(&mut rng, &inst);
        let phi = random_formula(&mut rng, &inst, 1);
        let realistic = rng.gen_bool(0.5);
        let cells: Vec<Formula> = Position::ALL
            .iter()
            .map(|p| Formula::position(*p, realistic, i.clone(), phi.clone()))
            .collect();
        let checker = Checker::new(&inst.ctx);
        for s in all_states(&inst.ctx) {
            let held = cells
                .iter()
                .filter(|c| checker.check(&s, c).unwrap())
                .count();
            assert_eq!(held, 1, "{phi} at {s:?}");
        }
    }
}

fn pref(realistic: bool, i: &AgentId, worse: &Formula, better: &Formula) -> Formula {
    Formula::preference(realistic, i.clone(), worse.clone(), better.clone())
}

#[test]
fn preference_is_irreflexive() {
    position_suite(203, |rng, inst| {
        let (_, i) = pick_agent(rng, inst);
        let phi = random_formula(rng, inst, 1);
        pref(rng.gen_bool(0.5), &i, &phi, &phi).not()
    });
}

#[test]
fn preference_is_asymmetric() {
    position_suite(204, |rng, inst| {
        let (_, i) = pick_agent(rng, inst);
        let (phi, psi) = (random_formula(rng, inst, 1), random_formula(rng, inst, 1));
        let r = rng.gen_bool(0.5);
        pref(r, &i, &psi, &phi).implies(pref(r, &i, &phi, &psi).not())
    });
}

#[test]
fn preference_is_transitive() {
    position_suite(205, |rng, inst| {
        let (_, i) = pick_agent(rng, inst);
        let [a, b, c] = [(); 3].map(|_| random_formula(rng, inst, 1));
        let r = rng.gen_bool(0.5);
        pref(r, &i, &a, &b)
            .and(pref(r, &i, &b, &c))
            .implies(pref(r, &i, &a, &c))
    });
}

#[test]
fn attraction_is_antimonotone() {
    let mut rng = rng(206);
    let mut nontrivial = 0;
    for _ in 0..100 {
        let inst = random_instance(&mut rng, MAX_EXPONENT);
        let (_, i) = pick_agent(&mut rng, &inst);
        let psi = random_formula(&mut rng, &inst, 1);
        // strengthening ψ always yields a subset of its states
        let phi = psi.clone().and(random_formula(&mut rng, &inst, 1));
        let checker = Checker::new(&inst.ctx);
        let states = all_states(&inst.ctx);
        for s in &states {
            assert!(!checker.check(s, &phi).unwrap() || checker.check(s, &psi).unwrap());
        }
        let m = [Modality::Attract, Modality::Repulse][rng.gen_range(0..2)];
        for s in &states {
            if checker
                .check(s, &Formula::modal(m, i.clone(), psi.clone()))
                .unwrap()
            {
                nontrivial += 1;
                assert!(checker
                    .check(s, &Formula::modal(m, i.clone(), phi.clone()))
                    .unwrap());
            }
        }
    }
    assert!(nontrivial > 0);
}

#[test]
fn inconsistent_base_makes_falsum_known() {
    let mut rng = rng(207);
    let mut found = 0;
    for _ in 0..50 {
        let inst = random_instance(&mut rng, MAX_EXPONENT);
        let checker = Checker::new(&inst.ctx);
        for s in all_states(&inst.ctx) {
            for i in &inst.agents {
                let consistent = consistent_base(s.base(i), &inst.ctx).unwrap();
                let knows_falsum = checker
                    .check(
                        &s,
                        &Formula::modal(Modality::Knows, i.clone(), Formula::Bottom),
                    )
                    .unwrap();
                assert_eq!(knows_falsum, !consistent);
                found += usize::from(!consistent);
            }
        }
    }
    assert!(found > 0, "no inconsistent base in the corpus");
}

#[test]
fn expansion_and_forgetting_postconditions() {
    let mut rng = rng(208);
    for _ in 0..50 {
        let inst = random_instance(&mut rng, MAX_EXPONENT);
        let (k, i) = pick_agent(&mut rng, &inst);
        let Some(a) = inst.gamma_plus(k).choose(&mut rng).cloned() else {
            continue;
        };
        let s = random_state(&mut rng, &inst.ctx);
        let plus = step_program(&s, &inst.ctx, &Program::expand(i.clone(), a.clone())).unwrap();
        let minus = step_program(&s, &inst.ctx, &Program::forget(i.clone(), a.clone())).unwrap();
        assert_eq!((plus.len(), minus.len()), (1, 1));
        let t = plus.into_iter().next().unwrap();
        assert!(t.base(&i).contains(&a));
        assert_eq!(t.valuation(), s.valuation());
        let u = minus.into_iter().next().unwrap();
        assert!(!u.base(&i).contains(&a));
        let mut expected = s.base(&i).clone();
        expected.remove(&a);
        assert_eq!(u.base(&i), &expected);
    }
}

#[test]
fn revision_success_inclusion_and_consistency() {
    let mut rng = rng(209);
    for _ in 0..100 {
        let inst = random_instance(&mut rng, MAX_EXPONENT);
        let (k, i) = pick_agent(&mut rng, &inst);
        let Some(a) = inst.gamma_plus(k).choose(&mut rng).cloned() else {
            continue;
        };
        let s = random_state(&mut rng, &inst.ctx);
        let b = s.base(&i);
        let r = apply_revise(b, &a, &inst.ctx, &i).unwrap();
        let a_consistent = consistent_base(&BTreeSet::from([a.clone()]), &inst.ctx).unwrap();
        if a_consistent {
            assert!(r.contains(&a));
            assert!(consistent_base(&r, &inst.ctx).unwrap());
        }
        let mut union = b.clone();
        union.insert(a.clone());
        if consistent_base(&union, &inst.ctx).unwrap() {
            assert_eq!(r, union);
        }
        let next = step_program(&s, &inst.ctx, &Program::revise(i.clone(), a)).unwrap();
        assert_eq!(next.len(), 1);
        assert_eq!(next.into_iter().next().unwrap().base(&i), &r);
    }
}

/// The symbolic revision constraint admits exactly the successor computed by
/// `apply_revise`: each belief variable and atom of the successor agrees.
#[test]
fn symbolic_revision_matches_oracle() {
    let mut rng = rng(210);
    for _ in 0..60 {
        let inst = random_instance(&mut rng, 8);
        let (k, i) = pick_agent(&mut rng, &inst);
        let a = member_or_other(&mut rng, &inst, k);
        let revise = Program::revise(i.clone(), a.clone());
        let states = all_states(&inst.ctx);
        let mut probes: Vec<Formula> = inst
            .ctx
            .atoms()
            .iter()
            .map(|x| Formula::Atom(x.clone()))
            .collect();
        for (j, agent) in inst.agents.iter().enumerate() {
            probes.extend(
                inst.gamma_plus(j)
                    .iter()
                    .map(|m| Formula::believes(agent.clone(), m.clone())),
            );
        }
        let some = symbolic_table(&inst.ctx, &Formula::possibly(revise.clone(), Formula::Top));
        assert!(some.iter().all(|b| *b), "revision by {a} lacks a successor");
        for probe in probes {
            let table =
                symbolic_table(&inst.ctx, &Formula::possibly(revise.clone(), probe.clone()));
            for (s, sym) in states.iter().zip(&table) {
                let t = step_program(s, &inst.ctx, &revise).unwrap();
                let t = t.iter().next().unwrap();
                let holds = match &probe {
                    Formula::Atom(x) => t.holds(x),
                    Formula::Believes(j, m) => t.base(j).contains(&**m),
                    _ => unreachable!(),
                };
                assert_eq!(*sym, holds, "*({i}, {a}) then {probe} at {s:?}");
            }
        }
    }
}

#[test]
fn hand_derived_revision_on_both_paths() {
    let atoms = vec![Atom::plain("p"), Atom::plain("q")];
    let p = Formula::atom("p");
    let q = Formula::atom("q");
    let gamma = vec![p.clone(), p.clone().implies(q.clone()), q.clone().not()];
    let profile =
        lca_core::VocabularyProfile::new(vec!["1".into()], atoms, [("1".into(), gamma)]).unwrap();
    let ctx = Context::new(&profile);
    let i = AgentId::new("1");
    let b = BTreeSet::from([p.clone(), p.clone().implies(q.clone())]);
    let a = q.clone().not();
    assert_eq!(
        apply_revise(&b, &a, &ctx, &i).unwrap(),
        BTreeSet::from([a.clone()])
    );
    let s = lca_core::State::new()
        .with_belief("1", p.clone())
        .with_belief("1", p.clone().implies(q.clone()));
    let after = Formula::after(
        Program::revise("1", a.clone()),
        Formula::believes("1", a.clone())
            .and(Formula::believes("1", p.clone()).not())
            .and(Formula::believes("1", p.implies(q)).not()),
    );
    let r = lca_core::reduce(&ctx, &s, &after, &TranslateOptions::default()).unwrap();
    assert!(solve_bdd(&r.closed(), &SolveOptions::default()).unwrap());
    assert!(lca_core::check_explicit(&s, &ctx, &after).unwrap());
}
