//! The naive evaluator, the BDD solver and the two exporters (read back by
//! the reference readers) agree on random closed QBF.

mod common;

use common::*;
use lca_core::qbf::{eval_naive, substitute, Assignment, LevelId, QVar};
use lca_core::solve::reference::{solve_qcir, solve_qdimacs};
use lca_core::solve::{export_qcir, export_qcir_prenex, export_qdimacs, solve_bdd, SolveOptions};
use lca_core::translate::{reduce, TranslateOptions};
use lca_core::Problem;
use rand::Rng;

const BUDGET: usize = 1_000_000;

fn shape(rng: &mut rand_chacha::ChaCha8Rng) -> (usize, u32) {
    let width = rng.gen_range(1..=4);
    let levels = rng.gen_range(1..=(12 / width) as u32);
    (width, levels)
}

#[test]
fn naive_and_bdd_agree_on_random_qbf() {
    let mut rng = rng(301);
    let mut truths = 0;
    for _ in 0..500 {
        let (width, levels) = shape(&mut rng);
        let q = random_qbf(&mut rng, width, levels);
        assert!(q.is_closed());
        let naive = eval_naive(&q, width, &Assignment::new()).unwrap();
        let bdd = solve_bdd(&Problem::new(width, q.clone()), &SolveOptions::default()).unwrap();
        assert_eq!(naive, bdd, "{q}");
        truths += usize::from(naive);
    }
    // both outcomes are well represented
    assert!((100..400).contains(&truths), "{truths} true out of 500");
}

#[test]
fn exports_read_back_to_the_same_verdict() {
    let mut rng = rng(302);
    for _ in 0..500 {
        let (width, levels) = shape(&mut rng);
        let p = Problem::new(width, random_qbf(&mut rng, width, levels));
        let expected = eval_naive(&p.formula, width, &Assignment::new()).unwrap();
        let qcir = export_qcir(&p, None);
        assert_eq!(
            solve_qcir(&qcir, BUDGET).unwrap(),
            expected,
            "{}\n{qcir}",
            p.formula
        );
        let qdimacs = export_qdimacs(&p);
        assert_eq!(
            solve_qdimacs(&qdimacs, BUDGET).unwrap(),
            expected,
            "{}\n{qdimacs}",
            p.formula
        );
    }
}

#[test]
fn exports_of_reductions_read_back() {
    let mut rng = rng(303);
    for _ in 0..50 {
        let inst = random_instance(&mut rng, 8);
        let f = random_formula(&mut rng, &inst, 2);
        let s0 = random_state(&mut rng, &inst.ctx);
        let expected = lca_core::check_explicit(&s0, &inst.ctx, &f).unwrap();
        let p = reduce(&inst.ctx, &s0, &f, &TranslateOptions::default())
            .unwrap()
            .closed();
        let qcir = export_qcir(&p, Some(&inst.ctx));
        assert_eq!(solve_qcir(&qcir, BUDGET).unwrap(), expected, "{f}");
        let prenex = export_qcir_prenex(&p, Some(&inst.ctx));
        assert_eq!(solve_qcir(&prenex, BUDGET).unwrap(), expected, "{f}");
        assert_eq!(
            solve_qdimacs(&export_qdimacs(&p), BUDGET).unwrap(),
            expected,
            "{f}"
        );
    }
}

#[test]
fn substitution_is_idempotent_and_sound() {
    let mut rng = rng(304);
    for _ in 0..200 {
        let (width, levels) = shape(&mut rng);
        let q = random_qbf(&mut rng, width, levels);
        // open the outermost level by stripping its block, then fix it
        let body = match &q {
            lca_core::Qbf::Forall(_, b) | lca_core::Qbf::Exists(_, b) => (**b).clone(),
            other => other.clone(),
        };
        let env: Assignment = (0..width)
            .map(|k| (QVar::new(LevelId(0), k), rng.gen_bool(0.5)))
            .collect();
        let once = substitute(&body, &env);
        assert_eq!(substitute(&once, &Assignment::new()), once);
        assert!(once.is_closed(), "{once}");
        assert_eq!(
            eval_naive(&once, width, &Assignment::new()).unwrap(),
            eval_naive(&body, width, &env).unwrap()
        );
    }
}
