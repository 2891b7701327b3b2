//! Seeded generators for small instances, states, formulas and QBF.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use lca_core::qbf::{LevelId, Qbf};
use lca_core::solve::{Compiler, SolveOptions};
use lca_core::syntax::{Position, Program};
use lca_core::translate::{validity, TranslateOptions};
use lca_core::{AgentId, Context, Formula, Modality, State, VocabularyProfile};

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub struct Instance {
    pub agents: Vec<AgentId>,
    pub atoms: Vec<Formula>,
    pub profile: VocabularyProfile,
    pub ctx: Context,
}

impl Instance {
    pub fn gamma_plus(&self, k: usize) -> &[Formula] {
        self.ctx.gamma_plus_of(k)
    }
}

pub fn random_l0(rng: &mut ChaCha8Rng, atoms: &[Formula], depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.35) {
        return match rng.gen_range(0..10) {
            0 => Formula::Top,
            1 => Formula::Bottom,
            _ => atoms.choose(rng).unwrap().clone(),
        };
    }
    let a = random_l0(rng, atoms, depth - 1);
    match rng.gen_range(0..5) {
        0 => a.not(),
        1 => a.and(random_l0(rng, atoms, depth - 1)),
        2 => a.or(random_l0(rng, atoms, depth - 1)),
        3 => a.implies(random_l0(rng, atoms, depth - 1)),
        _ => a.iff(random_l0(rng, atoms, depth - 1)),
    }
}

/// One or two agents over `p`, `q` with small vocabularies, retried until
/// the state space has at most `2^max_exponent` states.
pub fn random_instance(rng: &mut ChaCha8Rng, max_exponent: usize) -> Instance {
    loop {
        let n_agents = rng.gen_range(1..=2);
        let agents: Vec<AgentId> = (1..=n_agents)
            .map(|k| AgentId::new(k.to_string()))
            .collect();
        let names: &[&str] = if rng.gen_bool(0.5) {
            &["p", "q"]
        } else {
            &["p"]
        };
        let atoms: Vec<Formula> = names.iter().map(|n| Formula::atom(*n)).collect();
        let gammas: Vec<(AgentId, Vec<Formula>)> = agents
            .iter()
            .map(|i| {
                let size = rng.gen_range(0..=2);
                let members = (0..size)
                    .map(|_| match rng.gen_range(0..6) {
                        0 => random_l0(rng, &atoms, 1).implies(Formula::reward(i.clone())),
                        1 => random_l0(rng, &atoms, 1).implies(Formula::punish(i.clone())),
                        _ => random_l0(rng, &atoms, 2),
                    })
                    .collect();
                (i.clone(), members)
            })
            .collect();
        let plain = names.iter().map(|n| lca_core::Atom::plain(*n)).collect();
        let profile = VocabularyProfile::new(agents.clone(), plain, gammas).unwrap();
        let ctx = Context::new(&profile);
        if ctx.exponent() <= max_exponent {
            return Instance {
                agents,
                atoms,
                profile,
                ctx,
            };
        }
    }
}

pub fn random_state(rng: &mut ChaCha8Rng, ctx: &Context) -> State {
    let bits: Vec<bool> = (0..ctx.exponent()).map(|_| rng.gen_bool(0.5)).collect();
    ctx.decode_with(|v| bits[v])
}

/// Every state of the context, in binary counting order.
pub fn all_states(ctx: &Context) -> Vec<State> {
    lca_core::model::enumerate_states(ctx).unwrap().collect()
}

/// Truth of `f` at every state of `ctx` (in [`all_states`] order), through
/// one diagram of the open matrix evaluated at each state's assignment.
pub fn symbolic_table(ctx: &Context, f: &Formula) -> Vec<bool> {
    let v = validity(ctx, f, &TranslateOptions::default()).unwrap();
    let mut c = Compiler::new(v.width, &SolveOptions::default());
    let root = c.build(&v.matrix).unwrap();
    all_states(ctx)
        .iter()
        .map(|s| {
            let bits = ctx.assignment(s).unwrap();
            c.manager().eval(root, |var| bits[var as usize])
        })
        .collect()
}

pub fn member_or_other(rng: &mut ChaCha8Rng, inst: &Instance, k: usize) -> Formula {
    let plus = inst.gamma_plus(k);
    if !plus.is_empty() && rng.gen_bool(0.8) {
        plus.choose(rng).unwrap().clone()
    } else {
        random_l0(rng, &inst.atoms, 1)
    }
}

fn tracked_atoms(inst: &Instance) -> Vec<Formula> {
    inst.ctx
        .atoms()
        .iter()
        .map(|a| Formula::Atom(a.clone()))
        .collect()
}

pub fn random_program(rng: &mut ChaCha8Rng, inst: &Instance, depth: usize) -> Program {
    let k = rng.gen_range(0..inst.agents.len());
    let i = inst.agents[k].clone();
    let leaf = depth == 0 || rng.gen_bool(0.5);
    match rng.gen_range(0..if leaf { 4 } else { 6 }) {
        0 => Program::expand(i, member_or_other(rng, inst, k)),
        1 => Program::forget(i, member_or_other(rng, inst, k)),
        2 => Program::revise(i, member_or_other(rng, inst, k)),
        3 => Program::test(random_formula(rng, inst, depth.saturating_sub(1))),
        4 => random_program(rng, inst, depth - 1).then(random_program(rng, inst, depth - 1)),
        _ => random_program(rng, inst, depth - 1).or(random_program(rng, inst, depth - 1)),
    }
}

/// Formulas of modal depth at most `depth` using every construct.
pub fn random_formula(rng: &mut ChaCha8Rng, inst: &Instance, depth: usize) -> Formula {
    let atoms = tracked_atoms(inst);
    if depth == 0 || rng.gen_bool(0.25) {
        return match rng.gen_range(0..6) {
            0 | 1 => {
                let k = rng.gen_range(0..inst.agents.len());
                Formula::believes(inst.agents[k].clone(), member_or_other(rng, inst, k))
            }
            _ => random_l0(rng, &atoms, 1),
        };
    }
    let i = inst.agents.choose(rng).unwrap().clone();
    match rng.gen_range(0..13) {
        0 => random_formula(rng, inst, depth).not(),
        1 => random_formula(rng, inst, depth - 1).and(random_formula(rng, inst, depth - 1)),
        2 => random_formula(rng, inst, depth - 1).or(random_formula(rng, inst, depth - 1)),
        3 => random_formula(rng, inst, depth - 1).implies(random_formula(rng, inst, depth - 1)),
        4..=8 => {
            let m = Modality::ALL[rng.gen_range(0..5)];
            Formula::modal(m, i, random_formula(rng, inst, depth - 1))
        }
        9 => {
            let p = Position::ALL[rng.gen_range(0..4)];
            Formula::position(
                p,
                rng.gen_bool(0.5),
                i,
                random_formula(rng, inst, depth - 1),
            )
        }
        10 => Formula::preference(
            rng.gen_bool(0.5),
            i,
            random_l0(rng, &atoms, 1),
            random_l0(rng, &atoms, 1),
        ),
        11 => Formula::after(
            random_program(rng, inst, 1),
            random_formula(rng, inst, depth - 1),
        ),
        _ => Formula::possibly(
            random_program(rng, inst, 1),
            random_formula(rng, inst, depth - 1),
        ),
    }
}

/// A closed QBF over levels `0..levels` of `width` variables, each level
/// bound by exactly one block.
pub fn random_qbf(rng: &mut ChaCha8Rng, width: usize, levels: u32) -> Qbf {
    fn matrix(rng: &mut ChaCha8Rng, scope: &[LevelId], width: usize, depth: usize) -> Qbf {
        if depth == 0 || rng.gen_bool(0.3) {
            if rng.gen_ratio(1, 12) {
                return Qbf::Const(rng.gen_bool(0.5));
            }
            let l = *scope.choose(rng).unwrap();
            let v = Qbf::var(l, rng.gen_range(0..width));
            return if rng.gen_bool(0.5) {
                v
            } else {
                Qbf::Not(Box::new(v))
            };
        }
        let n = rng.gen_range(2..=3);
        let kids: Vec<Qbf> = (0..n)
            .map(|_| matrix(rng, scope, width, depth - 1))
            .collect();
        match rng.gen_range(0..4) {
            0 => Qbf::And(kids),
            1 => Qbf::Or(kids),
            2 => Qbf::Not(Box::new(Qbf::And(kids))),
            _ => {
                let mut it = kids.into_iter();
                Qbf::Implies(Box::new(it.next().unwrap()), Box::new(it.next().unwrap()))
            }
        }
    }
    // levels are nested in order; siblings are spliced in by conjunction or
    // disjunction with independent subformulas over the enclosing scope
    fn build(
        rng: &mut ChaCha8Rng,
        scope: &mut Vec<LevelId>,
        next: u32,
        levels: u32,
        width: usize,
    ) -> Qbf {
        if next == levels {
            return matrix(rng, scope, width, 4);
        }
        let l = LevelId(next);
        scope.push(l);
        let body = build(rng, scope, next + 1, levels, width);
        scope.pop();
        let block = if rng.gen_bool(0.5) {
            Qbf::Forall(l, Box::new(body))
        } else {
            Qbf::Exists(l, Box::new(body))
        };
        if scope.is_empty() {
            return block;
        }
        let side = matrix(rng, scope, width, 2);
        match rng.gen_range(0..4) {
            0 => Qbf::And(vec![block, side]),
            1 => Qbf::Or(vec![side, block]),
            2 => Qbf::Not(Box::new(block)),
            _ => Qbf::Implies(Box::new(block), Box::new(side)),
        }
    }
    build(rng, &mut Vec::new(), 0, levels, width)
}
