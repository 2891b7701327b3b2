//! Elimination of the derived cognitive positions and preferences into the
//! primitive attraction/repulsion modalities.

use crate::syntax::{DerivedOp, Formula, Modality, Position, Program};

/// Rewrites every derived operator bottom-up; the result is derived-free.
pub fn expand_derived(f: &Formula) -> Formula {
    match f {
        Formula::Atom(_) | Formula::Top | Formula::Bottom => f.clone(),
        Formula::Not(a) => expand_derived(a).not(),
        Formula::And(a, b) => expand_derived(a).and(expand_derived(b)),
        Formula::Or(a, b) => expand_derived(a).or(expand_derived(b)),
        Formula::Implies(a, b) => expand_derived(a).implies(expand_derived(b)),
        Formula::Iff(a, b) => expand_derived(a).iff(expand_derived(b)),
        Formula::Believes(..) => f.clone(),
        Formula::Modal(m, i, a) => Formula::modal(*m, i.clone(), expand_derived(a)),
        Formula::Box(p, a) => Formula::after(expand_program(p), expand_derived(a)),
        Formula::Diamond(p, a) => Formula::possibly(expand_program(p), expand_derived(a)),
        Formula::Derived(d) => match &**d {
            DerivedOp::Position {
                position,
                realistic,
                agent,
                arg,
            } => position_formula(*position, *realistic, agent, &expand_derived(arg)),
            DerivedOp::Preference {
                realistic,
                agent,
                worse,
                better,
            } => {
                let worse = expand_derived(worse);
                let better = expand_derived(better);
                let mot = |x: &Formula| position_formula(Position::Motivated, *realistic, agent, x);
                let demot =
                    |x: &Formula| position_formula(Position::Demotivated, *realistic, agent, x);
                mot(&better)
                    .and(mot(&worse).not())
                    .or(demot(&worse).and(demot(&better).not()))
            }
        },
    }
}

pub(crate) fn expand_program(p: &Program) -> Program {
    match p {
        Program::Expand(..) | Program::Forget(..) | Program::Revise(..) => p.clone(),
        Program::Seq(a, b) => expand_program(a).then(expand_program(b)),
        Program::Choice(a, b) => expand_program(a).or(expand_program(b)),
        Program::Test(f) => Program::test(expand_derived(f)),
    }
}

fn position_formula(
    position: Position,
    realistic: bool,
    agent: &crate::syntax::AgentId,
    arg: &Formula,
) -> Formula {
    let (attr, rep) = if realistic {
        (Modality::RealAttract, Modality::RealRepulse)
    } else {
        (Modality::Attract, Modality::Repulse)
    };
    let a = Formula::modal(attr, agent.clone(), arg.clone());
    let r = Formula::modal(rep, agent.clone(), arg.clone());
    match position {
        Position::Motivated => a.and(r.not()),
        Position::Demotivated => a.not().and(r),
        Position::Indifferent => a.not().and(r.not()),
        Position::Ambivalent => a.and(r),
    }
}
