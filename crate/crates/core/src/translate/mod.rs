//! Reduction of model checking to QBF truth.
//!
//! A [`TranslationSession`] owns the level counter of one reduction. Each
//! modal operator, box and sequential composition quantifies a fresh level;
//! the revision abbreviations quantify fresh levels for the candidate maximal
//! consistent sets and for the consistency test.

mod revision;

use thiserror::Error;

use crate::attitudes::expand_derived;
use crate::model::{Context, ModelError, State};
use crate::qbf::{substitute, Assignment, LevelCounter, LevelId, Problem, QVar, Qbf};
use crate::syntax::{AgentId, Formula, Modality, Program};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TranslateError {
    #[error("unknown agent `{0}`")]
    UnknownAgent(AgentId),
    #[error("atom `{0}` is not tracked by the vocabulary")]
    UntrackedAtom(String),
    #[error("derived operator left in `{0}`; expand it first")]
    Derived(String),
    #[error("`{0}` is not a base-language formula")]
    NotL0(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TranslateOptions {
    /// Let the epistemic, attraction and repulsion formulas range over `Γ_i`
    /// only, instead of the closed vocabulary `Γ_i⁺`.
    pub strict: bool,
}

pub struct TranslationSession<'c> {
    ctx: &'c Context,
    options: TranslateOptions,
    counter: LevelCounter,
    root: LevelId,
}

impl<'c> TranslationSession<'c> {
    pub fn new(ctx: &'c Context, options: TranslateOptions) -> Self {
        let mut counter = LevelCounter::new();
        let root = counter.fresh();
        TranslationSession {
            ctx,
            options,
            counter,
            root,
        }
    }

    pub fn context(&self) -> &'c Context {
        self.ctx
    }

    pub fn root(&self) -> LevelId {
        self.root
    }

    pub fn fresh(&mut self) -> LevelId {
        self.counter.fresh()
    }

    pub fn levels_issued(&self) -> u32 {
        self.counter.issued()
    }

    fn agent(&self, i: &AgentId) -> Result<usize, TranslateError> {
        self.ctx
            .agent_index(i)
            .ok_or_else(|| TranslateError::UnknownAgent(i.clone()))
    }

    fn x(level: LevelId, var: usize) -> Qbf {
        Qbf::Var(QVar::new(level, var))
    }

    /// `tr_s(f)` for a derived-free formula.
    pub fn tr(&mut self, f: &Formula, s: LevelId) -> Result<Qbf, TranslateError> {
        Ok(match f {
            Formula::Atom(a) => {
                let v = self
                    .ctx
                    .atom_var(a)
                    .ok_or_else(|| TranslateError::UntrackedAtom(a.to_string()))?;
                Self::x(s, v)
            }
            Formula::Top => Qbf::TRUE,
            Formula::Bottom => Qbf::FALSE,
            Formula::Not(a) => Qbf::not(self.tr(a, s)?),
            Formula::And(a, b) => Qbf::and([self.tr(a, s)?, self.tr(b, s)?]),
            Formula::Or(a, b) => Qbf::or([self.tr(a, s)?, self.tr(b, s)?]),
            Formula::Implies(a, b) => Qbf::implies(self.tr(a, s)?, self.tr(b, s)?),
            Formula::Iff(a, b) => Qbf::iff(self.tr(a, s)?, self.tr(b, s)?),
            Formula::Believes(i, a) => {
                self.agent(i)?;
                if !a.is_l0() {
                    return Err(TranslateError::NotL0(a.to_string()));
                }
                match self.ctx.belief_var(i, a) {
                    Some(v) => Self::x(s, v),
                    None => Qbf::FALSE,
                }
            }
            Formula::Modal(m, i, body) => {
                let t = self.fresh();
                let inner = self.tr(body, t)?;
                let matrix = match m {
                    Modality::Knows => Qbf::implies(self.epistemic(i, s, t)?, inner),
                    Modality::Attract => Qbf::implies(inner, self.attract(i, s, t)?),
                    Modality::Repulse => Qbf::implies(inner, self.repulse(i, s, t)?),
                    Modality::RealAttract => Qbf::implies(
                        Qbf::and([inner, self.epistemic(i, s, t)?]),
                        self.attract(i, s, t)?,
                    ),
                    Modality::RealRepulse => Qbf::implies(
                        Qbf::and([inner, self.epistemic(i, s, t)?]),
                        self.repulse(i, s, t)?,
                    ),
                };
                Qbf::forall(t, matrix)
            }
            Formula::Box(p, body) => {
                let t = self.fresh();
                let step = self.tr_prog(p, s, t)?;
                let inner = self.tr(body, t)?;
                Qbf::forall(t, Qbf::implies(step, inner))
            }
            Formula::Diamond(p, body) => {
                let t = self.fresh();
                let step = self.tr_prog(p, s, t)?;
                let inner = self.tr(body, t)?;
                Qbf::exists(t, Qbf::and([step, inner]))
            }
            Formula::Derived(_) => return Err(TranslateError::Derived(f.to_string())),
        })
    }

    /// `tr_{s,t}(p)`: level `t` describes a `p`-successor of level `s`.
    pub fn tr_prog(&mut self, p: &Program, s: LevelId, t: LevelId) -> Result<Qbf, TranslateError> {
        Ok(match p {
            Program::Expand(i, a) | Program::Forget(i, a) | Program::Revise(i, a) => {
                let idx = self.agent(i)?;
                if !a.is_l0() {
                    return Err(TranslateError::NotL0(a.to_string()));
                }
                let own = match p {
                    Program::Expand(..) => self.eq_plus(idx, a, s, t),
                    Program::Forget(..) => self.eq_minus(idx, a, s, t),
                    _ => self.imcs(idx, s, t, a)?,
                };
                Qbf::and([self.eq_others(idx, s, t), own, self.eq_prop(s, t)])
            }
            Program::Seq(a, b) => {
                let mid = self.fresh();
                let first = self.tr_prog(a, s, mid)?;
                let second = self.tr_prog(b, mid, t)?;
                Qbf::exists(mid, Qbf::and([first, second]))
            }
            Program::Choice(a, b) => Qbf::or([self.tr_prog(a, s, t)?, self.tr_prog(b, s, t)?]),
            Program::Test(f) => {
                let guard = self.tr(f, s)?;
                let same = (0..self.ctx.agents().len()).map(|j| self.eq_agent(j, s, t));
                Qbf::and(same.chain([self.eq_prop(s, t), guard]))
            }
        })
    }

    fn same(s: LevelId, t: LevelId, vars: impl Iterator<Item = usize>) -> Qbf {
        Qbf::and(vars.map(|v| Qbf::iff(Self::x(s, v), Self::x(t, v))))
    }

    /// The valuations at `s` and `t` agree.
    pub fn eq_prop(&self, s: LevelId, t: LevelId) -> Qbf {
        Self::same(s, t, self.ctx.atom_range())
    }

    /// The bases of agent `j` at `s` and `t` agree.
    pub fn eq_agent(&self, j: usize, s: LevelId, t: LevelId) -> Qbf {
        Self::same(s, t, self.ctx.belief_range(j))
    }

    fn eq_others(&self, i: usize, s: LevelId, t: LevelId) -> Qbf {
        Qbf::and(
            (0..self.ctx.agents().len())
                .filter(|&j| j != i)
                .map(|j| self.eq_agent(j, s, t)),
        )
    }

    fn member_var(&self, i: usize, a: &Formula) -> Option<usize> {
        self.ctx.belief_var(&self.ctx.agents()[i], a)
    }

    fn eq_except(&self, i: usize, a: &Formula, s: LevelId, t: LevelId) -> Qbf {
        let skip = self.member_var(i, a);
        Self::same(s, t, self.ctx.belief_range(i).filter(|v| Some(*v) != skip))
    }

    /// `B_i(t) = B_i(s) ∪ {a}`; unsatisfiable when `a ∉ Γ_i⁺`.
    pub fn eq_plus(&self, i: usize, a: &Formula, s: LevelId, t: LevelId) -> Qbf {
        match self.member_var(i, a) {
            Some(v) => Qbf::and([Self::x(t, v), self.eq_except(i, a, s, t)]),
            None => Qbf::FALSE,
        }
    }

    /// `B_i(t) = B_i(s) \ {a}`.
    pub fn eq_minus(&self, i: usize, a: &Formula, s: LevelId, t: LevelId) -> Qbf {
        let own = match self.member_var(i, a) {
            Some(v) => Qbf::not(Self::x(t, v)),
            None => Qbf::TRUE,
        };
        Qbf::and([own, self.eq_except(i, a, s, t)])
    }

    fn range(&self, idx: usize, full: bool) -> Vec<(usize, Formula)> {
        let members = if full || !self.options.strict {
            self.ctx.gamma_plus_of(idx)
        } else {
            self.ctx.gamma_of(idx)
        };
        members
            .iter()
            .map(|m| {
                (
                    self.member_var(idx, m).expect("member of Γ_i is in Γ_i⁺"),
                    m.clone(),
                )
            })
            .collect()
    }

    fn epistemic_over(
        &mut self,
        idx: usize,
        s: LevelId,
        t: LevelId,
        full: bool,
    ) -> Result<Qbf, TranslateError> {
        let mut parts = Vec::new();
        for (v, m) in self.range(idx, full) {
            parts.push(Qbf::implies(Self::x(s, v), self.tr(&m, t)?));
        }
        Ok(Qbf::and(parts))
    }

    /// Every member of `B_i(s)` holds at `t`.
    pub fn epistemic(
        &mut self,
        i: &AgentId,
        s: LevelId,
        t: LevelId,
    ) -> Result<Qbf, TranslateError> {
        let idx = self.agent(i)?;
        self.epistemic_over(idx, s, t, false)
    }

    fn desire(
        &mut self,
        i: &AgentId,
        s: LevelId,
        t: LevelId,
        reward: bool,
    ) -> Result<Qbf, TranslateError> {
        let idx = self.agent(i)?;
        let mut parts = Vec::new();
        for (v, m) in self.range(idx, false) {
            let premise = if reward {
                m.reward_premise(i)
            } else {
                m.punish_premise(i)
            };
            if let Some(premise) = premise {
                parts.push(Qbf::and([Self::x(s, v), self.tr(premise, t)?]));
            }
        }
        Ok(Qbf::or(parts))
    }

    /// Some appetitive desire of `B_i(s)` holds at `t`.
    pub fn attract(&mut self, i: &AgentId, s: LevelId, t: LevelId) -> Result<Qbf, TranslateError> {
        self.desire(i, s, t, true)
    }

    /// Some aversive desire of `B_i(s)` holds at `t`.
    pub fn repulse(&mut self, i: &AgentId, s: LevelId, t: LevelId) -> Result<Qbf, TranslateError> {
        self.desire(i, s, t, false)
    }

    /// Literals fixing every variable of level `s` to its value at `s0`.
    pub fn desc(&self, s0: &State, s: LevelId) -> Result<Qbf, TranslateError> {
        let values = self.ctx.assignment(s0)?;
        Ok(Qbf::and(values.into_iter().enumerate().map(|(v, b)| {
            if b {
                Self::x(s, v)
            } else {
                Qbf::not(Self::x(s, v))
            }
        })))
    }
}

/// Result of [`reduce`]: `∃X_root(desc ∧ matrix)`.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub width: usize,
    pub root: LevelId,
    pub desc: Qbf,
    pub matrix: Qbf,
    /// Values of the root level fixed by `desc`.
    pub assignment: Vec<bool>,
    pub levels: u32,
}

impl Reduction {
    /// The closed formula as stated.
    pub fn closed(&self) -> Problem {
        Problem::new(
            self.width,
            Qbf::exists(
                self.root,
                Qbf::and([self.desc.clone(), self.matrix.clone()]),
            ),
        )
    }

    /// The matrix with the root level replaced by its fixed values.
    pub fn instantiated(&self) -> Problem {
        let env: Assignment = self
            .assignment
            .iter()
            .enumerate()
            .map(|(v, b)| (QVar::new(self.root, v), *b))
            .collect();
        Problem::new(self.width, substitute(&self.matrix, &env))
    }
}

/// Builds the closed QBF that is true iff `(s0, S_Γ) ⊨ f`.
pub fn reduce(
    ctx: &Context,
    s0: &State,
    f: &Formula,
    options: &TranslateOptions,
) -> Result<Reduction, TranslateError> {
    let mut session = TranslationSession::new(ctx, *options);
    let root = session.root();
    let desc = session.desc(s0, root)?;
    let matrix = session.tr(&expand_derived(f), root)?;
    Ok(Reduction {
        width: ctx.exponent(),
        root,
        desc,
        matrix,
        assignment: ctx.assignment(s0)?,
        levels: session.levels_issued(),
    })
}

/// `tr_root(f)` with the root level left free; `f` is valid in `S_Γ` iff
/// `∀X_root` of the matrix is true.
#[derive(Clone, Debug)]
pub struct Validity {
    pub width: usize,
    pub root: LevelId,
    pub matrix: Qbf,
}

impl Validity {
    pub fn closed(&self) -> Problem {
        Problem::new(self.width, Qbf::forall(self.root, self.matrix.clone()))
    }
}

pub fn validity(
    ctx: &Context,
    f: &Formula,
    options: &TranslateOptions,
) -> Result<Validity, TranslateError> {
    let mut session = TranslationSession::new(ctx, *options);
    let root = session.root();
    let matrix = session.tr(&expand_derived(f), root)?;
    Ok(Validity {
        width: ctx.exponent(),
        root,
        matrix,
    })
}

#[cfg(test)]
mod tests;
