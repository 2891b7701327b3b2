//! Explicit-state satisfaction over `S_Γ`.
//!
//! Formulas are compiled against a [`Context`] so that atoms and explicit
//! beliefs become variable indices. A modal operator at state `s` quantifies
//! over every `t ∈ S_Γ`; since `S_Γ` is the full product of its variables,
//! the quantification only has to range over the variables the condition can
//! read (the support). [`Strategy::Exhaustive`] disables that projection and
//! enumerates every state, which is only feasible for tiny contexts.

use std::cell::RefCell;
use std::collections::{BTreeSet, HashMap};

use crate::attitudes::expand_derived;
use crate::syntax::{AgentId, Atom, Formula, Modality, Program};

use super::state::Point;
use super::vocabulary::Context;
use super::{ModelError, State};

/// `S ⊨ α` for a base-language formula: atoms through the valuation,
/// `B(i, α)` through structural membership in `B_i`.
pub fn sat_base(s: &State, a: &Formula) -> bool {
    match a {
        Formula::Atom(atom) => s.holds(atom),
        Formula::Top => true,
        Formula::Bottom => false,
        Formula::Not(x) => !sat_base(s, x),
        Formula::And(x, y) => sat_base(s, x) && sat_base(s, y),
        Formula::Or(x, y) => sat_base(s, x) || sat_base(s, y),
        Formula::Implies(x, y) => !sat_base(s, x) || sat_base(s, y),
        Formula::Iff(x, y) => sat_base(s, x) == sat_base(s, y),
        Formula::Believes(i, x) => s.base(i).contains(&**x),
        other => panic!("sat_base on a non-base formula: {other}"),
    }
}

/// Appetitive and aversive desire bases of agent `i` at `s`.
pub fn desire_bases(s: &State, i: &AgentId) -> (BTreeSet<Formula>, BTreeSet<Formula>) {
    let base = s.base(i);
    let appetitive = base
        .iter()
        .filter_map(|m| m.reward_premise(i).cloned())
        .collect();
    let aversive = base
        .iter()
        .filter_map(|m| m.punish_premise(i).cloned())
        .collect();
    (appetitive, aversive)
}

/// `t` satisfies every member of `B_i(s)`.
pub fn rel_epistemic(s: &State, t: &State, i: &AgentId) -> bool {
    s.base(i).iter().all(|a| sat_base(t, a))
}

/// Some appetitive desire of `i` at `s` holds at `t`.
pub fn rel_attract(s: &State, t: &State, i: &AgentId) -> bool {
    desire_bases(s, i).0.iter().any(|a| sat_base(t, a))
}

/// Some aversive desire of `i` at `s` holds at `t`.
pub fn rel_repulse(s: &State, t: &State, i: &AgentId) -> bool {
    desire_bases(s, i).1.iter().any(|a| sat_base(t, a))
}

/// How modal operators enumerate candidate states.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Strategy {
    /// Enumerate only the variables the quantified condition depends on.
    #[default]
    Projected,
    /// Enumerate all of `S_Γ`.
    Exhaustive,
}

/// Decides `(s0, S_Γ) ⊨ f`. Derived operators are expanded first.
pub fn check_explicit(s0: &State, c: &Context, f: &Formula) -> Result<bool, ModelError> {
    Checker::new(c).check(s0, f)
}

/// Successors of `s` under `p` inside `S_Γ`.
pub fn step_program(s: &State, c: &Context, p: &Program) -> Result<BTreeSet<State>, ModelError> {
    Checker::new(c).step(s, p)
}

/// Some state of `S_Γ` satisfies every member of `b`.
pub fn consistent_base(b: &BTreeSet<Formula>, c: &Context) -> Result<bool, ModelError> {
    let checker = Checker::new(c);
    let items = b
        .iter()
        .map(|f| checker.compile_l0(f))
        .collect::<Result<Vec<_>, _>>()?;
    checker.consistent(items.iter())
}

/// Intersection of all maximal consistent subsets of `b ∪ {a}` that contain
/// `a`. When no such subset exists (because `a` is inconsistent or outside
/// `Γ_i⁺`) the result is the whole of `Γ_i⁺`.
pub fn apply_revise(
    b: &BTreeSet<Formula>,
    a: &Formula,
    c: &Context,
    i: &AgentId,
) -> Result<BTreeSet<Formula>, ModelError> {
    if !a.is_l0() {
        return Err(ModelError::NotL0(a.to_string()));
    }
    let agent = c.require_agent(i)?;
    let everything = || c.gamma_plus_of(agent).iter().cloned().collect();
    if c.belief_var(i, a).is_none() {
        log::warn!("revision of {i} by {a}: input outside the vocabulary, base set to all of it");
        return Ok(everything());
    }
    let checker = Checker::new(c);
    let others: Vec<&Formula> = b.iter().filter(|f| *f != a).collect();
    let input = checker.compile_l0(a)?;
    let compiled = others
        .iter()
        .map(|f| checker.compile_l0(f))
        .collect::<Result<Vec<_>, _>>()?;
    match checker.mcs_intersection(&input, &compiled)? {
        Some(kept) => {
            let mut out: BTreeSet<Formula> = others
                .into_iter()
                .zip(kept)
                .filter_map(|(f, k)| k.then(|| f.clone()))
                .collect();
            out.insert(a.clone());
            Ok(out)
        }
        None => {
            log::warn!("revision of {i} by {a}: inconsistent input, base set to all of Γ⁺");
            Ok(everything())
        }
    }
}

#[derive(Clone, Debug)]
enum Expr {
    Const(bool),
    Var(usize),
    Not(Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
    Implies(Box<Expr>, Box<Expr>),
    Iff(Box<Expr>, Box<Expr>),
    Modal {
        modality: Modality,
        agent: usize,
        body: Box<Expr>,
        support: Vec<usize>,
    },
    Box(Box<Prog>, Box<Expr>),
    Diamond(Box<Prog>, Box<Expr>),
}

#[derive(Clone, Debug)]
enum Prog {
    Expand(Option<usize>),
    Forget(Option<usize>),
    Revise { agent: usize, input: Option<usize> },
    Seq(Box<Prog>, Box<Prog>),
    Choice(Box<Prog>, Box<Prog>),
    Test(Box<Expr>),
}

/// A compiled base-language formula with the variables it reads.
#[derive(Clone, Debug)]
struct L0 {
    expr: Expr,
    vars: Vec<usize>,
}

#[derive(Clone, Debug)]
struct Member {
    var: usize,
    formula: L0,
    reward_premise: Option<L0>,
    punish_premise: Option<L0>,
}

/// Explicit-state evaluator bound to one context.
pub struct Checker<'c> {
    ctx: &'c Context,
    strategy: Strategy,
    members: Vec<Vec<Member>>,
    // modal values keyed by the body's address and the agent's base; only
    // valid while the compiled formula of the current call is alive
    modal_memo: RefCell<HashMap<(usize, Point), bool>>,
}

impl<'c> Checker<'c> {
    pub fn new(ctx: &'c Context) -> Self {
        let mut checker = Checker {
            ctx,
            strategy: Strategy::default(),
            members: Vec::new(),
            modal_memo: RefCell::default(),
        };
        checker.members = (0..ctx.agents().len())
            .map(|idx| {
                let agent = &ctx.agents()[idx];
                ctx.gamma_plus_of(idx)
                    .iter()
                    .map(|m| Member {
                        var: ctx.belief_var(agent, m).expect("closure member"),
                        formula: checker.compile_l0(m).expect("closure members are tracked"),
                        reward_premise: m
                            .reward_premise(agent)
                            .map(|p| checker.compile_l0(p).expect("tracked")),
                        punish_premise: m
                            .punish_premise(agent)
                            .map(|p| checker.compile_l0(p).expect("tracked")),
                    })
                    .collect()
            })
            .collect();
        checker
    }

    pub fn with_strategy(mut self, strategy: Strategy) -> Self {
        self.strategy = strategy;
        self
    }

    pub fn check(&self, s0: &State, f: &Formula) -> Result<bool, ModelError> {
        let point = self.ctx.encode(s0)?;
        let expr = self.compile(&expand_derived(f))?;
        self.modal_memo.borrow_mut().clear();
        let r = self.eval(&expr, &point);
        self.modal_memo.borrow_mut().clear();
        r
    }

    pub fn step(&self, s: &State, p: &Program) -> Result<BTreeSet<State>, ModelError> {
        let point = self.ctx.encode(s)?;
        let prog = self.compile_program(&crate::attitudes::expand_program(p))?;
        self.modal_memo.borrow_mut().clear();
        let next = self.successors(&prog, &point);
        self.modal_memo.borrow_mut().clear();
        Ok(next?.iter().map(|q| self.ctx.decode(q)).collect())
    }

    fn compile_l0(&self, f: &Formula) -> Result<L0, ModelError> {
        if !f.is_l0() {
            return Err(ModelError::NotL0(f.to_string()));
        }
        let expr = self.compile(f)?;
        let mut vars = Vec::new();
        support(&expr, self.ctx, &mut vars);
        vars.sort_unstable();
        vars.dedup();
        Ok(L0 { expr, vars })
    }

    fn compile(&self, f: &Formula) -> Result<Expr, ModelError> {
        let bin = |a: &Formula, b: &Formula| -> Result<(Box<Expr>, Box<Expr>), ModelError> {
            Ok((Box::new(self.compile(a)?), Box::new(self.compile(b)?)))
        };
        Ok(match f {
            Formula::Atom(atom) => Expr::Var(self.atom(atom)?),
            Formula::Top => Expr::Const(true),
            Formula::Bottom => Expr::Const(false),
            Formula::Not(a) => Expr::Not(Box::new(self.compile(a)?)),
            Formula::And(a, b) => {
                let (a, b) = bin(a, b)?;
                Expr::And(a, b)
            }
            Formula::Or(a, b) => {
                let (a, b) = bin(a, b)?;
                Expr::Or(a, b)
            }
            Formula::Implies(a, b) => {
                let (a, b) = bin(a, b)?;
                Expr::Implies(a, b)
            }
            Formula::Iff(a, b) => {
                let (a, b) = bin(a, b)?;
                Expr::Iff(a, b)
            }
            Formula::Believes(i, a) => {
                self.ctx.require_agent(i)?;
                // atoms inside the argument must still be tracked
                self.compile(a)?;
                match self.ctx.belief_var(i, a) {
                    Some(v) => Expr::Var(v),
                    None => Expr::Const(false),
                }
            }
            Formula::Modal(m, i, a) => {
                let body = self.compile(a)?;
                let mut support_vars = Vec::new();
                support(&body, self.ctx, &mut support_vars);
                support_vars.sort_unstable();
                support_vars.dedup();
                Expr::Modal {
                    modality: *m,
                    agent: self.ctx.require_agent(i)?,
                    body: Box::new(body),
                    support: support_vars,
                }
            }
            Formula::Box(p, a) => Expr::Box(
                Box::new(self.compile_program(p)?),
                Box::new(self.compile(a)?),
            ),
            Formula::Diamond(p, a) => Expr::Diamond(
                Box::new(self.compile_program(p)?),
                Box::new(self.compile(a)?),
            ),
            Formula::Derived(_) => return self.compile(&expand_derived(f)),
        })
    }

    fn compile_program(&self, p: &Program) -> Result<Prog, ModelError> {
        let change = |i: &AgentId, a: &Formula| -> Result<Option<usize>, ModelError> {
            self.ctx.require_agent(i)?;
            self.compile_l0(a)?;
            Ok(self.ctx.belief_var(i, a))
        };
        Ok(match p {
            Program::Expand(i, a) => Prog::Expand(change(i, a)?),
            Program::Forget(i, a) => Prog::Forget(change(i, a)?),
            Program::Revise(i, a) => Prog::Revise {
                input: change(i, a)?,
                agent: self.ctx.require_agent(i)?,
            },
            Program::Seq(a, b) => Prog::Seq(
                Box::new(self.compile_program(a)?),
                Box::new(self.compile_program(b)?),
            ),
            Program::Choice(a, b) => Prog::Choice(
                Box::new(self.compile_program(a)?),
                Box::new(self.compile_program(b)?),
            ),
            Program::Test(f) => Prog::Test(Box::new(self.compile(f)?)),
        })
    }

    fn atom(&self, atom: &Atom) -> Result<usize, ModelError> {
        self.ctx
            .atom_var(atom)
            .ok_or_else(|| ModelError::UntrackedAtom(atom.to_string()))
    }

    fn eval(&self, e: &Expr, s: &Point) -> Result<bool, ModelError> {
        Ok(match e {
            Expr::Const(b) => *b,
            Expr::Var(v) => s.get(*v),
            Expr::Not(a) => !self.eval(a, s)?,
            Expr::And(a, b) => self.eval(a, s)? && self.eval(b, s)?,
            Expr::Or(a, b) => self.eval(a, s)? || self.eval(b, s)?,
            Expr::Implies(a, b) => !self.eval(a, s)? || self.eval(b, s)?,
            Expr::Iff(a, b) => self.eval(a, s)? == self.eval(b, s)?,
            Expr::Modal {
                modality,
                agent,
                body,
                support,
            } => {
                let mut key = Point::zeros(self.ctx.exponent());
                for v in self.ctx.belief_range(*agent) {
                    key.set(v, s.get(v));
                }
                let key = (&**body as *const Expr as usize, key);
                if let Some(&r) = self.modal_memo.borrow().get(&key) {
                    return Ok(r);
                }
                let r = self.eval_modal(*modality, *agent, body, support, s)?;
                self.modal_memo.borrow_mut().insert(key, r);
                r
            }
            Expr::Box(p, a) => {
                for t in self.successors(p, s)? {
                    if !self.eval(a, &t)? {
                        return Ok(false);
                    }
                }
                true
            }
            Expr::Diamond(p, a) => {
                for t in self.successors(p, s)? {
                    if self.eval(a, &t)? {
                        return Ok(true);
                    }
                }
                false
            }
        })
    }

    fn eval_modal(
        &self,
        modality: Modality,
        agent: usize,
        body: &Expr,
        body_support: &[usize],
        s: &Point,
    ) -> Result<bool, ModelError> {
        let base: Vec<&Member> = self.members[agent]
            .iter()
            .filter(|m| s.get(m.var))
            .collect();
        let epistemic = matches!(
            modality,
            Modality::Knows | Modality::RealAttract | Modality::RealRepulse
        );
        let attract = matches!(modality, Modality::Attract | Modality::RealAttract);
        let repulse = matches!(modality, Modality::Repulse | Modality::RealRepulse);
        let desires: Vec<&L0> = base
            .iter()
            .filter_map(|m| {
                if attract {
                    m.reward_premise.as_ref()
                } else if repulse {
                    m.punish_premise.as_ref()
                } else {
                    None
                }
            })
            .collect();

        let mut vars: Vec<usize> = body_support.to_vec();
        if epistemic {
            vars.extend(base.iter().flat_map(|m| m.formula.vars.iter().copied()));
        }
        vars.extend(desires.iter().flat_map(|d| d.vars.iter().copied()));
        vars.sort_unstable();
        vars.dedup();

        let accessible = |t: &Point| -> Result<bool, ModelError> {
            for m in &base {
                if !self.eval(&m.formula.expr, t)? {
                    return Ok(false);
                }
            }
            Ok(true)
        };
        let desired = |t: &Point| -> Result<bool, ModelError> {
            for d in &desires {
                if self.eval(&d.expr, t)? {
                    return Ok(true);
                }
            }
            Ok(false)
        };
        self.for_all(&vars, |t| {
            Ok(match modality {
                Modality::Knows => !accessible(t)? || self.eval(body, t)?,
                Modality::Attract | Modality::Repulse => !self.eval(body, t)? || desired(t)?,
                Modality::RealAttract | Modality::RealRepulse => {
                    !self.eval(body, t)? || !accessible(t)? || desired(t)?
                }
            })
        })
    }

    /// True iff `cond` holds for every state of `S_Γ`, given that it only
    /// reads `vars`.
    fn for_all(
        &self,
        vars: &[usize],
        mut cond: impl FnMut(&Point) -> Result<bool, ModelError>,
    ) -> Result<bool, ModelError> {
        let all: Vec<usize>;
        let vars = match self.strategy {
            Strategy::Projected => vars,
            Strategy::Exhaustive => {
                all = (0..self.ctx.exponent()).collect();
                &all
            }
        };
        if vars.len() as u32 > self.ctx.enum_cap_exponent() {
            return Err(ModelError::CapExceeded {
                exponent: vars.len(),
                cap: self.ctx.enum_cap_exponent(),
            });
        }
        let mut t = Point::zeros(self.ctx.exponent());
        for code in 0u64..1u64 << vars.len() {
            for (bit, &v) in vars.iter().enumerate() {
                t.set(v, code >> bit & 1 == 1);
            }
            if !cond(&t)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn consistent<'a>(
        &self,
        items: impl Iterator<Item = &'a L0> + Clone,
    ) -> Result<bool, ModelError> {
        let mut vars: Vec<usize> = items.clone().flat_map(|l| l.vars.iter().copied()).collect();
        vars.sort_unstable();
        vars.dedup();
        let inconsistent = self.for_all(&vars, |t| {
            for l in items.clone() {
                if !self.eval(&l.expr, t)? {
                    return Ok(true);
                }
            }
            Ok(false)
        })?;
        Ok(!inconsistent)
    }

    /// For each of `others`, whether it belongs to every maximal consistent
    /// subset of `others ∪ {input}` containing `input`; `None` when there is
    /// no such subset.
    fn mcs_intersection(&self, input: &L0, others: &[L0]) -> Result<Option<Vec<bool>>, ModelError> {
        if others.len() as u32 > self.ctx.enum_cap_exponent() || others.len() >= 63 {
            return Err(ModelError::CapExceeded {
                exponent: others.len(),
                cap: self.ctx.enum_cap_exponent(),
            });
        }
        let n = others.len();
        let mut masks: Vec<u64> = (0..1u64 << n).collect();
        masks.sort_by_key(|m| std::cmp::Reverse(m.count_ones()));
        let mut maximal: Vec<u64> = Vec::new();
        for mask in masks {
            if maximal.iter().any(|m| mask & m == mask) {
                continue;
            }
            let chosen = std::iter::once(input)
                .chain((0..n).filter(|k| mask >> k & 1 == 1).map(|k| &others[k]));
            if self.consistent(chosen)? {
                maximal.push(mask);
            }
        }
        if maximal.is_empty() {
            return Ok(None);
        }
        let common = maximal.iter().fold(u64::MAX, |acc, m| acc & m);
        Ok(Some((0..n).map(|k| common >> k & 1 == 1).collect()))
    }

    fn revise(&self, agent: usize, input: Option<usize>, s: &Point) -> Result<Point, ModelError> {
        let members = &self.members[agent];
        let mut t = s.clone();
        let Some(input_var) = input else {
            for m in members {
                t.set(m.var, true);
            }
            return Ok(t);
        };
        let input = members
            .iter()
            .find(|m| m.var == input_var)
            .expect("input is a closure member");
        let others: Vec<&Member> = members
            .iter()
            .filter(|m| m.var != input_var && s.get(m.var))
            .collect();
        let compiled: Vec<L0> = others.iter().map(|m| m.formula.clone()).collect();
        match self.mcs_intersection(&input.formula, &compiled)? {
            Some(kept) => {
                for m in members {
                    t.set(m.var, false);
                }
                t.set(input_var, true);
                for (m, k) in others.iter().zip(kept) {
                    t.set(m.var, k);
                }
            }
            None => {
                for m in members {
                    t.set(m.var, true);
                }
            }
        }
        Ok(t)
    }

    fn successors(&self, p: &Prog, s: &Point) -> Result<Vec<Point>, ModelError> {
        Ok(match p {
            Prog::Expand(None) => vec![],
            Prog::Expand(Some(v)) => {
                let mut t = s.clone();
                t.set(*v, true);
                vec![t]
            }
            Prog::Forget(None) => vec![s.clone()],
            Prog::Forget(Some(v)) => {
                let mut t = s.clone();
                t.set(*v, false);
                vec![t]
            }
            Prog::Revise { agent, input } => vec![self.revise(*agent, *input, s)?],
            Prog::Seq(a, b) => {
                let mut out = BTreeSet::new();
                for mid in self.successors(a, s)? {
                    out.extend(self.successors(b, &mid)?);
                }
                out.into_iter().collect()
            }
            Prog::Choice(a, b) => {
                let mut out: BTreeSet<Point> = self.successors(a, s)?.into_iter().collect();
                out.extend(self.successors(b, s)?);
                out.into_iter().collect()
            }
            Prog::Test(f) => {
                if self.eval(f, s)? {
                    vec![s.clone()]
                } else {
                    vec![]
                }
            }
        })
    }
}

/// Variables whose value at the evaluation state can affect `e`.
fn support(e: &Expr, ctx: &Context, out: &mut Vec<usize>) {
    match e {
        Expr::Const(_) => {}
        Expr::Var(v) => out.push(*v),
        Expr::Not(a) => support(a, ctx, out),
        Expr::And(a, b) | Expr::Or(a, b) | Expr::Implies(a, b) | Expr::Iff(a, b) => {
            support(a, ctx, out);
            support(b, ctx, out);
        }
        // modal truth at a state depends only on the agent's own base
        Expr::Modal { agent, .. } => out.extend(ctx.belief_range(*agent)),
        Expr::Box(..) | Expr::Diamond(..) => out.extend(0..ctx.exponent()),
    }
}
