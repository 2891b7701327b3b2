use std::fmt;

use serde::{Deserialize, Serialize};

/// Name of an agent. Agents are compared by exact string equality.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AgentId(String);

impl AgentId {
    pub fn new(name: impl Into<String>) -> Self {
        AgentId(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for AgentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for AgentId {
    fn from(s: &str) -> Self {
        AgentId::new(s)
    }
}

/// A propositional atom. The reward and punishment atoms of an agent are
/// distinct from every plain atom.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    Plain(String),
    Reward(AgentId),
    Punish(AgentId),
}

impl Atom {
    pub fn plain(name: impl Into<String>) -> Self {
        Atom::Plain(name.into())
    }
}

/// The five primitive modalities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Modality {
    /// Implicit belief, `K`.
    Knows,
    /// Complete attraction, `Attr`.
    Attract,
    /// Complete repulsion, `Rep`.
    Repulse,
    /// Realistic attraction, `RAttr`.
    RealAttract,
    /// Realistic repulsion, `RRep`.
    RealRepulse,
}

impl Modality {
    pub const ALL: [Modality; 5] = [
        Modality::Knows,
        Modality::Attract,
        Modality::Repulse,
        Modality::RealAttract,
        Modality::RealRepulse,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            Modality::Knows => "K",
            Modality::Attract => "Attr",
            Modality::Repulse => "Rep",
            Modality::RealAttract => "RAttr",
            Modality::RealRepulse => "RRep",
        }
    }
}

/// The four cognitive positions obtained by combining attraction and
/// repulsion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Position {
    Motivated,
    Demotivated,
    Indifferent,
    Ambivalent,
}

impl Position {
    pub const ALL: [Position; 4] = [
        Position::Motivated,
        Position::Demotivated,
        Position::Indifferent,
        Position::Ambivalent,
    ];

    pub fn keyword(self, realistic: bool) -> &'static str {
        match (self, realistic) {
            (Position::Motivated, false) => "Mot",
            (Position::Demotivated, false) => "Demot",
            (Position::Indifferent, false) => "Ind",
            (Position::Ambivalent, false) => "Amb",
            (Position::Motivated, true) => "RMot",
            (Position::Demotivated, true) => "RDemot",
            (Position::Indifferent, true) => "RInd",
            (Position::Ambivalent, true) => "RAmb",
        }
    }
}

/// Syntactic sugar over the primitive modalities.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DerivedOp {
    Position {
        position: Position,
        realistic: bool,
        agent: AgentId,
        arg: Formula,
    },
    /// `Pref(i, worse, better)`: agent `i` prefers `better` to `worse`.
    Preference {
        realistic: bool,
        agent: AgentId,
        worse: Formula,
        better: Formula,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Atom(Atom),
    Top,
    Bottom,
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    /// Explicit belief `B(i, α)`; the argument is always in the base language.
    Believes(AgentId, Box<Formula>),
    Modal(Modality, AgentId, Box<Formula>),
    Box(Box<Program>, Box<Formula>),
    Diamond(Box<Program>, Box<Formula>),
    Derived(Box<DerivedOp>),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Program {
    Expand(AgentId, Formula),
    Forget(AgentId, Formula),
    Revise(AgentId, Formula),
    Seq(Box<Program>, Box<Program>),
    Choice(Box<Program>, Box<Program>),
    Test(Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Self {
        Formula::Atom(Atom::plain(name))
    }

    pub fn reward(agent: impl Into<AgentId>) -> Self {
        Formula::Atom(Atom::Reward(agent.into()))
    }

    pub fn punish(agent: impl Into<AgentId>) -> Self {
        Formula::Atom(Atom::Punish(agent.into()))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Self {
        Formula::Not(Box::new(self))
    }

    pub fn and(self, other: Formula) -> Self {
        Formula::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Formula) -> Self {
        Formula::Or(Box::new(self), Box::new(other))
    }

    pub fn implies(self, other: Formula) -> Self {
        Formula::Implies(Box::new(self), Box::new(other))
    }

    pub fn iff(self, other: Formula) -> Self {
        Formula::Iff(Box::new(self), Box::new(other))
    }

    pub fn believes(agent: impl Into<AgentId>, arg: Formula) -> Self {
        Formula::Believes(agent.into(), Box::new(arg))
    }

    pub fn modal(m: Modality, agent: impl Into<AgentId>, arg: Formula) -> Self {
        Formula::Modal(m, agent.into(), Box::new(arg))
    }

    pub fn after(program: Program, body: Formula) -> Self {
        Formula::Box(Box::new(program), Box::new(body))
    }

    pub fn possibly(program: Program, body: Formula) -> Self {
        Formula::Diamond(Box::new(program), Box::new(body))
    }

    pub fn position(
        position: Position,
        realistic: bool,
        agent: impl Into<AgentId>,
        arg: Formula,
    ) -> Self {
        Formula::Derived(Box::new(DerivedOp::Position {
            position,
            realistic,
            agent: agent.into(),
            arg,
        }))
    }

    pub fn preference(
        realistic: bool,
        agent: impl Into<AgentId>,
        worse: Formula,
        better: Formula,
    ) -> Self {
        Formula::Derived(Box::new(DerivedOp::Preference {
            realistic,
            agent: agent.into(),
            worse,
            better,
        }))
    }

    /// Conjunction of all items, `true` when empty.
    pub fn conjunction(items: impl IntoIterator<Item = Formula>) -> Self {
        items
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or(Formula::Top)
    }

    /// Disjunction of all items, `false` when empty.
    pub fn disjunction(items: impl IntoIterator<Item = Formula>) -> Self {
        items
            .into_iter()
            .reduce(Formula::or)
            .unwrap_or(Formula::Bottom)
    }

    /// True iff the formula belongs to the base language: atoms, Boolean
    /// connectives and (nested) explicit belief.
    pub fn is_l0(&self) -> bool {
        match self {
            Formula::Atom(_) | Formula::Top | Formula::Bottom => true,
            Formula::Not(a) => a.is_l0(),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => a.is_l0() && b.is_l0(),
            Formula::Believes(_, a) => a.is_l0(),
            Formula::Modal(..) | Formula::Box(..) | Formula::Diamond(..) | Formula::Derived(_) => {
                false
            }
        }
    }

    /// True iff no derived operator occurs anywhere, including inside
    /// program tests.
    pub fn is_derived_free(&self) -> bool {
        match self {
            Formula::Atom(_) | Formula::Top | Formula::Bottom => true,
            Formula::Not(a) | Formula::Believes(_, a) | Formula::Modal(_, _, a) => {
                a.is_derived_free()
            }
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => a.is_derived_free() && b.is_derived_free(),
            Formula::Box(p, a) | Formula::Diamond(p, a) => {
                p.is_derived_free() && a.is_derived_free()
            }
            Formula::Derived(_) => false,
        }
    }

    /// If the formula has the shape `α -> rew(agent)`, returns `α`.
    pub fn reward_premise(&self, agent: &AgentId) -> Option<&Formula> {
        match self {
            Formula::Implies(a, b) if **b == Formula::Atom(Atom::Reward(agent.clone())) => Some(a),
            _ => None,
        }
    }

    /// If the formula has the shape `α -> pun(agent)`, returns `α`.
    pub fn punish_premise(&self, agent: &AgentId) -> Option<&Formula> {
        match self {
            Formula::Implies(a, b) if **b == Formula::Atom(Atom::Punish(agent.clone())) => Some(a),
            _ => None,
        }
    }

    /// Immediate subformulas, including formulas nested in programs.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Atom(_) | Formula::Top | Formula::Bottom => vec![],
            Formula::Not(a) | Formula::Believes(_, a) | Formula::Modal(_, _, a) => vec![a],
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => vec![a, b],
            Formula::Box(p, a) | Formula::Diamond(p, a) => {
                let mut out = p.formulas();
                out.push(a);
                out
            }
            Formula::Derived(d) => match &**d {
                DerivedOp::Position { arg, .. } => vec![arg],
                DerivedOp::Preference { worse, better, .. } => vec![worse, better],
            },
        }
    }

    /// All atoms occurring anywhere in the formula, in first-occurrence order.
    pub fn atoms(&self) -> Vec<Atom> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut Vec<Atom>) {
        if let Formula::Atom(a) = self {
            if !out.contains(a) {
                out.push(a.clone());
            }
        }
        for c in self.children() {
            c.collect_atoms(out);
        }
    }

    /// Number of nested modal, dynamic or derived operators on the deepest path.
    pub fn modal_depth(&self) -> usize {
        let own = matches!(
            self,
            Formula::Modal(..) | Formula::Box(..) | Formula::Diamond(..) | Formula::Derived(_)
        ) as usize;
        own + self
            .children()
            .into_iter()
            .map(Formula::modal_depth)
            .max()
            .unwrap_or(0)
    }
}

impl Program {
    pub fn expand(agent: impl Into<AgentId>, arg: Formula) -> Self {
        Program::Expand(agent.into(), arg)
    }

    pub fn forget(agent: impl Into<AgentId>, arg: Formula) -> Self {
        Program::Forget(agent.into(), arg)
    }

    pub fn revise(agent: impl Into<AgentId>, arg: Formula) -> Self {
        Program::Revise(agent.into(), arg)
    }

    pub fn then(self, next: Program) -> Self {
        Program::Seq(Box::new(self), Box::new(next))
    }

    pub fn or(self, other: Program) -> Self {
        Program::Choice(Box::new(self), Box::new(other))
    }

    pub fn test(f: Formula) -> Self {
        Program::Test(Box::new(f))
    }

    /// Nondeterministic choice over all items. Panics on an empty list.
    pub fn union(items: impl IntoIterator<Item = Program>) -> Self {
        items
            .into_iter()
            .reduce(Program::or)
            .expect("union of no programs")
    }

    pub fn is_derived_free(&self) -> bool {
        self.formulas().into_iter().all(Formula::is_derived_free)
    }

    /// Formulas occurring directly in this program (arguments and tests).
    pub fn formulas(&self) -> Vec<&Formula> {
        match self {
            Program::Expand(_, a) | Program::Forget(_, a) | Program::Revise(_, a) => vec![a],
            Program::Seq(p, q) | Program::Choice(p, q) => {
                let mut out = p.formulas();
                out.extend(q.formulas());
                out
            }
            Program::Test(f) => vec![f],
        }
    }
}

impl From<Atom> for Formula {
    fn from(a: Atom) -> Self {
        Formula::Atom(a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn l0_examples() {
        let p = Formula::atom("p");
        let q = Formula::atom("q");
        assert!(Formula::believes("1", p.clone().and(q)).is_l0());
        assert!(!Formula::modal(Modality::Knows, "1", p.clone()).is_l0());
        assert!(Formula::believes("1", Formula::believes("2", p)).is_l0());
    }

    #[test]
    fn shape_matching_is_syntactic() {
        let bob = AgentId::new("bob");
        let f = Formula::atom("cr").implies(Formula::reward("bob"));
        assert_eq!(f.reward_premise(&bob), Some(&Formula::atom("cr")));
        assert_eq!(f.punish_premise(&bob), None);
        let g = Formula::atom("cr").not().or(Formula::reward("bob"));
        assert_eq!(g.reward_premise(&bob), None);
        let other = Formula::atom("cr").implies(Formula::reward("ann"));
        assert_eq!(other.reward_premise(&bob), None);
    }
}
