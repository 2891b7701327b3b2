use std::collections::{BTreeMap, BTreeSet};

use crate::syntax::{AgentId, Atom, Formula};

use super::vocabulary::{Context, VarTag};
use super::ModelError;

static EMPTY_BASE: BTreeSet<Formula> = BTreeSet::new();

/// One belief base per agent plus the set of true atoms.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct State {
    bases: BTreeMap<AgentId, BTreeSet<Formula>>,
    valuation: BTreeSet<Atom>,
}

impl State {
    pub fn new() -> Self {
        State::default()
    }

    pub fn with_belief(mut self, agent: impl Into<AgentId>, member: Formula) -> Self {
        self.believe(agent.into(), member);
        self
    }

    pub fn with_atom(mut self, atom: Atom) -> Self {
        self.valuation.insert(atom);
        self
    }

    pub fn believe(&mut self, agent: AgentId, member: Formula) {
        self.bases.entry(agent).or_default().insert(member);
    }

    pub fn base(&self, agent: &AgentId) -> &BTreeSet<Formula> {
        self.bases.get(agent).unwrap_or(&EMPTY_BASE)
    }

    pub fn set_base(&mut self, agent: AgentId, base: BTreeSet<Formula>) {
        if base.is_empty() {
            self.bases.remove(&agent);
        } else {
            self.bases.insert(agent, base);
        }
    }

    pub fn bases(&self) -> impl Iterator<Item = (&AgentId, &BTreeSet<Formula>)> {
        self.bases.iter().filter(|(_, b)| !b.is_empty())
    }

    pub fn valuation(&self) -> &BTreeSet<Atom> {
        &self.valuation
    }

    pub fn holds(&self, atom: &Atom) -> bool {
        self.valuation.contains(atom)
    }
}

/// A state of a fixed context encoded as one bit per context variable.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) struct Point(Vec<u64>);

impl Point {
    pub(crate) fn zeros(width: usize) -> Self {
        Point(vec![0; width.div_ceil(64)])
    }

    #[inline]
    pub(crate) fn get(&self, var: usize) -> bool {
        self.0[var / 64] >> (var % 64) & 1 == 1
    }

    #[inline]
    pub(crate) fn set(&mut self, var: usize, value: bool) {
        let bit = 1u64 << (var % 64);
        if value {
            self.0[var / 64] |= bit;
        } else {
            self.0[var / 64] &= !bit;
        }
    }
}

impl Context {
    /// Checks that the state lies in `S_Γ`.
    pub fn validate(&self, s: &State) -> Result<(), ModelError> {
        for (agent, base) in &s.bases {
            self.require_agent(agent)?;
            for member in base {
                if self.belief_var(agent, member).is_none() {
                    return Err(ModelError::OutsideVocabulary {
                        agent: agent.clone(),
                        member: member.to_string(),
                    });
                }
            }
        }
        for atom in &s.valuation {
            if self.atom_var(atom).is_none() {
                return Err(ModelError::UntrackedAtom(atom.to_string()));
            }
        }
        Ok(())
    }

    pub(crate) fn encode(&self, s: &State) -> Result<Point, ModelError> {
        self.validate(s)?;
        let mut p = Point::zeros(self.exponent());
        for atom in &s.valuation {
            p.set(self.atom_var(atom).expect("validated"), true);
        }
        for (agent, base) in &s.bases {
            for member in base {
                p.set(self.belief_var(agent, member).expect("validated"), true);
            }
        }
        Ok(p)
    }

    pub(crate) fn decode(&self, p: &Point) -> State {
        self.decode_with(|v| p.get(v))
    }

    /// Builds the state whose variable `v` is `value(v)`.
    pub fn decode_with(&self, value: impl Fn(usize) -> bool) -> State {
        let mut s = State::new();
        for (v, tag) in self.tags().iter().enumerate() {
            if !value(v) {
                continue;
            }
            match tag {
                VarTag::Atom(a) => {
                    s.valuation.insert(a.clone());
                }
                VarTag::Belief(agent, member) => s.believe(agent.clone(), member.clone()),
            }
        }
        s
    }

    /// Truth value of each context variable at `s`, in layout order.
    pub fn assignment(&self, s: &State) -> Result<Vec<bool>, ModelError> {
        let p = self.encode(s)?;
        Ok((0..self.exponent()).map(|v| p.get(v)).collect())
    }
}

/// Every state of `S_Γ` exactly once, counting in binary with variable 0 as
/// the least significant bit.
pub fn enumerate_states(c: &Context) -> Result<impl Iterator<Item = State> + '_, ModelError> {
    let width = c.exponent();
    if width as u32 > c.enum_cap_exponent() {
        return Err(ModelError::CapExceeded {
            exponent: width,
            cap: c.enum_cap_exponent(),
        });
    }
    Ok((0u64..1u64 << width).map(move |code| c.decode_with(|v| code >> v & 1 == 1)))
}
