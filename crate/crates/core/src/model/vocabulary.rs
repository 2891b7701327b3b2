use std::collections::HashMap;
use std::fmt;
use std::ops::Range;

use crate::syntax::{AgentId, Atom, Formula};

use super::ModelError;

/// Default bound on explicit enumeration: at most `2^24` assignments.
pub const DEFAULT_ENUM_CAP_EXPONENT: u32 = 24;

/// Per-agent vocabularies `Γ_i` together with the tracked atoms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VocabularyProfile {
    agents: Vec<AgentId>,
    atoms: Vec<Atom>,
    gammas: Vec<Vec<Formula>>,
}

impl VocabularyProfile {
    /// Builds a profile. Agents without an entry in `gammas` get an empty
    /// vocabulary. Plain atoms occurring in a vocabulary must be declared in
    /// `atoms`; reward/punishment atoms are tracked implicitly.
    pub fn new(
        agents: Vec<AgentId>,
        atoms: Vec<Atom>,
        gammas: impl IntoIterator<Item = (AgentId, Vec<Formula>)>,
    ) -> Result<Self, ModelError> {
        let mut per_agent = vec![Vec::new(); agents.len()];
        for (agent, members) in gammas {
            let idx = agents
                .iter()
                .position(|a| *a == agent)
                .ok_or_else(|| ModelError::UnknownAgent(agent.clone()))?;
            for m in members {
                if !m.is_l0() {
                    return Err(ModelError::NotL0(m.to_string()));
                }
                if !per_agent[idx].contains(&m) {
                    per_agent[idx].push(m);
                }
            }
        }
        let mut profile = VocabularyProfile {
            agents,
            atoms: Vec::new(),
            gammas: per_agent,
        };
        for a in atoms {
            if !profile.atoms.contains(&a) {
                profile.atoms.push(a);
            }
        }
        for member in profile.gammas.iter().flatten() {
            for atom in member.atoms() {
                if let Atom::Plain(_) = atom {
                    if !profile.atoms.contains(&atom) {
                        return Err(ModelError::UntrackedAtom(atom.to_string()));
                    }
                }
            }
        }
        Ok(profile)
    }

    /// Appends atoms that are not yet tracked (e.g. those of a query), keeping
    /// declaration order for the existing ones.
    pub fn track(&mut self, atoms: impl IntoIterator<Item = Atom>) {
        for a in atoms {
            if !self.atoms.contains(&a) {
                self.atoms.push(a);
            }
        }
    }

    pub fn agents(&self) -> &[AgentId] {
        &self.agents
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn gamma(&self, agent: &AgentId) -> &[Formula] {
        self.agents
            .iter()
            .position(|a| a == agent)
            .map(|i| self.gammas[i].as_slice())
            .unwrap_or(&[])
    }
}

/// The reward/punishment closure `Γ_i⁺` of every agent's vocabulary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedVocabulary {
    agents: Vec<AgentId>,
    gammas: Vec<Vec<Formula>>,
    gammas_plus: Vec<Vec<Formula>>,
}

impl ClosedVocabulary {
    pub fn agents(&self) -> &[AgentId] {
        &self.agents
    }

    pub fn gamma_plus(&self, agent: &AgentId) -> &[Formula] {
        self.agents
            .iter()
            .position(|a| a == agent)
            .map(|i| self.gammas_plus[i].as_slice())
            .unwrap_or(&[])
    }
}

/// `Γ_i⁺ = Γ_i ∪ {α → rew(i)} ∪ {α → pun(i)}`, deduplicated structurally.
/// Members are ordered `α, α → rew(i), α → pun(i)` for each `α` of `Γ_i` in
/// order, skipping duplicates.
pub fn close_vocabulary(v: &VocabularyProfile) -> ClosedVocabulary {
    let gammas_plus = v
        .agents
        .iter()
        .zip(&v.gammas)
        .map(|(agent, gamma)| {
            let mut plus: Vec<Formula> = Vec::with_capacity(3 * gamma.len());
            for alpha in gamma {
                for f in [
                    alpha.clone(),
                    alpha.clone().implies(Formula::reward(agent.clone())),
                    alpha.clone().implies(Formula::punish(agent.clone())),
                ] {
                    if !plus.contains(&f) {
                        plus.push(f);
                    }
                }
            }
            plus
        })
        .collect();
    ClosedVocabulary {
        agents: v.agents.clone(),
        gammas: v.gammas.clone(),
        gammas_plus,
    }
}

/// Identity of one state variable: a tracked atom, or membership of a
/// `Γ_i⁺` formula in agent `i`'s belief base.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarTag {
    Atom(Atom),
    Belief(AgentId, Formula),
}

impl fmt::Display for VarTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarTag::Atom(a) => write!(f, "{a}"),
            VarTag::Belief(i, alpha) => write!(f, "B({i}, {alpha})"),
        }
    }
}

/// The Γ-context `S_Γ`: all states whose bases are drawn from `Γ_i⁺` and
/// whose valuations range over the tracked atoms. It is never materialized
/// except through [`super::enumerate_states`].
///
/// Variables are laid out as the tracked atoms in declaration order followed,
/// agent by agent, by the `Γ_i⁺` members in closure order.
#[derive(Clone, Debug)]
pub struct Context {
    profile: VocabularyProfile,
    closed: ClosedVocabulary,
    atoms: Vec<Atom>,
    tags: Vec<VarTag>,
    index: HashMap<VarTag, usize>,
    belief_start: Vec<usize>,
    enum_cap_exponent: u32,
}

impl Context {
    pub fn new(profile: &VocabularyProfile) -> Self {
        let closed = close_vocabulary(profile);
        let mut atoms = profile.atoms.clone();
        for member in closed.gammas_plus.iter().flatten() {
            for a in member.atoms() {
                if !atoms.contains(&a) {
                    atoms.push(a);
                }
            }
        }
        let mut tags: Vec<VarTag> = atoms.iter().cloned().map(VarTag::Atom).collect();
        let mut belief_start = Vec::with_capacity(closed.agents.len() + 1);
        for (agent, plus) in closed.agents.iter().zip(&closed.gammas_plus) {
            belief_start.push(tags.len());
            tags.extend(
                plus.iter()
                    .map(|f| VarTag::Belief(agent.clone(), f.clone())),
            );
        }
        belief_start.push(tags.len());
        let index = tags
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, t)| (t, i))
            .collect();
        Context {
            profile: profile.clone(),
            closed,
            atoms,
            tags,
            index,
            belief_start,
            enum_cap_exponent: DEFAULT_ENUM_CAP_EXPONENT,
        }
    }

    /// Same context with another enumeration cap (`2^exponent` assignments).
    pub fn with_enum_cap(mut self, exponent: u32) -> Self {
        self.enum_cap_exponent = exponent;
        self
    }

    pub fn enum_cap_exponent(&self) -> u32 {
        self.enum_cap_exponent
    }

    pub fn profile(&self) -> &VocabularyProfile {
        &self.profile
    }

    pub fn closed(&self) -> &ClosedVocabulary {
        &self.closed
    }

    pub fn agents(&self) -> &[AgentId] {
        &self.closed.agents
    }

    pub fn agent_index(&self, agent: &AgentId) -> Option<usize> {
        self.closed.agents.iter().position(|a| a == agent)
    }

    pub(crate) fn require_agent(&self, agent: &AgentId) -> Result<usize, ModelError> {
        self.agent_index(agent)
            .ok_or_else(|| ModelError::UnknownAgent(agent.clone()))
    }

    /// Tracked atoms, including implicitly tracked reward/punishment atoms.
    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    /// Original vocabulary `Γ_i` of the agent at `idx`.
    pub fn gamma_of(&self, idx: usize) -> &[Formula] {
        &self.closed.gammas[idx]
    }

    /// Closed vocabulary `Γ_i⁺` of the agent at `idx`.
    pub fn gamma_plus_of(&self, idx: usize) -> &[Formula] {
        &self.closed.gammas_plus[idx]
    }

    /// Number of state variables; `|S_Γ| = 2^exponent`.
    pub fn exponent(&self) -> usize {
        self.tags.len()
    }

    pub fn tags(&self) -> &[VarTag] {
        &self.tags
    }

    pub fn var_of(&self, tag: &VarTag) -> Option<usize> {
        self.index.get(tag).copied()
    }

    pub fn atom_var(&self, atom: &Atom) -> Option<usize> {
        self.index.get(&VarTag::Atom(atom.clone())).copied()
    }

    /// Variable of `B(agent, member)` if `member ∈ Γ_agent⁺`.
    pub fn belief_var(&self, agent: &AgentId, member: &Formula) -> Option<usize> {
        self.index
            .get(&VarTag::Belief(agent.clone(), member.clone()))
            .copied()
    }

    /// Variables holding the belief base of the agent at `idx`.
    pub fn belief_range(&self, idx: usize) -> Range<usize> {
        self.belief_start[idx]..self.belief_start[idx + 1]
    }

    pub fn atom_range(&self) -> Range<usize> {
        0..self.atoms.len()
    }
}
