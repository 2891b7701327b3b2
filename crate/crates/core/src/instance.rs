//! JSON instance files.
//!
//! ```json
//! {"agents": ["1"], "atoms": ["p"], "gamma": {"1": ["p -> rew(1)"]},
//!  "base": {"1": ["p -> rew(1)"]}, "valuation": ["p"], "query": "Attr(1, p)"}
//! ```
//!
//! `base`, `valuation` and `query` may be omitted. Atoms of the query are
//! tracked in addition to the declared ones.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{Context, ModelError, State, VocabularyProfile};
use crate::syntax::{parse_formula, print_formula, AgentId, Atom, Formula, ParseError};

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("malformed instance file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("in {field}: `{text}`: {source}")]
    Parse {
        field: String,
        text: String,
        source: ParseError,
    },
    #[error("in {field}: `{text}` is not an atom")]
    NotAnAtom { field: String, text: String },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// The file contents, formulas still as text.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub agents: Vec<String>,
    #[serde(default)]
    pub atoms: Vec<String>,
    #[serde(default)]
    pub gamma: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub base: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub valuation: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub query: Option<String>,
}

/// A validated instance: the initial state lies in `S_Γ`.
#[derive(Clone, Debug)]
pub struct Instance {
    pub profile: VocabularyProfile,
    pub context: Context,
    pub state: State,
    pub query: Option<Formula>,
}

fn formula(field: &str, text: &str) -> Result<Formula, InstanceError> {
    parse_formula(text).map_err(|source| InstanceError::Parse {
        field: field.to_string(),
        text: text.to_string(),
        source,
    })
}

fn atom(field: &str, text: &str) -> Result<Atom, InstanceError> {
    match formula(field, text)? {
        Formula::Atom(a) => Ok(a),
        _ => Err(InstanceError::NotAnAtom {
            field: field.to_string(),
            text: text.to_string(),
        }),
    }
}

impl InstanceFile {
    pub fn from_json(text: &str) -> Result<Self, InstanceError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance files always serialize")
    }

    /// The file describing `state` over `profile`, with an optional query.
    pub fn describe(profile: &VocabularyProfile, state: &State, query: Option<&Formula>) -> Self {
        let agents = profile.agents();
        InstanceFile {
            agents: agents.iter().map(|a| a.to_string()).collect(),
            atoms: profile.atoms().iter().map(|a| a.to_string()).collect(),
            gamma: agents
                .iter()
                .map(|a| {
                    (
                        a.to_string(),
                        profile.gamma(a).iter().map(print_formula).collect(),
                    )
                })
                .collect(),
            base: state
                .bases()
                .filter(|(_, b)| !b.is_empty())
                .map(|(a, b)| (a.to_string(), b.iter().map(print_formula).collect()))
                .collect(),
            valuation: state.valuation().iter().map(|a| a.to_string()).collect(),
            query: query.map(print_formula),
        }
    }

    /// Parses every formula and checks that the state lies in `S_Γ`.
    pub fn resolve(&self) -> Result<Instance, InstanceError> {
        let agents: Vec<AgentId> = self.agents.iter().map(AgentId::new).collect();
        let atoms = self
            .atoms
            .iter()
            .map(|a| atom("atoms", a))
            .collect::<Result<Vec<_>, _>>()?;
        let mut gammas = Vec::new();
        for (agent, members) in &self.gamma {
            let field = format!("gamma.{agent}");
            let members = members
                .iter()
                .map(|m| formula(&field, m))
                .collect::<Result<Vec<_>, _>>()?;
            gammas.push((AgentId::new(agent), members));
        }
        let mut profile = VocabularyProfile::new(agents, atoms, gammas)?;
        let query = self
            .query
            .as_deref()
            .map(|q| formula("query", q))
            .transpose()?;
        if let Some(q) = &query {
            profile.track(q.atoms());
        }
        let mut state = State::new();
        for (agent, members) in &self.base {
            let field = format!("base.{agent}");
            for m in members {
                state.believe(AgentId::new(agent), formula(&field, m)?);
            }
        }
        for a in &self.valuation {
            state = state.with_atom(atom("valuation", a)?);
        }
        let context = Context::new(&profile);
        context.validate(&state)?;
        Ok(Instance {
            profile,
            context,
            state,
            query,
        })
    }
}

/// Reads and validates an instance from JSON text.
pub fn load_instance(text: &str) -> Result<Instance, InstanceError> {
    InstanceFile::from_json(text)?.resolve()
}
