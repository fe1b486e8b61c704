//! Flat JSON form of a compiled network.
//!
//! ```json
//! {
//!   "variables":   [{"name": "x1", "lo": 0.0, "hi": 1.0, "k": 16}],
//!   "memberships": [{"variable": "x1", "term": "small", "polarity": "complement", "samples": [..]}],
//!   "minterms":    [{"antecedent": [{"variable": "x1", "term": "small"}], "column": [..]}],
//!   "groups":      [{"output": "y", "term": "big", "rules": [1, 2]}],
//!   "exponent":    2.0
//! }
//! ```
//!
//! Memberships are listed variable by variable in column order of `S`.
//! Floats are written in shortest round-trip form, so loading reproduces every
//! sample bit for bit.

use serde::{Deserialize, Serialize};

use super::membership::Universe;
use super::network::{FuzzyNetwork, InputVariable, Minterm, OutputGroup, Term};
use super::{NetworkError, Polarity};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkDocument {
    pub variables: Vec<VariableEntry>,
    pub memberships: Vec<MembershipEntry>,
    pub minterms: Vec<MintermEntry>,
    pub groups: Vec<GroupEntry>,
    pub exponent: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VariableEntry {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
    pub k: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MembershipEntry {
    pub variable: String,
    pub term: String,
    pub polarity: Polarity,
    pub samples: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Conjunct {
    pub variable: String,
    pub term: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MintermEntry {
    pub antecedent: Vec<Conjunct>,
    pub column: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupEntry {
    pub output: String,
    pub term: String,
    pub rules: Vec<usize>,
}

impl From<&FuzzyNetwork> for NetworkDocument {
    fn from(net: &FuzzyNetwork) -> Self {
        NetworkDocument {
            variables: net
                .variables()
                .iter()
                .map(|v| VariableEntry {
                    name: v.name.clone(),
                    lo: v.universe.lo(),
                    hi: v.universe.hi(),
                    k: v.universe.k(),
                })
                .collect(),
            memberships: net
                .variables()
                .iter()
                .flat_map(|v| {
                    v.terms.iter().map(move |t| MembershipEntry {
                        variable: v.name.clone(),
                        term: t.name.clone(),
                        polarity: t.polarity,
                        samples: t.samples.clone(),
                    })
                })
                .collect(),
            minterms: net
                .minterm_specs()
                .iter()
                .map(|m| MintermEntry {
                    antecedent: m
                        .antecedent
                        .iter()
                        .map(|(v, t)| Conjunct {
                            variable: v.clone(),
                            term: t.clone(),
                        })
                        .collect(),
                    column: m.column.clone(),
                })
                .collect(),
            groups: net
                .aggregation()
                .groups
                .iter()
                .map(|g| GroupEntry {
                    output: g.output.clone(),
                    term: g.term.clone(),
                    rules: g.rules.clone(),
                })
                .collect(),
            exponent: net.exponent(),
        }
    }
}

impl NetworkDocument {
    /// Rebuilds an ideal-backend network, re-checking every structural invariant.
    pub fn into_network(self) -> Result<FuzzyNetwork, NetworkError> {
        let mut variables = Vec::with_capacity(self.variables.len());
        for v in &self.variables {
            variables.push(InputVariable {
                name: v.name.clone(),
                universe: Universe::new(v.lo, v.hi, v.k)?,
                terms: Vec::new(),
            });
        }
        for m in self.memberships {
            let var = variables
                .iter_mut()
                .find(|v| v.name == m.variable)
                .ok_or_else(|| NetworkError::Format(format!("membership for unknown variable {:?}", m.variable)))?;
            var.terms.push(Term {
                name: m.term,
                samples: m.samples,
                polarity: m.polarity,
            });
        }
        let minterms = self
            .minterms
            .into_iter()
            .map(|m| Minterm {
                antecedent: m.antecedent.into_iter().map(|c| (c.variable, c.term)).collect(),
                column: m.column,
            })
            .collect();
        let groups = self
            .groups
            .into_iter()
            .map(|g| OutputGroup {
                output: g.output,
                term: g.term,
                rules: g.rules,
            })
            .collect();
        FuzzyNetwork::from_parts(variables, minterms, groups, self.exponent)
    }
}

impl FuzzyNetwork {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&NetworkDocument::from(self)).expect("network document serializes")
    }

    pub fn from_json(text: &str) -> Result<FuzzyNetwork, NetworkError> {
        let doc: NetworkDocument = serde_json::from_str(text).map_err(|e| NetworkError::Format(e.to_string()))?;
        doc.into_network()
    }
}
