//! Discharging recursion components.
//!
//! [`analyze_component`] repeatedly applies the enabled techniques, removes
//! the strictly decreasing pairs, and recomputes recursion components of the
//! remainder until nothing is left.

pub mod redpair;
pub mod subterm;

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::format::Hrs;
use crate::graph::{Component, DependencyGraph};
use crate::sdp::DependencyPair;
use crate::types::Name;

pub use redpair::{
    check_reduction_pair, in_first_order_fragment, search_precedence, Lpo, Orientation,
    RedPairFailure, RedPairVerdict, ReductionPairOracle,
};
pub use subterm::{
    check_subterm_criterion, search_pi, CriterionVerdict, PiAssignment, SubtermFailure,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Technique {
    Subterm,
    Redpair,
}

impl fmt::Display for Technique {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Technique::Subterm => write!(f, "subterm"),
            Technique::Redpair => write!(f, "redpair"),
        }
    }
}

impl FromStr for Technique {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "subterm" => Ok(Technique::Subterm),
            "redpair" => Ok(Technique::Redpair),
            other => Err(format!(
                "unknown technique `{other}` (expected subterm or redpair)"
            )),
        }
    }
}

/// How the path order's precedence is obtained.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Precedence {
    #[default]
    #[serde(deserialize_with = "auto_keyword", serialize_with = "auto_name")]
    Auto,
    /// Highest first.
    Explicit(Vec<String>),
}

fn auto_keyword<'de, D: serde::Deserializer<'de>>(d: D) -> Result<(), D::Error> {
    let s = String::deserialize(d)?;
    if s == "auto" {
        Ok(())
    } else {
        Err(serde::de::Error::custom(
            "expected \"auto\" or a list of symbols",
        ))
    }
}

fn auto_name<S: serde::Serializer>(s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str("auto")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct AnalysisConfig {
    pub techniques: Vec<Technique>,
    pub max_pi_depth: usize,
    pub precedence: Precedence,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            techniques: vec![Technique::Subterm, Technique::Redpair],
            max_pi_depth: 3,
            precedence: Precedence::Auto,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Subterm(PiAssignment),
    ReductionPair {
        description: String,
        precedence: Vec<Name>,
    },
}

/// One round of the refinement loop; pair indices are graph node indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RefinementStep {
    pub component: Component,
    pub technique: Technique,
    pub witness: Witness,
    pub strict: Vec<usize>,
    pub weak: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentProof {
    pub component: Component,
    pub steps: Vec<RefinementStep>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentFailure {
    pub component: Component,
    /// The sub-component no technique could discharge.
    pub residual: Component,
    pub steps: Vec<RefinementStep>,
    pub reasons: Vec<String>,
}

fn try_technique(
    hrs: &Hrs,
    pairs: &[&DependencyPair],
    technique: Technique,
    config: &AnalysisConfig,
) -> Result<(Witness, Vec<usize>, Vec<usize>), String> {
    match technique {
        Technique::Subterm => match search_pi(hrs, pairs, config.max_pi_depth) {
            Some(v) => Ok((Witness::Subterm(v.pi), v.strict, v.weak)),
            None => Err(format!(
                "subterm criterion: no projection with sequences of length at most {}",
                config.max_pi_depth
            )),
        },
        Technique::Redpair => {
            let found = match &config.precedence {
                Precedence::Auto => search_precedence(hrs, pairs)
                    .ok_or_else(|| RedPairFailure::NoPrecedence.to_string()),
                Precedence::Explicit(list) => {
                    let lpo = Lpo::new(list.iter().map(|s| Name::from(s.as_str())).collect());
                    check_reduction_pair(hrs, pairs, &lpo)
                        .map(|v| (lpo, v))
                        .map_err(|e| e.to_string())
                }
            };
            let (lpo, v) = found.map_err(|e| format!("reduction pair: {e}"))?;
            Ok((
                Witness::ReductionPair {
                    description: v.description,
                    precedence: lpo.precedence().to_vec(),
                },
                v.strict,
                v.weak,
            ))
        }
    }
}

/// Refinement loop for one recursion component of `graph`.
pub fn analyze_component(
    hrs: &Hrs,
    graph: &DependencyGraph,
    component: &[usize],
    config: &AnalysisConfig,
) -> Result<ComponentProof, ComponentFailure> {
    let mut steps = Vec::new();
    let mut queue: VecDeque<Component> = VecDeque::from([component.to_vec()]);
    while let Some(current) = queue.pop_front() {
        let pairs: Vec<&DependencyPair> = current.iter().map(|&i| &graph.pairs[i]).collect();
        let mut reasons = Vec::new();
        let mut done = false;
        for &technique in &config.techniques {
            match try_technique(hrs, &pairs, technique, config) {
                Ok((witness, strict, weak)) => {
                    let strict: Vec<usize> = strict.into_iter().map(|i| current[i]).collect();
                    let weak: Vec<usize> = weak.into_iter().map(|i| current[i]).collect();
                    let rest: Vec<usize> = current
                        .iter()
                        .copied()
                        .filter(|i| !strict.contains(i))
                        .collect();
                    steps.push(RefinementStep {
                        component: current.clone(),
                        technique,
                        witness,
                        strict,
                        weak,
                    });
                    queue.extend(graph.components_within(&rest));
                    done = true;
                    break;
                }
                Err(reason) => reasons.push(reason),
            }
        }
        if !done {
            return Err(ComponentFailure {
                component: component.to_vec(),
                residual: current,
                steps,
                reasons,
            });
        }
    }
    Ok(ComponentProof {
        component: component.to_vec(),
        steps,
    })
}

#[cfg(test)]
mod tests;
