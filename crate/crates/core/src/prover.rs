//! The end-to-end pipeline and its proof output.
//!
//! [`prove`] runs parsing, the plain function-passing check, pair extraction,
//! graph construction and component analysis, then optionally searches for a
//! loop. The result renders as text, versioned JSON ([`ProofObject`]) or DOT.

use std::collections::BTreeMap;
use std::fmt::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::criteria::{
    analyze_component, AnalysisConfig, ComponentFailure, ComponentProof, RefinementStep, Witness,
};
use crate::format::{FormatError, Hrs};
use crate::graph::{build_graph, Component, DependencyGraph};
use crate::pfp::{is_pfp, PfpReport};
use crate::rewrite::{find_loop, RewriteError, Trace};
use crate::sdp::extract_sdps;

/// Bumped on any incompatible change to the JSON layout.
pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_TERMINATING: i32 = 0;
pub const EXIT_NONTERMINATING: i32 = 1;
pub const EXIT_MAYBE: i32 = 2;
pub const EXIT_INPUT_ERROR: i32 = 3;

const NOT_PFP: &str = "not plain function-passing";

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct ProverConfig {
    #[serde(flatten)]
    pub analysis: AnalysisConfig,
    /// Step bound for the loop search; `None` disables it.
    pub disprove: Option<usize>,
}

#[derive(Debug, Error)]
pub enum ProveError {
    #[error(transparent)]
    Input(#[from] FormatError),
}

impl ProveError {
    pub fn exit_code(&self) -> i32 {
        EXIT_INPUT_ERROR
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Terminating,
    Nonterminating { trace: LoopRecord },
    Maybe { reason: String },
}

impl Verdict {
    pub fn exit_code(&self) -> i32 {
        match self {
            Verdict::Terminating => EXIT_TERMINATING,
            Verdict::Nonterminating { .. } => EXIT_NONTERMINATING,
            Verdict::Maybe { .. } => EXIT_MAYBE,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Terminating => "TERMINATING",
            Verdict::Nonterminating { .. } => "NONTERMINATING",
            Verdict::Maybe { .. } => "MAYBE",
        }
    }
}

/// Everything the pipeline computed, in rich form.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub hrs: Hrs,
    pub digest: String,
    pub pfp: PfpReport,
    pub graph: DependencyGraph,
    pub components: Vec<Component>,
    /// One entry per component, same order.
    pub outcomes: Vec<Result<ComponentProof, ComponentFailure>>,
    pub disproof: Option<(Trace, usize)>,
    /// Why the loop search did not run, if it was requested.
    pub disproof_note: Option<String>,
    pub verdict: Verdict,
}

pub fn prove(text: &str, config: &ProverConfig) -> Result<Analysis, ProveError> {
    prove_bytes(text.as_bytes(), config)
}

pub fn prove_bytes(bytes: &[u8], config: &ProverConfig) -> Result<Analysis, ProveError> {
    let digest = hex::encode(Sha256::digest(bytes));
    let hrs = Hrs::parse_bytes(bytes)?;
    let pfp = is_pfp(&hrs);
    let graph = build_graph(extract_sdps(&hrs));
    let components = graph.recursion_components();
    let outcomes: Vec<_> = components
        .iter()
        .map(|c| analyze_component(&hrs, &graph, c, &config.analysis))
        .collect();

    let failed = outcomes
        .iter()
        .enumerate()
        .find_map(|(k, o)| o.as_ref().err().map(|f| (k, f)));
    let proven = pfp.is_pfp && failed.is_none();

    let mut disproof = None;
    let mut disproof_note = None;
    if let (false, Some(steps)) = (proven, config.disprove) {
        match find_loop(&hrs, steps) {
            Ok(found) => disproof = found,
            Err(RewriteError::NotPattern(rule)) => {
                disproof_note = Some(format!(
                    "loop search skipped: rule `{rule}` has a non-pattern lhs"
                ))
            }
        }
    }

    let verdict = if proven {
        Verdict::Terminating
    } else if let Some((trace, loop_start)) = &disproof {
        Verdict::Nonterminating {
            trace: LoopRecord::new(trace, *loop_start),
        }
    } else if !pfp.is_pfp {
        Verdict::Maybe {
            reason: NOT_PFP.to_string(),
        }
    } else {
        let (k, _) = failed.expect("unproven PFP system has a failed component");
        Verdict::Maybe {
            reason: format!("component C{} not proven", k + 1),
        }
    };

    Ok(Analysis {
        hrs,
        digest,
        pfp,
        graph,
        components,
        outcomes,
        disproof,
        disproof_note,
        verdict,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoopRecord {
    pub start: String,
    pub steps: Vec<StepRecord>,
    /// Index into `start, steps[0].term, …` where the cycle begins.
    pub loop_start: usize,
}

impl LoopRecord {
    fn new(trace: &Trace, loop_start: usize) -> Self {
        LoopRecord {
            start: trace.start.to_string(),
            steps: trace
                .steps
                .iter()
                .map(|s| StepRecord {
                    rule: s.rule.to_string(),
                    position: s.position.to_string(),
                    term: s.term.to_string(),
                })
                .collect(),
            loop_start,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRecord {
    pub rule: String,
    pub position: String,
    pub term: String,
}

/// The serialized proof; terms are printed, pairs are referred to by id.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofObject {
    pub schema_version: u32,
    pub input_sha256: String,
    pub pfp: PfpRecord,
    pub sdp_count: usize,
    pub sdps: Vec<PairRecord>,
    pub graph: GraphRecord,
    pub component_count: usize,
    pub components: Vec<ComponentRecord>,
    pub component_proofs: Vec<ComponentProofRecord>,
    pub verdict: Verdict,
}

impl ProofObject {
    pub fn from_json(text: &str) -> serde_json::Result<ProofObject> {
        serde_json::from_str(text)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PfpRecord {
    pub is_pfp: bool,
    pub safe_sets: Vec<SafeSetRecord>,
    pub violations: Vec<ViolationRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SafeSetRecord {
    pub rule: String,
    pub safe: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViolationRecord {
    pub rule: String,
    pub subterm: String,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairRecord {
    pub id: String,
    pub rule: String,
    pub lhs: String,
    pub rhs: String,
    pub extra_vars: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphRecord {
    pub arcs: Vec<[String; 2]>,
    /// Always true: the graph is finite.
    pub no_infinite_path: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentRecord {
    pub id: String,
    pub pairs: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentProofRecord {
    pub component: String,
    pub proven: bool,
    pub steps: Vec<RefinementRecord>,
    /// Pairs left when no technique applied.
    pub residual: Vec<String>,
    pub reasons: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RefinementRecord {
    pub pairs: Vec<String>,
    pub technique: String,
    pub witness: WitnessRecord,
    pub strict: Vec<String>,
    pub weak: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WitnessRecord {
    Projection {
        pi: BTreeMap<String, String>,
    },
    ReductionPair {
        order: String,
        precedence: Vec<String>,
    },
}

fn pair_id(i: usize) -> String {
    format!("p{}", i + 1)
}

fn ids(nodes: &[usize]) -> Vec<String> {
    nodes.iter().map(|&i| pair_id(i)).collect()
}

fn witness_record(w: &Witness) -> WitnessRecord {
    match w {
        Witness::Subterm(pi) => WitnessRecord::Projection {
            pi: pi
                .iter()
                .map(|(f, p)| (f.to_string(), p.to_string()))
                .collect(),
        },
        Witness::ReductionPair {
            description,
            precedence,
        } => WitnessRecord::ReductionPair {
            order: description.clone(),
            precedence: precedence.iter().map(|f| f.to_string()).collect(),
        },
    }
}

fn step_record(s: &RefinementStep) -> RefinementRecord {
    RefinementRecord {
        pairs: ids(&s.component),
        technique: s.technique.to_string(),
        witness: witness_record(&s.witness),
        strict: ids(&s.strict),
        weak: ids(&s.weak),
    }
}

impl Analysis {
    pub fn proof_object(&self) -> ProofObject {
        let pfp = PfpRecord {
            is_pfp: self.pfp.is_pfp,
            safe_sets: self
                .pfp
                .safe_sets
                .iter()
                .map(|s| SafeSetRecord {
                    rule: s.rule.to_string(),
                    safe: s.safe.iter().map(|t| t.to_string()).collect(),
                })
                .collect(),
            violations: self
                .pfp
                .violations
                .iter()
                .map(|v| ViolationRecord {
                    rule: v.rule.to_string(),
                    subterm: v.subterm.to_string(),
                    reason: v.reason.clone(),
                })
                .collect(),
        };
        let sdps = self
            .graph
            .pairs
            .iter()
            .enumerate()
            .map(|(i, p)| PairRecord {
                id: pair_id(i),
                rule: p.rule.to_string(),
                lhs: p.lhs.to_string(),
                rhs: p.rhs.to_string(),
                extra_vars: p.extra_vars.iter().map(|v| v.to_string()).collect(),
            })
            .collect();
        let components = self
            .components
            .iter()
            .enumerate()
            .map(|(k, c)| ComponentRecord {
                id: format!("C{}", k + 1),
                pairs: ids(c),
            })
            .collect();
        let component_proofs = self
            .outcomes
            .iter()
            .enumerate()
            .map(|(k, o)| match o {
                Ok(p) => ComponentProofRecord {
                    component: format!("C{}", k + 1),
                    proven: true,
                    steps: p.steps.iter().map(step_record).collect(),
                    residual: Vec::new(),
                    reasons: Vec::new(),
                },
                Err(f) => ComponentProofRecord {
                    component: format!("C{}", k + 1),
                    proven: false,
                    steps: f.steps.iter().map(step_record).collect(),
                    residual: ids(&f.residual),
                    reasons: f.reasons.clone(),
                },
            })
            .collect();
        ProofObject {
            schema_version: SCHEMA_VERSION,
            input_sha256: self.digest.clone(),
            pfp,
            sdp_count: self.graph.pairs.len(),
            sdps,
            graph: GraphRecord {
                arcs: self
                    .graph
                    .arcs
                    .iter()
                    .map(|&(a, b)| [pair_id(a), pair_id(b)])
                    .collect(),
                no_infinite_path: true,
            },
            component_count: self.components.len(),
            components,
            component_proofs,
            verdict: self.verdict.clone(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Text,
    Json,
    Dot,
}

#[derive(Debug, Error)]
pub enum EmitError {
    #[error("unknown output format `{0}` (expected text, json or dot)")]
    UnknownFormat(String),
    #[error("serializing proof: {0}")]
    Json(#[from] serde_json::Error),
}

impl FromStr for OutputFormat {
    type Err = EmitError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(OutputFormat::Text),
            "json" => Ok(OutputFormat::Json),
            "dot" => Ok(OutputFormat::Dot),
            other => Err(EmitError::UnknownFormat(other.to_string())),
        }
    }
}

pub fn emit(analysis: &Analysis, format: OutputFormat) -> Result<String, EmitError> {
    match format {
        OutputFormat::Text => Ok(render_text(
            &analysis.proof_object(),
            analysis.disproof_note.as_deref(),
        )),
        OutputFormat::Json => {
            let mut out = serde_json::to_string_pretty(&analysis.proof_object())?;
            out.push('\n');
            Ok(out)
        }
        OutputFormat::Dot => Ok(analysis.graph.to_dot(&analysis.components)),
    }
}

/// The safe-set and PFP section of the text output.
pub fn render_pfp(proof: &ProofObject) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "Safe subterms:");
    for s in &proof.pfp.safe_sets {
        let _ = writeln!(out, "  safe({}) = {{{}}}", s.rule, s.safe.join(", "));
    }
    let yes = if proof.pfp.is_pfp { "yes" } else { "no" };
    let _ = writeln!(out, "Plain function-passing: {yes}");
    for v in &proof.pfp.violations {
        let _ = writeln!(out, "  rule {}: {}: {}", v.rule, v.subterm, v.reason);
    }
    out
}

/// The pair list section of the text output.
pub fn render_sdps(proof: &ProofObject) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "Static dependency pairs ({}):", proof.sdp_count);
    for p in &proof.sdps {
        let _ = writeln!(out, "  {}: {} -> {}  [rule {}]", p.id, p.lhs, p.rhs, p.rule);
    }
    out
}

fn render_text(proof: &ProofObject, note: Option<&str>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "Input sha256: {}", proof.input_sha256);
    out.push_str(&render_pfp(proof));
    out.push_str(&render_sdps(proof));

    let arcs: Vec<String> = proof
        .graph
        .arcs
        .iter()
        .map(|[a, b]| format!("{a} -> {b}"))
        .collect();
    let _ = writeln!(
        out,
        "Graph arcs: {}",
        if arcs.is_empty() {
            "none".to_string()
        } else {
            arcs.join(", ")
        }
    );
    let _ = writeln!(out, "Recursion components ({}):", proof.component_count);
    for c in &proof.components {
        let _ = writeln!(out, "  {} = {{{}}}", c.id, c.pairs.join(", "));
    }

    for cp in &proof.component_proofs {
        let status = if cp.proven { "proven" } else { "not proven" };
        let _ = writeln!(out, "Component {}: {status}", cp.component);
        for (n, s) in cp.steps.iter().enumerate() {
            let _ = writeln!(
                out,
                "  step {} on {{{}}}: {}",
                n + 1,
                s.pairs.join(", "),
                s.technique
            );
            match &s.witness {
                WitnessRecord::Projection { pi } => {
                    for (f, p) in pi {
                        let _ = writeln!(out, "    pi({f}) = {p}");
                    }
                }
                WitnessRecord::ReductionPair { order, .. } => {
                    let _ = writeln!(out, "    {order}");
                }
            }
            let _ = writeln!(
                out,
                "    strict: {{{}}}  weak: {{{}}}",
                s.strict.join(", "),
                s.weak.join(", ")
            );
        }
        if !cp.proven {
            let _ = writeln!(out, "  residual: {{{}}}", cp.residual.join(", "));
            for r in &cp.reasons {
                let _ = writeln!(out, "  {r}");
            }
        }
    }

    if let Some(note) = note {
        let _ = writeln!(out, "{note}");
    }
    match &proof.verdict {
        Verdict::Terminating => {
            let _ = writeln!(out, "Verdict: TERMINATING");
        }
        Verdict::Nonterminating { trace } => {
            let _ = writeln!(out, "Loop:");
            let _ = writeln!(out, "  {}", trace.start);
            for s in &trace.steps {
                let _ = writeln!(out, "  -> {}  [rule {} at {}]", s.term, s.rule, s.position);
            }
            let _ = writeln!(out, "  repeats term {} of the trace", trace.loop_start);
            let _ = writeln!(out, "Verdict: NONTERMINATING");
        }
        Verdict::Maybe { reason } => {
            let _ = writeln!(out, "Verdict: MAYBE ({reason})");
        }
    }
    out
}
