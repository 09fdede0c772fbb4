//! Pattern matching, one-step rewriting and bounded reduction search.
//!
//! Rewriting below a binder opens it with a reserved name `%k` (never a
//! legal identifier), rewrites the body, and closes the result again.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use thiserror::Error;

use crate::format::{is_pattern, Hrs, Rule};
use crate::term::{eta_hint, Atom, Binder, Position, Substitution, Term};
use crate::types::{Name, SimpleType};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatchError {
    #[error("matching undecidable for non-pattern lhs `{0}`")]
    NotPattern(String),
}

/// Finds `θ` with `pattern θ↓ ≡ subject`, if any.
pub fn match_pattern(pattern: &Term, subject: &Term) -> Result<Option<Substitution>, MatchError> {
    if !is_pattern(pattern) {
        return Err(MatchError::NotPattern(pattern.to_string()));
    }
    Ok(match_unchecked(pattern, subject))
}

fn match_unchecked(pattern: &Term, subject: &Term) -> Option<Substitution> {
    let mut theta = BTreeMap::new();
    if !match_node(pattern, subject, &mut theta) {
        return None;
    }
    let mut out = Substitution::new();
    for (k, v) in theta {
        out.insert(k, v).ok()?;
    }
    Some(out)
}

fn match_node(p: &Term, s: &Term, theta: &mut BTreeMap<Name, Term>) -> bool {
    if p.ty() != s.ty() {
        return false;
    }
    if !p.binders().is_empty() {
        // equal types give equal binder lists; bodies share the extended context
        return match_node(&body(p), &body(s), theta);
    }
    match p.top() {
        Atom::Var(f) => {
            let mut ks = Vec::with_capacity(p.raw_args().len());
            for a in p.raw_args() {
                match a.eta_bound_index() {
                    Some(k) => ks.push(k),
                    None => return false,
                }
            }
            let domains: Vec<SimpleType> = p.raw_args().iter().map(|a| a.ty().clone()).collect();
            let Some(value) = abstract_body(s, &ks, &domains) else {
                return false;
            };
            match theta.get(f) {
                Some(prev) => *prev == value,
                None => {
                    theta.insert(f.clone(), value);
                    true
                }
            }
        }
        head => {
            if head != s.top() || p.raw_args().len() != s.raw_args().len() {
                return false;
            }
            p.raw_args()
                .iter()
                .zip(s.raw_args())
                .all(|(pa, sa)| match_node(pa, sa, theta))
        }
    }
}

fn body(t: &Term) -> Term {
    Term::from_parts(
        Vec::new(),
        t.top().clone(),
        t.raw_args().to_vec(),
        t.base().clone(),
    )
}

/// `λz1 … zn. body(s)` where the outer indices `ks[i]` become `zi`; fails if
/// any other outer index escapes.
fn abstract_body(s: &Term, ks: &[usize], domains: &[SimpleType]) -> Option<Term> {
    let n = ks.len();
    let offset = s.binders().len();
    let head = remap_head(s.top(), offset, ks)?;
    let args = s
        .raw_args()
        .iter()
        .map(|a| remap(a, offset, ks))
        .collect::<Option<Vec<_>>>()?;
    // the subject's own binders stay innermost
    let mut binders: Vec<Binder> = domains
        .iter()
        .enumerate()
        .map(|(i, d)| Binder {
            name: eta_hint(i),
            ty: d.clone(),
        })
        .collect();
    binders.extend(s.binders().iter().cloned());
    debug_assert_eq!(binders.len(), n + offset);
    Some(Term::from_parts(binders, head, args, s.base().clone()))
}

fn remap_head(head: &Atom, local: usize, ks: &[usize]) -> Option<Atom> {
    match head {
        Atom::Bound(j) if *j >= local => {
            let outer = j - local;
            let n = ks.len();
            ks.iter()
                .position(|k| *k == outer)
                .map(|i| Atom::Bound(local + n - 1 - i))
        }
        other => Some(other.clone()),
    }
}

fn remap(t: &Term, local: usize, ks: &[usize]) -> Option<Term> {
    let l = local + t.binders().len();
    let head = remap_head(t.top(), l, ks)?;
    let args = t
        .raw_args()
        .iter()
        .map(|a| remap(a, l, ks))
        .collect::<Option<Vec<_>>>()?;
    Some(Term::from_parts(
        t.binders().to_vec(),
        head,
        args,
        t.base().clone(),
    ))
}

/// One rewrite step `t →R t'` tagged with the rule and the redex position.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Step {
    pub rule: Name,
    pub position: Position,
    pub term: Term,
}

/// A reduction sequence `start → steps[0].term → …`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    pub start: Term,
    pub steps: Vec<Step>,
}

impl Trace {
    /// `start` followed by every step's result.
    pub fn terms(&self) -> Vec<&Term> {
        std::iter::once(&self.start)
            .chain(self.steps.iter().map(|s| &s.term))
            .collect()
    }

    /// Re-derives every step with `rewrite_step`.
    pub fn replays(&self, rewriter: &Rewriter<'_>) -> bool {
        let mut cur = &self.start;
        for step in &self.steps {
            if !rewriter.rewrite_step(cur).contains(step) {
                return false;
            }
            cur = &step.term;
        }
        true
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    NormalForm(Term),
    /// The last term of `trace` is α-equal to `trace.terms()[loop_start]`.
    LoopFound {
        trace: Trace,
        loop_start: usize,
    },
    DepthExhausted,
}

impl SearchOutcome {
    pub fn is_loop(&self) -> bool {
        matches!(self, SearchOutcome::LoopFound { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RewriteError {
    #[error("rule `{0}`: matching undecidable for non-pattern lhs")]
    NotPattern(Name),
}

/// Default cap on distinct terms explored by one search.
pub const DEFAULT_MAX_NODES: usize = 20_000;

/// Executes the rules of a pattern HRS.
#[derive(Clone, Debug)]
pub struct Rewriter<'a> {
    rules: Vec<&'a Rule>,
    max_nodes: usize,
}

struct Node {
    term: Term,
    parent: Option<(usize, Name, Position)>,
    succ: Vec<(usize, Name, Position)>,
}

impl<'a> Rewriter<'a> {
    pub fn new(hrs: &'a Hrs) -> Result<Self, RewriteError> {
        if let Some(r) = hrs.rules().iter().find(|r| !r.is_pattern()) {
            return Err(RewriteError::NotPattern(r.name().clone()));
        }
        let mut rules: Vec<&Rule> = hrs.rules().iter().collect();
        rules.sort_by(|a, b| a.name().cmp(b.name()));
        Ok(Rewriter {
            rules,
            max_nodes: DEFAULT_MAX_NODES,
        })
    }

    pub fn with_max_nodes(mut self, max_nodes: usize) -> Self {
        self.max_nodes = max_nodes.max(1);
        self
    }

    /// All one-step successors, sorted by rule name, then position.
    pub fn rewrite_step(&self, t: &Term) -> Vec<Step> {
        let mut out = Vec::new();
        let mut path = Vec::new();
        self.steps_at(t, &mut path, 0, &mut out);
        out.sort();
        out.dedup();
        out
    }

    fn steps_at(&self, t: &Term, path: &mut Vec<usize>, depth: usize, out: &mut Vec<Step>) {
        if let Some(b) = t.binders().first() {
            let var = Name::from(format!("%{depth}").as_str());
            let body = t.open_outer(var.clone());
            let start = out.len();
            path.push(1);
            self.steps_at(&body, path, depth + 1, out);
            path.pop();
            for step in &mut out[start..] {
                step.term = step.term.close_over(&var, &b.ty, b.name.clone());
            }
            return;
        }
        for rule in &self.rules {
            if let Some(theta) = match_unchecked(rule.lhs(), t) {
                if let Ok(term) = theta.apply(rule.rhs()) {
                    out.push(Step {
                        rule: rule.name().clone(),
                        position: Position::from(path.clone()),
                        term,
                    });
                }
            }
        }
        for (i, a) in t.raw_args().iter().enumerate() {
            let start = out.len();
            path.push(i + 1);
            self.steps_at(a, path, depth, out);
            path.pop();
            for step in &mut out[start..] {
                step.term = t.with_arg(i, std::mem::replace(&mut step.term, a.clone()));
            }
        }
    }

    /// Breadth-first exploration of `→R` from `t` for at most `max_steps` steps.
    pub fn bounded_search(&self, t: &Term, max_steps: usize) -> SearchOutcome {
        let mut nodes = vec![Node {
            term: t.clone(),
            parent: None,
            succ: Vec::new(),
        }];
        let mut index: HashMap<Term, usize> = HashMap::from([(t.clone(), 0)]);
        let mut frontier = vec![0usize];
        let mut first_normal_form = None;
        for level in 0..=max_steps {
            let mut next = Vec::new();
            for u in frontier {
                let steps = self.rewrite_step(&nodes[u].term);
                if steps.is_empty() {
                    first_normal_form.get_or_insert(u);
                    continue;
                }
                if level == max_steps {
                    return SearchOutcome::DepthExhausted;
                }
                for step in steps {
                    let label = (step.rule.clone(), step.position.clone());
                    match index.get(&step.term) {
                        Some(&v) => {
                            nodes[u].succ.push((v, label.0.clone(), label.1.clone()));
                            if let Some(cycle) = path_between(&nodes, v, u) {
                                return loop_outcome(&nodes, v, cycle, step);
                            }
                        }
                        None => {
                            let v = nodes.len();
                            index.insert(step.term.clone(), v);
                            nodes.push(Node {
                                term: step.term,
                                parent: Some((u, label.0.clone(), label.1.clone())),
                                succ: Vec::new(),
                            });
                            nodes[u].succ.push((v, label.0, label.1));
                            next.push(v);
                            if nodes.len() > self.max_nodes {
                                return SearchOutcome::DepthExhausted;
                            }
                        }
                    }
                }
            }
            if next.is_empty() {
                return match first_normal_form {
                    Some(u) => SearchOutcome::NormalForm(nodes[u].term.clone()),
                    None => SearchOutcome::DepthExhausted,
                };
            }
            frontier = next;
        }
        SearchOutcome::DepthExhausted
    }

    /// `true` if `target` is reachable from `from` in at most `max_steps` steps.
    pub fn reaches(&self, from: &Term, target: &Term, max_steps: usize) -> bool {
        let mut seen: HashSet<Term> = HashSet::from([from.clone()]);
        let mut queue = VecDeque::from([(from.clone(), 0usize)]);
        while let Some((t, d)) = queue.pop_front() {
            if &t == target {
                return true;
            }
            if d == max_steps {
                continue;
            }
            for step in self.rewrite_step(&t) {
                if seen.len() >= self.max_nodes {
                    return false;
                }
                if seen.insert(step.term.clone()) {
                    queue.push_back((step.term, d + 1));
                }
            }
        }
        false
    }
}

/// Edge path from `from` to `to` over explored successor arcs (empty if equal).
fn path_between(nodes: &[Node], from: usize, to: usize) -> Option<Vec<(usize, Name, Position)>> {
    if from == to {
        return Some(Vec::new());
    }
    let mut prev: HashMap<usize, (usize, Name, Position)> = HashMap::new();
    let mut queue = VecDeque::from([from]);
    let mut seen = HashSet::from([from]);
    while let Some(u) = queue.pop_front() {
        for (v, rule, pos) in &nodes[u].succ {
            if seen.insert(*v) {
                prev.insert(*v, (u, rule.clone(), pos.clone()));
                if *v == to {
                    let mut path = Vec::new();
                    let mut cur = to;
                    while cur != from {
                        let (p, r, q) = prev[&cur].clone();
                        path.push((cur, r, q));
                        cur = p;
                    }
                    path.reverse();
                    return Some(path);
                }
                queue.push_back(*v);
            }
        }
    }
    None
}

fn loop_outcome(
    nodes: &[Node],
    v: usize,
    cycle: Vec<(usize, Name, Position)>,
    closing: Step,
) -> SearchOutcome {
    let mut prefix = Vec::new();
    let mut cur = v;
    while let Some((p, rule, pos)) = &nodes[cur].parent {
        prefix.push(Step {
            rule: rule.clone(),
            position: pos.clone(),
            term: nodes[cur].term.clone(),
        });
        cur = *p;
    }
    prefix.reverse();
    let loop_start = prefix.len();
    let mut steps = prefix;
    steps.extend(cycle.into_iter().map(|(n, rule, position)| Step {
        rule,
        position,
        term: nodes[n].term.clone(),
    }));
    steps.push(closing);
    SearchOutcome::LoopFound {
        trace: Trace {
            start: nodes[0].term.clone(),
            steps,
        },
        loop_start,
    }
}

/// Closed instances of each lhs used as starting points for loop search.
///
/// Each free variable ranges over itself, η-expanded symbols of its type,
/// constant functions and projections onto a basic argument.
pub fn loop_seeds(hrs: &Hrs, per_rule: usize) -> Vec<Term> {
    let constants: Vec<(&Name, &SimpleType)> = hrs
        .signature()
        .symbols
        .iter()
        .filter(|(_, ty)| ty.is_basic())
        .collect();
    let mut seeds = Vec::new();
    let mut seen = HashSet::new();
    for rule in hrs.rules() {
        let vars: Vec<(Name, SimpleType)> = rule.lhs().var_types().into_iter().collect();
        let choices: Vec<Vec<Option<Term>>> = vars
            .iter()
            .map(|(_, ty)| {
                let mut c = vec![None];
                c.extend(inhabitants(hrs, ty, &constants).into_iter().map(Some));
                c
            })
            .collect();
        let mut counters = vec![0usize; vars.len()];
        for _ in 0..per_rule.max(1) {
            let mut theta = Substitution::new();
            for (i, (name, _)) in vars.iter().enumerate() {
                if let Some(value) = &choices[i][counters[i]] {
                    // values are closed by construction
                    let _ = theta.insert(name.clone(), value.clone());
                }
            }
            if let Ok(seed) = theta.apply(rule.lhs()) {
                if seen.insert(seed.clone()) {
                    seeds.push(seed);
                }
            }
            if !advance(&mut counters, &choices) {
                break;
            }
        }
    }
    seeds
}

fn advance(counters: &mut [usize], choices: &[Vec<Option<Term>>]) -> bool {
    for i in (0..counters.len()).rev() {
        counters[i] += 1;
        if counters[i] < choices[i].len() {
            return true;
        }
        counters[i] = 0;
    }
    false
}

fn inhabitants(hrs: &Hrs, ty: &SimpleType, constants: &[(&Name, &SimpleType)]) -> Vec<Term> {
    let (domains, base) = ty.decompose();
    let n = domains.len();
    let binders: Vec<Binder> = domains
        .iter()
        .enumerate()
        .map(|(i, d)| Binder {
            name: eta_hint(i),
            ty: (*d).clone(),
        })
        .collect();
    let mut out = Vec::new();
    for (f, fty) in &hrs.signature().symbols {
        if fty == ty && n > 0 {
            out.push(Term::eta(Atom::Sym(f.clone()), ty));
        }
    }
    for (i, d) in domains.iter().enumerate() {
        if let SimpleType::Basic(b) = d {
            if b == base {
                out.push(Term::from_parts(
                    binders.clone(),
                    Atom::Bound(n - 1 - i),
                    Vec::new(),
                    base.clone(),
                ));
            }
        }
    }
    for (c, cty) in constants {
        if cty.result() == base {
            out.push(Term::from_parts(
                binders.clone(),
                Atom::Sym((*c).clone()),
                Vec::new(),
                base.clone(),
            ));
        }
    }
    out
}

/// Searches the seeds of [`loop_seeds`] for a loop within `max_steps` steps each.
pub fn find_loop(hrs: &Hrs, max_steps: usize) -> Result<Option<(Trace, usize)>, RewriteError> {
    let rewriter = Rewriter::new(hrs)?.with_max_nodes(5_000);
    for seed in loop_seeds(hrs, 64) {
        if let SearchOutcome::LoopFound { trace, loop_start } =
            rewriter.bounded_search(&seed, max_steps)
        {
            return Ok(Some((trace, loop_start)));
        }
    }
    Ok(None)
}
