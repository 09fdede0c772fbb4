//! Reduction pairs: the oracle interface, the lexicographic path order on the
//! λ-free fragment, and precedence search.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::format::Hrs;
use crate::sdp::DependencyPair;
use crate::term::{Atom, Term};
use crate::types::Name;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    Greater,
    GreaterEq,
    Unknown,
}

/// A comparator whose `Greater` and `GreaterEq` answers form a reduction pair.
pub trait ReductionPairOracle {
    fn compare(&self, s: &Term, t: &Term) -> Orientation;
    fn describe(&self) -> String;
}

/// Basic-typed variables and no binders anywhere.
pub fn in_first_order_fragment(t: &Term) -> bool {
    if t.is_abstraction() {
        return false;
    }
    match t.top() {
        Atom::Var(_) if !t.raw_args().is_empty() => false,
        Atom::Bound(_) => false,
        _ => t.raw_args().iter().all(in_first_order_fragment),
    }
}

/// Lexicographic path order for a precedence given highest first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lpo {
    precedence: Vec<Name>,
    rank: BTreeMap<Name, usize>,
}

impl Lpo {
    /// An unlisted `f#` is placed directly above `f`.
    pub fn new(precedence: Vec<Name>) -> Lpo {
        let rank = precedence
            .iter()
            .enumerate()
            .map(|(i, f)| (f.clone(), 2 * i + 1))
            .collect();
        Lpo { precedence, rank }
    }

    pub fn precedence(&self) -> &[Name] {
        &self.precedence
    }

    fn rank_of(&self, f: &Name) -> Option<usize> {
        if let Some(r) = self.rank.get(f) {
            return Some(*r);
        }
        let base = f.strip_suffix('#')?;
        self.rank.get(base).map(|r| r - 1)
    }

    fn prec_gt(&self, f: &Name, g: &Name) -> bool {
        match (self.rank_of(f), self.rank_of(g)) {
            (Some(a), Some(b)) => a < b,
            _ => false,
        }
    }

    /// `s >lpo t` on fragment terms.
    pub fn gt(&self, s: &Term, t: &Term) -> bool {
        if let Atom::Var(x) = t.top() {
            return s != t && s.free_vars().contains(x);
        }
        let (Atom::Sym(f), Atom::Sym(g)) = (s.top(), t.top()) else {
            return false;
        };
        if s.raw_args().iter().any(|si| self.ge(si, t)) {
            return true;
        }
        let dominates = || t.raw_args().iter().all(|tj| self.gt(s, tj));
        if f == g {
            self.lex_gt(s.raw_args(), t.raw_args()) && dominates()
        } else {
            self.prec_gt(f, g) && dominates()
        }
    }

    pub fn ge(&self, s: &Term, t: &Term) -> bool {
        s == t || self.gt(s, t)
    }

    fn lex_gt(&self, ss: &[Term], ts: &[Term]) -> bool {
        for (a, b) in ss.iter().zip(ts) {
            if a != b {
                return self.gt(a, b);
            }
        }
        false
    }
}

impl ReductionPairOracle for Lpo {
    fn compare(&self, s: &Term, t: &Term) -> Orientation {
        if !in_first_order_fragment(s) || !in_first_order_fragment(t) {
            return Orientation::Unknown;
        }
        if s == t {
            Orientation::GreaterEq
        } else if self.gt(s, t) {
            Orientation::Greater
        } else {
            Orientation::Unknown
        }
    }

    fn describe(&self) -> String {
        let names: Vec<&str> = self.precedence.iter().map(|n| n.as_ref()).collect();
        format!(
            "lexicographic path order with precedence {}",
            names.join(" > ")
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RedPairVerdict {
    pub strict: Vec<usize>,
    pub weak: Vec<usize>,
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RedPairFailure {
    #[error("component is empty")]
    EmptyComponent,
    #[error("rule `{rule}` is not weakly oriented: {lhs} vs {rhs}")]
    UnorientedRule {
        rule: Name,
        lhs: String,
        rhs: String,
    },
    #[error("pair {0} is not oriented")]
    UnorientedPair(String),
    #[error("no pair is strictly oriented")]
    NoStrictPair,
    #[error("no precedence orients the component")]
    NoPrecedence,
}

/// `R ⊆ ≳`, `C ⊆ ≳ ∪ >` and `C ∩ > ≠ ∅`.
pub fn check_reduction_pair(
    hrs: &Hrs,
    pairs: &[&DependencyPair],
    oracle: &dyn ReductionPairOracle,
) -> Result<RedPairVerdict, RedPairFailure> {
    if pairs.is_empty() {
        return Err(RedPairFailure::EmptyComponent);
    }
    for rule in hrs.rules() {
        if oracle.compare(rule.lhs(), rule.rhs()) == Orientation::Unknown {
            return Err(RedPairFailure::UnorientedRule {
                rule: rule.name().clone(),
                lhs: rule.lhs().to_string(),
                rhs: rule.rhs().to_string(),
            });
        }
    }
    let mut strict = Vec::new();
    let mut weak = Vec::new();
    for (i, p) in pairs.iter().enumerate() {
        match oracle.compare(&p.lhs, &p.rhs) {
            Orientation::Greater => strict.push(i),
            Orientation::GreaterEq => weak.push(i),
            Orientation::Unknown => return Err(RedPairFailure::UnorientedPair(p.to_string())),
        }
    }
    if strict.is_empty() {
        return Err(RedPairFailure::NoStrictPair);
    }
    Ok(RedPairVerdict {
        strict,
        weak,
        description: oracle.describe(),
    })
}

/// Positive boolean combination of precedence atoms `f > g`.
#[derive(Clone, Debug, PartialEq, Eq)]
enum Formula {
    True,
    False,
    Gt(Name, Name),
    And(Vec<Formula>),
    Or(Vec<Formula>),
}

fn and(parts: Vec<Formula>) -> Formula {
    let mut out = Vec::new();
    for p in parts {
        match p {
            Formula::True => {}
            Formula::False => return Formula::False,
            Formula::And(inner) => out.extend(inner),
            other => out.push(other),
        }
    }
    match out.len() {
        0 => Formula::True,
        1 => out.pop().unwrap(),
        _ => Formula::And(out),
    }
}

fn or(parts: Vec<Formula>) -> Formula {
    let mut out = Vec::new();
    for p in parts {
        match p {
            Formula::False => {}
            Formula::True => return Formula::True,
            Formula::Or(inner) => out.extend(inner),
            other => out.push(other),
        }
    }
    match out.len() {
        0 => Formula::False,
        1 => out.pop().unwrap(),
        _ => Formula::Or(out),
    }
}

/// The precedence constraints under which `s >lpo t`.
fn gt_constraint(s: &Term, t: &Term) -> Formula {
    if let Atom::Var(x) = t.top() {
        return if s != t && s.free_vars().contains(x) {
            Formula::True
        } else {
            Formula::False
        };
    }
    let (Atom::Sym(f), Atom::Sym(g)) = (s.top(), t.top()) else {
        return Formula::False;
    };
    let mut options: Vec<Formula> = s.raw_args().iter().map(|si| ge_constraint(si, t)).collect();
    let dominates = and(t.raw_args().iter().map(|tj| gt_constraint(s, tj)).collect());
    if f == g {
        let lex = s
            .raw_args()
            .iter()
            .zip(t.raw_args())
            .find(|(a, b)| a != b)
            .map(|(a, b)| gt_constraint(a, b))
            .unwrap_or(Formula::False);
        options.push(and(vec![lex, dominates]));
    } else {
        options.push(and(vec![Formula::Gt(f.clone(), g.clone()), dominates]));
    }
    or(options)
}

fn ge_constraint(s: &Term, t: &Term) -> Formula {
    if s == t {
        Formula::True
    } else {
        gt_constraint(s, t)
    }
}

/// Strict order built from chosen atoms; kept acyclic.
#[derive(Clone, Debug, Default)]
struct Order {
    edges: BTreeMap<Name, BTreeSet<Name>>,
}

impl Order {
    fn reaches(&self, from: &Name, to: &Name) -> bool {
        let mut stack = vec![from.clone()];
        let mut seen = BTreeSet::new();
        while let Some(x) = stack.pop() {
            if &x == to {
                return true;
            }
            if seen.insert(x.clone()) {
                if let Some(next) = self.edges.get(&x) {
                    stack.extend(next.iter().cloned());
                }
            }
        }
        false
    }

    fn holds(&self, f: &Name, g: &Name) -> bool {
        f != g && self.reaches(f, g)
    }

    fn can_add(&self, f: &Name, g: &Name) -> bool {
        f != g && !self.reaches(g, f)
    }

    fn add(&mut self, f: &Name, g: &Name) {
        self.edges.entry(f.clone()).or_default().insert(g.clone());
    }
}

/// `Some(true)` / `Some(false)` once decided under `order` with `rejected` atoms false.
fn eval(f: &Formula, order: &Order, rejected: &BTreeSet<(Name, Name)>) -> Option<bool> {
    match f {
        Formula::True => Some(true),
        Formula::False => Some(false),
        Formula::Gt(a, b) => {
            if order.holds(a, b) {
                Some(true)
            } else if !order.can_add(a, b) || rejected.contains(&(a.clone(), b.clone())) {
                Some(false)
            } else {
                None
            }
        }
        Formula::And(parts) => {
            let mut open = false;
            for p in parts {
                match eval(p, order, rejected) {
                    Some(false) => return Some(false),
                    None => open = true,
                    Some(true) => {}
                }
            }
            if open {
                None
            } else {
                Some(true)
            }
        }
        Formula::Or(parts) => {
            let mut open = false;
            for p in parts {
                match eval(p, order, rejected) {
                    Some(true) => return Some(true),
                    None => open = true,
                    Some(false) => {}
                }
            }
            if open {
                None
            } else {
                Some(false)
            }
        }
    }
}

fn first_open_atom(
    f: &Formula,
    order: &Order,
    rejected: &BTreeSet<(Name, Name)>,
) -> Option<(Name, Name)> {
    match f {
        Formula::Gt(a, b) => match eval(f, order, rejected) {
            None => Some((a.clone(), b.clone())),
            _ => None,
        },
        Formula::And(parts) | Formula::Or(parts) => parts
            .iter()
            .filter(|p| eval(p, order, rejected).is_none())
            .find_map(|p| first_open_atom(p, order, rejected)),
        _ => None,
    }
}

fn solve(
    f: &Formula,
    order: &mut Order,
    rejected: &mut BTreeSet<(Name, Name)>,
    budget: &mut usize,
) -> bool {
    if *budget == 0 {
        return false;
    }
    *budget -= 1;
    match eval(f, order, rejected) {
        Some(result) => result,
        None => {
            let Some((a, b)) = first_open_atom(f, order, rejected) else {
                return false;
            };
            let saved = order.clone();
            order.add(&a, &b);
            if solve(f, order, rejected, budget) {
                return true;
            }
            *order = saved;
            rejected.insert((a.clone(), b.clone()));
            let ok = solve(f, order, rejected, budget);
            if !ok {
                rejected.remove(&(a, b));
            }
            ok
        }
    }
}

/// Linear extension of `order` over `symbols`, ties broken by name.
fn linearize(order: &Order, symbols: &BTreeSet<Name>) -> Vec<Name> {
    let mut remaining: BTreeSet<Name> = symbols.clone();
    for (f, gs) in &order.edges {
        remaining.insert(f.clone());
        remaining.extend(gs.iter().cloned());
    }
    let mut out = Vec::new();
    while !remaining.is_empty() {
        let next = remaining
            .iter()
            .find(|f| !remaining.iter().any(|g| g != *f && order.holds(g, f)))
            .cloned()
            .expect("order is acyclic");
        remaining.remove(&next);
        out.push(next);
    }
    out
}

fn relevant_symbols(hrs: &Hrs, pairs: &[&DependencyPair]) -> BTreeSet<Name> {
    let mut out = BTreeSet::new();
    for r in hrs.rules() {
        out.extend(r.lhs().symbols());
        out.extend(r.rhs().symbols());
    }
    for p in pairs {
        out.extend(p.lhs.symbols());
        out.extend(p.rhs.symbols());
    }
    out
}

/// Searches for a precedence under which the path order proves the component;
/// pairs are tried as the strict witness in order.
pub fn search_precedence(hrs: &Hrs, pairs: &[&DependencyPair]) -> Option<(Lpo, RedPairVerdict)> {
    let all_terms = hrs
        .rules()
        .iter()
        .flat_map(|r| [r.lhs(), r.rhs()])
        .chain(pairs.iter().flat_map(|p| [&p.lhs, &p.rhs]));
    if pairs.is_empty() || !all_terms.into_iter().all(in_first_order_fragment) {
        return None;
    }
    let symbols = relevant_symbols(hrs, pairs);
    let mut base: Vec<Formula> = hrs
        .rules()
        .iter()
        .map(|r| ge_constraint(r.lhs(), r.rhs()))
        .collect();
    base.extend(pairs.iter().map(|p| ge_constraint(&p.lhs, &p.rhs)));
    for strict in pairs {
        let mut parts = base.clone();
        parts.push(gt_constraint(&strict.lhs, &strict.rhs));
        let formula = and(parts);
        let mut order = Order::default();
        let mut rejected = BTreeSet::new();
        let mut budget = 100_000;
        if solve(&formula, &mut order, &mut rejected, &mut budget) {
            let lpo = Lpo::new(linearize(&order, &symbols));
            if let Ok(verdict) = check_reduction_pair(hrs, pairs, &lpo) {
                return Some((lpo, verdict));
            }
        }
    }
    None
}
