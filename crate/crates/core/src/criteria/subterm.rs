//! The subterm criterion with position sequences as projections.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::format::Hrs;
use crate::sdp::{unmark, DependencyPair};
use crate::term::{positions, subterm_at_with, subterms_with, Atom, NameSupply, Position, Term};
use crate::types::Name;

/// `π`, keyed by the unmarked defined symbol.
pub type PiAssignment = BTreeMap<Name, Position>;

/// Pair indices refer to the slice passed to the checker.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriterionVerdict {
    pub strict: Vec<usize>,
    pub weak: Vec<usize>,
    pub pi: PiAssignment,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubtermFailure {
    #[error("pair {pair}: no projection for `{symbol}`")]
    MissingProjection { pair: String, symbol: Name },
    #[error("pair {pair}: position {position} is not valid in {side}")]
    InvalidPosition {
        pair: String,
        side: &'static str,
        position: Position,
    },
    #[error("pair {pair}: projected rhs {rhs} is not a subterm of projected lhs {lhs}")]
    NotSubterm {
        pair: String,
        lhs: String,
        rhs: String,
    },
    #[error("pair {pair}: lhs path passes through free variable at position {position}")]
    FreeVariableOnLhsPath { pair: String, position: Position },
    #[error("pair {pair}: rhs path passes through a free variable or defined symbol at position {position}")]
    RhsPathBlocked { pair: String, position: Position },
    #[error("no pair is strictly decreasing")]
    NoStrictPair,
    #[error("component is empty")]
    EmptyComponent,
}

enum PairResult {
    Strict,
    Weak,
}

fn check_pair(
    hrs: &Hrs,
    pair: &DependencyPair,
    pi_u: &Position,
    pi_v: &Position,
) -> Result<PairResult, SubtermFailure> {
    let u = pair.unmarked_lhs();
    let v = pair.unmarked_rhs();
    let name = || pair.to_string();
    let mut supply = NameSupply::avoiding(u.atom_names().iter());
    supply.avoid_all(v.atom_names().iter());

    let fv_u = u.free_vars();
    for p in pi_u.strict_prefixes() {
        let sub =
            subterm_at_with(&u, &p, &mut supply).map_err(|_| SubtermFailure::InvalidPosition {
                pair: name(),
                side: "lhs",
                position: pi_u.clone(),
            })?;
        if matches!(sub.top(), Atom::Var(z) if fv_u.contains(z)) {
            return Err(SubtermFailure::FreeVariableOnLhsPath {
                pair: name(),
                position: p,
            });
        }
    }
    let fv_v = v.free_vars();
    for q in pi_v.strict_prefixes() {
        if q.is_root() {
            continue;
        }
        let sub =
            subterm_at_with(&v, &q, &mut supply).map_err(|_| SubtermFailure::InvalidPosition {
                pair: name(),
                side: "rhs",
                position: pi_v.clone(),
            })?;
        let blocked = match sub.top() {
            Atom::Var(z) => fv_v.contains(z),
            Atom::Sym(f) => hrs.is_defined(f),
            Atom::Bound(_) => false,
        };
        if blocked {
            return Err(SubtermFailure::RhsPathBlocked {
                pair: name(),
                position: q,
            });
        }
    }

    let up =
        subterm_at_with(&u, pi_u, &mut supply).map_err(|_| SubtermFailure::InvalidPosition {
            pair: name(),
            side: "lhs",
            position: pi_u.clone(),
        })?;
    let vp =
        subterm_at_with(&v, pi_v, &mut supply).map_err(|_| SubtermFailure::InvalidPosition {
            pair: name(),
            side: "rhs",
            position: pi_v.clone(),
        })?;
    if up == vp {
        return Ok(PairResult::Weak);
    }
    if subterms_with(&up, &mut supply).contains(&vp) {
        Ok(PairResult::Strict)
    } else {
        Err(SubtermFailure::NotSubterm {
            pair: name(),
            lhs: up.to_string(),
            rhs: vp.to_string(),
        })
    }
}

fn projection<'a>(
    pi: &'a PiAssignment,
    pair: &DependencyPair,
    marked: &Name,
) -> Result<&'a Position, SubtermFailure> {
    let f = unmark(marked);
    pi.get(f).ok_or_else(|| SubtermFailure::MissingProjection {
        pair: pair.to_string(),
        symbol: Name::from(f),
    })
}

/// Every pair must project weakly decreasing and at least one strictly.
pub fn check_subterm_criterion(
    hrs: &Hrs,
    pairs: &[&DependencyPair],
    pi: &PiAssignment,
) -> Result<CriterionVerdict, SubtermFailure> {
    if pairs.is_empty() {
        return Err(SubtermFailure::EmptyComponent);
    }
    let mut strict = Vec::new();
    let mut weak = Vec::new();
    for (i, pair) in pairs.iter().enumerate() {
        let pu = projection(pi, pair, pair.lhs_head())?;
        let pv = projection(pi, pair, pair.rhs_head())?;
        match check_pair(hrs, pair, pu, pv)? {
            PairResult::Strict => strict.push(i),
            PairResult::Weak => weak.push(i),
        }
    }
    if strict.is_empty() {
        return Err(SubtermFailure::NoStrictPair);
    }
    let used: BTreeSet<&str> = pairs
        .iter()
        .flat_map(|p| [unmark(p.lhs_head()), unmark(p.rhs_head())])
        .collect();
    let pi = pi
        .iter()
        .filter(|(f, _)| used.contains(f.as_ref()))
        .map(|(f, p)| (f.clone(), p.clone()))
        .collect();
    Ok(CriterionVerdict { strict, weak, pi })
}

/// Nonempty positions of length at most `max_depth` valid in every term,
/// shortest first, then lexicographic.
fn common_positions(terms: &[Term], max_depth: usize) -> Vec<Position> {
    let mut iter = terms.iter().map(|t| {
        positions(t)
            .into_iter()
            .filter(|p| !p.is_root() && p.len() <= max_depth)
            .collect::<BTreeSet<_>>()
    });
    let Some(first) = iter.next() else {
        return Vec::new();
    };
    let mut common: Vec<Position> = iter
        .fold(first, |acc, s| acc.intersection(&s).cloned().collect())
        .into_iter()
        .collect();
    common.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    common
}

/// First `π` (in the documented enumeration order) that passes the checker.
pub fn search_pi(
    hrs: &Hrs,
    pairs: &[&DependencyPair],
    max_depth: usize,
) -> Option<CriterionVerdict> {
    if pairs.is_empty() || max_depth == 0 {
        return None;
    }
    let mut occurrences: BTreeMap<Name, Vec<Term>> = BTreeMap::new();
    for p in pairs {
        occurrences
            .entry(Name::from(unmark(p.lhs_head())))
            .or_default()
            .push(p.unmarked_lhs());
        occurrences
            .entry(Name::from(unmark(p.rhs_head())))
            .or_default()
            .push(p.unmarked_rhs());
    }
    let symbols: Vec<Name> = occurrences.keys().cloned().collect();
    let candidates: Vec<Vec<Position>> = symbols
        .iter()
        .map(|f| common_positions(&occurrences[f], max_depth))
        .collect();
    let mut pi = PiAssignment::new();
    backtrack(hrs, pairs, &symbols, &candidates, 0, &mut pi)
}

fn backtrack(
    hrs: &Hrs,
    pairs: &[&DependencyPair],
    symbols: &[Name],
    candidates: &[Vec<Position>],
    k: usize,
    pi: &mut PiAssignment,
) -> Option<CriterionVerdict> {
    if k == symbols.len() {
        return check_subterm_criterion(hrs, pairs, pi).ok();
    }
    for pos in &candidates[k] {
        pi.insert(symbols[k].clone(), pos.clone());
        // prune on pairs whose projections are now both fixed
        let consistent = pairs.iter().all(|p| {
            let f = unmark(p.lhs_head());
            let g = unmark(p.rhs_head());
            match (pi.get(f), pi.get(g)) {
                (Some(pu), Some(pv)) => check_pair(hrs, p, pu, pv).is_ok(),
                _ => true,
            }
        });
        if consistent {
            if let Some(v) = backtrack(hrs, pairs, symbols, candidates, k + 1, pi) {
                return Some(v);
            }
        }
        pi.remove(&symbols[k]);
    }
    None
}
