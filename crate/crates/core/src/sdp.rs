//! Candidate terms and static dependency pairs.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use crate::format::Hrs;
use crate::pfp::{rule_supply, safe_subterms};
use crate::term::{Atom, Term};
use crate::types::Name;

/// Marked name `f#` of a defined symbol.
pub fn mark(f: &str) -> Name {
    Name::from(format!("{f}#").as_str())
}

/// The defined symbol behind a marked name.
pub fn unmark(f: &str) -> &str {
    f.strip_suffix('#').unwrap_or(f)
}

/// `Cand(t)`: each argument is taken together with the enclosing binder prefix.
pub fn candidates(t: &Term) -> BTreeSet<Term> {
    let mut out = BTreeSet::new();
    collect_candidates(t, &mut out);
    out
}

fn collect_candidates(t: &Term, out: &mut BTreeSet<Term>) {
    for a in t.raw_args() {
        // `a` lives under t's binders, so prefixing them needs no shifting
        let mut binders = t.binders().to_vec();
        binders.extend(a.binders().iter().cloned());
        let c = Term::from_parts(
            binders,
            a.top().clone(),
            a.raw_args().to_vec(),
            a.base().clone(),
        );
        collect_candidates(&c, out);
    }
    out.insert(t.clone());
}

/// A static dependency pair `l# -> a#(r1, …, rn)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DependencyPair {
    pub lhs: Term,
    pub rhs: Term,
    pub rule: Name,
    /// Free variables of `rhs` introduced by stripping candidate binders.
    pub extra_vars: Vec<Name>,
}

impl DependencyPair {
    /// `u` with the mark removed.
    pub fn unmarked_lhs(&self) -> Term {
        unmark_head(&self.lhs)
    }

    /// `v` with the mark removed.
    pub fn unmarked_rhs(&self) -> Term {
        unmark_head(&self.rhs)
    }

    /// Marked head symbol of the lhs.
    pub fn lhs_head(&self) -> &Name {
        match self.lhs.top() {
            Atom::Sym(f) => f,
            _ => unreachable!("pair lhs is symbol-headed"),
        }
    }

    /// Marked head symbol of the rhs.
    pub fn rhs_head(&self) -> &Name {
        match self.rhs.top() {
            Atom::Sym(f) => f,
            _ => unreachable!("pair rhs is symbol-headed"),
        }
    }

    /// Key identifying the pair up to renaming of its extra variables.
    fn canonical(&self) -> (Term, Term) {
        let mut rhs = self.rhs.clone();
        for v in self.extra_vars.iter().rev() {
            let ty = self.rhs.var_types().get(v).cloned();
            if let Some(ty) = ty {
                rhs = rhs.close_over(v, &ty, Name::from("x"));
            }
        }
        (self.lhs.clone(), rhs)
    }
}

fn unmark_head(t: &Term) -> Term {
    match t.top() {
        Atom::Sym(f) => t.with_head(Atom::Sym(Name::from(unmark(f)))),
        _ => t.clone(),
    }
}

impl fmt::Display for DependencyPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.lhs, self.rhs)
    }
}

/// `SDP(R)` in rule order, then candidate order; duplicates removed.
pub fn extract_sdps(hrs: &Hrs) -> Vec<DependencyPair> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for rule in hrs.rules() {
        let safe = safe_subterms(rule).safe;
        let marked_lhs = rule.lhs().with_head(Atom::Sym(mark(rule.head())));
        for cand in candidates(rule.rhs()) {
            let Atom::Sym(a) = cand.top() else { continue };
            if !hrs.is_defined(a) {
                continue;
            }
            // extra variables get the binder names whenever they are unambiguous
            let mut supply = rule_supply(rule);
            let (extra_vars, body) = cand.open_all(&mut supply);
            let n = body.raw_args().len();
            if (0..=n).any(|k| safe.contains(&body.prefix(k))) {
                continue;
            }
            let pair = DependencyPair {
                lhs: marked_lhs.clone(),
                rhs: body.with_head(Atom::Sym(mark(a))),
                rule: rule.name().clone(),
                extra_vars: extra_vars
                    .into_iter()
                    .filter(|v| body.free_vars().contains(v))
                    .collect(),
            };
            if seen.insert(pair.canonical()) {
                out.push(pair);
            }
        }
    }
    out
}
