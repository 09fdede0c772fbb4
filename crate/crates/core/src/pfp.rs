//! Safe subterms of left-hand sides and the plain function-passing check.

use std::collections::BTreeSet;

use crate::format::{Hrs, Rule};
use crate::term::{subterms_with, Atom, NameSupply, Term};
use crate::types::Name;

/// `safe(l)` of one rule, with the `safe_B` part kept separately.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SafeSet {
    pub rule: Name,
    pub safe: BTreeSet<Term>,
    /// Members contributed by `safe_B` after the free-variable filter.
    pub from_basic: BTreeSet<Term>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub rule: Name,
    /// The offending `Z(r1, …, rn)`.
    pub subterm: Term,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PfpReport {
    pub is_pfp: bool,
    pub safe_sets: Vec<SafeSet>,
    pub violations: Vec<Violation>,
}

/// Name supply avoiding every symbol and free variable of a rule.
pub(crate) fn rule_supply(rule: &Rule) -> NameSupply {
    let mut supply = NameSupply::avoiding(rule.lhs().atom_names().iter());
    supply.avoid_all(rule.rhs().atom_names().iter());
    supply
}

/// `safe_B(t, X)`; binders are stripped by opening them with names from `supply`.
pub fn safe_basic(t: &Term, x: &BTreeSet<Name>, supply: &mut NameSupply) -> BTreeSet<Term> {
    let mut out = BTreeSet::new();
    collect_safe_basic(t, x, supply, &mut out);
    out
}

fn collect_safe_basic(
    t: &Term,
    x: &BTreeSet<Name>,
    supply: &mut NameSupply,
    out: &mut BTreeSet<Term>,
) {
    let (_, body) = t.open_all(supply);
    let stop = matches!(body.top(), Atom::Var(a) if x.contains(a));
    if !stop {
        for a in body.raw_args() {
            collect_safe_basic(a, x, supply, out);
        }
    }
    out.insert(body);
}

/// `safe(l)` for the rule's lhs.
pub fn safe_subterms(rule: &Rule) -> SafeSet {
    let mut supply = rule_supply(rule);
    safe_subterms_with(rule, &mut supply)
}

fn safe_subterms_with(rule: &Rule, supply: &mut NameSupply) -> SafeSet {
    let l = rule.lhs();
    let fv = l.free_vars();
    let args = l.body_args().expect("lhs is basic-typed");
    let mut safe: BTreeSet<Term> = args.iter().cloned().collect();
    let mut from_basic = BTreeSet::new();
    for a in args {
        for u in safe_basic(a, &fv, supply) {
            if u.free_vars().is_subset(&fv) {
                from_basic.insert(u);
            }
        }
    }
    safe.extend(from_basic.iter().cloned());
    SafeSet {
        rule: rule.name().clone(),
        safe,
        from_basic,
    }
}

/// Checks every variable-headed subterm `Z(r1, …, rn)` of every rhs.
pub fn is_pfp(hrs: &Hrs) -> PfpReport {
    let mut safe_sets = Vec::new();
    let mut violations = Vec::new();
    for rule in hrs.rules() {
        let set = safe_subterms(rule);
        let fv_r = rule.rhs().free_vars();
        // opened names avoid FV(l), so opened subterms never collide with safe members
        for u in subterms_with(rule.rhs(), &mut rule_supply(rule)) {
            let Atom::Var(z) = u.top() else { continue };
            if u.is_abstraction() || !fv_r.contains(z) {
                continue;
            }
            let n = u.raw_args().len();
            if !(0..=n).any(|k| set.safe.contains(&u.prefix(k))) {
                violations.push(Violation {
                    rule: rule.name().clone(),
                    reason: format!("no prefix of {u} normalizes into safe(l); in particular {z}↓ = {} is not safe", u.prefix(0)),
                    subterm: u,
                });
            }
        }
        safe_sets.push(set);
    }
    PfpReport {
        is_pfp: violations.is_empty(),
        safe_sets,
        violations,
    }
}
