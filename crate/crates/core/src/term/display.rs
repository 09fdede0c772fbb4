use std::collections::BTreeSet;
use std::fmt::{self, Write};

use super::{Atom, Term};
use crate::types::Name;

/// Prints a term in the surface syntax `\x y. f(x, y)`.
///
/// Binder names are chosen so that the output reparses to the same term:
/// a binder never reuses the name of a symbol or free variable of the term,
/// nor the name of a binder still in scope.
pub struct TermDisplay<'a> {
    term: &'a Term,
}

impl<'a> TermDisplay<'a> {
    pub(crate) fn new(term: &'a Term) -> Self {
        TermDisplay { term }
    }
}

impl fmt::Display for TermDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let avoid = self.term.atom_names();
        let mut out = String::new();
        let mut scope = Vec::new();
        write_term(self.term, &avoid, &mut scope, &mut out)?;
        f.write_str(&out)
    }
}

pub(super) fn pick_name(hint: &Name, avoid: &BTreeSet<Name>, scope: &[Name]) -> Name {
    let clash = |n: &str| avoid.contains(n) || scope.iter().any(|s| s.as_ref() == n);
    if !clash(hint) {
        return hint.clone();
    }
    let base = hint.trim_end_matches(|c: char| c.is_ascii_digit());
    let base = if base.is_empty() { "x" } else { base };
    (1..)
        .map(|i| format!("{base}{i}"))
        .find(|n| !clash(n))
        .map(|n| Name::from(n.as_str()))
        .expect("unbounded name supply")
}

fn write_term(
    t: &Term,
    avoid: &BTreeSet<Name>,
    scope: &mut Vec<Name>,
    out: &mut String,
) -> fmt::Result {
    let pushed = t.binders.len();
    if pushed > 0 {
        out.push('\\');
        for (i, b) in t.binders.iter().enumerate() {
            let name = pick_name(&b.name, avoid, scope);
            if i > 0 {
                out.push(' ');
            }
            out.push_str(&name);
            scope.push(name);
        }
        out.push_str(". ");
    }
    match &t.head {
        Atom::Sym(n) | Atom::Var(n) => out.push_str(n),
        Atom::Bound(i) => {
            if *i < scope.len() {
                out.push_str(&scope[scope.len() - 1 - i]);
            } else {
                write!(out, "#{}", i - scope.len())?;
            }
        }
    }
    if !t.args.is_empty() {
        out.push('(');
        for (i, a) in t.args.iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            write_term(a, avoid, scope, out)?;
        }
        out.push(')');
    }
    scope.truncate(scope.len() - pushed);
    Ok(())
}
