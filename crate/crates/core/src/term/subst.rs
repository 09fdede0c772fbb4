//! de Bruijn bookkeeping and hereditary substitution.
//!
//! Substituting a canonical term for a variable that sits in head position
//! immediately β-reduces the created redex, recursively. Types strictly shrink
//! on each such step, so the result is again η-long β-normal.

use std::collections::BTreeMap;
use std::fmt;

use super::{Atom, Term, TermError};
use crate::types::{Name, SimpleType};

/// Adds `amount` to every index that escapes `t`.
pub(crate) fn shift(t: &Term, amount: usize) -> Term {
    if amount == 0 {
        return t.clone();
    }
    shift_from(t, amount, 0)
}

fn shift_from(t: &Term, amount: usize, depth: usize) -> Term {
    let d = depth + t.binders.len();
    let head = match t.head {
        Atom::Bound(i) if i >= d => Atom::Bound(i + amount),
        ref other => other.clone(),
    };
    Term {
        binders: t.binders.clone(),
        head,
        args: t.args.iter().map(|a| shift_from(a, amount, d)).collect(),
        ty: t.ty.clone(),
    }
}

/// Replaces the `n` innermost variables of the context around `t` by `values`;
/// the last value replaces index 0. Values live in the context without those
/// variables.
pub(crate) fn instantiate(t: &Term, values: &[Term]) -> Term {
    subst_node(t, 0, values)
}

fn subst_node(t: &Term, depth: usize, values: &[Term]) -> Term {
    let n = values.len();
    let d = depth + t.binders.len();
    let args: Vec<Term> = t.args.iter().map(|a| subst_node(a, d, values)).collect();
    match t.head {
        Atom::Bound(i) if i >= d && i - d < n => {
            let value = shift(&values[n - 1 - (i - d)], d);
            let reduced = apply_value(&value, &args);
            Term {
                binders: t.binders.clone(),
                head: reduced.head,
                args: reduced.args,
                ty: t.ty.clone(),
            }
        }
        Atom::Bound(i) if i >= d + n => Term {
            binders: t.binders.clone(),
            head: Atom::Bound(i - n),
            args,
            ty: t.ty.clone(),
        },
        _ => Term {
            binders: t.binders.clone(),
            head: t.head.clone(),
            args,
            ty: t.ty.clone(),
        },
    }
}

/// `(λz1 … zm. body)(a1, …, am)↓`.
fn apply_value(value: &Term, args: &[Term]) -> Term {
    debug_assert_eq!(value.binders.len(), args.len());
    let body = Term {
        binders: Vec::new(),
        head: value.head.clone(),
        args: value.args.clone(),
        ty: SimpleType::Basic(value.base().clone()),
    };
    subst_node(&body, 0, args)
}

/// Turns free variable `var` into index `depth` (counted from `t`'s outside).
pub(crate) fn abstract_var(t: &Term, var: &Name, depth: usize) -> Term {
    let d = depth + t.binders.len();
    let head = match &t.head {
        Atom::Var(v) if v == var => Atom::Bound(d),
        Atom::Bound(i) if *i >= d => Atom::Bound(i + 1),
        other => other.clone(),
    };
    Term {
        binders: t.binders.clone(),
        head,
        args: t.args.iter().map(|a| abstract_var(a, var, d)).collect(),
        ty: t.ty.clone(),
    }
}

/// A type-preserving finite map from free variables to closed terms.
///
/// Identity bindings `X ↦ X↓` are dropped, so the keys are exactly `Dom(θ)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Substitution {
    map: BTreeMap<Name, Term>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, var: Name, value: Term) -> Result<(), TermError> {
        if !value.is_closed() {
            return Err(TermError::OpenSubstitution(var));
        }
        if value == Term::eta(Atom::Var(var.clone()), value.ty()) {
            self.map.remove(&var);
        } else {
            self.map.insert(var, value);
        }
        Ok(())
    }

    pub fn with(mut self, var: &str, value: Term) -> Result<Self, TermError> {
        self.insert(Name::from(var), value)?;
        Ok(self)
    }

    pub fn get(&self, var: &str) -> Option<&Term> {
        self.map.get(var)
    }

    pub fn domain(&self) -> impl Iterator<Item = &Name> {
        self.map.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Name, &Term)> {
        self.map.iter()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// `tθ↓`. Fails if some occurrence's type differs from the bound term's.
    pub fn apply(&self, t: &Term) -> Result<Term, TermError> {
        if self.is_empty() {
            return Ok(t.clone());
        }
        self.apply_at(t, 0)
    }

    fn apply_at(&self, t: &Term, depth: usize) -> Result<Term, TermError> {
        let d = depth + t.binders.len();
        let args = t
            .args
            .iter()
            .map(|a| self.apply_at(a, d))
            .collect::<Result<Vec<_>, _>>()?;
        if let Atom::Var(v) = &t.head {
            if let Some(value) = self.map.get(v) {
                let expected = t.head_type();
                if value.ty() != &expected {
                    return Err(TermError::SubstitutionType {
                        var: v.clone(),
                        expected,
                        actual: value.ty().clone(),
                    });
                }
                let reduced = apply_value(&shift(value, d), &args);
                return Ok(Term {
                    binders: t.binders.clone(),
                    head: reduced.head,
                    args: reduced.args,
                    ty: t.ty.clone(),
                });
            }
        }
        Ok(Term {
            binders: t.binders.clone(),
            head: t.head.clone(),
            args,
            ty: t.ty.clone(),
        })
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (k, v)) in self.map.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{k} := {v}")?;
        }
        write!(f, "}}")
    }
}

impl FromIterator<(Name, Term)> for Substitution {
    /// Panics on open terms; use [`Substitution::insert`] for fallible construction.
    fn from_iter<I: IntoIterator<Item = (Name, Term)>>(iter: I) -> Self {
        let mut s = Substitution::new();
        for (k, v) in iter {
            s.insert(k, v).expect("closed substitution range");
        }
        s
    }
}

/// `tθ↓`.
pub fn apply_subst(t: &Term, theta: &Substitution) -> Result<Term, TermError> {
    theta.apply(t)
}
