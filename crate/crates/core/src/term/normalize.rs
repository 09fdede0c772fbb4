//! Type-directed elaboration of preterms into η-long β-normal terms.
//!
//! Identifiers are η-expanded at their declared type as soon as they are
//! resolved, and every application is reduced on the spot by hereditary
//! substitution, so no β-redex or η-short subterm ever reaches a [`Term`].

use std::fmt;

use super::display::pick_name;
use super::subst::instantiate;
use super::{Atom, Binder, Signature, Term, TermError};
use crate::types::{Name, SimpleType};

/// A λ-tree that may contain β-redexes and η-short subterms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Preterm {
    /// Bound variable, free variable or symbol, resolved in that order.
    Ident(Name),
    /// `\x (y : t). body`; a binder's type may be omitted where it is known from context.
    Lam(Vec<(Name, Option<SimpleType>)>, Box<Preterm>),
    App(Box<Preterm>, Vec<Preterm>),
}

impl Preterm {
    pub fn ident(name: &str) -> Self {
        Preterm::Ident(Name::from(name))
    }

    pub fn app(head: Preterm, args: Vec<Preterm>) -> Self {
        Preterm::App(Box::new(head), args)
    }

    pub fn lam(binders: &[&str], body: Preterm) -> Self {
        Preterm::Lam(
            binders.iter().map(|b| (Name::from(*b), None)).collect(),
            Box::new(body),
        )
    }

    pub fn typed_lam(binders: Vec<(&str, SimpleType)>, body: Preterm) -> Self {
        Preterm::Lam(
            binders
                .into_iter()
                .map(|(b, t)| (Name::from(b), Some(t)))
                .collect(),
            Box::new(body),
        )
    }
}

impl fmt::Display for Preterm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Preterm::Ident(n) => write!(f, "{n}"),
            Preterm::Lam(bs, body) => {
                write!(f, "\\")?;
                for (i, (n, ty)) in bs.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    match ty {
                        Some(ty) => write!(f, "({n} : {ty})")?,
                        None => write!(f, "{n}")?,
                    }
                }
                write!(f, ". {body}")
            }
            Preterm::App(head, args) => {
                match head.as_ref() {
                    Preterm::Lam(..) => write!(f, "({head})")?,
                    _ => write!(f, "{head}")?,
                }
                write!(f, "(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// `t↓` for a preterm whose type is inferred.
pub fn normalize(preterm: &Preterm, sig: &Signature) -> Result<Term, TermError> {
    Elaborator::new(sig, None).elab(preterm, None)
}

/// `t↓` for a preterm checked against `expected`.
pub fn normalize_checked(
    preterm: &Preterm,
    sig: &Signature,
    expected: &SimpleType,
) -> Result<Term, TermError> {
    Elaborator::new(sig, None).elab(preterm, Some(expected))
}

/// Like [`normalize`], but fails once an intermediate result exceeds `max_size` nodes.
pub fn normalize_bounded(
    preterm: &Preterm,
    sig: &Signature,
    max_size: usize,
) -> Result<Term, TermError> {
    Elaborator::new(sig, Some(max_size)).elab(preterm, None)
}

struct Elaborator<'a> {
    sig: &'a Signature,
    ctx: Vec<(Name, SimpleType)>,
    max_size: Option<usize>,
}

impl<'a> Elaborator<'a> {
    fn new(sig: &'a Signature, max_size: Option<usize>) -> Self {
        Elaborator {
            sig,
            ctx: Vec::new(),
            max_size,
        }
    }

    fn resolve(&self, name: &Name) -> Result<(Atom, SimpleType), TermError> {
        if let Some(pos) = self.ctx.iter().rposition(|(n, _)| n == name) {
            let index = self.ctx.len() - 1 - pos;
            return Ok((Atom::Bound(index), self.ctx[pos].1.clone()));
        }
        if let Some(ty) = self.sig.var_type(name) {
            return Ok((Atom::Var(name.clone()), ty.clone()));
        }
        if let Some(ty) = self.sig.symbol_type(name) {
            return Ok((Atom::Sym(name.clone()), ty.clone()));
        }
        Err(TermError::Unknown(name.to_string()))
    }

    fn check(
        &self,
        p: &Preterm,
        t: Term,
        expected: Option<&SimpleType>,
    ) -> Result<Term, TermError> {
        if let Some(limit) = self.max_size {
            if t.size() > limit {
                return Err(TermError::Limit {
                    what: "size",
                    limit,
                });
            }
        }
        match expected {
            Some(ty) if ty != t.ty() => Err(TermError::Mismatch {
                subterm: p.to_string(),
                expected: ty.clone(),
                actual: t.ty().clone(),
            }),
            _ => Ok(t),
        }
    }

    fn elab(&mut self, p: &Preterm, expected: Option<&SimpleType>) -> Result<Term, TermError> {
        match p {
            Preterm::Ident(name) => {
                let (atom, ty) = self.resolve(name)?;
                self.check(p, Term::eta(atom, &ty), expected)
            }
            Preterm::Lam(binders, body) => self.elab_lam(p, binders, body, expected),
            Preterm::App(head, args) if args.is_empty() => self.elab(head, expected),
            Preterm::App(head, args) => {
                let (fun, values) = match head.as_ref() {
                    Preterm::Lam(bs, body) if bs.iter().any(|(_, ty)| ty.is_none()) => {
                        // infer the missing binder types from the arguments
                        let values = args
                            .iter()
                            .map(|a| self.elab(a, None))
                            .collect::<Result<Vec<_>, _>>()?;
                        let annotated: Vec<(Name, Option<SimpleType>)> = bs
                            .iter()
                            .enumerate()
                            .map(|(i, (n, ty))| {
                                let ty =
                                    ty.clone().or_else(|| values.get(i).map(|v| v.ty().clone()));
                                (n.clone(), ty)
                            })
                            .collect();
                        let fun = self.elab(&Preterm::Lam(annotated, body.clone()), None)?;
                        (fun, values)
                    }
                    _ => {
                        let fun = self.elab(head, None)?;
                        let domains: Vec<SimpleType> =
                            fun.ty().decompose().0.into_iter().cloned().collect();
                        if args.len() > domains.len() {
                            return Err(TermError::TooManyArguments {
                                subterm: p.to_string(),
                                ty: fun.ty().clone(),
                            });
                        }
                        let values = args
                            .iter()
                            .zip(&domains)
                            .map(|(a, d)| self.elab(a, Some(d)))
                            .collect::<Result<Vec<_>, _>>()?;
                        (fun, values)
                    }
                };
                let k = values.len();
                if k > fun.binders.len() {
                    return Err(TermError::TooManyArguments {
                        subterm: p.to_string(),
                        ty: fun.ty().clone(),
                    });
                }
                for (v, b) in values.iter().zip(&fun.binders) {
                    if v.ty() != &b.ty {
                        return Err(TermError::Mismatch {
                            subterm: p.to_string(),
                            expected: b.ty.clone(),
                            actual: v.ty().clone(),
                        });
                    }
                }
                let rest = Term::from_parts(
                    fun.binders[k..].to_vec(),
                    fun.head.clone(),
                    fun.args.clone(),
                    fun.base().clone(),
                );
                let reduced = instantiate(&rest, &values);
                self.check(p, reduced, expected)
            }
        }
    }

    fn elab_lam(
        &mut self,
        p: &Preterm,
        binders: &[(Name, Option<SimpleType>)],
        body: &Preterm,
        expected: Option<&SimpleType>,
    ) -> Result<Term, TermError> {
        let mut remaining = expected.cloned();
        let mut out = Vec::with_capacity(binders.len());
        for (name, annotation) in binders {
            let (domain, codomain) = match (annotation, remaining.as_ref()) {
                (_, Some(ty @ SimpleType::Basic(_))) => {
                    return Err(TermError::AbstractionAtBasicType(ty.clone()));
                }
                (Some(a), Some(SimpleType::Arrow(d, c))) => {
                    if a != d.as_ref() {
                        return Err(TermError::Mismatch {
                            subterm: p.to_string(),
                            expected: d.as_ref().clone(),
                            actual: a.clone(),
                        });
                    }
                    (a.clone(), Some(c.as_ref().clone()))
                }
                (Some(a), None) => (a.clone(), None),
                (None, Some(SimpleType::Arrow(d, c))) => {
                    (d.as_ref().clone(), Some(c.as_ref().clone()))
                }
                (None, None) => return Err(TermError::UnannotatedBinder(name.to_string())),
            };
            self.ctx.push((name.clone(), domain.clone()));
            out.push(Binder {
                name: name.clone(),
                ty: domain,
            });
            remaining = codomain;
        }
        let result = self.elab(body, remaining.as_ref());
        self.ctx.truncate(self.ctx.len() - binders.len());
        let body = result?;
        let mut all = out;
        all.extend(body.binders.iter().cloned());
        let t = Term::from_parts(
            all,
            body.head.clone(),
            body.args.clone(),
            body.base().clone(),
        );
        self.check(p, t, expected)
    }
}

impl Term {
    /// Converts back to a preterm, using the same binder names as the printer.
    pub fn to_preterm(&self) -> Preterm {
        let avoid = self.atom_names();
        let mut scope = Vec::new();
        to_preterm(self, &avoid, &mut scope)
    }
}

fn to_preterm(
    t: &Term,
    avoid: &std::collections::BTreeSet<Name>,
    scope: &mut Vec<Name>,
) -> Preterm {
    let mut names = Vec::new();
    for b in &t.binders {
        let name = pick_name(&b.name, avoid, scope);
        scope.push(name.clone());
        names.push((name, Some(b.ty.clone())));
    }
    let head = match &t.head {
        Atom::Sym(n) | Atom::Var(n) => Preterm::Ident(n.clone()),
        Atom::Bound(i) => Preterm::Ident(scope[scope.len() - 1 - i].clone()),
    };
    let body = if t.args.is_empty() {
        head
    } else {
        let args = t.args.iter().map(|a| to_preterm(a, avoid, scope)).collect();
        Preterm::App(Box::new(head), args)
    };
    scope.truncate(scope.len() - names.len());
    if names.is_empty() {
        body
    } else {
        Preterm::Lam(names, Box::new(body))
    }
}
