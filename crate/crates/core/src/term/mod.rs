//! Simply-typed λ-terms kept in η-long β-normal form.
//!
//! A [`Term`] is always `λx1 … xm. a(t1, …, tn)` where `a(t1, …, tn)` has a
//! basic type and `n` is the full arity of `a`. Bound variables are de Bruijn
//! indices, so derived equality *is* α-equality; binder names are only kept as
//! printing hints. A bound variable `Bound(i)` counts binders outward from the
//! innermost one, treating each binder of a multi-binder node separately.
//!
//! Operations that look under a binder (subterms, positions, candidate terms)
//! replace the stripped binder by a fresh free variable, which mirrors the
//! convention that all bound variables are distinct from each other and from
//! the free variables.

mod display;
mod normalize;
mod position;
mod subst;

pub use display::TermDisplay;
pub use normalize::{normalize, normalize_bounded, normalize_checked, Preterm};
pub use position::Position;
pub use subst::{apply_subst, Substitution};

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::hash::{Hash, Hasher};

use thiserror::Error;

use crate::types::{Name, SimpleType};

/// A λ-binder. Equality and ordering ignore the name.
#[derive(Clone, Debug)]
pub struct Binder {
    pub name: Name,
    pub ty: SimpleType,
}

impl PartialEq for Binder {
    fn eq(&self, other: &Self) -> bool {
        self.ty == other.ty
    }
}

impl Eq for Binder {}

impl Hash for Binder {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.ty.hash(state);
    }
}

impl PartialOrd for Binder {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Binder {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.ty.cmp(&other.ty)
    }
}

/// Head of an application node.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    /// Function symbol (marked symbols are spelled `f#`).
    Sym(Name),
    /// Free variable.
    Var(Name),
    /// de Bruijn index of an enclosing binder.
    Bound(usize),
}

impl Atom {
    pub fn sym(name: &str) -> Self {
        Atom::Sym(Name::from(name))
    }

    pub fn var(name: &str) -> Self {
        Atom::Var(Name::from(name))
    }

    pub fn name(&self) -> Option<&Name> {
        match self {
            Atom::Sym(n) | Atom::Var(n) => Some(n),
            Atom::Bound(_) => None,
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Sym(n) | Atom::Var(n) => write!(f, "{n}"),
            Atom::Bound(i) => write!(f, "#{i}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Term {
    binders: Vec<Binder>,
    head: Atom,
    args: Vec<Term>,
    ty: SimpleType,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("type error in `{subterm}`: expected {expected}, found {actual}")]
    Mismatch {
        subterm: String,
        expected: SimpleType,
        actual: SimpleType,
    },
    #[error("`{subterm}` of type {ty} is applied to too many arguments")]
    TooManyArguments { subterm: String, ty: SimpleType },
    #[error("unknown identifier `{0}`")]
    Unknown(String),
    #[error("cannot infer the type of binder `{0}`; annotate it as `\\({0} : type)`")]
    UnannotatedBinder(String),
    #[error("a λ-abstraction cannot have basic type {0}")]
    AbstractionAtBasicType(SimpleType),
    #[error("invalid position {position}: index {index} is out of range")]
    InvalidPosition { position: Position, index: usize },
    #[error("substitution maps {var} : {expected} to a term of type {actual}")]
    SubstitutionType {
        var: Name,
        expected: SimpleType,
        actual: SimpleType,
    },
    #[error("substitution range for {0} is not closed")]
    OpenSubstitution(Name),
    #[error("term exceeds the configured {what} limit of {limit}")]
    Limit { what: &'static str, limit: usize },
}

/// Typing context: declared basic types, function symbols and free variables.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    pub basics: BTreeSet<Name>,
    pub symbols: BTreeMap<Name, SimpleType>,
    pub vars: BTreeMap<Name, SimpleType>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_basic(mut self, name: &str) -> Self {
        self.basics.insert(Name::from(name));
        self
    }

    pub fn with_symbol(mut self, name: &str, ty: SimpleType) -> Self {
        self.symbols.insert(Name::from(name), ty);
        self
    }

    pub fn with_var(mut self, name: &str, ty: SimpleType) -> Self {
        self.vars.insert(Name::from(name), ty);
        self
    }

    pub fn symbol_type(&self, name: &str) -> Option<&SimpleType> {
        self.symbols.get(name)
    }

    pub fn var_type(&self, name: &str) -> Option<&SimpleType> {
        self.vars.get(name)
    }
}

/// Supplies variable names that are fresh with respect to a growing set.
#[derive(Clone, Debug, Default)]
pub struct NameSupply {
    used: HashSet<Name>,
}

impl NameSupply {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn avoiding<'a, I: IntoIterator<Item = &'a Name>>(names: I) -> Self {
        NameSupply {
            used: names.into_iter().cloned().collect(),
        }
    }

    pub fn avoid(&mut self, name: &Name) {
        self.used.insert(name.clone());
    }

    pub fn avoid_all<'a, I: IntoIterator<Item = &'a Name>>(&mut self, names: I) {
        for n in names {
            self.used.insert(n.clone());
        }
    }

    pub fn is_used(&self, name: &str) -> bool {
        self.used.contains(name)
    }

    /// Returns `hint` if unused, otherwise `hint1`, `hint2`, ...
    pub fn fresh(&mut self, hint: &str) -> Name {
        let base = hint.trim_end_matches(|c: char| c.is_ascii_digit());
        let base = if base.is_empty() { "x" } else { base };
        let mut candidate = Name::from(hint);
        let mut i = 1usize;
        while self.used.contains(&candidate) {
            candidate = Name::from(format!("{base}{i}").as_str());
            i += 1;
        }
        self.used.insert(candidate.clone());
        candidate
    }
}

const ETA_HINTS: [&str; 4] = ["x", "y", "z", "w"];

pub(crate) fn eta_hint(i: usize) -> Name {
    if i < ETA_HINTS.len() {
        Name::from(ETA_HINTS[i])
    } else {
        Name::from(format!("x{}", i - ETA_HINTS.len() + 1).as_str())
    }
}

impl Term {
    /// Assembles a node; the caller guarantees the pieces are well-typed.
    pub(crate) fn from_parts(
        binders: Vec<Binder>,
        head: Atom,
        args: Vec<Term>,
        base: Name,
    ) -> Term {
        let ty = SimpleType::curried(
            binders.iter().map(|b| b.ty.clone()).collect::<Vec<_>>(),
            SimpleType::Basic(base),
        );
        Term {
            binders,
            head,
            args,
            ty,
        }
    }

    /// The η-long form of an atom of type `ty`, e.g. `F ↦ λx y. F(x, y)`.
    ///
    /// A `Bound` atom is interpreted in the context surrounding the result.
    pub fn eta(atom: Atom, ty: &SimpleType) -> Term {
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
        let head = match atom {
            Atom::Bound(i) => Atom::Bound(i + n),
            other => other,
        };
        let args = domains
            .iter()
            .enumerate()
            .map(|(i, d)| Term::eta(Atom::Bound(n - 1 - i), d))
            .collect();
        Term::from_parts(binders, head, args, base.clone())
    }

    /// A basic-typed application node `head(args)`; no checking is done.
    pub fn apply(head: Atom, args: Vec<Term>, base: &str) -> Term {
        Term::from_parts(Vec::new(), head, args, Name::from(base))
    }

    pub fn binders(&self) -> &[Binder] {
        &self.binders
    }

    /// Top symbol `a` of `λx̄. a(t̄)`.
    pub fn top(&self) -> &Atom {
        &self.head
    }

    /// The raw arguments; they live under this node's binders.
    pub fn raw_args(&self) -> &[Term] {
        &self.args
    }

    pub fn ty(&self) -> &SimpleType {
        &self.ty
    }

    /// Basic type of the body.
    pub fn base(&self) -> &Name {
        self.ty.result()
    }

    pub fn is_abstraction(&self) -> bool {
        !self.binders.is_empty()
    }

    /// Type of the head atom as it is used in this node.
    pub fn head_type(&self) -> SimpleType {
        SimpleType::curried(
            self.args.iter().map(|a| a.ty.clone()).collect::<Vec<_>>(),
            SimpleType::Basic(self.base().clone()),
        )
    }

    /// Number of nodes, counting each binder as one node.
    pub fn size(&self) -> usize {
        self.binders.len() + 1 + self.args.iter().map(Term::size).sum::<usize>()
    }

    /// Nesting depth in positions.
    pub fn depth(&self) -> usize {
        self.binders.len() + self.args.iter().map(|a| 1 + a.depth()).max().unwrap_or(0)
    }

    /// `true` if no de Bruijn index escapes the term.
    pub fn is_closed(&self) -> bool {
        self.max_loose(0).is_none()
    }

    fn max_loose(&self, depth: usize) -> Option<usize> {
        let d = depth + self.binders.len();
        let mut best = match self.head {
            Atom::Bound(i) if i >= d => Some(i - d),
            _ => None,
        };
        for a in &self.args {
            if let Some(m) = a.max_loose(d) {
                best = Some(best.map_or(m, |b: usize| b.max(m)));
            }
        }
        best
    }

    pub fn free_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.visit_atoms(&mut |atom, _| {
            if let Atom::Var(v) = atom {
                out.insert(v.clone());
            }
        });
        out
    }

    pub fn symbols(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.visit_atoms(&mut |atom, _| {
            if let Atom::Sym(s) = atom {
                out.insert(s.clone());
            }
        });
        out
    }

    /// Types of the free variables, read off their occurrences.
    pub fn var_types(&self) -> BTreeMap<Name, SimpleType> {
        let mut out = BTreeMap::new();
        self.visit_nodes(&mut |node| {
            if let Atom::Var(v) = &node.head {
                out.entry(v.clone()).or_insert_with(|| node.head_type());
            }
        });
        out
    }

    /// Names of every symbol and free variable occurring in the term.
    pub fn atom_names(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.visit_atoms(&mut |atom, _| {
            if let Some(n) = atom.name() {
                out.insert(n.clone());
            }
        });
        out
    }

    pub(crate) fn visit_atoms(&self, f: &mut impl FnMut(&Atom, usize)) {
        self.visit_atoms_at(0, f)
    }

    fn visit_atoms_at(&self, depth: usize, f: &mut impl FnMut(&Atom, usize)) {
        let d = depth + self.binders.len();
        f(&self.head, d);
        for a in &self.args {
            a.visit_atoms_at(d, f);
        }
    }

    pub(crate) fn visit_nodes(&self, f: &mut impl FnMut(&Term)) {
        f(self);
        for a in &self.args {
            a.visit_nodes(f);
        }
    }

    /// No λ anywhere; equivalently, every variable is basic-typed and every
    /// symbol is used at basic arguments only.
    pub fn is_lambda_free(&self) -> bool {
        self.binders.is_empty() && self.args.iter().all(Term::is_lambda_free)
    }

    /// Strips the outermost binder, replacing it with the free variable `var`.
    pub fn open_outer(&self, var: Name) -> Term {
        assert!(!self.binders.is_empty(), "open_outer on a non-abstraction");
        let b = &self.binders[0];
        let rest = Term::from_parts(
            self.binders[1..].to_vec(),
            self.head.clone(),
            self.args.clone(),
            self.base().clone(),
        );
        let value = Term::eta(Atom::Var(var), &b.ty);
        subst::instantiate(&rest, &[value])
    }

    /// Opens every binder with names from `supply`, returning the names and the body.
    pub fn open_all(&self, supply: &mut NameSupply) -> (Vec<Name>, Term) {
        let mut names = Vec::with_capacity(self.binders.len());
        let mut cur = self.clone();
        while !cur.binders.is_empty() {
            let name = supply.fresh(&cur.binders[0].name);
            cur = cur.open_outer(name.clone());
            names.push(name);
        }
        (names, cur)
    }

    /// Binds the free variable `var : ty` as a new outermost binder.
    pub fn close_over(&self, var: &Name, ty: &SimpleType, hint: Name) -> Term {
        let mut inner = subst::abstract_var(self, var, 0);
        let mut binders = Vec::with_capacity(self.binders.len() + 1);
        binders.push(Binder {
            name: hint,
            ty: ty.clone(),
        });
        binders.append(&mut inner.binders);
        Term::from_parts(binders, inner.head, inner.args, self.base().clone())
    }

    /// Arguments of the body with the binders opened against the term's free variables.
    pub fn args(&self) -> Vec<Term> {
        let mut supply = NameSupply::avoiding(self.atom_names().iter());
        let (_, body) = self.open_all(&mut supply);
        body.args
    }

    /// Arguments of a binder-free node; these are closed whenever the node is.
    pub fn body_args(&self) -> Option<&[Term]> {
        if self.binders.is_empty() {
            Some(&self.args)
        } else {
            None
        }
    }

    /// If the term is the η-expansion of `Bound(k)`, returns `k`.
    pub fn eta_bound_index(&self) -> Option<usize> {
        let m = self.binders.len();
        let Atom::Bound(j) = self.head else {
            return None;
        };
        if j < m || self.args.len() != m {
            return None;
        }
        for (i, a) in self.args.iter().enumerate() {
            if a.eta_bound_index() != Some(m - 1 - i) {
                return None;
            }
        }
        Some(j - m)
    }

    /// Replaces argument `i` (0-based) of a node; `arg` lives under the node's binders.
    pub(crate) fn with_arg(&self, i: usize, arg: Term) -> Term {
        let mut t = self.clone();
        t.args[i] = arg;
        t
    }

    /// Renames the head symbol of a binder-free node.
    pub fn with_head(&self, head: Atom) -> Term {
        Term {
            head,
            ..self.clone()
        }
    }

    /// The partial application `a(t1, …, tk)↓` of a binder-free node, η-expanded
    /// over the remaining arguments. Arguments must be closed.
    pub fn prefix(&self, k: usize) -> Term {
        assert!(self.binders.is_empty() && k <= self.args.len());
        let rest = &self.args[k..];
        let n = rest.len();
        let binders: Vec<Binder> = rest
            .iter()
            .enumerate()
            .map(|(i, a)| Binder {
                name: eta_hint(i),
                ty: a.ty.clone(),
            })
            .collect();
        let mut args: Vec<Term> = self.args[..k].iter().map(|a| subst::shift(a, n)).collect();
        for (i, a) in rest.iter().enumerate() {
            args.push(Term::eta(Atom::Bound(n - 1 - i), &a.ty));
        }
        let head = match &self.head {
            Atom::Bound(i) => Atom::Bound(i + n),
            other => other.clone(),
        };
        Term::from_parts(binders, head, args, self.base().clone())
    }

    pub fn display(&self) -> TermDisplay<'_> {
        TermDisplay::new(self)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.display().fmt(f)
    }
}

/// `α`-equality. Terms are stored nameless, so this is structural equality.
pub fn alpha_eq(t: &Term, u: &Term) -> bool {
    t == u
}

/// `Sub(t)`: every subterm, opening binders with names fresh for `t`.
pub fn subterms(t: &Term) -> BTreeSet<Term> {
    let mut supply = NameSupply::avoiding(t.atom_names().iter());
    subterms_with(t, &mut supply)
}

/// `Sub(t)` drawing bound-variable names from a caller-provided supply.
pub fn subterms_with(t: &Term, supply: &mut NameSupply) -> BTreeSet<Term> {
    let mut out = BTreeSet::new();
    collect_subterms(t, supply, &mut out);
    out
}

fn collect_subterms(t: &Term, supply: &mut NameSupply, out: &mut BTreeSet<Term>) {
    out.insert(t.clone());
    if let Some(b) = t.binders.first() {
        let name = supply.fresh(&b.name);
        collect_subterms(&t.open_outer(name), supply, out);
    } else {
        for a in &t.args {
            collect_subterms(a, supply, out);
        }
    }
}

/// `t ≥sub s`.
pub fn is_subterm(t: &Term, s: &Term, supply: &mut NameSupply) -> bool {
    subterms_with(t, supply).contains(s)
}

/// Every position of `t`, in lexicographic order.
pub fn positions(t: &Term) -> Vec<Position> {
    let mut out = Vec::new();
    collect_positions(t, &mut Vec::new(), &mut out);
    out.sort();
    out
}

fn collect_positions(t: &Term, prefix: &mut Vec<usize>, out: &mut Vec<Position>) {
    let base_len = prefix.len();
    out.push(Position::from(prefix.clone()));
    // binders contribute the chain 1, 11, ... before the arguments
    for _ in 0..t.binders.len() {
        prefix.push(1);
        out.push(Position::from(prefix.clone()));
    }
    for (i, a) in t.args.iter().enumerate() {
        prefix.push(i + 1);
        collect_positions(a, prefix, out);
        prefix.pop();
    }
    prefix.truncate(base_len);
}

/// `t|_p`, opening binders on the way with names fresh for `t`.
pub fn subterm_at(t: &Term, p: &Position) -> Result<Term, TermError> {
    let mut supply = NameSupply::avoiding(t.atom_names().iter());
    subterm_at_with(t, p, &mut supply)
}

pub fn subterm_at_with(t: &Term, p: &Position, supply: &mut NameSupply) -> Result<Term, TermError> {
    let mut cur = t.clone();
    for &i in p.as_slice() {
        if let Some(b) = cur.binders.first() {
            if i != 1 {
                return Err(TermError::InvalidPosition {
                    position: p.clone(),
                    index: i,
                });
            }
            let name = supply.fresh(&b.name);
            cur = cur.open_outer(name);
        } else if i >= 1 && i <= cur.args.len() {
            cur = cur.args[i - 1].clone();
        } else {
            return Err(TermError::InvalidPosition {
                position: p.clone(),
                index: i,
            });
        }
    }
    Ok(cur)
}

pub fn free_vars(t: &Term) -> BTreeSet<Name> {
    t.free_vars()
}
