//! Simple types: basic types closed under the arrow constructor.

use std::fmt;
use std::sync::Arc;

/// Shared identifier used for symbols, variables and basic types.
pub type Name = Arc<str>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SimpleType {
    Basic(Name),
    Arrow(Arc<SimpleType>, Arc<SimpleType>),
}

impl SimpleType {
    pub fn basic(name: &str) -> Self {
        SimpleType::Basic(Name::from(name))
    }

    pub fn arrow(domain: SimpleType, codomain: SimpleType) -> Self {
        SimpleType::Arrow(Arc::new(domain), Arc::new(codomain))
    }

    /// Builds `a1 -> ... -> an -> result`.
    pub fn curried<I>(domains: I, result: SimpleType) -> Self
    where
        I: IntoIterator<Item = SimpleType>,
        I::IntoIter: DoubleEndedIterator,
    {
        domains
            .into_iter()
            .rev()
            .fold(result, |acc, d| SimpleType::arrow(d, acc))
    }

    pub fn is_basic(&self) -> bool {
        matches!(self, SimpleType::Basic(_))
    }

    /// Number of arguments a term of this type takes before reaching a basic type.
    pub fn arity(&self) -> usize {
        match self {
            SimpleType::Basic(_) => 0,
            SimpleType::Arrow(_, c) => 1 + c.arity(),
        }
    }

    /// Splits `a1 -> ... -> an -> b` into `([a1, ..., an], b)`.
    pub fn decompose(&self) -> (Vec<&SimpleType>, &Name) {
        let mut domains = Vec::new();
        let mut cur = self;
        loop {
            match cur {
                SimpleType::Basic(b) => return (domains, b),
                SimpleType::Arrow(d, c) => {
                    domains.push(d.as_ref());
                    cur = c.as_ref();
                }
            }
        }
    }

    /// The basic type at the end of the arrow chain.
    pub fn result(&self) -> &Name {
        self.decompose().1
    }

    /// Drops the first `n` domains. Returns `None` if the type has fewer arguments.
    pub fn drop_domains(&self, n: usize) -> Option<&SimpleType> {
        let mut cur = self;
        for _ in 0..n {
            match cur {
                SimpleType::Basic(_) => return None,
                SimpleType::Arrow(_, c) => cur = c.as_ref(),
            }
        }
        Some(cur)
    }

    /// Every basic type mentioned in this type.
    pub fn basics(&self, out: &mut Vec<Name>) {
        match self {
            SimpleType::Basic(b) => {
                if !out.contains(b) {
                    out.push(b.clone());
                }
            }
            SimpleType::Arrow(d, c) => {
                d.basics(out);
                c.basics(out);
            }
        }
    }
}

impl fmt::Display for SimpleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimpleType::Basic(b) => write!(f, "{b}"),
            SimpleType::Arrow(d, c) => {
                if d.is_basic() {
                    write!(f, "{d} -> {c}")
                } else {
                    write!(f, "({d}) -> {c}")
                }
            }
        }
    }
}
