use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use super::{Expr, Symbol};
use crate::parse::render;

/// A polynomial generator of the canonical form: a symbol or an opaque kernel.
///
/// Kernel arguments are stored in canonical form, so two atoms are equal exactly when
/// their display strings (plus a kind tag for symbols) agree.
#[derive(Clone)]
pub struct Atom(Arc<AtomData>);

struct AtomData {
    kind: AtomKind,
    rank: u8,
    key: String,
    display: String,
}

#[derive(Clone, Debug)]
pub enum AtomKind {
    Symbol(Symbol),
    /// exp(arg); never raised to a power inside a monomial, powers fold into the argument.
    Exp(Expr),
    Log(Expr),
    /// base^exponent with a non-integer exponent.
    Pow { base: Expr, exponent: Expr },
    /// Antiderivative marker standing for the integral of its argument along t.
    Integral(Expr),
}

impl Atom {
    pub(crate) fn new(kind: AtomKind) -> Atom {
        let (rank, display) = match &kind {
            AtomKind::Symbol(s) => (0, s.to_string()),
            AtomKind::Integral(u) => (1, format!("Int({})", render(u))),
            AtomKind::Log(u) => (2, format!("log({})", render(u))),
            AtomKind::Pow { base, exponent } => (3, render_pow(base, exponent)),
            AtomKind::Exp(u) => (4, format!("exp({})", render(u))),
        };
        let key = match &kind {
            AtomKind::Symbol(s) => s.sort_key(),
            _ => display.clone(),
        };
        Atom(Arc::new(AtomData {
            kind,
            rank,
            key,
            display,
        }))
    }

    pub fn symbol(s: Symbol) -> Atom {
        Atom::new(AtomKind::Symbol(s))
    }

    pub fn kind(&self) -> &AtomKind {
        &self.0.kind
    }

    pub fn as_symbol(&self) -> Option<&Symbol> {
        match &self.0.kind {
            AtomKind::Symbol(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_symbol(&self) -> bool {
        matches!(self.0.kind, AtomKind::Symbol(_))
    }

    /// Exp and Pow atoms are invertible inside monomials: 1/exp(u) = exp(-u).
    pub(crate) fn is_unit(&self) -> bool {
        matches!(self.0.kind, AtomKind::Exp(_) | AtomKind::Pow { .. })
    }

    pub fn is_kernel(&self) -> bool {
        !self.is_symbol()
    }

    /// Arguments of a kernel atom (empty for symbols).
    pub fn args(&self) -> Vec<&Expr> {
        match &self.0.kind {
            AtomKind::Symbol(_) => vec![],
            AtomKind::Exp(u) | AtomKind::Log(u) | AtomKind::Integral(u) => vec![u],
            AtomKind::Pow { base, exponent } => vec![base, exponent],
        }
    }

    pub(crate) fn display(&self) -> &str {
        &self.0.display
    }
}

fn render_pow(base: &Expr, exponent: &Expr) -> String {
    let b = if base.as_symbol().is_some() {
        render(base)
    } else {
        format!("({})", render(base))
    };
    let e = match exponent.as_symbol() {
        Some(_) => render(exponent),
        None => format!("({})", render(exponent)),
    };
    format!("{}^{}", b, e)
}

impl PartialEq for Atom {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.rank == other.0.rank && self.0.key == other.0.key)
    }
}

impl Eq for Atom {}

impl Hash for Atom {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.key.hash(state);
    }
}

impl Ord for Atom {
    fn cmp(&self, other: &Self) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ordering::Equal;
        }
        self.0
            .rank
            .cmp(&other.0.rank)
            .then_with(|| self.0.key.cmp(&other.0.key))
    }
}

impl PartialOrd for Atom {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.display)
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.display)
    }
}
