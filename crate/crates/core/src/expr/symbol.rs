use std::fmt;
use std::sync::Arc;

/// What a [`Symbol`] stands for in the jet space of a scalar ODE.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SymbolKind {
    /// The independent variable, conventionally `t`.
    Independent,
    /// A dependent variable such as `y` or `r2`.
    Dependent,
    /// The k-th derivative coordinate (k >= 1) of the dependent variable with the same name.
    Derivative(u32),
    /// A constant parameter such as `a` or `p`.
    Parameter,
    /// The d-th derivative (d >= 0) of an arbitrary function of the independent variable.
    Function(u32),
}

/// A named generator. Equality covers name, kind and order indices.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Symbol {
    name: Arc<str>,
    kind: SymbolKind,
}

impl Symbol {
    pub fn new(name: &str, kind: SymbolKind) -> Self {
        if let SymbolKind::Derivative(k) = kind {
            assert!(k >= 1, "derivative coordinates start at order 1");
        }
        Symbol {
            name: Arc::from(name),
            kind,
        }
    }

    pub fn independent(name: &str) -> Self {
        Self::new(name, SymbolKind::Independent)
    }

    pub fn dependent(name: &str) -> Self {
        Self::new(name, SymbolKind::Dependent)
    }

    pub fn parameter(name: &str) -> Self {
        Self::new(name, SymbolKind::Parameter)
    }

    /// `function("f", 2)` is f''(t).
    pub fn function(name: &str, order: u32) -> Self {
        Self::new(name, SymbolKind::Function(order))
    }

    /// The k-th jet coordinate of a dependent variable: the variable itself for k = 0.
    pub fn jet(name: &str, order: u32) -> Self {
        if order == 0 {
            Self::dependent(name)
        } else {
            Self::new(name, SymbolKind::Derivative(order))
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> SymbolKind {
        self.kind
    }

    /// Jet order for dependent variables and their derivatives, derivative order for
    /// arbitrary functions, `None` otherwise.
    pub fn order(&self) -> Option<u32> {
        match self.kind {
            SymbolKind::Dependent => Some(0),
            SymbolKind::Derivative(k) | SymbolKind::Function(k) => Some(k),
            _ => None,
        }
    }

    pub fn is_jet(&self) -> bool {
        matches!(self.kind, SymbolKind::Dependent | SymbolKind::Derivative(_))
    }

    pub fn is_derivative(&self) -> bool {
        matches!(self.kind, SymbolKind::Derivative(_))
    }

    pub fn is_function(&self) -> bool {
        matches!(self.kind, SymbolKind::Function(_))
    }

    pub fn is_parameter(&self) -> bool {
        self.kind == SymbolKind::Parameter
    }

    /// The next jet coordinate (y -> y', y' -> y'') or next function derivative.
    pub fn raised(&self) -> Option<Symbol> {
        match self.kind {
            SymbolKind::Dependent => Some(Symbol::jet(&self.name, 1)),
            SymbolKind::Derivative(k) => Some(Symbol::jet(&self.name, k + 1)),
            SymbolKind::Function(d) => Some(Symbol::function(&self.name, d + 1)),
            _ => None,
        }
    }

    fn tag(&self) -> char {
        match self.kind {
            SymbolKind::Independent => 'i',
            SymbolKind::Dependent | SymbolKind::Derivative(_) => 'd',
            SymbolKind::Parameter => 'p',
            SymbolKind::Function(_) => 'f',
        }
    }

    /// Sort key used by the monomial ordering: rendered name first, kind as tie-breaker.
    pub(crate) fn sort_key(&self) -> String {
        format!("{}\u{1}{}", self, self.tag())
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            SymbolKind::Independent | SymbolKind::Dependent | SymbolKind::Parameter => {
                f.write_str(&self.name)
            }
            SymbolKind::Derivative(k) => {
                f.write_str(&self.name)?;
                for _ in 0..k {
                    f.write_str("'")?;
                }
                Ok(())
            }
            SymbolKind::Function(d) => {
                f.write_str(&self.name)?;
                for _ in 0..d {
                    f.write_str("'")?;
                }
                // Arbitrary functions always depend on the independent variable `t`.
                f.write_str("(t)")
            }
        }
    }
}

impl Ord for Symbol {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for Symbol {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}
