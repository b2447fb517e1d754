//! Dependency erasure: families to simple types, kinds to simple kinds.

use std::fmt;
use std::sync::Arc;

use crate::syntax::{Context, Family, Kind, Sym, Var};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum SimpleType {
    Base(Sym),
    Arrow(Arc<SimpleType>, Arc<SimpleType>),
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum SimpleKind {
    TypeMinus,
    Arrow(Arc<SimpleType>, Arc<SimpleKind>),
}

impl SimpleType {
    pub fn base(name: &str) -> Self {
        SimpleType::Base(name.into())
    }

    pub fn arrow(dom: SimpleType, cod: SimpleType) -> Self {
        SimpleType::Arrow(Arc::new(dom), Arc::new(cod))
    }

    /// Number of arrows along the right spine.
    pub fn arity(&self) -> usize {
        match self {
            SimpleType::Base(_) => 0,
            SimpleType::Arrow(_, t) => 1 + t.arity(),
        }
    }
}

impl SimpleKind {
    pub fn arrow(dom: SimpleType, cod: SimpleKind) -> Self {
        SimpleKind::Arrow(Arc::new(dom), Arc::new(cod))
    }
}

impl fmt::Display for SimpleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimpleType::Base(a) => write!(f, "{a}"),
            SimpleType::Arrow(d, c) => match **d {
                SimpleType::Base(_) => write!(f, "{d} -> {c}"),
                SimpleType::Arrow(..) => write!(f, "({d}) -> {c}"),
            },
        }
    }
}

impl fmt::Display for SimpleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimpleKind::TypeMinus => write!(f, "type"),
            SimpleKind::Arrow(d, k) => match **d {
                SimpleType::Base(_) => write!(f, "{d} -> {k}"),
                SimpleType::Arrow(..) => write!(f, "({d}) -> {k}"),
            },
        }
    }
}

/// Simple contexts are consulted innermost-first and extended in a
/// stack-like fashion by the equality algorithm.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SimpleContext {
    entries: Vec<(Var, SimpleType)>,
}

impl SimpleContext {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, x: Var, t: SimpleType) {
        self.entries.push((x, t));
    }

    pub fn with(mut self, x: Var, t: SimpleType) -> Self {
        self.push(x, t);
        self
    }

    pub fn truncate(&mut self, len: usize) {
        self.entries.truncate(len);
    }

    pub fn insert(&mut self, index: usize, x: Var, t: SimpleType) {
        self.entries.insert(index, (x, t));
    }

    pub fn lookup(&self, x: &Var) -> Option<&SimpleType> {
        self.entries
            .iter()
            .rev()
            .find(|(y, _)| y == x)
            .map(|(_, t)| t)
    }

    pub fn entries(&self) -> &[(Var, SimpleType)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

pub fn erase_family(a: &Family) -> SimpleType {
    match a {
        Family::Const(a) => SimpleType::Base(a.clone()),
        Family::App(a, _) => erase_family(a),
        Family::Pi(_, a1, a2) => SimpleType::arrow(erase_family(a1), erase_family(a2)),
    }
}

pub fn erase_kind(k: &Kind) -> SimpleKind {
    match k {
        Kind::Type => SimpleKind::TypeMinus,
        Kind::Pi(_, a, k) => SimpleKind::arrow(erase_family(a), erase_kind(k)),
    }
}

pub fn erase_context(g: &Context) -> SimpleContext {
    SimpleContext {
        entries: g
            .entries()
            .iter()
            .map(|(x, a)| (x.clone(), erase_family(a)))
            .collect(),
    }
}
