//! Terms of the three-level LF language: objects, families and kinds.
//!
//! Binders use a locally nameless representation. Bound occurrences are
//! de Bruijn indices (`Bound`), free occurrences are named [`Var`]s. Every
//! term handed out by this crate is locally closed, so substituting a term
//! for a free variable can never capture and never needs shifting. The name
//! stored in a [`Binder`] is only a display hint and is ignored by equality,
//! which makes `==` on terms coincide with alpha-equivalence.

use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use thiserror::Error;

/// Name of a declared constant (family or object level).
pub type Sym = Arc<str>;

static NEXT_FRESH: AtomicU64 = AtomicU64::new(1);

/// A free variable. Parsed variables carry `id == 0`; variables invented by
/// the kernel (when descending under a binder) get a unique nonzero id from
/// a process-wide counter, so they never collide with user names.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var {
    name: Arc<str>,
    id: u64,
}

impl Var {
    pub fn named(name: impl Into<Arc<str>>) -> Self {
        Var {
            name: name.into(),
            id: 0,
        }
    }

    pub fn fresh(hint: impl Into<Arc<str>>) -> Self {
        let id = NEXT_FRESH.fetch_add(1, Ordering::Relaxed);
        Var {
            name: hint.into(),
            id,
        }
    }

    /// Display name, without the freshness suffix.
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn is_generated(&self) -> bool {
        self.id != 0
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.id == 0 {
            write!(f, "{}", self.name)
        } else {
            write!(f, "{}#{}", self.name, self.id)
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Display hint for a bound variable. All binders compare equal.
#[derive(Clone)]
pub struct Binder(pub Arc<str>);

impl Binder {
    pub fn new(name: impl Into<Arc<str>>) -> Self {
        Binder(name.into())
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl PartialEq for Binder {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl Eq for Binder {}

impl Hash for Binder {
    fn hash<H: Hasher>(&self, _: &mut H) {}
}

impl fmt::Debug for Binder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Object {
    Bound(u32),
    Var(Var),
    Const(Sym),
    Lam(Binder, Arc<Family>, Arc<Object>),
    App(Arc<Object>, Arc<Object>),
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Family {
    Const(Sym),
    App(Arc<Family>, Arc<Object>),
    Pi(Binder, Arc<Family>, Arc<Family>),
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Kind {
    Type,
    Pi(Binder, Arc<Family>, Arc<Kind>),
}

/// A variable occurrence as seen by [`Term::map_vars`].
pub enum Occurrence<'a> {
    Bound(u32),
    Free(&'a Var),
}

impl Object {
    pub fn var(name: &str) -> Self {
        Object::Var(Var::named(name))
    }

    pub fn constant(name: &str) -> Self {
        Object::Const(name.into())
    }

    pub fn app(fun: Object, arg: Object) -> Self {
        Object::App(Arc::new(fun), Arc::new(arg))
    }

    /// Applies `head` to every argument in order.
    pub fn apply(head: Object, args: impl IntoIterator<Item = Object>) -> Self {
        args.into_iter().fold(head, Object::app)
    }

    /// `λx:ann. body`, abstracting the free variable `x` out of `body`.
    pub fn lam(x: &Var, ann: Family, body: &Object) -> Self {
        Object::Lam(
            Binder::new(x.name()),
            Arc::new(ann),
            Arc::new(body.close(x)),
        )
    }

    /// Splits an application spine into its head and arguments.
    pub fn spine(&self) -> (&Object, Vec<&Object>) {
        let mut args = Vec::new();
        let mut head = self;
        while let Object::App(f, a) = head {
            args.push(&**a);
            head = f;
        }
        args.reverse();
        (head, args)
    }

    pub fn size(&self) -> usize {
        match self {
            Object::Bound(_) | Object::Var(_) | Object::Const(_) => 1,
            Object::Lam(_, a, m) => 1 + a.size() + m.size(),
            Object::App(m, n) => 1 + m.size() + n.size(),
        }
    }
}

impl Family {
    pub fn constant(name: &str) -> Self {
        Family::Const(name.into())
    }

    pub fn app(fam: Family, arg: Object) -> Self {
        Family::App(Arc::new(fam), Arc::new(arg))
    }

    pub fn pi(x: &Var, dom: Family, cod: &Family) -> Self {
        Family::Pi(Binder::new(x.name()), Arc::new(dom), Arc::new(cod.close(x)))
    }

    /// Non-dependent function family `dom -> cod`.
    pub fn arrow(dom: Family, cod: Family) -> Self {
        Family::Pi(Binder::new("x"), Arc::new(dom), Arc::new(cod))
    }

    /// Head constant of an atomic family, `None` for a Pi.
    pub fn head(&self) -> Option<&Sym> {
        match self {
            Family::Const(a) => Some(a),
            Family::App(f, _) => f.head(),
            Family::Pi(..) => None,
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Family::Const(_) => 1,
            Family::App(a, m) => 1 + a.size() + m.size(),
            Family::Pi(_, a, b) => 1 + a.size() + b.size(),
        }
    }
}

impl Kind {
    pub fn pi(x: &Var, dom: Family, cod: &Kind) -> Self {
        Kind::Pi(Binder::new(x.name()), Arc::new(dom), Arc::new(cod.close(x)))
    }

    pub fn arrow(dom: Family, cod: Kind) -> Self {
        Kind::Pi(Binder::new("x"), Arc::new(dom), Arc::new(cod))
    }
}

/// Operations shared by all three syntactic levels.
pub trait Term: Clone + PartialEq + fmt::Debug {
    /// Rebuilds the term, replacing every variable occurrence for which `f`
    /// returns `Some`. `depth` counts the binders passed so far, so bound
    /// occurrences are reported relative to the root.
    fn map_vars(
        &self,
        depth: u32,
        f: &mut dyn FnMut(Occurrence<'_>, u32) -> Option<Object>,
    ) -> Self;

    /// Visits every variable occurrence.
    fn visit_vars(&self, depth: u32, f: &mut dyn FnMut(Occurrence<'_>, u32));

    /// Replaces the outermost dangling index with `with` (which must be
    /// locally closed).
    fn instantiate(&self, with: &Object) -> Self {
        self.map_vars(0, &mut |occ, depth| match occ {
            Occurrence::Bound(i) if i == depth => Some(with.clone()),
            _ => None,
        })
    }

    /// Turns free occurrences of `x` into the index of a new outermost binder.
    fn close(&self, x: &Var) -> Self {
        self.map_vars(0, &mut |occ, depth| match occ {
            Occurrence::Free(y) if y == x => Some(Object::Bound(depth)),
            _ => None,
        })
    }

    fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.visit_vars(0, &mut |occ, _| {
            if let Occurrence::Free(x) = occ {
                out.insert(x.clone());
            }
        });
        out
    }

    fn mentions(&self, x: &Var) -> bool {
        let mut found = false;
        self.visit_vars(0, &mut |occ, _| {
            if let Occurrence::Free(y) = occ {
                found |= y == x;
            }
        });
        found
    }

    /// True when no bound index escapes its binders.
    fn is_locally_closed(&self) -> bool {
        let mut ok = true;
        self.visit_vars(0, &mut |occ, depth| {
            if let Occurrence::Bound(i) = occ {
                ok &= i < depth;
            }
        });
        ok
    }
}

impl Term for Object {
    fn map_vars(
        &self,
        depth: u32,
        f: &mut dyn FnMut(Occurrence<'_>, u32) -> Option<Object>,
    ) -> Self {
        match self {
            Object::Bound(i) => f(Occurrence::Bound(*i), depth).unwrap_or_else(|| self.clone()),
            Object::Var(x) => f(Occurrence::Free(x), depth).unwrap_or_else(|| self.clone()),
            Object::Const(_) => self.clone(),
            Object::Lam(b, a, m) => Object::Lam(
                b.clone(),
                Arc::new(a.map_vars(depth, f)),
                Arc::new(m.map_vars(depth + 1, f)),
            ),
            Object::App(m, n) => Object::App(
                Arc::new(m.map_vars(depth, f)),
                Arc::new(n.map_vars(depth, f)),
            ),
        }
    }

    fn visit_vars(&self, depth: u32, f: &mut dyn FnMut(Occurrence<'_>, u32)) {
        match self {
            Object::Bound(i) => f(Occurrence::Bound(*i), depth),
            Object::Var(x) => f(Occurrence::Free(x), depth),
            Object::Const(_) => {}
            Object::Lam(_, a, m) => {
                a.visit_vars(depth, f);
                m.visit_vars(depth + 1, f);
            }
            Object::App(m, n) => {
                m.visit_vars(depth, f);
                n.visit_vars(depth, f);
            }
        }
    }
}

impl Term for Family {
    fn map_vars(
        &self,
        depth: u32,
        f: &mut dyn FnMut(Occurrence<'_>, u32) -> Option<Object>,
    ) -> Self {
        match self {
            Family::Const(_) => self.clone(),
            Family::App(a, m) => Family::App(
                Arc::new(a.map_vars(depth, f)),
                Arc::new(m.map_vars(depth, f)),
            ),
            Family::Pi(b, a1, a2) => Family::Pi(
                b.clone(),
                Arc::new(a1.map_vars(depth, f)),
                Arc::new(a2.map_vars(depth + 1, f)),
            ),
        }
    }

    fn visit_vars(&self, depth: u32, f: &mut dyn FnMut(Occurrence<'_>, u32)) {
        match self {
            Family::Const(_) => {}
            Family::App(a, m) => {
                a.visit_vars(depth, f);
                m.visit_vars(depth, f);
            }
            Family::Pi(_, a1, a2) => {
                a1.visit_vars(depth, f);
                a2.visit_vars(depth + 1, f);
            }
        }
    }
}

impl Term for Kind {
    fn map_vars(
        &self,
        depth: u32,
        f: &mut dyn FnMut(Occurrence<'_>, u32) -> Option<Object>,
    ) -> Self {
        match self {
            Kind::Type => Kind::Type,
            Kind::Pi(b, a, k) => Kind::Pi(
                b.clone(),
                Arc::new(a.map_vars(depth, f)),
                Arc::new(k.map_vars(depth + 1, f)),
            ),
        }
    }

    fn visit_vars(&self, depth: u32, f: &mut dyn FnMut(Occurrence<'_>, u32)) {
        if let Kind::Pi(_, a, k) = self {
            a.visit_vars(depth, f);
            k.visit_vars(depth + 1, f);
        }
    }
}

/// Alpha-equivalence at any level. With the locally nameless encoding this
/// is plain structural equality.
pub fn alpha_equal<T: Term>(t1: &T, t2: &T) -> bool {
    t1 == t2
}

/// `[n/x]t`, capture-avoiding.
pub fn subst_single<T: Term>(t: &T, x: &Var, n: &Object) -> T {
    t.map_vars(0, &mut |occ, _| match occ {
        Occurrence::Free(y) if y == x => Some(n.clone()),
        _ => None,
    })
}

pub fn free_vars<T: Term>(t: &T) -> BTreeSet<Var> {
    t.free_vars()
}

/// A simultaneous substitution `M1/x1, ..., Mn/xn`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Substitution {
    entries: Vec<(Var, Object)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubstError {
    #[error("variable `{0}` is already in the domain of the substitution")]
    AlreadyBound(Var),
    #[error("variable `{0}` is outside the domain of the substitution")]
    OutOfDomain(Var),
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn extend(&mut self, x: Var, m: Object) -> Result<(), SubstError> {
        if self.get(&x).is_some() {
            return Err(SubstError::AlreadyBound(x));
        }
        self.entries.push((x, m));
        Ok(())
    }

    pub fn with(mut self, x: Var, m: Object) -> Result<Self, SubstError> {
        self.extend(x, m)?;
        Ok(self)
    }

    pub fn get(&self, x: &Var) -> Option<&Object> {
        self.entries.iter().find(|(y, _)| y == x).map(|(_, m)| m)
    }

    pub fn domain(&self) -> impl Iterator<Item = &Var> {
        self.entries.iter().map(|(x, _)| x)
    }

    pub fn entries(&self) -> &[(Var, Object)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// `t[σ]`. Every free variable of `t` must lie in the domain of `s`.
pub fn subst_simul<T: Term>(t: &T, s: &Substitution) -> Result<T, SubstError> {
    let mut missing = None;
    let out = t.map_vars(0, &mut |occ, _| match occ {
        Occurrence::Free(x) => match s.get(x) {
            Some(m) => Some(m.clone()),
            None => {
                missing.get_or_insert_with(|| x.clone());
                None
            }
        },
        Occurrence::Bound(_) => None,
    });
    match missing {
        Some(x) => Err(SubstError::OutOfDomain(x)),
        None => Ok(out),
    }
}

/// `id_Γ`.
pub fn identity_subst(g: &Context) -> Substitution {
    Substitution {
        entries: g
            .entries()
            .iter()
            .map(|(x, _)| (x.clone(), Object::Var(x.clone())))
            .collect(),
    }
}

/// An ordered list of variable declarations `x1:A1, ..., xn:An`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Context {
    entries: Vec<(Var, Family)>,
}

impl Context {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, x: Var, a: Family) {
        self.entries.push((x, a));
    }

    pub fn with(mut self, x: Var, a: Family) -> Self {
        self.push(x, a);
        self
    }

    pub fn pop(&mut self) -> Option<(Var, Family)> {
        self.entries.pop()
    }

    pub fn truncate(&mut self, len: usize) {
        self.entries.truncate(len);
    }

    /// Innermost declaration of `x`.
    pub fn lookup(&self, x: &Var) -> Option<&Family> {
        self.entries
            .iter()
            .rev()
            .find(|(y, _)| y == x)
            .map(|(_, a)| a)
    }

    pub fn entries(&self) -> &[(Var, Family)] {
        &self.entries
    }

    pub fn insert(&mut self, index: usize, x: Var, a: Family) {
        self.entries.insert(index, (x, a));
    }

    pub fn remove(&mut self, index: usize) -> (Var, Family) {
        self.entries.remove(index)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Position of a declaration in a source file.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Span {
    pub line: u32,
    pub col: u32,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Classifier {
    /// `a : K`, a family constant.
    Kind(Kind),
    /// `c : A`, an object constant.
    Family(Family),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Decl {
    pub name: Sym,
    pub classifier: Classifier,
    pub span: Option<Span>,
}

impl Decl {
    pub fn family(name: &str, kind: Kind) -> Self {
        Decl {
            name: name.into(),
            classifier: Classifier::Kind(kind),
            span: None,
        }
    }

    pub fn object(name: &str, fam: Family) -> Self {
        Decl {
            name: name.into(),
            classifier: Classifier::Family(fam),
            span: None,
        }
    }
}

/// Declarations in source order. Not yet validated; see
/// [`crate::typecheck::check_signature`].
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Signature {
    pub decls: Vec<Decl>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, decl: Decl) {
        self.decls.push(decl);
    }

    pub fn len(&self) -> usize {
        self.decls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.decls.is_empty()
    }
}
