//! Type-directed definitional equality.
//!
//! Objects are compared against a *simple* type: at arrow types both sides
//! are applied to a fresh variable (extensionality), at base types both
//! sides are weak-head normalized and compared structurally. Structural
//! comparison walks the two spines in lockstep and computes the simple
//! type of the heads. Families and kinds are compared the same way against
//! simple kinds. Dependent types are never consulted.
//!
//! The object-level recursion is written once, generic over a [`Recorder`]
//! that builds a witness while comparing. [`obj_eq`] runs it with a recorder
//! that builds nothing; the quasi-canonical extractor in
//! [`crate::canonical`] runs it with one that builds the common normal form.

use std::fmt;

use thiserror::Error;

use crate::erasure::{erase_family, erase_kind, SimpleContext, SimpleKind, SimpleType};
use crate::reduction::{whnf, Fuel, OutOfFuel};
use crate::syntax::{Binder, Classifier, Family, Kind, Object, Sym, Term, Var};
use crate::typecheck::CheckedSignature;

/// One descent taken by the comparison, used to locate a mismatch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PathStep {
    /// Applied both sides to a fresh variable.
    Extensionality,
    /// Went into the function part of an application.
    Function,
    /// Went into the argument part of an application.
    Argument,
    /// Domain of a Pi.
    Domain,
    /// Codomain of a Pi, under its binder.
    Codomain,
}

impl fmt::Display for PathStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PathStep::Extensionality => "ext",
            PathStep::Function => "fun",
            PathStep::Argument => "arg",
            PathStep::Domain => "dom",
            PathStep::Codomain => "cod",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum MismatchReason {
    /// Different heads (or otherwise structurally different terms).
    Objects(Object, Object),
    Families(Family, Family),
    /// One side is a Pi, the other is not.
    PiVsAtomic(Family, Family),
    KindShape(Kind, Kind),
    UnboundVariable(Var),
    UnknownConstant(Sym),
    /// A dangling de Bruijn index; input was not locally closed.
    LooseIndex(u32),
    /// An application whose function part does not have arrow type.
    NotAFunction(SimpleType),
    /// A family application whose head does not have an arrow kind.
    OverApplied(SimpleKind),
    /// Structural comparison succeeded at the wrong simple type.
    WrongType {
        expected: SimpleType,
        found: SimpleType,
    },
    WrongKind {
        expected: SimpleKind,
        found: SimpleKind,
    },
}

impl fmt::Display for MismatchReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MismatchReason::Objects(m, n) => write!(f, "`{m}` differs from `{n}`"),
            MismatchReason::Families(a, b) => write!(f, "`{a}` differs from `{b}`"),
            MismatchReason::PiVsAtomic(a, b) => {
                write!(f, "`{a}` and `{b}` have different shapes")
            }
            MismatchReason::KindShape(k, l) => {
                write!(f, "`{k}` and `{l}` have different shapes")
            }
            MismatchReason::UnboundVariable(x) => write!(f, "unbound variable `{x}`"),
            MismatchReason::UnknownConstant(c) => write!(f, "unknown constant `{c}`"),
            MismatchReason::LooseIndex(i) => write!(f, "dangling bound index {i}"),
            MismatchReason::NotAFunction(t) => {
                write!(f, "applied a term of simple type `{t}`")
            }
            MismatchReason::OverApplied(k) => {
                write!(f, "applied a family of simple kind `{k}`")
            }
            MismatchReason::WrongType { expected, found } => {
                write!(f, "expected simple type `{expected}`, found `{found}`")
            }
            MismatchReason::WrongKind { expected, found } => {
                write!(f, "expected simple kind `{expected}`, found `{found}`")
            }
        }
    }
}

/// Why two terms were found unequal, and where.
#[derive(Clone, Debug, PartialEq)]
pub struct Mismatch {
    /// Descents from the root of the comparison, outermost first.
    pub path: Vec<PathStep>,
    pub reason: MismatchReason,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() {
            write!(f, "{}", self.reason)
        } else {
            let path: Vec<String> = self.path.iter().map(|s| s.to_string()).collect();
            write!(f, "at {}: {}", path.join("."), self.reason)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum EqError {
    #[error("not equal: {0}")]
    Mismatch(Mismatch),
    #[error(transparent)]
    OutOfFuel(#[from] OutOfFuel),
}

impl EqError {
    pub fn mismatch(&self) -> Option<&Mismatch> {
        match self {
            EqError::Mismatch(m) => Some(m),
            EqError::OutOfFuel(_) => None,
        }
    }

    fn within(mut self, step: PathStep) -> Self {
        if let EqError::Mismatch(m) = &mut self {
            // collected leaf-first while unwinding
            m.path.push(step);
        }
        self
    }

    pub(crate) fn finish(mut self) -> Self {
        if let EqError::Mismatch(m) = &mut self {
            m.path.reverse();
        }
        self
    }
}

fn fail<T>(reason: MismatchReason) -> Result<T, EqError> {
    Err(EqError::Mismatch(Mismatch {
        path: Vec::new(),
        reason,
    }))
}

/// Builds a witness alongside the comparison of two objects.
pub trait Recorder {
    /// Output of the type-directed judgment.
    type Canonical;
    /// Output of the structural judgment.
    type Atomic;

    fn var(&mut self, x: &Var) -> Self::Atomic;
    fn constant(&mut self, c: &Sym) -> Self::Atomic;
    fn app(&mut self, fun: Self::Atomic, arg: Self::Canonical) -> Self::Atomic;
    fn atomic(&mut self, a: Self::Atomic) -> Self::Canonical;
    /// Abstracts `x` (the fresh variable introduced by extensionality) out
    /// of `body`.
    fn lam(&mut self, hint: &str, x: &Var, body: Self::Canonical) -> Self::Canonical;
}

/// The recorder that records nothing.
pub struct Silent;

impl Recorder for Silent {
    type Canonical = ();
    type Atomic = ();

    fn var(&mut self, _: &Var) {}
    fn constant(&mut self, _: &Sym) {}
    fn app(&mut self, _: (), _: ()) {}
    fn atomic(&mut self, _: ()) {}
    fn lam(&mut self, _: &str, _: &Var, _: ()) {}
}

/// The algorithm's state: signature, fuel, and the recorder.
pub struct Comparison<'s, 'f, R> {
    sig: &'s CheckedSignature,
    fuel: &'f mut Fuel,
    rec: R,
}

impl<'s, 'f, R: Recorder> Comparison<'s, 'f, R> {
    pub fn new(sig: &'s CheckedSignature, fuel: &'f mut Fuel, rec: R) -> Self {
        Comparison { sig, fuel, rec }
    }

    fn object_constant_type(&self, c: &Sym) -> Result<SimpleType, EqError> {
        match self.sig.lookup(c) {
            Some(Classifier::Family(a)) => Ok(erase_family(a)),
            _ => fail(MismatchReason::UnknownConstant(c.clone())),
        }
    }

    fn family_constant_kind(&self, a: &Sym) -> Result<SimpleKind, EqError> {
        match self.sig.lookup(a) {
            Some(Classifier::Kind(k)) => Ok(erase_kind(k)),
            _ => fail(MismatchReason::UnknownConstant(a.clone())),
        }
    }

    /// `Δ ⊢ M ⟺ N : τ`
    pub fn objects(
        &mut self,
        d: &mut SimpleContext,
        m: &Object,
        n: &Object,
        t: &SimpleType,
    ) -> Result<R::Canonical, EqError> {
        match t {
            SimpleType::Arrow(t1, t2) => {
                let hint = binder_hint(m, n);
                let x = Var::fresh(hint.as_str());
                let xv = Object::Var(x.clone());
                let mx = Object::app(m.clone(), xv.clone());
                let nx = Object::app(n.clone(), xv);
                let mark = d.len();
                d.push(x.clone(), (**t1).clone());
                let body = self.objects(d, &mx, &nx, t2);
                d.truncate(mark);
                let body = body.map_err(|e| e.within(PathStep::Extensionality))?;
                Ok(self.rec.lam(&hint, &x, body))
            }
            SimpleType::Base(_) => {
                let m1 = whnf(m, self.fuel)?;
                let n1 = whnf(n, self.fuel)?;
                let (found, atom) = self.structural(d, &m1, &n1)?;
                if &found != t {
                    return fail(MismatchReason::WrongType {
                        expected: t.clone(),
                        found,
                    });
                }
                Ok(self.rec.atomic(atom))
            }
        }
    }

    /// `Δ ⊢ M ⟷ N : τ`, computing `τ`.
    pub fn structural(
        &mut self,
        d: &mut SimpleContext,
        m: &Object,
        n: &Object,
    ) -> Result<(SimpleType, R::Atomic), EqError> {
        match (m, n) {
            (Object::Var(x), Object::Var(y)) if x == y => match d.lookup(x) {
                Some(t) => Ok((t.clone(), self.rec.var(x))),
                None => fail(MismatchReason::UnboundVariable(x.clone())),
            },
            (Object::Const(c), Object::Const(e)) if c == e => {
                let t = self.object_constant_type(c)?;
                Ok((t, self.rec.constant(c)))
            }
            (Object::App(m1, m2), Object::App(n1, n2)) => {
                let (t, f) = self
                    .structural(d, m1, n1)
                    .map_err(|e| e.within(PathStep::Function))?;
                let SimpleType::Arrow(dom, cod) = t else {
                    return fail(MismatchReason::NotAFunction(t));
                };
                let a = self
                    .objects(d, m2, n2, &dom)
                    .map_err(|e| e.within(PathStep::Argument))?;
                Ok(((*cod).clone(), self.rec.app(f, a)))
            }
            (Object::Bound(i), _) | (_, Object::Bound(i)) => fail(MismatchReason::LooseIndex(*i)),
            _ => fail(MismatchReason::Objects(m.clone(), n.clone())),
        }
    }
}

fn binder_hint(m: &Object, n: &Object) -> String {
    match (m, n) {
        (Object::Lam(Binder(h), ..), _) | (_, Object::Lam(Binder(h), ..)) => h.to_string(),
        _ => "x".to_string(),
    }
}

impl<'s, 'f> Comparison<'s, 'f, Silent> {
    /// `Δ ⊢ A ⟺ B : κ`
    pub fn families(
        &mut self,
        d: &mut SimpleContext,
        a: &Family,
        b: &Family,
        k: &SimpleKind,
    ) -> Result<(), EqError> {
        match k {
            SimpleKind::Arrow(t, k2) => {
                let x = Var::fresh("x");
                let ax = Family::app(a.clone(), Object::Var(x.clone()));
                let bx = Family::app(b.clone(), Object::Var(x.clone()));
                let mark = d.len();
                d.push(x, (**t).clone());
                let r = self.families(d, &ax, &bx, k2);
                d.truncate(mark);
                r.map_err(|e| e.within(PathStep::Extensionality))
            }
            SimpleKind::TypeMinus => match (a, b) {
                (Family::Pi(h, a1, a2), Family::Pi(_, b1, b2)) => {
                    self.families(d, a1, b1, &SimpleKind::TypeMinus)
                        .map_err(|e| e.within(PathStep::Domain))?;
                    let x = Var::fresh(h.name());
                    let xv = Object::Var(x.clone());
                    let mark = d.len();
                    d.push(x, erase_family(a1));
                    let r = self.families(
                        d,
                        &a2.instantiate(&xv),
                        &b2.instantiate(&xv),
                        &SimpleKind::TypeMinus,
                    );
                    d.truncate(mark);
                    r.map_err(|e| e.within(PathStep::Codomain))
                }
                (Family::Pi(..), _) | (_, Family::Pi(..)) => {
                    fail(MismatchReason::PiVsAtomic(a.clone(), b.clone()))
                }
                _ => {
                    let found = self.families_structural(d, a, b)?;
                    if found != SimpleKind::TypeMinus {
                        return fail(MismatchReason::WrongKind {
                            expected: SimpleKind::TypeMinus,
                            found,
                        });
                    }
                    Ok(())
                }
            },
        }
    }

    /// `Δ ⊢ A ⟷ B : κ`, computing `κ`.
    pub fn families_structural(
        &mut self,
        d: &mut SimpleContext,
        a: &Family,
        b: &Family,
    ) -> Result<SimpleKind, EqError> {
        match (a, b) {
            (Family::Const(p), Family::Const(q)) if p == q => self.family_constant_kind(p),
            (Family::App(a1, m), Family::App(b1, n)) => {
                let k = self
                    .families_structural(d, a1, b1)
                    .map_err(|e| e.within(PathStep::Function))?;
                let SimpleKind::Arrow(t, k2) = k else {
                    return fail(MismatchReason::OverApplied(k));
                };
                self.objects(d, m, n, &t)
                    .map_err(|e| e.within(PathStep::Argument))?;
                Ok((*k2).clone())
            }
            _ => fail(MismatchReason::Families(a.clone(), b.clone())),
        }
    }

    /// `Δ ⊢ K ⟺ L : kind⁻`
    pub fn kinds(&mut self, d: &mut SimpleContext, k: &Kind, l: &Kind) -> Result<(), EqError> {
        match (k, l) {
            (Kind::Type, Kind::Type) => Ok(()),
            (Kind::Pi(h, a, k2), Kind::Pi(_, b, l2)) => {
                self.families(d, a, b, &SimpleKind::TypeMinus)
                    .map_err(|e| e.within(PathStep::Domain))?;
                let x = Var::fresh(h.name());
                let xv = Object::Var(x.clone());
                let mark = d.len();
                d.push(x, erase_family(a));
                let r = self.kinds(d, &k2.instantiate(&xv), &l2.instantiate(&xv));
                d.truncate(mark);
                r.map_err(|e| e.within(PathStep::Codomain))
            }
            _ => fail(MismatchReason::KindShape(k.clone(), l.clone())),
        }
    }
}

/// Decides `Δ ⊢ M ⟺ N : τ`.
pub fn obj_eq(
    sig: &CheckedSignature,
    d: &SimpleContext,
    m: &Object,
    n: &Object,
    t: &SimpleType,
    fuel: &mut Fuel,
) -> Result<(), EqError> {
    let mut d = d.clone();
    Comparison::new(sig, fuel, Silent)
        .objects(&mut d, m, n, t)
        .map_err(EqError::finish)
}

/// Decides `Δ ⊢ M ⟷ N : τ` for weak head normal `m`, `n` and returns `τ`.
pub fn obj_eq_structural(
    sig: &CheckedSignature,
    d: &SimpleContext,
    m: &Object,
    n: &Object,
    fuel: &mut Fuel,
) -> Result<SimpleType, EqError> {
    let mut d = d.clone();
    Comparison::new(sig, fuel, Silent)
        .structural(&mut d, m, n)
        .map(|(t, ())| t)
        .map_err(EqError::finish)
}

/// Decides `Δ ⊢ A ⟺ B : κ`.
pub fn fam_eq(
    sig: &CheckedSignature,
    d: &SimpleContext,
    a: &Family,
    b: &Family,
    k: &SimpleKind,
    fuel: &mut Fuel,
) -> Result<(), EqError> {
    let mut d = d.clone();
    Comparison::new(sig, fuel, Silent)
        .families(&mut d, a, b, k)
        .map_err(EqError::finish)
}

/// Decides `Δ ⊢ A ⟷ B : κ` and returns `κ`.
pub fn fam_eq_structural(
    sig: &CheckedSignature,
    d: &SimpleContext,
    a: &Family,
    b: &Family,
    fuel: &mut Fuel,
) -> Result<SimpleKind, EqError> {
    let mut d = d.clone();
    Comparison::new(sig, fuel, Silent)
        .families_structural(&mut d, a, b)
        .map_err(EqError::finish)
}

/// Decides `Δ ⊢ K ⟺ L : kind⁻`.
pub fn kind_eq(
    sig: &CheckedSignature,
    d: &SimpleContext,
    k: &Kind,
    l: &Kind,
    fuel: &mut Fuel,
) -> Result<(), EqError> {
    let mut d = d.clone();
    Comparison::new(sig, fuel, Silent)
        .kinds(&mut d, k, l)
        .map_err(EqError::finish)
}
