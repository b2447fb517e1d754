//! Quasi-canonical forms: beta-normal, eta-long objects without lambda
//! labels.
//!
//! Extraction reuses the equality recursion of [`crate::equality`] with a
//! recorder that builds the common normal form of the two sides, so it
//! succeeds exactly when the equality check does. [`elaborate_qc`] goes the
//! other way and restores the labels from the expected type.

use std::sync::Arc;

use thiserror::Error;

use crate::equality::{Comparison, EqError, Recorder};
use crate::erasure::{erase_context, erase_family, SimpleContext, SimpleType};
use crate::reduction::Fuel;
use crate::syntax::{Binder, Context, Family, Object, Sym, Term, Var};
use crate::typecheck::{self, CheckedSignature, Diagnostic};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum QuasiCanonical {
    Atomic(QuasiAtomic),
    Lam(Binder, Arc<QuasiCanonical>),
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum QuasiAtomic {
    Bound(u32),
    Var(Var),
    Const(Sym),
    App(Arc<QuasiAtomic>, Arc<QuasiCanonical>),
}

/// An object with its lambda labels erased.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Unlabeled {
    Bound(u32),
    Var(Var),
    Const(Sym),
    Lam(Binder, Arc<Unlabeled>),
    App(Arc<Unlabeled>, Arc<Unlabeled>),
}

impl QuasiCanonical {
    pub fn var(name: &str) -> Self {
        QuasiCanonical::Atomic(QuasiAtomic::Var(Var::named(name)))
    }

    pub fn constant(name: &str) -> Self {
        QuasiCanonical::Atomic(QuasiAtomic::Const(name.into()))
    }

    /// `λx. body`, abstracting the free variable `x`.
    pub fn lam(x: &Var, body: &QuasiCanonical) -> Self {
        QuasiCanonical::Lam(Binder::new(x.name()), Arc::new(body.close_at(0, x)))
    }

    /// Head applied to quasi-canonical arguments.
    pub fn apply(head: QuasiAtomic, args: impl IntoIterator<Item = QuasiCanonical>) -> Self {
        QuasiCanonical::Atomic(
            args.into_iter()
                .fold(head, |f, a| QuasiAtomic::App(Arc::new(f), Arc::new(a))),
        )
    }

    pub fn to_unlabeled(&self) -> Unlabeled {
        match self {
            QuasiCanonical::Atomic(a) => a.to_unlabeled(),
            QuasiCanonical::Lam(b, body) => {
                Unlabeled::Lam(b.clone(), Arc::new(body.to_unlabeled()))
            }
        }
    }

    fn close_at(&self, depth: u32, x: &Var) -> Self {
        match self {
            QuasiCanonical::Atomic(a) => QuasiCanonical::Atomic(a.close_at(depth, x)),
            QuasiCanonical::Lam(b, body) => {
                QuasiCanonical::Lam(b.clone(), Arc::new(body.close_at(depth + 1, x)))
            }
        }
    }

    /// Replaces the outermost dangling index with the variable `x`.
    pub fn instantiate_var(&self, x: &Var) -> Self {
        self.open_at(0, x)
    }

    fn open_at(&self, depth: u32, x: &Var) -> Self {
        match self {
            QuasiCanonical::Atomic(a) => QuasiCanonical::Atomic(a.open_at(depth, x)),
            QuasiCanonical::Lam(b, body) => {
                QuasiCanonical::Lam(b.clone(), Arc::new(body.open_at(depth + 1, x)))
            }
        }
    }

    /// Checks the shape invariants against a simple type: lambdas exactly
    /// at arrow types, atomic terms exactly at base types, with heads and
    /// spines consistent with `d` and the signature.
    pub fn is_eta_long_at(
        &self,
        sig: &CheckedSignature,
        d: &SimpleContext,
        t: &SimpleType,
    ) -> bool {
        shape::canonical(sig, &mut d.clone(), &mut Vec::new(), self, t)
    }
}

impl QuasiAtomic {
    fn to_unlabeled(&self) -> Unlabeled {
        match self {
            QuasiAtomic::Bound(i) => Unlabeled::Bound(*i),
            QuasiAtomic::Var(x) => Unlabeled::Var(x.clone()),
            QuasiAtomic::Const(c) => Unlabeled::Const(c.clone()),
            QuasiAtomic::App(f, a) => {
                Unlabeled::App(Arc::new(f.to_unlabeled()), Arc::new(a.to_unlabeled()))
            }
        }
    }

    fn close_at(&self, depth: u32, x: &Var) -> Self {
        match self {
            QuasiAtomic::Var(y) if y == x => QuasiAtomic::Bound(depth),
            QuasiAtomic::App(f, a) => QuasiAtomic::App(
                Arc::new(f.close_at(depth, x)),
                Arc::new(a.close_at(depth, x)),
            ),
            _ => self.clone(),
        }
    }

    fn open_at(&self, depth: u32, x: &Var) -> Self {
        match self {
            QuasiAtomic::Bound(i) if *i == depth => QuasiAtomic::Var(x.clone()),
            QuasiAtomic::App(f, a) => {
                QuasiAtomic::App(Arc::new(f.open_at(depth, x)), Arc::new(a.open_at(depth, x)))
            }
            _ => self.clone(),
        }
    }

    /// Head and arguments of the spine.
    pub fn spine(&self) -> (&QuasiAtomic, Vec<&QuasiCanonical>) {
        let mut args = Vec::new();
        let mut head = self;
        while let QuasiAtomic::App(f, a) = head {
            args.push(&**a);
            head = f;
        }
        args.reverse();
        (head, args)
    }
}

/// `|M|`: erases every lambda label.
pub fn strip_labels(m: &Object) -> Unlabeled {
    match m {
        Object::Bound(i) => Unlabeled::Bound(*i),
        Object::Var(x) => Unlabeled::Var(x.clone()),
        Object::Const(c) => Unlabeled::Const(c.clone()),
        Object::Lam(b, _, body) => Unlabeled::Lam(b.clone(), Arc::new(strip_labels(body))),
        Object::App(f, a) => Unlabeled::App(Arc::new(strip_labels(f)), Arc::new(strip_labels(a))),
    }
}

/// Recorder building the quasi-canonical witness of an equality derivation.
struct Extract;

impl Recorder for Extract {
    type Canonical = QuasiCanonical;
    type Atomic = QuasiAtomic;

    fn var(&mut self, x: &Var) -> QuasiAtomic {
        QuasiAtomic::Var(x.clone())
    }

    fn constant(&mut self, c: &Sym) -> QuasiAtomic {
        QuasiAtomic::Const(c.clone())
    }

    fn app(&mut self, fun: QuasiAtomic, arg: QuasiCanonical) -> QuasiAtomic {
        QuasiAtomic::App(Arc::new(fun), Arc::new(arg))
    }

    fn atomic(&mut self, a: QuasiAtomic) -> QuasiCanonical {
        QuasiCanonical::Atomic(a)
    }

    fn lam(&mut self, hint: &str, x: &Var, body: QuasiCanonical) -> QuasiCanonical {
        QuasiCanonical::Lam(Binder::new(hint), Arc::new(body.close_at(0, x)))
    }
}

/// Instrumented `Δ ⊢ M ⟺ N : τ ↑ Ō`.
pub fn qc_extract(
    sig: &CheckedSignature,
    d: &SimpleContext,
    m: &Object,
    n: &Object,
    t: &SimpleType,
    fuel: &mut Fuel,
) -> Result<QuasiCanonical, EqError> {
    let mut d = d.clone();
    Comparison::new(sig, fuel, Extract)
        .objects(&mut d, m, n, t)
        .map_err(EqError::finish)
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum CanonError {
    #[error(transparent)]
    IllTyped(#[from] Diagnostic),
    #[error("extraction failed: {0}")]
    Extraction(EqError),
}

/// Quasi-canonical form of `m` at type `a`, extracted from the derivation
/// of `Γ⁻ ⊢ M ⟺ M : A⁻`. The object is type-checked first.
pub fn canonicalize(
    sig: &CheckedSignature,
    g: &Context,
    m: &Object,
    a: &Family,
    fuel: &mut Fuel,
) -> Result<QuasiCanonical, CanonError> {
    typecheck::check_object(sig, g, m, a, fuel)?;
    qc_extract(sig, &erase_context(g), m, m, &erase_family(a), fuel).map_err(CanonError::Extraction)
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum ElabError {
    #[error("a lambda cannot have type `{0}`")]
    LambdaAtNonFunction(Family),
    #[error("`{term}` has function type `{ty}` but is not eta-expanded")]
    NotEtaLong { term: Object, ty: Family },
    #[error("`{term}` is applied but has type `{ty}`")]
    NotAFunction { term: Object, ty: Family },
    #[error("dangling bound index {0}")]
    LooseIndex(u32),
    #[error(transparent)]
    Typing(#[from] Diagnostic),
}

/// Restores lambda labels: returns `N` with `|N| = q` and `Γ ⊢ N : A`.
/// Labels are read off the Pi domains of the expected type, and of the
/// synthesized types of spine heads for arguments.
pub fn elaborate_qc(
    sig: &CheckedSignature,
    g: &Context,
    q: &QuasiCanonical,
    a: &Family,
    fuel: &mut Fuel,
) -> Result<Object, ElabError> {
    Elaborator { sig, fuel }.canonical(&mut g.clone(), q, a)
}

struct Elaborator<'a, 'f> {
    sig: &'a CheckedSignature,
    fuel: &'f mut Fuel,
}

impl Elaborator<'_, '_> {
    fn canonical(
        &mut self,
        g: &mut Context,
        q: &QuasiCanonical,
        a: &Family,
    ) -> Result<Object, ElabError> {
        match q {
            QuasiCanonical::Lam(b, body) => {
                let Family::Pi(_, dom, cod) = a else {
                    return Err(ElabError::LambdaAtNonFunction(a.clone()));
                };
                let x = Var::fresh(b.name());
                let xv = Object::Var(x.clone());
                let mark = g.len();
                g.push(x.clone(), (**dom).clone());
                let r = self.canonical(g, &body.instantiate_var(&x), &cod.instantiate(&xv));
                g.truncate(mark);
                let body = r?;
                Ok(Object::Lam(
                    b.clone(),
                    dom.clone(),
                    Arc::new(body.close(&x)),
                ))
            }
            QuasiCanonical::Atomic(h) => {
                let (m, found) = self.atomic(g, h)?;
                if let Family::Pi(..) = found {
                    return Err(ElabError::NotEtaLong { term: m, ty: found });
                }
                // the expected type may differ from the synthesized one up to
                // definitional equality of indices
                typecheck::check_object(self.sig, g, &m, a, self.fuel)?;
                Ok(m)
            }
        }
    }

    fn atomic(&mut self, g: &mut Context, h: &QuasiAtomic) -> Result<(Object, Family), ElabError> {
        match h {
            QuasiAtomic::Bound(i) => Err(ElabError::LooseIndex(*i)),
            QuasiAtomic::Var(x) => {
                let m = Object::Var(x.clone());
                let ty = typecheck::synth_object(self.sig, g, &m, self.fuel)?;
                Ok((m, ty))
            }
            QuasiAtomic::Const(c) => {
                let m = Object::Const(c.clone());
                let ty = typecheck::synth_object(self.sig, g, &m, self.fuel)?;
                Ok((m, ty))
            }
            QuasiAtomic::App(f, arg) => {
                let (fm, fty) = self.atomic(g, f)?;
                let Family::Pi(_, dom, cod) = &fty else {
                    return Err(ElabError::NotAFunction { term: fm, ty: fty });
                };
                let am = self.canonical(g, arg, dom)?;
                let ty = cod.instantiate(&am);
                Ok((Object::app(fm, am), ty))
            }
        }
    }
}

mod shape {
    use super::*;
    use crate::erasure::erase_family;
    use crate::syntax::Classifier;

    pub(super) fn canonical(
        sig: &CheckedSignature,
        d: &mut SimpleContext,
        bound: &mut Vec<SimpleType>,
        q: &QuasiCanonical,
        t: &SimpleType,
    ) -> bool {
        match (q, t) {
            (QuasiCanonical::Lam(_, body), SimpleType::Arrow(t1, t2)) => {
                bound.push((**t1).clone());
                let ok = canonical(sig, d, bound, body, t2);
                bound.pop();
                ok
            }
            (QuasiCanonical::Atomic(a), SimpleType::Base(_)) => {
                atomic(sig, d, bound, a).as_ref() == Some(t)
            }
            _ => false,
        }
    }

    fn atomic(
        sig: &CheckedSignature,
        d: &mut SimpleContext,
        bound: &mut Vec<SimpleType>,
        a: &QuasiAtomic,
    ) -> Option<SimpleType> {
        match a {
            QuasiAtomic::Bound(i) => {
                let i = *i as usize;
                (i < bound.len()).then(|| bound[bound.len() - 1 - i].clone())
            }
            QuasiAtomic::Var(x) => d.lookup(x).cloned(),
            QuasiAtomic::Const(c) => match sig.lookup(c)? {
                Classifier::Family(a) => Some(erase_family(a)),
                Classifier::Kind(_) => None,
            },
            QuasiAtomic::App(f, arg) => match atomic(sig, d, bound, f)? {
                SimpleType::Arrow(t1, t2) => {
                    canonical(sig, d, bound, arg, &t1).then(|| (*t2).clone())
                }
                SimpleType::Base(_) => None,
            },
        }
    }
}
