//! Bottom-up type synthesis and signature/context validation.
//!
//! Type conversion happens only where synthesis compares the domain of a
//! function against the synthesized type of its argument, and at the top
//! of [`check_object`]. Both comparisons go through the type-directed
//! equality of [`crate::equality`].

use std::collections::{HashMap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::equality::{self, EqError, Mismatch};
use crate::erasure::{erase_context, erase_family, SimpleKind};
use crate::reduction::Fuel;
use crate::syntax::{
    Classifier, Context, Decl, Family, Kind, Object, Signature, Span, Sym, Term, Var,
};

/// A signature whose declarations have each been validated against the
/// declarations before them.
#[derive(Clone, Debug, Default)]
pub struct CheckedSignature {
    decls: Vec<Decl>,
    index: HashMap<Sym, usize>,
}

impl CheckedSignature {
    /// The empty signature, trivially valid.
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn lookup(&self, name: &str) -> Option<&Classifier> {
        self.index.get(name).map(|&i| &self.decls[i].classifier)
    }

    pub fn decl(&self, name: &str) -> Option<&Decl> {
        self.index.get(name).map(|&i| &self.decls[i])
    }

    pub fn decls(&self) -> &[Decl] {
        &self.decls
    }

    pub fn len(&self) -> usize {
        self.decls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.decls.is_empty()
    }

    pub fn to_signature(&self) -> Signature {
        Signature {
            decls: self.decls.clone(),
        }
    }

    fn push_unchecked(&mut self, decl: Decl) {
        self.index.insert(decl.name.clone(), self.decls.len());
        self.decls.push(decl);
    }
}

/// Which judgment was being established when checking failed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Judgment {
    SynthObject,
    SynthFamily,
    SynthKind,
    CheckObject,
    CheckContext,
    CheckSignature,
    DefEqual,
}

impl fmt::Display for Judgment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Judgment::SynthObject => "synthesizing the type of an object",
            Judgment::SynthFamily => "synthesizing the kind of a family",
            Judgment::SynthKind => "validating a kind",
            Judgment::CheckObject => "checking an object against a type",
            Judgment::CheckContext => "validating a context",
            Judgment::CheckSignature => "validating a signature",
            Judgment::DefEqual => "deciding definitional equality",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum TypeError {
    #[error("unbound variable `{0}`")]
    UnboundVariable(Var),
    #[error("unknown constant `{0}`")]
    UnknownConstant(Sym),
    #[error("`{0}` is a family constant, expected an object")]
    FamilyUsedAsObject(Sym),
    #[error("`{0}` is an object constant, expected a family")]
    ObjectUsedAsFamily(Sym),
    #[error("dangling bound index {0}")]
    LooseIndex(u32),
    #[error("`{term}` has type `{ty}`, which is not a function type")]
    NotAFunction { term: Object, ty: Family },
    #[error("`{family}` has kind `{kind}`, which does not take arguments")]
    FamilyNotAFunction { family: Family, kind: Kind },
    #[error("argument `{arg}` has type `{found}` but `{expected}` was expected ({mismatch})")]
    ArgumentMismatch {
        arg: Object,
        expected: Family,
        found: Family,
        mismatch: Mismatch,
    },
    #[error("`{family}` has kind `{kind}`, expected `type`")]
    NotAType { family: Family, kind: Kind },
    #[error("`{term}` has type `{found}` but `{expected}` was expected ({mismatch})")]
    TypeMismatch {
        term: Object,
        expected: Family,
        found: Family,
        mismatch: Mismatch,
    },
    #[error("constant `{0}` is declared more than once")]
    DuplicateConstant(Sym),
    #[error("variable `{0}` is declared more than once")]
    DuplicateVariable(Var),
    #[error("reduction budget exhausted")]
    OutOfFuel,
}

/// A rejected judgment.
#[derive(Clone, Debug, PartialEq)]
pub struct Diagnostic {
    pub judgment: Judgment,
    pub error: TypeError,
    /// The signature or context entry being checked, if any.
    pub subject: Option<String>,
    pub span: Option<Span>,
}

impl Diagnostic {
    fn new(judgment: Judgment, error: TypeError) -> Self {
        Diagnostic {
            judgment,
            error,
            subject: None,
            span: None,
        }
    }

    pub fn is_out_of_fuel(&self) -> bool {
        self.error == TypeError::OutOfFuel
    }

    fn at(mut self, subject: String, span: Option<Span>) -> Self {
        self.subject = Some(subject);
        self.span = self.span.or(span);
        self
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(span) = self.span {
            write!(f, "{span}: ")?;
        }
        write!(f, "{}", self.error)?;
        match &self.subject {
            Some(s) => write!(f, " (while {}, in `{s}`)", self.judgment),
            None => write!(f, " (while {})", self.judgment),
        }
    }
}

impl std::error::Error for Diagnostic {}

type Result<T> = std::result::Result<T, TypeError>;

fn from_eq(e: EqError, on_mismatch: impl FnOnce(Mismatch) -> TypeError) -> TypeError {
    match e {
        EqError::Mismatch(m) => on_mismatch(m),
        EqError::OutOfFuel(_) => TypeError::OutOfFuel,
    }
}

struct Checker<'a, 'f> {
    sig: &'a CheckedSignature,
    fuel: &'f mut Fuel,
}

impl Checker<'_, '_> {
    fn types_equal(
        &mut self,
        g: &Context,
        a: &Family,
        b: &Family,
    ) -> std::result::Result<(), EqError> {
        equality::fam_eq(
            self.sig,
            &erase_context(g),
            a,
            b,
            &SimpleKind::TypeMinus,
            self.fuel,
        )
    }

    fn object(&mut self, g: &mut Context, m: &Object) -> Result<Family> {
        match m {
            Object::Var(x) => g
                .lookup(x)
                .cloned()
                .ok_or_else(|| TypeError::UnboundVariable(x.clone())),
            Object::Const(c) => match self.sig.lookup(c) {
                Some(Classifier::Family(a)) => Ok(a.clone()),
                Some(Classifier::Kind(_)) => Err(TypeError::FamilyUsedAsObject(c.clone())),
                None => Err(TypeError::UnknownConstant(c.clone())),
            },
            Object::Bound(i) => Err(TypeError::LooseIndex(*i)),
            Object::App(m1, m2) => {
                let fun_ty = self.object(g, m1)?;
                let Family::Pi(_, dom, cod) = &fun_ty else {
                    return Err(TypeError::NotAFunction {
                        term: (**m1).clone(),
                        ty: fun_ty,
                    });
                };
                let arg_ty = self.object(g, m2)?;
                self.types_equal(g, dom, &arg_ty).map_err(|e| {
                    from_eq(e, |mismatch| TypeError::ArgumentMismatch {
                        arg: (**m2).clone(),
                        expected: (**dom).clone(),
                        found: arg_ty.clone(),
                        mismatch,
                    })
                })?;
                Ok(cod.instantiate(m2))
            }
            Object::Lam(b, ann, body) => {
                self.expect_type(g, ann)?;
                let x = Var::fresh(b.name());
                let mark = g.len();
                g.push(x.clone(), (**ann).clone());
                let body_ty = self.object(g, &body.instantiate(&Object::Var(x.clone())));
                g.truncate(mark);
                let body_ty = body_ty?;
                Ok(Family::Pi(b.clone(), ann.clone(), body_ty.close(&x).into()))
            }
        }
    }

    fn family(&mut self, g: &mut Context, a: &Family) -> Result<Kind> {
        match a {
            Family::Const(p) => match self.sig.lookup(p) {
                Some(Classifier::Kind(k)) => Ok(k.clone()),
                Some(Classifier::Family(_)) => Err(TypeError::ObjectUsedAsFamily(p.clone())),
                None => Err(TypeError::UnknownConstant(p.clone())),
            },
            Family::App(f, m) => {
                let kind = self.family(g, f)?;
                let Kind::Pi(_, dom, cod) = &kind else {
                    return Err(TypeError::FamilyNotAFunction {
                        family: (**f).clone(),
                        kind,
                    });
                };
                let arg_ty = self.object(g, m)?;
                self.types_equal(g, dom, &arg_ty).map_err(|e| {
                    from_eq(e, |mismatch| TypeError::ArgumentMismatch {
                        arg: (**m).clone(),
                        expected: (**dom).clone(),
                        found: arg_ty.clone(),
                        mismatch,
                    })
                })?;
                Ok(cod.instantiate(m))
            }
            Family::Pi(b, a1, a2) => {
                self.expect_type(g, a1)?;
                let x = Var::fresh(b.name());
                let mark = g.len();
                g.push(x.clone(), (**a1).clone());
                let r = self.expect_type(g, &a2.instantiate(&Object::Var(x)));
                g.truncate(mark);
                r.map(|()| Kind::Type)
            }
        }
    }

    fn expect_type(&mut self, g: &mut Context, a: &Family) -> Result<()> {
        match self.family(g, a)? {
            Kind::Type => Ok(()),
            kind => Err(TypeError::NotAType {
                family: a.clone(),
                kind,
            }),
        }
    }

    fn kind(&mut self, g: &mut Context, k: &Kind) -> Result<()> {
        match k {
            Kind::Type => Ok(()),
            Kind::Pi(b, a, k2) => {
                self.expect_type(g, a)?;
                let x = Var::fresh(b.name());
                let mark = g.len();
                g.push(x.clone(), (**a).clone());
                let r = self.kind(g, &k2.instantiate(&Object::Var(x)));
                g.truncate(mark);
                r
            }
        }
    }
}

/// `Γ ⊢ M ⇒ A`
pub fn synth_object(
    sig: &CheckedSignature,
    g: &Context,
    m: &Object,
    fuel: &mut Fuel,
) -> std::result::Result<Family, Diagnostic> {
    Checker { sig, fuel }
        .object(&mut g.clone(), m)
        .map_err(|e| Diagnostic::new(Judgment::SynthObject, e))
}

/// `Γ ⊢ A ⇒ K`
pub fn synth_family(
    sig: &CheckedSignature,
    g: &Context,
    a: &Family,
    fuel: &mut Fuel,
) -> std::result::Result<Kind, Diagnostic> {
    Checker { sig, fuel }
        .family(&mut g.clone(), a)
        .map_err(|e| Diagnostic::new(Judgment::SynthFamily, e))
}

/// `Γ ⊢ K ⇒ kind`
pub fn synth_kind(
    sig: &CheckedSignature,
    g: &Context,
    k: &Kind,
    fuel: &mut Fuel,
) -> std::result::Result<(), Diagnostic> {
    Checker { sig, fuel }
        .kind(&mut g.clone(), k)
        .map_err(|e| Diagnostic::new(Judgment::SynthKind, e))
}

/// Validates declarations in order, each against its prefix.
pub fn check_signature(decls: &Signature) -> std::result::Result<CheckedSignature, Diagnostic> {
    check_signature_with(decls, &mut Fuel::default())
}

pub fn check_signature_with(
    decls: &Signature,
    fuel: &mut Fuel,
) -> std::result::Result<CheckedSignature, Diagnostic> {
    let mut checked = CheckedSignature::empty();
    for decl in &decls.decls {
        let here = |e: TypeError| {
            Diagnostic::new(Judgment::CheckSignature, e).at(decl.name.to_string(), decl.span)
        };
        if checked.lookup(&decl.name).is_some() {
            return Err(here(TypeError::DuplicateConstant(decl.name.clone())));
        }
        let mut checker = Checker {
            sig: &checked,
            fuel: &mut *fuel,
        };
        let mut g = Context::new();
        match &decl.classifier {
            Classifier::Kind(k) => checker.kind(&mut g, k),
            Classifier::Family(a) => checker.expect_type(&mut g, a),
        }
        .map_err(here)?;
        checked.push_unchecked(decl.clone());
    }
    Ok(checked)
}

/// `⊢ Γ ctx`: each declared family has kind `type` in the prefix.
pub fn check_context(
    sig: &CheckedSignature,
    g: &Context,
    fuel: &mut Fuel,
) -> std::result::Result<(), Diagnostic> {
    let mut seen = HashSet::new();
    let mut prefix = Context::new();
    let mut checker = Checker { sig, fuel };
    for (x, a) in g.entries() {
        let here =
            |e: TypeError| Diagnostic::new(Judgment::CheckContext, e).at(x.to_string(), None);
        if !seen.insert(x.clone()) {
            return Err(here(TypeError::DuplicateVariable(x.clone())));
        }
        checker.expect_type(&mut prefix, a).map_err(here)?;
        prefix.push(x.clone(), a.clone());
    }
    Ok(())
}

/// `Γ ⊢ A : type`, as a diagnostic-producing check.
pub fn check_type(
    sig: &CheckedSignature,
    g: &Context,
    a: &Family,
    fuel: &mut Fuel,
) -> std::result::Result<(), Diagnostic> {
    Checker { sig, fuel }
        .expect_type(&mut g.clone(), a)
        .map_err(|e| Diagnostic::new(Judgment::SynthFamily, e))
}

/// Decides `Γ ⊢ M : A` by synthesizing a type for `m` and comparing it
/// with `a`. Assumes `a` has kind `type` under `g`.
pub fn check_object(
    sig: &CheckedSignature,
    g: &Context,
    m: &Object,
    a: &Family,
    fuel: &mut Fuel,
) -> std::result::Result<(), Diagnostic> {
    let mut checker = Checker { sig, fuel };
    let found = checker
        .object(&mut g.clone(), m)
        .map_err(|e| Diagnostic::new(Judgment::CheckObject, e))?;
    checker.types_equal(g, &found, a).map_err(|e| {
        Diagnostic::new(
            Judgment::CheckObject,
            from_eq(e, |mismatch| TypeError::TypeMismatch {
                term: m.clone(),
                expected: a.clone(),
                found: found.clone(),
                mismatch,
            }),
        )
    })
}

/// Outcome of a well-typed equality query.
#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    Equal,
    NotEqual(Mismatch),
}

impl Verdict {
    pub fn is_equal(&self) -> bool {
        matches!(self, Verdict::Equal)
    }
}

/// Decides `Γ ⊢ M = N : A`. Both operands are type-checked first; an
/// ill-typed operand is reported as a diagnostic rather than a verdict.
pub fn def_equal_objects(
    sig: &CheckedSignature,
    g: &Context,
    m: &Object,
    n: &Object,
    a: &Family,
    fuel: &mut Fuel,
) -> std::result::Result<Verdict, Diagnostic> {
    check_object(sig, g, m, a, fuel)?;
    check_object(sig, g, n, a, fuel)?;
    match equality::obj_eq(sig, &erase_context(g), m, n, &erase_family(a), fuel) {
        Ok(()) => Ok(Verdict::Equal),
        Err(EqError::Mismatch(mm)) => Ok(Verdict::NotEqual(mm)),
        Err(EqError::OutOfFuel(_)) => {
            Err(Diagnostic::new(Judgment::DefEqual, TypeError::OutOfFuel))
        }
    }
}
