//! Reference decision procedure for definitional equality: full beta
//! normalization on plain de Bruijn terms, then eta expansion to the erased
//! type, then syntactic comparison. Shares no code with the kernel beyond
//! reading its syntax trees.

use std::collections::HashMap;

use lf_kernel::canonical::{QuasiAtomic, QuasiCanonical};
use lf_kernel::syntax::{Classifier, Context, Family, Object, Signature};

pub const ORACLE_FUEL: u64 = 100_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tm {
    Idx(usize),
    Free(String, u64),
    Con(String),
    Lam(Box<Tm>),
    App(Box<Tm>, Box<Tm>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Ty {
    Base(String),
    Arr(Box<Ty>, Box<Ty>),
}

pub fn ty_of(a: &Family) -> Ty {
    match a {
        Family::Const(c) => Ty::Base(c.to_string()),
        Family::App(f, _) => ty_of(f),
        Family::Pi(_, d, c) => Ty::Arr(Box::new(ty_of(d)), Box::new(ty_of(c))),
    }
}

pub fn tm_of(m: &Object) -> Tm {
    match m {
        Object::Bound(i) => Tm::Idx(*i as usize),
        Object::Var(x) => Tm::Free(x.name().to_string(), x.id()),
        Object::Const(c) => Tm::Con(c.to_string()),
        Object::Lam(_, _, b) => Tm::Lam(Box::new(tm_of(b))),
        Object::App(f, a) => Tm::App(Box::new(tm_of(f)), Box::new(tm_of(a))),
    }
}

pub fn tm_of_qc(q: &QuasiCanonical) -> Tm {
    match q {
        QuasiCanonical::Lam(_, b) => Tm::Lam(Box::new(tm_of_qc(b))),
        QuasiCanonical::Atomic(a) => tm_of_qa(a),
    }
}

fn tm_of_qa(a: &QuasiAtomic) -> Tm {
    match a {
        QuasiAtomic::Bound(i) => Tm::Idx(*i as usize),
        QuasiAtomic::Var(x) => Tm::Free(x.name().to_string(), x.id()),
        QuasiAtomic::Const(c) => Tm::Con(c.to_string()),
        QuasiAtomic::App(f, a) => Tm::App(Box::new(tm_of_qa(f)), Box::new(tm_of_qc(a))),
    }
}

fn shift(t: &Tm, d: usize, cutoff: usize) -> Tm {
    match t {
        Tm::Idx(i) if *i >= cutoff => Tm::Idx(i + d),
        Tm::Lam(b) => Tm::Lam(Box::new(shift(b, d, cutoff + 1))),
        Tm::App(f, a) => Tm::App(Box::new(shift(f, d, cutoff)), Box::new(shift(a, d, cutoff))),
        _ => t.clone(),
    }
}

/// `t[s/j]`, lowering indices above `j`.
fn subst(t: &Tm, j: usize, s: &Tm) -> Tm {
    match t {
        Tm::Idx(i) if *i == j => shift(s, j, 0),
        Tm::Idx(i) if *i > j => Tm::Idx(i - 1),
        Tm::Lam(b) => Tm::Lam(Box::new(subst(b, j + 1, s))),
        Tm::App(f, a) => Tm::App(Box::new(subst(f, j, s)), Box::new(subst(a, j, s))),
        _ => t.clone(),
    }
}

pub fn normalize(t: &Tm, fuel: &mut u64) -> Option<Tm> {
    match t {
        Tm::Lam(b) => Some(Tm::Lam(Box::new(normalize(b, fuel)?))),
        Tm::App(f, a) => match normalize(f, fuel)? {
            Tm::Lam(body) => {
                *fuel = fuel.checked_sub(1)?;
                normalize(&subst(&body, 0, a), fuel)
            }
            f => Some(Tm::App(Box::new(f), Box::new(normalize(a, fuel)?))),
        },
        _ => Some(t.clone()),
    }
}

pub struct Env {
    consts: HashMap<String, Ty>,
    free: HashMap<(String, u64), Ty>,
}

impl Env {
    pub fn new(sig: &Signature, g: &Context) -> Env {
        let consts = sig
            .decls
            .iter()
            .filter_map(|d| match &d.classifier {
                Classifier::Family(a) => Some((d.name.to_string(), ty_of(a))),
                Classifier::Kind(_) => None,
            })
            .collect();
        let free = g
            .entries()
            .iter()
            .map(|(x, a)| ((x.name().to_string(), x.id()), ty_of(a)))
            .collect();
        Env { consts, free }
    }

    fn head_type(&self, h: &Tm, bound: &[Ty]) -> Option<Ty> {
        match h {
            Tm::Idx(i) => bound.len().checked_sub(i + 1).map(|k| bound[k].clone()),
            Tm::Free(x, id) => self.free.get(&(x.clone(), *id)).cloned(),
            Tm::Con(c) => self.consts.get(c).cloned(),
            _ => None,
        }
    }

    /// Eta-long form of a beta-normal term at `ty`.
    pub fn eta_long(&self, t: &Tm, ty: &Ty, bound: &mut Vec<Ty>) -> Option<Tm> {
        match ty {
            Ty::Arr(a, b) => {
                let body = match t {
                    Tm::Lam(body) => (**body).clone(),
                    _ => Tm::App(Box::new(shift(t, 1, 0)), Box::new(Tm::Idx(0))),
                };
                bound.push((**a).clone());
                let r = self.eta_long(&body, b, bound);
                bound.pop();
                Some(Tm::Lam(Box::new(r?)))
            }
            Ty::Base(_) => {
                let mut args = Vec::new();
                let mut h = t;
                while let Tm::App(f, a) = h {
                    args.push(&**a);
                    h = f;
                }
                args.reverse();
                let mut hty = self.head_type(h, bound)?;
                let mut out = h.clone();
                for a in args {
                    let Ty::Arr(dom, cod) = hty else { return None };
                    out = Tm::App(Box::new(out), Box::new(self.eta_long(a, &dom, bound)?));
                    hty = *cod;
                }
                Some(out)
            }
        }
    }

    /// The beta-normal eta-long form of `m` at `ty`, or `None` when fuel
    /// runs out or the term is not simply typed.
    pub fn canonical(&self, m: &Object, ty: &Ty) -> Option<Tm> {
        let mut fuel = ORACLE_FUEL;
        let n = normalize(&tm_of(m), &mut fuel)?;
        self.eta_long(&n, ty, &mut Vec::new())
    }

    pub fn equal(&self, m: &Object, n: &Object, a: &Family) -> Option<bool> {
        let ty = ty_of(a);
        Some(self.canonical(m, &ty)? == self.canonical(n, &ty)?)
    }
}
