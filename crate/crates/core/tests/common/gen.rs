//! Random well-typed LF signatures, contexts and terms.
//!
//! Signatures are built over base families `b0` and optionally `b1`, an
//! optional dependent family `p : b0 -> type`, and inhabitants `z : b0`,
//! `w : b1`, `k : {x:b0} p x` so that every generated type is inhabited.
//! Terms are produced as tuples of variants that agree definitionally
//! unless a mutation made the components independent.

use std::collections::HashMap;

use lf_kernel::syntax::{
    subst_single, Classifier, Context, Decl, Family, Kind, Object, Signature, Term, Var,
};
use lf_kernel::typecheck::{check_signature, CheckedSignature};
use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const MAX_CONSTANTS: usize = 10;

#[derive(Clone, Debug)]
pub struct World {
    pub sig: Signature,
    pub checked: CheckedSignature,
    pub has_b1: bool,
    pub has_p: bool,
}

fn b0() -> Family {
    Family::constant("b0")
}

fn b1() -> Family {
    Family::constant("b1")
}

fn p_of(m: Object) -> Family {
    Family::app(Family::constant("p"), m)
}

impl World {
    pub fn random(rng: &mut ChaCha8Rng) -> World {
        let has_b1 = rng.gen_bool(0.6);
        let has_p = rng.gen_bool(0.7);
        let mut sig = Signature::new();
        sig.push(Decl::family("b0", Kind::Type));
        if has_b1 {
            sig.push(Decl::family("b1", Kind::Type));
        }
        if has_p {
            sig.push(Decl::family("p", Kind::arrow(b0(), Kind::Type)));
        }
        sig.push(Decl::object("z", b0()));
        if has_b1 {
            sig.push(Decl::object("w", b1()));
        }
        if has_p {
            let x = Var::fresh("x");
            sig.push(Decl::object(
                "k",
                Family::pi(&x, b0(), &p_of(Object::Var(x.clone()))),
            ));
        }
        let mut world = World {
            sig,
            checked: CheckedSignature::empty(),
            has_b1,
            has_p,
        };
        let extra = rng.gen_range(1..=MAX_CONSTANTS - world.sig.len());
        for i in 0..extra {
            let ty = world.constant_type(rng);
            world.sig.push(Decl::object(&format!("c{i}"), ty));
        }
        world.checked = check_signature(&world.sig).expect("generated signature is well-formed");
        world
    }

    pub fn base(&self, rng: &mut ChaCha8Rng) -> Family {
        if self.has_b1 && rng.gen_bool(0.4) {
            b1()
        } else {
            b0()
        }
    }

    /// Simple (non-dependent) types of bounded order, with `p z` as an
    /// extra atom.
    pub fn simple_type(&self, rng: &mut ChaCha8Rng, depth: u32) -> Family {
        if depth == 0 || rng.gen_bool(0.55) {
            if self.has_p && rng.gen_bool(0.2) {
                return p_of(Object::constant("z"));
            }
            return self.base(rng);
        }
        Family::arrow(
            self.simple_type(rng, depth - 1),
            self.simple_type(rng, depth - 1),
        )
    }

    fn constant_type(&self, rng: &mut ChaCha8Rng) -> Family {
        if self.has_p && rng.gen_bool(0.35) {
            let x = Var::fresh("x");
            let px = p_of(Object::Var(x.clone()));
            let cod = match rng.gen_range(0..4) {
                0 => px,
                1 => Family::arrow(px, self.base(rng)),
                2 => Family::arrow(px.clone(), px),
                _ => Family::arrow(self.simple_type(rng, 1), px),
            };
            return Family::pi(&x, b0(), &cod);
        }
        let arity = rng.gen_range(0..=3);
        let mut ty = self.base(rng);
        for _ in 0..arity {
            ty = Family::arrow(self.simple_type(rng, 1), ty);
        }
        ty
    }

    /// A type for test queries: simple, dependent, or `p` applied to a
    /// term in the context.
    pub fn query_type(&self, rng: &mut ChaCha8Rng, ctx: &Context) -> Family {
        match rng.gen_range(0..10) {
            0 if self.has_p => {
                let x = Var::fresh("x");
                Family::pi(&x, b0(), &p_of(Object::Var(x.clone())))
            }
            1 if self.has_p => {
                let b0s: Vec<_> = ctx.entries().iter().filter(|(_, a)| *a == b0()).collect();
                match b0s.choose(rng) {
                    Some((v, _)) => p_of(Object::Var(v.clone())),
                    None => p_of(Object::constant("z")),
                }
            }
            _ => self.simple_type(rng, 2),
        }
    }

    pub fn context(&self, rng: &mut ChaCha8Rng, max: usize) -> Context {
        let mut g = Context::new();
        for i in 0..rng.gen_range(0..=max) {
            let ty = if self.has_p && i > 0 && rng.gen_bool(0.25) {
                let b0s: Vec<_> = g
                    .entries()
                    .iter()
                    .filter(|(_, a)| *a == b0())
                    .map(|(v, _)| v.clone())
                    .collect();
                match b0s.choose(rng) {
                    Some(v) => p_of(Object::Var(v.clone())),
                    None => self.simple_type(rng, 1),
                }
            } else {
                self.simple_type(rng, 1)
            };
            g.push(Var::named(format!("v{i}")), ty);
        }
        g
    }

    pub fn gen<'r>(&self, rng: &'r mut ChaCha8Rng, ctx: &Context) -> Gen<'_, 'r> {
        Gen {
            world: self,
            rng,
            ctx: ctx.clone(),
            mutate: 0.0,
            redex: 0.15,
            eta: 0.5,
        }
    }
}

/// Term generator over a fixed world and a growing local context.
pub struct Gen<'w, 'r> {
    world: &'w World,
    pub rng: &'r mut ChaCha8Rng,
    ctx: Context,
    /// Chance, per node, that the variants are generated independently.
    pub mutate: f64,
    /// Chance, per node, of wrapping in a beta redex.
    pub redex: f64,
    /// Chance that a variant of an eta-short term is eta-expanded.
    pub eta: f64,
}

struct Head {
    head: Object,
    pats: Vec<(Var, Family)>,
    forced: HashMap<Var, Object>,
}

impl Gen<'_, '_> {
    pub fn one(&mut self, a: &Family, depth: u32) -> Object {
        self.variants(a, depth, 1, false).pop().unwrap()
    }

    pub fn pair(&mut self, a: &Family, depth: u32) -> (Object, Object) {
        let mut v = self.variants(a, depth, 2, true);
        let n = v.pop().unwrap();
        (v.pop().unwrap(), n)
    }

    /// `k` objects of type `a`. Without `free` they are definitionally
    /// equal; with it, mutations may make them differ.
    pub fn variants(&mut self, a: &Family, depth: u32, k: usize, free: bool) -> Vec<Object> {
        if free && self.rng.gen_bool(self.mutate) {
            return (0..k).map(|_| self.one(a, depth)).collect();
        }
        if depth > 0 && self.rng.gen_bool(self.redex) {
            return self.redexes(a, depth, k, free);
        }
        match a {
            Family::Pi(_, dom, cod) => {
                if depth > 0 && self.rng.gen_bool(0.35) {
                    if let Some(hs) = self.neutrals(a, depth, k, free) {
                        return hs
                            .into_iter()
                            .map(|h| {
                                if self.rng.gen_bool(self.eta) {
                                    self.eta_expand(h, dom)
                                } else {
                                    h
                                }
                            })
                            .collect();
                    }
                }
                let y = Var::fresh("y");
                self.ctx.push(y.clone(), (**dom).clone());
                let bodies =
                    self.variants(&cod.instantiate(&Object::Var(y.clone())), depth, k, free);
                self.ctx.pop();
                bodies
                    .into_iter()
                    .map(|b| {
                        let label = self.family_variant(dom);
                        Object::lam(&y, label, &b)
                    })
                    .collect()
            }
            _ => self
                .neutrals(a, depth, k, free)
                .expect("every atomic type is inhabited"),
        }
    }

    fn eta_expand(&mut self, h: Object, dom: &Family) -> Object {
        let y = Var::fresh("y");
        Object::lam(&y, dom.clone(), &Object::app(h, Object::Var(y.clone())))
    }

    fn redexes(&mut self, a: &Family, depth: u32, k: usize, free: bool) -> Vec<Object> {
        let b = self.world.simple_type(self.rng, 1);
        let us = self.variants(&b, depth - 1, k, free);
        let y = Var::fresh("y");
        self.ctx.push(y.clone(), b.clone());
        let bodies = self.variants(a, depth - 1, k, free);
        self.ctx.pop();
        us.into_iter()
            .zip(bodies)
            .map(|(u, body)| {
                if self.rng.gen_bool(0.6) {
                    Object::app(Object::lam(&y, b.clone(), &body), u)
                } else {
                    subst_single(&body, &y, &u)
                }
            })
            .collect()
    }

    /// `(λy:b0. m) z`, equal to `m`.
    pub fn object_variant(&mut self, m: &Object) -> Object {
        if self.rng.gen_bool(0.3) {
            let y = Var::fresh("y");
            Object::app(Object::lam(&y, b0(), m), Object::constant("z"))
        } else {
            m.clone()
        }
    }

    /// A family equal to `a` with some object arguments beta-expanded.
    pub fn family_variant(&mut self, a: &Family) -> Family {
        match a {
            Family::Const(_) => a.clone(),
            Family::App(f, m) => {
                Family::App(self.family_variant(f).into(), self.object_variant(m).into())
            }
            Family::Pi(b, d, c) => Family::Pi(
                b.clone(),
                self.family_variant(d).into(),
                self.family_variant(c).into(),
            ),
        }
    }

    fn heads(&self) -> Vec<(Object, Family)> {
        let mut out: Vec<(Object, Family)> = self
            .ctx
            .entries()
            .iter()
            .map(|(x, a)| (Object::Var(x.clone()), a.clone()))
            .collect();
        for d in &self.world.sig.decls {
            if let Classifier::Family(a) = &d.classifier {
                out.push((Object::Const(d.name.clone()), a.clone()));
            }
        }
        out
    }

    fn match_head(&self, head: Object, ty: &Family, target: &Family) -> Option<Head> {
        let mut pats = Vec::new();
        let mut ty = ty.clone();
        loop {
            let mut forced = HashMap::new();
            if match_family(&ty, target, &pats, &mut forced, &self.ctx) {
                return Some(Head { head, pats, forced });
            }
            let Family::Pi(_, d, c) = &ty else {
                return None;
            };
            let x = Var::fresh("m");
            pats.push((x.clone(), (**d).clone()));
            ty = c.instantiate(&Object::Var(x));
        }
    }

    fn neutrals(&mut self, a: &Family, depth: u32, k: usize, free: bool) -> Option<Vec<Object>> {
        let mut cands: Vec<Head> = self
            .heads()
            .into_iter()
            .filter_map(|(h, ty)| self.match_head(h, &ty, a))
            .filter(|h| depth > 0 || h.pats.iter().all(|(x, _)| h.forced.contains_key(x)))
            .collect();
        if cands.is_empty() {
            return None;
        }
        let weights: Vec<usize> = cands.iter().map(|h| 1 + 3 * h.pats.len()).collect();
        let pick = WeightedIndex::new(&weights).unwrap().sample(self.rng);
        let Head { head, pats, forced } = cands.swap_remove(pick);
        let mut spines: Vec<Vec<Object>> = vec![Vec::new(); k];
        let mut done: Vec<(Var, Object)> = Vec::new();
        for (i, (x, dom)) in pats.iter().enumerate() {
            let dom = done
                .iter()
                .fold(dom.clone(), |t, (v, m)| subst_single(&t, v, m));
            let args = if let Some(m) = forced.get(x) {
                (0..k).map(|_| self.object_variant(m)).collect()
            } else {
                let dependent = pats[i + 1..].iter().any(|(_, d)| d.mentions(x)) || a.mentions(x);
                self.variants(&dom, depth - 1, k, free && !dependent)
            };
            done.push((x.clone(), args[0].clone()));
            for (s, m) in spines.iter_mut().zip(args) {
                s.push(m);
            }
        }
        Some(
            spines
                .into_iter()
                .map(|s| Object::apply(head.clone(), s))
                .collect(),
        )
    }
}

fn match_family(
    pat: &Family,
    target: &Family,
    pats: &[(Var, Family)],
    forced: &mut HashMap<Var, Object>,
    ctx: &Context,
) -> bool {
    match (pat, target) {
        (Family::Const(a), Family::Const(b)) => a == b,
        (Family::App(f1, m1), Family::App(f2, m2)) => {
            match_family(f1, f2, pats, forced, ctx) && match_object(m1, m2, pats, forced, ctx)
        }
        (Family::Pi(_, d1, c1), Family::Pi(_, d2, c2)) => {
            if !match_family(d1, d2, pats, forced, ctx) {
                return false;
            }
            let y = Var::fresh("o");
            let y_obj = Object::Var(y);
            match_family(
                &c1.instantiate(&y_obj),
                &c2.instantiate(&y_obj),
                pats,
                forced,
                ctx,
            )
        }
        _ => false,
    }
}

fn match_object(
    pat: &Object,
    target: &Object,
    pats: &[(Var, Family)],
    forced: &mut HashMap<Var, Object>,
    ctx: &Context,
) -> bool {
    if let Object::Var(x) = pat {
        if pats.iter().any(|(p, _)| p == x) {
            if let Some(m) = forced.get(x) {
                return m == target;
            }
            let known = |v: &Var| ctx.lookup(v).is_some() || pats.iter().any(|(p, _)| p == v);
            if !target.free_vars().iter().all(known) {
                return false;
            }
            forced.insert(x.clone(), target.clone());
            return true;
        }
    }
    !pats.iter().any(|(x, _)| pat.mentions(x)) && pat == target
}
