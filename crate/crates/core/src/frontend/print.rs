//! Pretty-printing with minimal parentheses.
//!
//! Binder names come from the stored hints, renamed only when a hint would
//! capture a name that occurs free in the binder's scope.

use std::collections::HashSet;
use std::fmt::{self, Write};

use crate::canonical::{QuasiAtomic, QuasiCanonical, Unlabeled};
use crate::syntax::{Classifier, Family, Kind, Object, Occurrence, Signature, Term};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Prec {
    /// Binders and arrows: extend as far right as possible.
    Low,
    /// Function position of an application, left side of an arrow.
    App,
    /// Argument position.
    Atom,
}

/// Names of the enclosing binders, innermost last.
#[derive(Default)]
struct Names(Vec<String>);

impl Names {
    fn bound(&self, i: u32) -> String {
        let i = i as usize;
        if i < self.0.len() {
            self.0[self.0.len() - 1 - i].clone()
        } else {
            format!("#{i}")
        }
    }
}

/// A term that can report which printed names occur free in it.
trait Scoped {
    /// Collects names of free variables, constants, and enclosing binders
    /// referenced from `depth` binders deep.
    fn names(&self, depth: u32, env: &Names, out: &mut HashSet<String>);
}

fn outer(i: u32, depth: u32, env: &Names, out: &mut HashSet<String>) {
    if i >= depth {
        out.insert(env.bound(i - depth));
    }
}

impl Scoped for Object {
    fn names(&self, depth: u32, env: &Names, out: &mut HashSet<String>) {
        match self {
            Object::Bound(i) => outer(*i, depth, env, out),
            Object::Var(x) => {
                out.insert(x.to_string());
            }
            Object::Const(c) => {
                out.insert(c.to_string());
            }
            Object::Lam(_, a, m) => {
                a.names(depth, env, out);
                m.names(depth + 1, env, out);
            }
            Object::App(m, n) => {
                m.names(depth, env, out);
                n.names(depth, env, out);
            }
        }
    }
}

impl Scoped for Family {
    fn names(&self, depth: u32, env: &Names, out: &mut HashSet<String>) {
        match self {
            Family::Const(c) => {
                out.insert(c.to_string());
            }
            Family::App(a, m) => {
                a.names(depth, env, out);
                m.names(depth, env, out);
            }
            Family::Pi(_, a, b) => {
                a.names(depth, env, out);
                b.names(depth + 1, env, out);
            }
        }
    }
}

impl Scoped for Kind {
    fn names(&self, depth: u32, env: &Names, out: &mut HashSet<String>) {
        if let Kind::Pi(_, a, k) = self {
            a.names(depth, env, out);
            k.names(depth + 1, env, out);
        }
    }
}

impl Scoped for QuasiCanonical {
    fn names(&self, depth: u32, env: &Names, out: &mut HashSet<String>) {
        match self {
            QuasiCanonical::Atomic(a) => a.names(depth, env, out),
            QuasiCanonical::Lam(_, m) => m.names(depth + 1, env, out),
        }
    }
}

impl Scoped for QuasiAtomic {
    fn names(&self, depth: u32, env: &Names, out: &mut HashSet<String>) {
        match self {
            QuasiAtomic::Bound(i) => outer(*i, depth, env, out),
            QuasiAtomic::Var(x) => {
                out.insert(x.to_string());
            }
            QuasiAtomic::Const(c) => {
                out.insert(c.to_string());
            }
            QuasiAtomic::App(f, a) => {
                f.names(depth, env, out);
                a.names(depth, env, out);
            }
        }
    }
}

impl Scoped for Unlabeled {
    fn names(&self, depth: u32, env: &Names, out: &mut HashSet<String>) {
        match self {
            Unlabeled::Bound(i) => outer(*i, depth, env, out),
            Unlabeled::Var(x) => {
                out.insert(x.to_string());
            }
            Unlabeled::Const(c) => {
                out.insert(c.to_string());
            }
            Unlabeled::Lam(_, m) => m.names(depth + 1, env, out),
            Unlabeled::App(f, a) => {
                f.names(depth, env, out);
                a.names(depth, env, out);
            }
        }
    }
}

/// Picks a display name for a binder whose scope is `body`.
fn choose(hint: &str, body: &dyn Scoped, env: &Names) -> String {
    let mut used = HashSet::new();
    body.names(1, env, &mut used);
    let base = if hint.is_empty() || hint == "_" {
        "x"
    } else {
        hint
    };
    if !used.contains(base) {
        return base.to_string();
    }
    (1..)
        .map(|k| format!("{base}{k}"))
        .find(|n| !used.contains(n))
        .unwrap()
}

fn mentions_index<T: Term>(body: &T, i: u32) -> bool {
    let mut hit = false;
    body.visit_vars(0, &mut |occ, depth| {
        if let Occurrence::Bound(j) = occ {
            hit |= j == i + depth;
        }
    });
    hit
}

struct Printer<'w, W> {
    out: &'w mut W,
    env: Names,
}

impl<W: Write> Printer<'_, W> {
    fn paren(&mut self, open: bool, f: impl FnOnce(&mut Self) -> fmt::Result) -> fmt::Result {
        if open {
            self.out.write_char('(')?;
        }
        f(self)?;
        if open {
            self.out.write_char(')')?;
        }
        Ok(())
    }

    fn under(&mut self, name: String, f: impl FnOnce(&mut Self) -> fmt::Result) -> fmt::Result {
        self.env.0.push(name);
        let r = f(self);
        self.env.0.pop();
        r
    }

    fn object(&mut self, m: &Object, prec: Prec) -> fmt::Result {
        match m {
            Object::Bound(i) => write!(self.out, "{}", self.env.bound(*i)),
            Object::Var(x) => write!(self.out, "{x}"),
            Object::Const(c) => write!(self.out, "{c}"),
            Object::Lam(b, a, body) => self.paren(prec > Prec::Low, |p| {
                let x = choose(b.name(), &**body, &p.env);
                write!(p.out, "[{x}:")?;
                p.family(a, Prec::Low)?;
                write!(p.out, "] ")?;
                p.under(x, |p| p.object(body, Prec::Low))
            }),
            Object::App(f, a) => self.paren(prec > Prec::App, |p| {
                p.object(f, Prec::App)?;
                p.out.write_char(' ')?;
                p.object(a, Prec::Atom)
            }),
        }
    }

    fn family(&mut self, a: &Family, prec: Prec) -> fmt::Result {
        match a {
            Family::Const(c) => write!(self.out, "{c}"),
            Family::App(f, m) => self.paren(prec > Prec::App, |p| {
                p.family(f, Prec::App)?;
                p.out.write_char(' ')?;
                p.object(m, Prec::Atom)
            }),
            Family::Pi(b, dom, cod) => self.paren(prec > Prec::Low, |p| {
                if mentions_index(&**cod, 0) {
                    let x = choose(b.name(), &**cod, &p.env);
                    write!(p.out, "{{{x}:")?;
                    p.family(dom, Prec::Low)?;
                    write!(p.out, "}} ")?;
                    p.under(x, |p| p.family(cod, Prec::Low))
                } else {
                    p.family(dom, Prec::App)?;
                    write!(p.out, " -> ")?;
                    p.under("_".into(), |p| p.family(cod, Prec::Low))
                }
            }),
        }
    }

    fn kind(&mut self, k: &Kind, prec: Prec) -> fmt::Result {
        match k {
            Kind::Type => write!(self.out, "type"),
            Kind::Pi(b, dom, cod) => self.paren(prec > Prec::Low, |p| {
                if mentions_index(&**cod, 0) {
                    let x = choose(b.name(), &**cod, &p.env);
                    write!(p.out, "{{{x}:")?;
                    p.family(dom, Prec::Low)?;
                    write!(p.out, "}} ")?;
                    p.under(x, |p| p.kind(cod, Prec::Low))
                } else {
                    p.family(dom, Prec::App)?;
                    write!(p.out, " -> ")?;
                    p.under("_".into(), |p| p.kind(cod, Prec::Low))
                }
            }),
        }
    }

    fn canonical(&mut self, q: &QuasiCanonical, prec: Prec) -> fmt::Result {
        match q {
            QuasiCanonical::Atomic(a) => self.atomic(a, prec),
            QuasiCanonical::Lam(b, body) => self.paren(prec > Prec::Low, |p| {
                let x = choose(b.name(), &**body, &p.env);
                write!(p.out, "[{x}] ")?;
                p.under(x, |p| p.canonical(body, Prec::Low))
            }),
        }
    }

    fn atomic(&mut self, a: &QuasiAtomic, prec: Prec) -> fmt::Result {
        match a {
            QuasiAtomic::Bound(i) => write!(self.out, "{}", self.env.bound(*i)),
            QuasiAtomic::Var(x) => write!(self.out, "{x}"),
            QuasiAtomic::Const(c) => write!(self.out, "{c}"),
            QuasiAtomic::App(f, arg) => self.paren(prec > Prec::App, |p| {
                p.atomic(f, Prec::App)?;
                p.out.write_char(' ')?;
                p.canonical(arg, Prec::Atom)
            }),
        }
    }

    fn unlabeled(&mut self, m: &Unlabeled, prec: Prec) -> fmt::Result {
        match m {
            Unlabeled::Bound(i) => write!(self.out, "{}", self.env.bound(*i)),
            Unlabeled::Var(x) => write!(self.out, "{x}"),
            Unlabeled::Const(c) => write!(self.out, "{c}"),
            Unlabeled::Lam(b, body) => self.paren(prec > Prec::Low, |p| {
                let x = choose(b.name(), &**body, &p.env);
                write!(p.out, "[{x}] ")?;
                p.under(x, |p| p.unlabeled(body, Prec::Low))
            }),
            Unlabeled::App(f, a) => self.paren(prec > Prec::App, |p| {
                p.unlabeled(f, Prec::App)?;
                p.out.write_char(' ')?;
                p.unlabeled(a, Prec::Atom)
            }),
        }
    }
}

fn printer<W: Write>(out: &mut W) -> Printer<'_, W> {
    Printer {
        out,
        env: Names::default(),
    }
}

impl fmt::Display for Object {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        printer(f).object(self, Prec::Low)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        printer(f).family(self, Prec::Low)
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        printer(f).kind(self, Prec::Low)
    }
}

impl fmt::Display for QuasiCanonical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        printer(f).canonical(self, Prec::Low)
    }
}

impl fmt::Display for Unlabeled {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        printer(f).unlabeled(self, Prec::Low)
    }
}

/// One declaration per line, in source order.
pub fn print_signature(sig: &Signature) -> String {
    let mut s = String::new();
    for d in &sig.decls {
        match &d.classifier {
            Classifier::Kind(k) => writeln!(s, "{} : {k}.", d.name),
            Classifier::Family(a) => writeln!(s, "{} : {a}.", d.name),
        }
        .unwrap();
    }
    s
}
