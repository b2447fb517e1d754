//! Concrete syntax.
//!
//! ```text
//! decl  ::= IDENT ':' term '.'
//! term  ::= '{' IDENT ':' term '}' term        dependent Pi
//!         | '[' IDENT (':' term)? ']' term     lambda (unlabeled in QC forms)
//!         | app ('->' term)?                   non-dependent Pi
//! app   ::= atom atom*
//! atom  ::= IDENT | 'type' | '(' term ')'
//! ```
//!
//! Parsing produces an untyped [`Raw`] tree; [`Resolver`] then sorts it into
//! objects, families and kinds, turning bound names into indices and
//! resolving the rest against the context and the signature.

use std::collections::HashMap;
use std::sync::Arc;

use crate::canonical::{QuasiAtomic, QuasiCanonical};
use crate::syntax::{
    Binder, Classifier, Context, Decl, Family, Kind, Object, Signature, Span, Sym, Var,
};

use super::lexer::{tokenize, Tok};
use super::ParseError;

#[derive(Clone, Debug, PartialEq)]
pub enum Raw {
    Ident(String, Span),
    Type(Span),
    /// `{x:A} B`, or `A -> B` when the name is absent.
    Pi(Option<String>, Box<Raw>, Box<Raw>, Span),
    Lam(String, Option<Box<Raw>>, Box<Raw>, Span),
    App(Box<Raw>, Box<Raw>, Span),
}

impl Raw {
    pub fn span(&self) -> Span {
        match self {
            Raw::Ident(_, s)
            | Raw::Type(s)
            | Raw::Pi(.., s)
            | Raw::Lam(.., s)
            | Raw::App(.., s) => *s,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RawDecl {
    pub name: String,
    pub classifier: Raw,
    pub span: Span,
}

pub(crate) struct Parser {
    toks: Vec<(Tok, Span)>,
    pos: usize,
}

impl Parser {
    pub(crate) fn new(text: &str) -> Result<Self, ParseError> {
        Ok(Parser {
            toks: tokenize(text)?,
            pos: 0,
        })
    }

    pub(crate) fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    pub(crate) fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].0
    }

    pub(crate) fn span(&self) -> Span {
        self.toks[self.pos].1
    }

    pub(crate) fn next(&mut self) -> (Tok, Span) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub(crate) fn expect(&mut self, tok: Tok) -> Result<Span, ParseError> {
        if *self.peek() == tok {
            Ok(self.next().1)
        } else {
            Err(self.unexpected(&tok.describe()))
        }
    }

    pub(crate) fn ident(&mut self) -> Result<(String, Span), ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                let span = self.next().1;
                Ok((s, span))
            }
            _ => Err(self.unexpected("an identifier")),
        }
    }

    pub(crate) fn unexpected(&self, wanted: &str) -> ParseError {
        ParseError::new(
            self.span(),
            format!("expected {wanted}, found {}", self.peek().describe()),
        )
    }

    pub(crate) fn at_eof(&self) -> bool {
        *self.peek() == Tok::Eof
    }

    fn term(&mut self) -> Result<Raw, ParseError> {
        let start = self.span();
        match self.peek() {
            Tok::LBrace => {
                self.next();
                let (x, _) = self.ident()?;
                self.expect(Tok::Colon)?;
                let dom = self.term()?;
                self.expect(Tok::RBrace)?;
                let cod = self.term()?;
                Ok(Raw::Pi(Some(x), Box::new(dom), Box::new(cod), start))
            }
            Tok::LBracket => {
                self.next();
                let (x, _) = self.ident()?;
                let ann = if *self.peek() == Tok::Colon {
                    self.next();
                    Some(Box::new(self.term()?))
                } else {
                    None
                };
                self.expect(Tok::RBracket)?;
                let body = self.term()?;
                Ok(Raw::Lam(x, ann, Box::new(body), start))
            }
            _ => {
                let lhs = self.app()?;
                if *self.peek() == Tok::Arrow {
                    self.next();
                    let rhs = self.term()?;
                    Ok(Raw::Pi(None, Box::new(lhs), Box::new(rhs), start))
                } else {
                    Ok(lhs)
                }
            }
        }
    }

    fn starts_atom(&self) -> bool {
        matches!(self.peek(), Tok::Ident(_) | Tok::Type | Tok::LParen)
    }

    fn app(&mut self) -> Result<Raw, ParseError> {
        let start = self.span();
        let mut t = self.atom()?;
        while self.starts_atom() {
            let arg = self.atom()?;
            t = Raw::App(Box::new(t), Box::new(arg), start);
        }
        Ok(t)
    }

    fn atom(&mut self) -> Result<Raw, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => Ok(Raw::Ident(s, self.next().1)),
            Tok::Type => Ok(Raw::Type(self.next().1)),
            Tok::LParen => {
                self.next();
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            _ => Err(self.unexpected("a term")),
        }
    }

    fn decl(&mut self) -> Result<RawDecl, ParseError> {
        let (name, span) = self.ident()?;
        self.expect(Tok::Colon)?;
        let classifier = self.term()?;
        self.expect(Tok::Dot)?;
        Ok(RawDecl {
            name,
            classifier,
            span,
        })
    }
}

pub fn parse_raw_decls(text: &str) -> Result<Vec<RawDecl>, ParseError> {
    let mut p = Parser::new(text)?;
    let mut out = Vec::new();
    while !p.at_eof() {
        out.push(p.decl()?);
    }
    Ok(out)
}

pub fn parse_raw_term(text: &str) -> Result<Raw, ParseError> {
    let mut p = Parser::new(text)?;
    let t = p.term()?;
    if !p.at_eof() {
        return Err(p.unexpected("end of input"));
    }
    Ok(t)
}

/// `x:A, y:B, ...` (possibly empty).
pub fn parse_raw_context(text: &str) -> Result<Vec<(String, Raw, Span)>, ParseError> {
    let mut p = Parser::new(text)?;
    let mut out = Vec::new();
    if p.at_eof() {
        return Ok(out);
    }
    loop {
        let (x, span) = p.ident()?;
        p.expect(Tok::Colon)?;
        let a = p.term()?;
        out.push((x, a, span));
        match p.peek() {
            Tok::Comma => {
                p.next();
            }
            Tok::Eof => return Ok(out),
            _ => return Err(p.unexpected("`,` or end of input")),
        }
    }
}

/// Which syntactic level a constant lives at.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sort {
    Family,
    Object,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    Object,
    Family,
    Kind,
}

impl Level {
    fn describe(self) -> &'static str {
        match self {
            Level::Object => "an object",
            Level::Family => "a family",
            Level::Kind => "a kind",
        }
    }
}

/// Name resolution: bound names first (innermost wins), then context
/// variables, then constants.
pub struct Resolver<'a> {
    consts: &'a HashMap<Sym, Sort>,
    ctx: HashMap<String, Var>,
    bound: Vec<String>,
}

enum Name {
    Bound(u32),
    Free(Var),
    Const(Sym, Sort),
}

impl<'a> Resolver<'a> {
    pub fn new(consts: &'a HashMap<Sym, Sort>) -> Self {
        Resolver {
            consts,
            ctx: HashMap::new(),
            bound: Vec::new(),
        }
    }

    /// Brings a context variable into scope.
    pub fn declare_var(&mut self, x: &Var) {
        self.ctx.insert(x.name().to_string(), x.clone());
    }

    fn name(&self, s: &str, span: Span) -> Result<Name, ParseError> {
        if let Some(i) = self.bound.iter().rev().position(|b| b == s) {
            return Ok(Name::Bound(i as u32));
        }
        if let Some(x) = self.ctx.get(s) {
            return Ok(Name::Free(x.clone()));
        }
        if let Some((c, sort)) = self.consts.get_key_value(s) {
            return Ok(Name::Const(c.clone(), *sort));
        }
        Err(ParseError::new(span, format!("unbound identifier `{s}`")))
    }

    fn under<T>(&mut self, x: &str, f: impl FnOnce(&mut Self) -> T) -> T {
        self.bound.push(x.to_string());
        let r = f(self);
        self.bound.pop();
        r
    }

    pub fn level(&mut self, t: &Raw) -> Result<Level, ParseError> {
        match t {
            Raw::Ident(s, span) => Ok(match self.name(s, *span)? {
                Name::Bound(_) | Name::Free(_) | Name::Const(_, Sort::Object) => Level::Object,
                Name::Const(_, Sort::Family) => Level::Family,
            }),
            Raw::Type(_) => Ok(Level::Kind),
            Raw::Pi(x, _, cod, _) => {
                let x = x.as_deref().unwrap_or("");
                let cod = self.under(x, |r| r.level(cod))?;
                Ok(if cod == Level::Kind {
                    Level::Kind
                } else {
                    Level::Family
                })
            }
            Raw::Lam(..) => Ok(Level::Object),
            Raw::App(f, _, _) => self.level(f),
        }
    }

    fn mismatch(&mut self, t: &Raw, wanted: Level) -> ParseError {
        let found = self
            .level(t)
            .map(Level::describe)
            .unwrap_or("something else");
        ParseError::new(
            t.span(),
            format!("expected {}, found {found}", wanted.describe()),
        )
    }

    pub fn object(&mut self, t: &Raw) -> Result<Object, ParseError> {
        match t {
            Raw::Ident(s, span) => match self.name(s, *span)? {
                Name::Bound(i) => Ok(Object::Bound(i)),
                Name::Free(x) => Ok(Object::Var(x)),
                Name::Const(c, Sort::Object) => Ok(Object::Const(c)),
                Name::Const(_, Sort::Family) => Err(self.mismatch(t, Level::Object)),
            },
            Raw::Lam(x, Some(ann), body, _) => {
                let ann = self.family(ann)?;
                let body = self.under(x, |r| r.object(body))?;
                Ok(Object::Lam(
                    Binder::new(x.as_str()),
                    Arc::new(ann),
                    Arc::new(body),
                ))
            }
            Raw::Lam(_, None, _, span) => Err(ParseError::new(
                *span,
                "lambda is missing its type label".to_string(),
            )),
            Raw::App(f, a, _) => Ok(Object::app(self.object(f)?, self.object(a)?)),
            Raw::Type(_) | Raw::Pi(..) => Err(self.mismatch(t, Level::Object)),
        }
    }

    pub fn family(&mut self, t: &Raw) -> Result<Family, ParseError> {
        match t {
            Raw::Ident(s, span) => match self.name(s, *span)? {
                Name::Const(c, Sort::Family) => Ok(Family::Const(c)),
                _ => Err(self.mismatch(t, Level::Family)),
            },
            Raw::App(f, a, _) => Ok(Family::app(self.family(f)?, self.object(a)?)),
            Raw::Pi(x, dom, cod, _) => {
                let dom = self.family(dom)?;
                let name = x.as_deref().unwrap_or("");
                let cod = self.under(name, |r| r.family(cod))?;
                Ok(Family::Pi(binder(x), Arc::new(dom), Arc::new(cod)))
            }
            Raw::Type(_) | Raw::Lam(..) => Err(self.mismatch(t, Level::Family)),
        }
    }

    pub fn kind(&mut self, t: &Raw) -> Result<Kind, ParseError> {
        match t {
            Raw::Type(_) => Ok(Kind::Type),
            Raw::Pi(x, dom, cod, _) => {
                let dom = self.family(dom)?;
                let name = x.as_deref().unwrap_or("");
                let cod = self.under(name, |r| r.kind(cod))?;
                Ok(Kind::Pi(binder(x), Arc::new(dom), Arc::new(cod)))
            }
            _ => Err(self.mismatch(t, Level::Kind)),
        }
    }

    /// Quasi-canonical form: unlabeled lambdas over atomic spines.
    pub fn quasi_canonical(&mut self, t: &Raw) -> Result<QuasiCanonical, ParseError> {
        match t {
            Raw::Lam(x, None, body, _) => {
                let body = self.under(x, |r| r.quasi_canonical(body))?;
                Ok(QuasiCanonical::Lam(Binder::new(x.as_str()), Arc::new(body)))
            }
            Raw::Lam(_, Some(_), _, span) => Err(ParseError::new(
                *span,
                "quasi-canonical forms carry no type labels".to_string(),
            )),
            _ => Ok(QuasiCanonical::Atomic(self.quasi_atomic(t)?)),
        }
    }

    fn quasi_atomic(&mut self, t: &Raw) -> Result<QuasiAtomic, ParseError> {
        match t {
            Raw::Ident(s, span) => match self.name(s, *span)? {
                Name::Bound(i) => Ok(QuasiAtomic::Bound(i)),
                Name::Free(x) => Ok(QuasiAtomic::Var(x)),
                Name::Const(c, Sort::Object) => Ok(QuasiAtomic::Const(c)),
                Name::Const(_, Sort::Family) => Err(self.mismatch(t, Level::Object)),
            },
            Raw::App(f, a, _) => Ok(QuasiAtomic::App(
                Arc::new(self.quasi_atomic(f)?),
                Arc::new(self.quasi_canonical(a)?),
            )),
            Raw::Lam(_, _, _, span) => Err(ParseError::new(
                *span,
                "a lambda cannot be applied in a quasi-canonical form".to_string(),
            )),
            Raw::Type(_) | Raw::Pi(..) => Err(self.mismatch(t, Level::Object)),
        }
    }
}

fn binder(x: &Option<String>) -> Binder {
    Binder::new(x.as_deref().unwrap_or("x"))
}

/// Sorts of the constants declared in `sig`; the first declaration of a
/// name wins.
pub fn sorts_of<'a>(decls: impl IntoIterator<Item = &'a Decl>) -> HashMap<Sym, Sort> {
    let mut out = HashMap::new();
    for d in decls {
        let sort = match d.classifier {
            Classifier::Kind(_) => Sort::Family,
            Classifier::Family(_) => Sort::Object,
        };
        out.entry(d.name.clone()).or_insert(sort);
    }
    out
}

/// Parses a signature file. Declarations may only mention constants
/// declared before them. Duplicate names are passed through so that
/// signature checking can report them.
pub fn parse(text: &str) -> Result<Signature, ParseError> {
    let raw = parse_raw_decls(text)?;
    let mut sorts: HashMap<Sym, Sort> = HashMap::new();
    let mut sig = Signature::new();
    for d in raw {
        let mut r = Resolver::new(&sorts);
        let classifier = match r.level(&d.classifier)? {
            Level::Kind => Classifier::Kind(r.kind(&d.classifier)?),
            Level::Family => Classifier::Family(r.family(&d.classifier)?),
            Level::Object => {
                return Err(ParseError::new(
                    d.classifier.span(),
                    format!(
                        "the classifier of `{}` must be a type or a kind, found an object",
                        d.name
                    ),
                ))
            }
        };
        let name: Sym = d.name.as_str().into();
        let sort = match classifier {
            Classifier::Kind(_) => Sort::Family,
            Classifier::Family(_) => Sort::Object,
        };
        sorts.entry(name.clone()).or_insert(sort);
        sig.push(Decl {
            name,
            classifier,
            span: Some(d.span),
        });
    }
    Ok(sig)
}

/// Parses `x:A, y:B, ...` against a signature, each entry seeing the
/// earlier ones.
pub fn parse_context(text: &str, consts: &HashMap<Sym, Sort>) -> Result<Context, ParseError> {
    let mut r = Resolver::new(consts);
    let mut g = Context::new();
    for (x, a, _) in parse_raw_context(text)? {
        let a = r.family(&a)?;
        let x = Var::named(x);
        r.declare_var(&x);
        g.push(x, a);
    }
    Ok(g)
}

fn resolver_for<'a>(consts: &'a HashMap<Sym, Sort>, g: &Context) -> Resolver<'a> {
    let mut r = Resolver::new(consts);
    for (x, _) in g.entries() {
        r.declare_var(x);
    }
    r
}

pub fn parse_object(
    text: &str,
    consts: &HashMap<Sym, Sort>,
    g: &Context,
) -> Result<Object, ParseError> {
    resolver_for(consts, g).object(&parse_raw_term(text)?)
}

pub fn parse_family(
    text: &str,
    consts: &HashMap<Sym, Sort>,
    g: &Context,
) -> Result<Family, ParseError> {
    resolver_for(consts, g).family(&parse_raw_term(text)?)
}

pub fn parse_kind(
    text: &str,
    consts: &HashMap<Sym, Sort>,
    g: &Context,
) -> Result<Kind, ParseError> {
    resolver_for(consts, g).kind(&parse_raw_term(text)?)
}

pub fn parse_quasi_canonical(
    text: &str,
    consts: &HashMap<Sym, Sort>,
    g: &Context,
) -> Result<QuasiCanonical, ParseError> {
    resolver_for(consts, g).quasi_canonical(&parse_raw_term(text)?)
}

/// A parsed term whose level was determined from its shape.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyTerm {
    Object(Object),
    Family(Family),
    Kind(Kind),
}

pub fn parse_any(
    text: &str,
    consts: &HashMap<Sym, Sort>,
    g: &Context,
) -> Result<AnyTerm, ParseError> {
    let raw = parse_raw_term(text)?;
    let mut r = resolver_for(consts, g);
    Ok(match r.level(&raw)? {
        Level::Object => AnyTerm::Object(r.object(&raw)?),
        Level::Family => AnyTerm::Family(r.family(&raw)?),
        Level::Kind => AnyTerm::Kind(r.kind(&raw)?),
    })
}
