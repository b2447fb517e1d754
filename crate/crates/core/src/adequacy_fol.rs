//! First-order terms and formulas (equality, conjunction, universal
//! quantification over user-declared function symbols) and their
//! representation as quasi-canonical LF objects of type `iota` and `o`.
//!
//! A formula with free variables among `x1..xn` corresponds to a
//! quasi-canonical form in the LF context `x1:iota, ..., xn:iota`. The
//! encoding is a bijection; [`decode`] is its inverse.

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::canonical::{QuasiAtomic, QuasiCanonical};
use crate::frontend::lexer::{is_ident_char, is_ident_start, Tok};
use crate::frontend::parse::Parser;
use crate::frontend::ParseError;
use crate::syntax::{Binder, Classifier, Context, Decl, Family, Kind, Signature, Var};
use crate::typecheck::CheckedSignature;

pub const IOTA: &str = "iota";
pub const PROP: &str = "o";
pub const EQ: &str = "eq";
pub const AND: &str = "and";
pub const FORALL: &str = "forall";

const RESERVED: [&str; 6] = [IOTA, PROP, EQ, AND, FORALL, "type"];

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FolTerm {
    Var(String),
    Fun(String, Vec<FolTerm>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FolFormula {
    Eq(FolTerm, FolTerm),
    And(Box<FolFormula>, Box<FolFormula>),
    Forall(String, Box<FolFormula>),
}

/// Either syntactic category.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FolExpr {
    Term(FolTerm),
    Formula(FolFormula),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FolSort {
    /// Terms, represented at `iota`.
    Term,
    /// Formulas, represented at `o`.
    Formula,
}

impl FolSort {
    pub fn family(self) -> Family {
        match self {
            FolSort::Term => Family::constant(IOTA),
            FolSort::Formula => Family::constant(PROP),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum FolError {
    #[error("`{0}` is reserved by the encoding")]
    Reserved(String),
    #[error("`{0}` is not a valid identifier")]
    BadIdentifier(String),
    #[error("function symbol `{0}` is declared twice")]
    DuplicateSymbol(String),
    #[error("unknown function symbol `{0}`")]
    UnknownSymbol(String),
    #[error("`{name}` takes {expected} argument(s), given {found}")]
    Arity {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("variable `{0}` is not in scope")]
    Unbound(String),
    #[error("`{0}` is not the representation of a first-order {1}")]
    Shape(String, &'static str),
    #[error("not a first-order logic signature: {0}")]
    NotFolSignature(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

impl fmt::Display for FolTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FolTerm::Var(x) => write!(f, "{x}"),
            FolTerm::Fun(g, args) if args.is_empty() => write!(f, "{g}"),
            FolTerm::Fun(g, args) => {
                write!(f, "{g}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl fmt::Display for FolFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FolFormula::Eq(l, r) => write!(f, "{l} = {r}"),
            FolFormula::And(l, r) => {
                if matches!(**l, FolFormula::Eq(..)) {
                    write!(f, "{l} & {r}")
                } else {
                    write!(f, "({l}) & {r}")
                }
            }
            FolFormula::Forall(x, body) => write!(f, "forall {x}. {body}"),
        }
    }
}

impl fmt::Display for FolExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FolExpr::Term(t) => t.fmt(f),
            FolExpr::Formula(p) => p.fmt(f),
        }
    }
}

impl FolTerm {
    fn collect_free(&self, bound: &mut Vec<String>, out: &mut Vec<String>) {
        match self {
            FolTerm::Var(x) => {
                if !bound.contains(x) && !out.contains(x) {
                    out.push(x.clone());
                }
            }
            FolTerm::Fun(_, args) => args.iter().for_each(|a| a.collect_free(bound, out)),
        }
    }

    /// `self[t/x]`.
    pub fn subst(&self, x: &str, t: &FolTerm) -> FolTerm {
        match self {
            FolTerm::Var(y) if y == x => t.clone(),
            FolTerm::Var(_) => self.clone(),
            FolTerm::Fun(g, args) => {
                FolTerm::Fun(g.clone(), args.iter().map(|a| a.subst(x, t)).collect())
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            FolTerm::Var(_) => 0,
            FolTerm::Fun(_, args) => 1 + args.iter().map(FolTerm::depth).max().unwrap_or(0),
        }
    }
}

impl FolFormula {
    fn collect_free(&self, bound: &mut Vec<String>, out: &mut Vec<String>) {
        match self {
            FolFormula::Eq(l, r) => {
                l.collect_free(bound, out);
                r.collect_free(bound, out);
            }
            FolFormula::And(l, r) => {
                l.collect_free(bound, out);
                r.collect_free(bound, out);
            }
            FolFormula::Forall(x, body) => {
                bound.push(x.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Free variables in order of first occurrence.
    pub fn free_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    /// `self[t/x]`. The caller guarantees that no variable of `t` is bound
    /// in `self`.
    pub fn subst(&self, x: &str, t: &FolTerm) -> FolFormula {
        match self {
            FolFormula::Eq(l, r) => FolFormula::Eq(l.subst(x, t), r.subst(x, t)),
            FolFormula::And(l, r) => {
                FolFormula::And(Box::new(l.subst(x, t)), Box::new(r.subst(x, t)))
            }
            FolFormula::Forall(y, _) if y == x => self.clone(),
            FolFormula::Forall(y, body) => {
                FolFormula::Forall(y.clone(), Box::new(body.subst(x, t)))
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            FolFormula::Eq(l, r) => 1 + l.depth().max(r.depth()),
            FolFormula::And(l, r) => 1 + l.depth().max(r.depth()),
            FolFormula::Forall(_, body) => 1 + body.depth(),
        }
    }
}

/// Function symbols of a first-order signature with their arities.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FolSignatureTable {
    symbols: Vec<(String, usize)>,
}

fn valid_ident(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if is_ident_start(c)) && cs.all(is_ident_char)
}

impl FolSignatureTable {
    pub fn new<S: Into<String>>(
        symbols: impl IntoIterator<Item = (S, usize)>,
    ) -> Result<Self, FolError> {
        let mut out: Vec<(String, usize)> = Vec::new();
        for (name, arity) in symbols {
            let name = name.into();
            if !valid_ident(&name) {
                return Err(FolError::BadIdentifier(name));
            }
            if RESERVED.contains(&name.as_str()) {
                return Err(FolError::Reserved(name));
            }
            if out.iter().any(|(n, _)| *n == name) {
                return Err(FolError::DuplicateSymbol(name));
            }
            out.push((name, arity));
        }
        Ok(FolSignatureTable { symbols: out })
    }

    pub fn symbols(&self) -> &[(String, usize)] {
        &self.symbols
    }

    pub fn arity(&self, name: &str) -> Option<usize> {
        self.symbols
            .iter()
            .find(|(n, _)| n == name)
            .map(|&(_, a)| a)
    }

    fn is_constant_name(&self, name: &str) -> bool {
        RESERVED.contains(&name) || self.arity(name).is_some()
    }

    /// Recovers the function symbols from a signature produced by
    /// [`gen_lf_signature`], rejecting anything else.
    pub fn from_signature(sig: &CheckedSignature) -> Result<Self, FolError> {
        let iota = Family::constant(IOTA);
        let mut symbols = Vec::new();
        for d in sig.decls() {
            if RESERVED.contains(&&*d.name) {
                continue;
            }
            let Classifier::Family(a) = &d.classifier else {
                return Err(FolError::NotFolSignature(format!(
                    "unexpected family `{}`",
                    d.name
                )));
            };
            let mut arity = 0;
            let mut t = a;
            while let Family::Pi(_, dom, cod) = t {
                if **dom != iota {
                    break;
                }
                arity += 1;
                t = cod;
            }
            symbols.push((d.name.to_string(), arity));
        }
        let table = FolSignatureTable::new(symbols)?;
        let expected = gen_lf_signature(&table);
        let found: Vec<_> = sig
            .decls()
            .iter()
            .map(|d| (&d.name, &d.classifier))
            .collect();
        let wanted: Vec<_> = expected
            .decls
            .iter()
            .map(|d| (&d.name, &d.classifier))
            .collect();
        if found != wanted {
            return Err(FolError::NotFolSignature(
                "declarations differ from the generated signature".into(),
            ));
        }
        Ok(table)
    }
}

fn iota_arrows(n: usize, target: Family) -> Family {
    (0..n).fold(target, |acc, _| Family::arrow(Family::constant(IOTA), acc))
}

/// `iota : type`, `o : type`, one `f : iota -> ... -> iota` per function
/// symbol, then `eq`, `and`, `forall`.
pub fn gen_lf_signature(tbl: &FolSignatureTable) -> Signature {
    let iota = || Family::constant(IOTA);
    let o = || Family::constant(PROP);
    let mut sig = Signature::new();
    sig.push(Decl::family(IOTA, Kind::Type));
    sig.push(Decl::family(PROP, Kind::Type));
    for (f, n) in &tbl.symbols {
        sig.push(Decl::object(f, iota_arrows(*n, iota())));
    }
    sig.push(Decl::object(EQ, iota_arrows(2, o())));
    sig.push(Decl::object(
        AND,
        Family::arrow(o(), Family::arrow(o(), o())),
    ));
    sig.push(Decl::object(
        FORALL,
        Family::arrow(Family::arrow(iota(), o()), o()),
    ));
    sig
}

/// `x1:iota, ..., xn:iota`.
pub fn fol_context(ctx: &[String]) -> Context {
    ctx.iter().fold(Context::new(), |g, x| {
        g.with(Var::named(x.as_str()), Family::constant(IOTA))
    })
}

struct Encoder<'a> {
    tbl: &'a FolSignatureTable,
    ctx: &'a [String],
    bound: Vec<String>,
}

impl Encoder<'_> {
    fn check_var_name(&self, x: &str) -> Result<(), FolError> {
        if self.tbl.is_constant_name(x) {
            Err(FolError::Reserved(x.to_string()))
        } else {
            Ok(())
        }
    }

    fn term(&mut self, t: &FolTerm) -> Result<QuasiCanonical, FolError> {
        match t {
            FolTerm::Var(x) => {
                self.check_var_name(x)?;
                if let Some(i) = self.bound.iter().rev().position(|b| b == x) {
                    Ok(QuasiCanonical::Atomic(QuasiAtomic::Bound(i as u32)))
                } else if self.ctx.contains(x) {
                    Ok(QuasiCanonical::var(x))
                } else {
                    Err(FolError::Unbound(x.clone()))
                }
            }
            FolTerm::Fun(f, args) => {
                let arity = self
                    .tbl
                    .arity(f)
                    .ok_or_else(|| FolError::UnknownSymbol(f.clone()))?;
                if arity != args.len() {
                    return Err(FolError::Arity {
                        name: f.clone(),
                        expected: arity,
                        found: args.len(),
                    });
                }
                let args = args
                    .iter()
                    .map(|a| self.term(a))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(QuasiCanonical::apply(
                    QuasiAtomic::Const(f.as_str().into()),
                    args,
                ))
            }
        }
    }

    fn formula(&mut self, p: &FolFormula) -> Result<QuasiCanonical, FolError> {
        let (head, args) = match p {
            FolFormula::Eq(l, r) => (EQ, vec![self.term(l)?, self.term(r)?]),
            FolFormula::And(l, r) => (AND, vec![self.formula(l)?, self.formula(r)?]),
            FolFormula::Forall(x, body) => {
                self.check_var_name(x)?;
                self.bound.push(x.clone());
                let body = self.formula(body);
                self.bound.pop();
                let lam = QuasiCanonical::Lam(Binder::new(x.as_str()), body?.into());
                (FORALL, vec![lam])
            }
        };
        Ok(QuasiCanonical::apply(QuasiAtomic::Const(head.into()), args))
    }
}

/// The quasi-canonical representation of a term (at `iota`) or formula (at
/// `o`) whose free variables are among `ctx`.
pub fn encode(
    tbl: &FolSignatureTable,
    ctx: &[String],
    e: &FolExpr,
) -> Result<QuasiCanonical, FolError> {
    let mut enc = Encoder {
        tbl,
        ctx,
        bound: Vec::new(),
    };
    for x in ctx {
        enc.check_var_name(x)?;
    }
    match e {
        FolExpr::Term(t) => enc.term(t),
        FolExpr::Formula(p) => enc.formula(p),
    }
}

pub fn encode_term(
    tbl: &FolSignatureTable,
    ctx: &[String],
    t: &FolTerm,
) -> Result<QuasiCanonical, FolError> {
    encode(tbl, ctx, &FolExpr::Term(t.clone()))
}

pub fn encode_formula(
    tbl: &FolSignatureTable,
    ctx: &[String],
    p: &FolFormula,
) -> Result<QuasiCanonical, FolError> {
    encode(tbl, ctx, &FolExpr::Formula(p.clone()))
}

struct Decoder<'a> {
    tbl: &'a FolSignatureTable,
    ctx: &'a [String],
    bound: Vec<String>,
}

impl Decoder<'_> {
    fn shape<T>(&self, q: &QuasiCanonical, what: &'static str) -> Result<T, FolError> {
        Err(FolError::Shape(q.to_string(), what))
    }

    /// Names referenced free in a canonical body sitting under one binder.
    fn free_names(&self, q: &QuasiCanonical, depth: u32, out: &mut HashSet<String>) {
        match q {
            QuasiCanonical::Lam(_, body) => self.free_names(body, depth + 1, out),
            QuasiCanonical::Atomic(a) => self.free_names_atomic(a, depth, out),
        }
    }

    fn free_names_atomic(&self, a: &QuasiAtomic, depth: u32, out: &mut HashSet<String>) {
        match a {
            QuasiAtomic::Bound(i) if *i >= depth => {
                let k = (*i - depth) as usize;
                if k < self.bound.len() {
                    out.insert(self.bound[self.bound.len() - 1 - k].clone());
                }
            }
            QuasiAtomic::Var(x) => {
                out.insert(x.name().to_string());
            }
            QuasiAtomic::App(f, arg) => {
                self.free_names_atomic(f, depth, out);
                self.free_names(arg, depth, out);
            }
            _ => {}
        }
    }

    fn term(&mut self, q: &QuasiCanonical) -> Result<FolTerm, FolError> {
        let QuasiCanonical::Atomic(a) = q else {
            return self.shape(q, "term");
        };
        let (head, args) = a.spine();
        match head {
            QuasiAtomic::Bound(i) if args.is_empty() => {
                let i = *i as usize;
                match self.bound.len().checked_sub(i + 1) {
                    Some(k) => Ok(FolTerm::Var(self.bound[k].clone())),
                    None => self.shape(q, "term"),
                }
            }
            QuasiAtomic::Var(x) if args.is_empty() => {
                if !x.is_generated() && self.ctx.iter().any(|c| c == x.name()) {
                    Ok(FolTerm::Var(x.name().to_string()))
                } else {
                    Err(FolError::Unbound(x.to_string()))
                }
            }
            QuasiAtomic::Const(f) => {
                let arity = self
                    .tbl
                    .arity(f)
                    .ok_or_else(|| FolError::UnknownSymbol(f.to_string()))?;
                if arity != args.len() {
                    return Err(FolError::Arity {
                        name: f.to_string(),
                        expected: arity,
                        found: args.len(),
                    });
                }
                let args = args
                    .into_iter()
                    .map(|a| self.term(a))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(FolTerm::Fun(f.to_string(), args))
            }
            _ => self.shape(q, "term"),
        }
    }

    fn formula(&mut self, q: &QuasiCanonical) -> Result<FolFormula, FolError> {
        let QuasiCanonical::Atomic(a) = q else {
            return self.shape(q, "formula");
        };
        let (head, args) = a.spine();
        let QuasiAtomic::Const(c) = head else {
            return self.shape(q, "formula");
        };
        match (&**c, args.as_slice()) {
            (EQ, [l, r]) => Ok(FolFormula::Eq(self.term(l)?, self.term(r)?)),
            (AND, [l, r]) => Ok(FolFormula::And(
                Box::new(self.formula(l)?),
                Box::new(self.formula(r)?),
            )),
            (FORALL, [QuasiCanonical::Lam(b, body)]) => {
                let mut used = HashSet::new();
                self.free_names(body, 1, &mut used);
                let mut name = b.name().to_string();
                while used.contains(&name)
                    || self.tbl.is_constant_name(&name)
                    || !valid_ident(&name)
                {
                    name = if valid_ident(&name) {
                        format!("{name}'")
                    } else {
                        "x".to_string()
                    };
                }
                self.bound.push(name.clone());
                let body = self.formula(body);
                self.bound.pop();
                Ok(FolFormula::Forall(name, Box::new(body?)))
            }
            _ => self.shape(q, "formula"),
        }
    }
}

/// Inverse of [`encode`]: reads a quasi-canonical form at `iota` or `o`
/// back as a term or formula.
pub fn decode(
    tbl: &FolSignatureTable,
    ctx: &[String],
    q: &QuasiCanonical,
    at: FolSort,
) -> Result<FolExpr, FolError> {
    let mut dec = Decoder {
        tbl,
        ctx,
        bound: Vec::new(),
    };
    match at {
        FolSort::Term => dec.term(q).map(FolExpr::Term),
        FolSort::Formula => dec.formula(q).map(FolExpr::Formula),
    }
}

/// Parses `forall x. P`, `t1 = t2`, `P & Q` (right associative, binds
/// tighter than `forall`) and `f(t1, ..., tn)`. A bare identifier is a
/// constant if the table declares it with arity 0, otherwise a variable.
pub fn parse_formula(tbl: &FolSignatureTable, text: &str) -> Result<FolFormula, FolError> {
    let mut p = Parser::new(text)?;
    let f = formula(tbl, &mut p)?;
    if !p.at_eof() {
        return Err(p.unexpected("end of formula").into());
    }
    Ok(f)
}

pub fn parse_term(tbl: &FolSignatureTable, text: &str) -> Result<FolTerm, FolError> {
    let mut p = Parser::new(text)?;
    let t = term(tbl, &mut p)?;
    if !p.at_eof() {
        return Err(p.unexpected("end of term").into());
    }
    Ok(t)
}

fn formula(tbl: &FolSignatureTable, p: &mut Parser) -> Result<FolFormula, FolError> {
    let lhs = unary(tbl, p)?;
    if *p.peek() == Tok::Amp {
        p.next();
        let rhs = formula(tbl, p)?;
        return Ok(FolFormula::And(Box::new(lhs), Box::new(rhs)));
    }
    Ok(lhs)
}

fn unary(tbl: &FolSignatureTable, p: &mut Parser) -> Result<FolFormula, FolError> {
    match p.peek().clone() {
        Tok::Ident(kw) if kw == FORALL && matches!(p.peek_at(1), Tok::Ident(_)) => {
            p.next();
            let (x, _) = p.ident()?;
            p.expect(Tok::Dot)?;
            Ok(FolFormula::Forall(x, Box::new(formula(tbl, p)?)))
        }
        Tok::LParen => {
            p.next();
            let f = formula(tbl, p)?;
            p.expect(Tok::RParen)?;
            Ok(f)
        }
        _ => {
            let l = term(tbl, p)?;
            p.expect(Tok::Eq)?;
            let r = term(tbl, p)?;
            Ok(FolFormula::Eq(l, r))
        }
    }
}

fn term(tbl: &FolSignatureTable, p: &mut Parser) -> Result<FolTerm, FolError> {
    let (name, _) = p.ident()?;
    if *p.peek() == Tok::LParen {
        p.next();
        let mut args = Vec::new();
        if *p.peek() != Tok::RParen {
            loop {
                args.push(term(tbl, p)?);
                if *p.peek() == Tok::Comma {
                    p.next();
                } else {
                    break;
                }
            }
        }
        p.expect(Tok::RParen)?;
        return Ok(FolTerm::Fun(name, args));
    }
    if tbl.arity(&name).is_some() {
        Ok(FolTerm::Fun(name, Vec::new()))
    } else {
        Ok(FolTerm::Var(name))
    }
}
