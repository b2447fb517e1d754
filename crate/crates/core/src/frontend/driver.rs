//! Command implementations shared by the `lf` binary and the tests. Each
//! command returns its stdout text or a [`DriverError`] carrying the exit
//! code.

use std::collections::HashMap;
use std::fmt;

use crate::adequacy_fol::{self, FolError, FolExpr, FolSignatureTable, FolSort};
use crate::canonical::{self, CanonError, ElabError};
use crate::reduction::Fuel;
use crate::syntax::{Context, Sym};
use crate::typecheck::{self, CheckedSignature, Diagnostic, Verdict};

use super::parse::{parse, parse_any, parse_context, parse_family, parse_object, AnyTerm, Sort};
use super::print::print_signature;
use super::{sorts_of, ParseError};

#[derive(Debug)]
pub enum DriverError {
    Parse(ParseError),
    Type(Box<Diagnostic>),
    NotEqual(String),
    Fol(String),
    OutOfFuel(String),
}

impl DriverError {
    pub fn exit_code(&self) -> i32 {
        match self {
            DriverError::Parse(_) => 2,
            DriverError::Type(_) | DriverError::NotEqual(_) | DriverError::Fol(_) => 1,
            DriverError::OutOfFuel(_) => 3,
        }
    }
}

impl fmt::Display for DriverError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DriverError::Parse(e) => write!(f, "parse error: {e}"),
            DriverError::Type(d) => write!(f, "{d}"),
            DriverError::NotEqual(m) => write!(f, "{m}"),
            DriverError::Fol(m) => write!(f, "{m}"),
            DriverError::OutOfFuel(m) => write!(f, "out of fuel: {m}"),
        }
    }
}

impl std::error::Error for DriverError {}

impl From<ParseError> for DriverError {
    fn from(e: ParseError) -> Self {
        DriverError::Parse(e)
    }
}

impl From<Diagnostic> for DriverError {
    fn from(d: Diagnostic) -> Self {
        if d.is_out_of_fuel() {
            DriverError::OutOfFuel(d.to_string())
        } else {
            DriverError::Type(Box::new(d))
        }
    }
}

impl From<CanonError> for DriverError {
    fn from(e: CanonError) -> Self {
        match e {
            CanonError::IllTyped(d) => d.into(),
            CanonError::Extraction(e) if e.mismatch().is_none() => {
                DriverError::OutOfFuel(e.to_string())
            }
            CanonError::Extraction(e) => DriverError::NotEqual(e.to_string()),
        }
    }
}

impl From<ElabError> for DriverError {
    fn from(e: ElabError) -> Self {
        match e {
            ElabError::Typing(d) => d.into(),
            other => DriverError::Fol(other.to_string()),
        }
    }
}

impl From<FolError> for DriverError {
    fn from(e: FolError) -> Self {
        match e {
            FolError::Parse(p) => DriverError::Parse(p),
            other => DriverError::Fol(other.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, DriverError>;

/// A checked signature together with an ambient context.
pub struct Session {
    sig: CheckedSignature,
    sorts: HashMap<Sym, Sort>,
    ctx: Context,
    steps: u64,
}

impl Session {
    /// Parses and checks a signature file.
    pub fn load(text: &str, steps: u64) -> Result<Self> {
        let parsed = parse(text)?;
        let sig = typecheck::check_signature_with(&parsed, &mut Fuel::new(steps))?;
        let sorts = sorts_of(sig.decls());
        Ok(Session {
            sig,
            sorts,
            ctx: Context::new(),
            steps,
        })
    }

    pub fn signature(&self) -> &CheckedSignature {
        &self.sig
    }

    pub fn context(&self) -> &Context {
        &self.ctx
    }

    fn fuel(&self) -> Fuel {
        Fuel::new(self.steps)
    }

    /// Parses `x:A, y:B` and checks it is a valid context.
    pub fn set_context(&mut self, text: &str) -> Result<()> {
        let g = parse_context(text, &self.sorts)?;
        typecheck::check_context(&self.sig, &g, &mut self.fuel())?;
        self.ctx = g;
        Ok(())
    }

    pub fn check(&self) -> String {
        format!("ok: {} declarations\n", self.sig.len())
    }

    /// Synthesizes the classifier of an object, family or kind.
    pub fn synth(&self, term: &str) -> Result<String> {
        let mut fuel = self.fuel();
        Ok(match parse_any(term, &self.sorts, &self.ctx)? {
            AnyTerm::Object(m) => {
                typecheck::synth_object(&self.sig, &self.ctx, &m, &mut fuel)?.to_string()
            }
            AnyTerm::Family(a) => {
                typecheck::synth_family(&self.sig, &self.ctx, &a, &mut fuel)?.to_string()
            }
            AnyTerm::Kind(k) => {
                typecheck::synth_kind(&self.sig, &self.ctx, &k, &mut fuel)?;
                "kind".to_string()
            }
        } + "\n")
    }

    /// Checks `m` against the type `ty`.
    pub fn check_object(&self, m: &str, ty: &str) -> Result<()> {
        let a = parse_family(ty, &self.sorts, &self.ctx)?;
        let m = parse_object(m, &self.sorts, &self.ctx)?;
        let mut fuel = self.fuel();
        typecheck::check_type(&self.sig, &self.ctx, &a, &mut fuel)?;
        typecheck::check_object(&self.sig, &self.ctx, &m, &a, &mut fuel)?;
        Ok(())
    }

    pub fn eq(&self, ty: &str, m: &str, n: &str) -> Result<String> {
        let a = parse_family(ty, &self.sorts, &self.ctx)?;
        let m = parse_object(m, &self.sorts, &self.ctx)?;
        let n = parse_object(n, &self.sorts, &self.ctx)?;
        let mut fuel = self.fuel();
        typecheck::check_type(&self.sig, &self.ctx, &a, &mut fuel)?;
        match typecheck::def_equal_objects(&self.sig, &self.ctx, &m, &n, &a, &mut fuel)? {
            Verdict::Equal => Ok("equal\n".to_string()),
            Verdict::NotEqual(mm) => Err(DriverError::NotEqual(format!("not equal: {mm}"))),
        }
    }

    pub fn canon(&self, ty: &str, m: &str) -> Result<String> {
        let a = parse_family(ty, &self.sorts, &self.ctx)?;
        let m = parse_object(m, &self.sorts, &self.ctx)?;
        let mut fuel = self.fuel();
        typecheck::check_type(&self.sig, &self.ctx, &a, &mut fuel)?;
        let q = canonical::canonicalize(&self.sig, &self.ctx, &m, &a, &mut fuel)?;
        Ok(format!("{q}\n"))
    }

    /// Encodes a formula, elaborates it to a labelled object, type-checks
    /// it at `o`, canonicalizes it back and decodes the result.
    pub fn fol_demo(&self, formula: &str) -> Result<String> {
        let tbl = FolSignatureTable::from_signature(&self.sig)?;
        let p = adequacy_fol::parse_formula(&tbl, formula)?;
        let vars = p.free_vars();
        let g = adequacy_fol::fol_context(&vars);
        let o = FolSort::Formula.family();
        let mut fuel = self.fuel();
        let q = adequacy_fol::encode_formula(&tbl, &vars, &p)?;
        let m = canonical::elaborate_qc(&self.sig, &g, &q, &o, &mut fuel)?;
        typecheck::check_object(&self.sig, &g, &m, &o, &mut fuel)?;
        let back = canonical::canonicalize(&self.sig, &g, &m, &o, &mut fuel)?;
        if back != q {
            return Err(DriverError::Fol(format!(
                "canonical form `{back}` differs from encoding `{q}`"
            )));
        }
        let FolExpr::Formula(decoded) = adequacy_fol::decode(&tbl, &vars, &back, FolSort::Formula)?
        else {
            unreachable!("decoding at o yields a formula")
        };
        let mut out = String::new();
        out.push_str(&format!("formula: {p}\n"));
        out.push_str(&format!(
            "context: {}\n",
            vars.iter()
                .map(|x| format!("{x}:iota"))
                .collect::<Vec<_>>()
                .join(", ")
        ));
        out.push_str(&format!("encoded: {q}\n"));
        out.push_str(&format!("object:  {m}\n"));
        out.push_str(&format!("decoded: {decoded}\n"));
        if decoded != p {
            return Err(DriverError::Fol(format!(
                "round trip changed the formula:\n{out}"
            )));
        }
        Ok(out)
    }
}

/// The LF signature for a first-order language, in `.lf` syntax.
pub fn fol_signature_text(symbols: &[(String, usize)]) -> Result<String> {
    let tbl = FolSignatureTable::new(symbols.iter().cloned())?;
    Ok(print_signature(&adequacy_fol::gen_lf_signature(&tbl)))
}
