//! Text in and out: the `.lf` grammar, the printer, and the command driver.

use std::fmt;

use thiserror::Error;

use crate::syntax::Span;

pub mod driver;
pub mod lexer;
pub mod parse;
pub mod print;

pub use parse::{
    parse, parse_any, parse_context, parse_family, parse_kind, parse_object, parse_quasi_canonical,
    sorts_of, AnyTerm, Sort,
};
pub use print::print_signature;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub struct ParseError {
    pub span: Span,
    pub message: String,
}

impl ParseError {
    pub fn new(span: Span, message: String) -> Self {
        ParseError { span, message }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.span, self.message)
    }
}
