//! A kernel for the LF logical framework.
//!
//! Signatures are parsed and validated, definitional equality is decided by
//! a type-directed algorithm over erased simple types, types are synthesized
//! bottom-up, and quasi-canonical forms are extracted from equality
//! derivations. [`adequacy_fol`] encodes first-order logic as an example
//! object language.

#![allow(clippy::result_large_err)]

pub mod adequacy_fol;
pub mod canonical;
pub mod equality;
pub mod erasure;
pub mod frontend;
pub mod reduction;
pub mod syntax;
pub mod typecheck;

pub use canonical::{canonicalize, elaborate_qc, qc_extract, QuasiAtomic, QuasiCanonical};
pub use equality::{fam_eq, kind_eq, obj_eq, EqError, Mismatch};
pub use erasure::{erase_context, erase_family, erase_kind, SimpleContext, SimpleKind, SimpleType};
pub use frontend::ParseError;
pub use reduction::{whnf, whr_step, Fuel, OutOfFuel};
pub use syntax::{Binder, Classifier, Context, Decl, Family, Kind, Object, Signature, Span, Var};
pub use typecheck::{
    check_context, check_object, check_signature, def_equal_objects, synth_family, synth_kind,
    synth_object, CheckedSignature, Diagnostic, TypeError, Verdict,
};
