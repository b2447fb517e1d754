//! Weak head reduction.

use thiserror::Error;

use crate::syntax::{Object, Term};

/// A budget of beta steps. Well-typed objects always normalize; the budget
/// only matters for input that has not been checked yet.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fuel {
    remaining: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("reduction budget exhausted")]
pub struct OutOfFuel;

impl Fuel {
    pub const DEFAULT_STEPS: u64 = 1_000_000;

    pub fn new(steps: u64) -> Self {
        Fuel { remaining: steps }
    }

    pub fn remaining(&self) -> u64 {
        self.remaining
    }

    pub fn tick(&mut self) -> Result<(), OutOfFuel> {
        if self.remaining == 0 {
            return Err(OutOfFuel);
        }
        self.remaining -= 1;
        Ok(())
    }
}

impl Default for Fuel {
    fn default() -> Self {
        Fuel::new(Self::DEFAULT_STEPS)
    }
}

/// One step of weak head reduction, or `None` if `m` is weak head normal.
pub fn whr_step(m: &Object) -> Option<Object> {
    match m {
        Object::App(f, arg) => match &**f {
            Object::Lam(_, _, body) => Some(body.instantiate(arg)),
            _ => whr_step(f).map(|f1| Object::App(f1.into(), arg.clone())),
        },
        _ => None,
    }
}

/// Iterates [`whr_step`] until no step applies. Each beta step costs one
/// unit of fuel.
///
/// Works on the spine directly instead of rebuilding the application after
/// every step; the sequence of contractions is the same.
pub fn whnf(m: &Object, fuel: &mut Fuel) -> Result<Object, OutOfFuel> {
    let (head, args) = m.spine();
    if args.is_empty() || !matches!(head, Object::Lam(..)) {
        return Ok(m.clone());
    }
    let mut head = head.clone();
    // arguments still to be applied, innermost first on top
    let mut pending: Vec<Object> = args.into_iter().rev().cloned().collect();
    loop {
        match (&head, pending.last()) {
            (Object::Lam(_, _, body), Some(_)) => {
                fuel.tick()?;
                let arg = pending.pop().unwrap();
                head = body.instantiate(&arg);
            }
            (Object::App(..), Some(_)) | (Object::App(..), None) => {
                let (h, inner) = head.spine();
                if !matches!(h, Object::Lam(..)) || inner.is_empty() {
                    break;
                }
                let h = h.clone();
                pending.extend(inner.into_iter().rev().cloned());
                head = h;
            }
            _ => break,
        }
    }
    Ok(Object::apply(head, pending.into_iter().rev()))
}
