//! Random first-order formulas and random quasi-canonical forms over the
//! corresponding LF signature.

use lf_kernel::adequacy_fol::{FolFormula, FolSignatureTable, FolSort, FolTerm, AND, EQ, FORALL};
use lf_kernel::canonical::{QuasiAtomic, QuasiCanonical};
use lf_kernel::syntax::Binder;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const FREE_POOL: [&str; 4] = ["x0", "x1", "x2", "x3"];
const BINDER_POOL: [&str; 6] = ["x0", "x1", "x2", "x3", "y", "z0"];

/// Always contains the constant `c`, plus up to three more symbols.
pub fn table(rng: &mut ChaCha8Rng) -> FolSignatureTable {
    let mut symbols = vec![("c".to_string(), 0)];
    for (i, name) in ["f", "g", "h"].iter().enumerate() {
        if i == 0 || rng.gen_bool(0.5) {
            symbols.push((name.to_string(), rng.gen_range(1..=3)));
        }
    }
    FolSignatureTable::new(symbols).unwrap()
}

pub struct FolGen<'a, 'r> {
    pub tbl: &'a FolSignatureTable,
    pub rng: &'r mut ChaCha8Rng,
    /// Free variable names that may occur.
    pub free: Vec<String>,
    scope: Vec<String>,
}

impl<'a, 'r> FolGen<'a, 'r> {
    pub fn new(tbl: &'a FolSignatureTable, rng: &'r mut ChaCha8Rng, nfree: usize) -> Self {
        let free = FREE_POOL[..nfree].iter().map(|s| s.to_string()).collect();
        FolGen {
            tbl,
            rng,
            free,
            scope: Vec::new(),
        }
    }

    pub fn term(&mut self, depth: usize) -> FolTerm {
        let vars: Vec<String> = self.free.iter().chain(&self.scope).cloned().collect();
        let funs: Vec<(String, usize)> = self
            .tbl
            .symbols()
            .iter()
            .filter(|(_, n)| depth > 0 || *n == 0)
            .cloned()
            .collect();
        if !vars.is_empty() && (depth == 0 || self.rng.gen_bool(0.4)) {
            return FolTerm::Var(vars.choose(self.rng).unwrap().clone());
        }
        let (f, n) = funs.choose(self.rng).unwrap().clone();
        FolTerm::Fun(
            f,
            (0..n).map(|_| self.term(depth.saturating_sub(1))).collect(),
        )
    }

    /// A formula of depth at most `depth` (at least 1).
    pub fn formula(&mut self, depth: usize) -> FolFormula {
        let choice = if depth < 2 {
            0
        } else {
            self.rng.gen_range(0..3)
        };
        match choice {
            0 => {
                let d = depth - 1;
                FolFormula::Eq(self.term(d), self.term(d))
            }
            1 => FolFormula::And(
                Box::new(self.formula(depth - 1)),
                Box::new(self.formula(depth - 1)),
            ),
            _ => {
                let x = BINDER_POOL.choose(self.rng).unwrap().to_string();
                self.scope.push(x.clone());
                let body = self.formula(depth - 1);
                self.scope.pop();
                FolFormula::Forall(x, Box::new(body))
            }
        }
    }
}

/// Random quasi-canonical forms at `iota` or `o` over free variables
/// `ctx`. Binder hints are drawn from a small pool, so they often clash
/// with free and outer bound names.
pub struct QcGen<'a, 'r> {
    pub tbl: &'a FolSignatureTable,
    pub rng: &'r mut ChaCha8Rng,
    pub ctx: Vec<String>,
    bound: u32,
}

impl<'a, 'r> QcGen<'a, 'r> {
    pub fn new(tbl: &'a FolSignatureTable, rng: &'r mut ChaCha8Rng, ctx: Vec<String>) -> Self {
        QcGen {
            tbl,
            rng,
            ctx,
            bound: 0,
        }
    }

    pub fn at(&mut self, sort: FolSort, depth: usize) -> QuasiCanonical {
        match sort {
            FolSort::Term => self.term(depth),
            FolSort::Formula => self.formula(depth),
        }
    }

    fn term(&mut self, depth: usize) -> QuasiCanonical {
        let nvars = self.ctx.len() + self.bound as usize;
        if nvars > 0 && (depth == 0 || self.rng.gen_bool(0.4)) {
            let i = self.rng.gen_range(0..nvars);
            return if i < self.bound as usize {
                QuasiCanonical::Atomic(QuasiAtomic::Bound(i as u32))
            } else {
                QuasiCanonical::var(&self.ctx[i - self.bound as usize])
            };
        }
        let funs: Vec<(String, usize)> = self
            .tbl
            .symbols()
            .iter()
            .filter(|(_, n)| depth > 0 || *n == 0)
            .cloned()
            .collect();
        let (f, n) = funs.choose(self.rng).unwrap().clone();
        let args: Vec<_> = (0..n).map(|_| self.term(depth.saturating_sub(1))).collect();
        QuasiCanonical::apply(QuasiAtomic::Const(f.as_str().into()), args)
    }

    fn formula(&mut self, depth: usize) -> QuasiCanonical {
        let choice = if depth < 2 {
            0
        } else {
            self.rng.gen_range(0..3)
        };
        let (head, args) = match choice {
            0 => (EQ, vec![self.term(depth - 1), self.term(depth - 1)]),
            1 => (AND, vec![self.formula(depth - 1), self.formula(depth - 1)]),
            _ => {
                let hint = *BINDER_POOL.choose(self.rng).unwrap();
                self.bound += 1;
                let body = self.formula(depth - 1);
                self.bound -= 1;
                (
                    FORALL,
                    vec![QuasiCanonical::Lam(Binder::new(hint), body.into())],
                )
            }
        };
        QuasiCanonical::apply(QuasiAtomic::Const(head.into()), args)
    }
}
