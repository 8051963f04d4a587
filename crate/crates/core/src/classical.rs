//! Classical validity by truth-table sweep, and CL1 stability.

use thiserror::Error;

use crate::syntax::{elementarize, Formula, Interpretation};

/// Default cap on distinct nonlogical atoms for a truth-table sweep.
pub const DEFAULT_MAX_ATOMS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassicalError {
    #[error("formula contains choice connectives")]
    NotElementary,
    #[error("formula has {found} distinct atoms, over the limit of {limit} (max_atoms)")]
    TooManyAtoms { found: usize, limit: usize },
}

/// Elementary formula compiled against a fixed atom order.
enum Compiled {
    Var(usize),
    Const(bool),
    Not(Box<Compiled>),
    Impl(Box<Compiled>, Box<Compiled>),
    And(Vec<Compiled>),
    Or(Vec<Compiled>),
}

impl Compiled {
    fn eval(&self, assignment: u64) -> bool {
        match self {
            Compiled::Var(i) => assignment >> i & 1 == 1,
            Compiled::Const(b) => *b,
            Compiled::Not(c) => !c.eval(assignment),
            Compiled::Impl(l, r) => !l.eval(assignment) || r.eval(assignment),
            Compiled::And(cs) => cs.iter().all(|c| c.eval(assignment)),
            Compiled::Or(cs) => cs.iter().any(|c| c.eval(assignment)),
        }
    }
}

fn compile(f: &Formula, atoms: &[&str]) -> Result<Compiled, ClassicalError> {
    let all = |cs: &[Formula]| cs.iter().map(|c| compile(c, atoms)).collect::<Result<Vec<_>, _>>();
    Ok(match f {
        Formula::Atom(name) => Compiled::Var(atoms.binary_search(&name.as_str()).expect("atom collected")),
        Formula::Top => Compiled::Const(true),
        Formula::Bot => Compiled::Const(false),
        Formula::Neg(c) => Compiled::Not(Box::new(compile(c, atoms)?)),
        Formula::Impl(l, r) => Compiled::Impl(Box::new(compile(l, atoms)?), Box::new(compile(r, atoms)?)),
        Formula::And(cs) => Compiled::And(all(cs)?),
        Formula::Or(cs) => Compiled::Or(all(cs)?),
        Formula::Cand(_) | Formula::Cor(_) => return Err(ClassicalError::NotElementary),
    })
}

/// A falsifying interpretation of an elementary formula, or `None` if the
/// formula is classically valid.
pub fn counterexample(f: &Formula, max_atoms: usize) -> Result<Option<Interpretation>, ClassicalError> {
    let atoms: Vec<&str> = f.atoms().into_iter().collect();
    if atoms.len() > max_atoms || atoms.len() >= 64 {
        return Err(ClassicalError::TooManyAtoms { found: atoms.len(), limit: max_atoms.min(63) });
    }
    let program = compile(f, &atoms)?;
    let found = (0..1u64 << atoms.len()).find(|&assignment| !program.eval(assignment));
    Ok(found.map(|assignment| {
        atoms.iter().enumerate().map(|(i, a)| (a.to_string(), assignment >> i & 1 == 1)).collect()
    }))
}

/// True iff the elementary formula `f` is true under every interpretation.
pub fn is_valid(f: &Formula, max_atoms: usize) -> Result<bool, ClassicalError> {
    counterexample(f, max_atoms).map(|c| c.is_none())
}

/// True iff the elementarization of `f` is classically valid.
pub fn is_stable(f: &Formula, max_atoms: usize) -> Result<bool, ClassicalError> {
    is_valid(&elementarize(f), max_atoms)
}
