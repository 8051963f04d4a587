use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::formula::is_atom_name;
use super::Formula;

/// Truth values for nonlogical atoms. ⊤ and ⊥ are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Interpretation(BTreeMap<String, bool>);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("atom `{0}` has no value in the interpretation")]
    MissingAtom(String),
    #[error("formula contains choice connectives")]
    NotElementary,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid interpretation `{text}`: expected `name=0|1` pairs separated by commas")]
pub struct InterpretationParseError {
    pub text: String,
}

impl Interpretation {
    pub fn new() -> Interpretation {
        Interpretation::default()
    }

    pub fn set(&mut self, atom: impl Into<String>, value: bool) {
        self.0.insert(atom.into(), value);
    }

    pub fn get(&self, atom: &str) -> Option<bool> {
        self.0.get(atom).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, bool)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }

    /// The first atom of `f` with no value, if any.
    pub fn missing_atom<'f>(&self, f: &'f Formula) -> Option<&'f str> {
        f.atoms().into_iter().find(|a| !self.0.contains_key(*a))
    }
}

impl FromIterator<(String, bool)> for Interpretation {
    fn from_iter<I: IntoIterator<Item = (String, bool)>>(iter: I) -> Self {
        Interpretation(iter.into_iter().collect())
    }
}

impl FromStr for Interpretation {
    type Err = InterpretationParseError;

    fn from_str(text: &str) -> Result<Interpretation, InterpretationParseError> {
        let err = || InterpretationParseError { text: text.to_string() };
        let mut out = Interpretation::new();
        for pair in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (name, value) = pair.split_once('=').ok_or_else(err)?;
            let name = name.trim();
            if !is_atom_name(name) {
                return Err(err());
            }
            let value = match value.trim() {
                "1" => true,
                "0" => false,
                _ => return Err(err()),
            };
            out.set(name, value);
        }
        Ok(out)
    }
}

impl fmt::Display for Interpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, (atom, value)) in self.iter().enumerate() {
            if n > 0 {
                f.write_str(",")?;
            }
            write!(f, "{atom}={}", u8::from(value))?;
        }
        Ok(())
    }
}

/// Classical truth value of an elementary formula.
pub fn evaluate(f: &Formula, interp: &Interpretation) -> Result<bool, EvalError> {
    Ok(match f {
        Formula::Atom(name) => interp.get(name).ok_or_else(|| EvalError::MissingAtom(name.clone()))?,
        Formula::Top => true,
        Formula::Bot => false,
        Formula::Neg(child) => !evaluate(child, interp)?,
        Formula::Impl(left, right) => !evaluate(left, interp)? || evaluate(right, interp)?,
        Formula::And(cs) => {
            let mut value = true;
            for c in cs {
                value &= evaluate(c, interp)?;
            }
            value
        }
        Formula::Or(cs) => {
            let mut value = false;
            for c in cs {
                value |= evaluate(c, interp)?;
            }
            value
        }
        Formula::Cand(_) | Formula::Cor(_) => return Err(EvalError::NotElementary),
    })
}
