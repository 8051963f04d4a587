//! Playing the conclusion of a verified proof against a live environment.
//!
//! The session walks the proof from its last line towards the axioms. At a
//! rule (a) line it waits for the environment; at a rule (b) line the machine
//! makes the recorded choice at once. Moves are always announced in the
//! coordinates of the formula being played, which may differ from the proof
//! line's formula by a permutation of commutative children; a
//! [`crate::iso::IsoWitness`] bridges the two.

mod session;
mod strategy;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::classical::ClassicalError;
use crate::syntax::{owner, resolve, substitute, EvalError, Formula, Path, PathParseError, Player};

pub use session::{
    outcome_of, FinishReason, GameSession, IllegalMovePolicy, InvariantViolation, Outcome, OutcomeBasis, SessionId,
    SessionOptions, Status, TurnOutcome,
};
pub use strategy::{export_strategy, StrategyEdge, StrategyGraph, StrategyNode};

/// A choice of `component` at the choice occurrence `path`.
///
/// The wire form is the path followed by the component, joined by `.`; a
/// choice at the root is just the component (`"2"`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Deserialize)]
pub struct Move {
    pub role: Player,
    pub path: Path,
    pub component: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoveParseError {
    #[error("empty move")]
    Empty,
    #[error(transparent)]
    Path(#[from] PathParseError),
}

impl Move {
    pub fn new(role: Player, path: Path, component: usize) -> Move {
        Move { role, path, component }
    }

    /// Parse a move's wire form for the given player.
    pub fn parse(role: Player, text: &str) -> Result<Move, MoveParseError> {
        let text = text.trim();
        if text.is_empty() {
            return Err(MoveParseError::Empty);
        }
        let full: Path = text.parse()?;
        let component = *full.indices().last().unwrap();
        Ok(Move { role, path: full.parent().unwrap(), component })
    }

    pub fn text(&self) -> String {
        self.to_string()
    }
}

/// Parses as an environment move.
impl FromStr for Move {
    type Err = MoveParseError;

    fn from_str(text: &str) -> Result<Move, MoveParseError> {
        Move::parse(Player::Environment, text)
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_root() {
            write!(f, "{}", self.component)
        } else {
            write!(f, "{}.{}", self.path, self.component)
        }
    }
}

impl Serialize for Move {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("Move", 4)?;
        s.serialize_field("role", &self.role)?;
        s.serialize_field("move", &self.to_string())?;
        s.serialize_field("path", &self.path)?;
        s.serialize_field("component", &self.component)?;
        s.end()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("proof is not valid ({errors} error(s))")]
    InvalidProof { errors: usize },
    #[error("illegal move {attempted}; legal moves: {}", list(legal))]
    IllegalMove { attempted: String, legal: Vec<String> },
    #[error("session is finished")]
    Finished,
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Classical(#[from] ClassicalError),
}

fn list(moves: &[String]) -> String {
    if moves.is_empty() {
        "none".to_string()
    } else {
        moves.join(", ")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("move {index} ({text}) is not legal for the {role:?} in `{position}`")]
pub struct ReplayError {
    pub index: usize,
    pub text: String,
    pub role: Player,
    pub position: Formula,
}

/// Replay `run` from `start` using only substitution, checking that every
/// move resolves a surface choice owned by the player who made it.
pub fn replay_run(start: &Formula, run: &[Move]) -> Result<Formula, ReplayError> {
    let mut position = start.clone();
    for (index, m) in run.iter().enumerate() {
        let fail = |position: &Formula| ReplayError {
            index,
            text: m.to_string(),
            role: m.role,
            position: position.clone(),
        };
        let owned = resolve(&position, &m.path)
            .ok()
            .zip(crate::syntax::polarity_at(&position, &m.path))
            .and_then(|(node, polarity)| owner(node.kind(), polarity));
        if owned != Some(m.role) {
            return Err(fail(&position));
        }
        position = substitute(&position, &m.path, m.component).map_err(|_| fail(&position))?;
    }
    Ok(position)
}
