use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{EngineError, Move};
use crate::classical::counterexample;
use crate::iso::IsoWitness;
use crate::proof::{Annotation, CheckedProof};
use crate::syntax::{elementarize, evaluate, substitute, Formula, Interpretation, Player};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SessionId(uuid::Uuid);

impl SessionId {
    pub fn new() -> SessionId {
        SessionId(uuid::Uuid::new_v4())
    }
}

impl Default for SessionId {
    fn default() -> Self {
        SessionId::new()
    }
}

impl fmt::Display for SessionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl std::str::FromStr for SessionId {
    type Err = uuid::Error;

    fn from_str(s: &str) -> Result<SessionId, uuid::Error> {
        s.parse().map(SessionId)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    AwaitingEnvironment,
    /// At an axiom: nobody has anything left to do.
    Quiescent,
    Finished,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IllegalMovePolicy {
    /// Report the move and keep waiting.
    #[default]
    Reject,
    /// An illegal move loses the game for the environment.
    Forfeit,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct SessionOptions {
    pub illegal_move_policy: IllegalMovePolicy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FinishReason {
    Stopped,
    Forfeit,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TurnOutcome {
    /// The move was played; `replies` are the machine moves that followed.
    Applied { replies: Vec<Move> },
    /// The move was illegal under the forfeit policy; the session is over.
    Forfeited,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutcomeBasis {
    /// Decided by the session's interpretation.
    Interpretation,
    /// Decided by classical validity of the elementarization.
    AllInterpretations,
    /// The environment made an illegal move under the forfeit policy.
    Forfeit,
}

/// Who wins if play stops in the current position.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Outcome {
    pub winner: Player,
    pub basis: OutcomeBasis,
    /// Elementarization of the position is classically valid.
    pub machine_wins_everywhere: bool,
    pub elementarization: Formula,
    /// An interpretation under which the environment wins, when one exists.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Interpretation>,
}

/// Score a position as if play stopped there: unresolved ⊔ counts as ⊥,
/// unresolved ⊓ as ⊤.
pub fn outcome_of(
    position: &Formula,
    interpretation: Option<&Interpretation>,
    max_atoms: usize,
) -> Result<Outcome, EngineError> {
    let elementarization = elementarize(position);
    let counterexample = counterexample(&elementarization, max_atoms)?;
    let machine_wins_everywhere = counterexample.is_none();
    let (winner, basis) = match interpretation {
        Some(interp) => {
            let value = evaluate(&elementarization, interp)?;
            (if value { Player::Machine } else { Player::Environment }, OutcomeBasis::Interpretation)
        }
        None if machine_wins_everywhere => (Player::Machine, OutcomeBasis::AllInterpretations),
        None => (Player::Environment, OutcomeBasis::AllInterpretations),
    };
    Ok(Outcome { winner, basis, machine_wins_everywhere, elementarization, counterexample })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("session invariant violated: {0}")]
pub struct InvariantViolation(pub String);

/// One play of a proof's conclusion.
#[derive(Debug, Clone)]
pub struct GameSession {
    id: SessionId,
    proof: Arc<CheckedProof>,
    current_formula: Formula,
    current_line: usize,
    /// From `current_formula` onto the formula of `current_line`.
    bridge: IsoWitness,
    run: Vec<Move>,
    /// Proof lines visited, in order.
    trail: Vec<usize>,
    status: Status,
    finish: Option<FinishReason>,
    interpretation: Option<Interpretation>,
    options: SessionOptions,
}

impl GameSession {
    /// Start playing the conclusion of `proof`. Machine moves owed before the
    /// environment's first turn are made immediately.
    pub fn new(
        proof: Arc<CheckedProof>,
        interpretation: Option<Interpretation>,
        options: SessionOptions,
    ) -> Result<GameSession, EngineError> {
        if !proof.is_valid() {
            return Err(EngineError::InvalidProof { errors: proof.errors().count() });
        }
        let conclusion = proof.conclusion().ok_or(EngineError::InvalidProof { errors: 0 })?;
        let current_formula = conclusion.formula.clone();
        let current_line = conclusion.number;
        let mut session = GameSession {
            id: SessionId::new(),
            bridge: IsoWitness::identity(&current_formula),
            current_formula,
            current_line,
            run: Vec::new(),
            trail: vec![current_line],
            status: Status::AwaitingEnvironment,
            finish: None,
            interpretation,
            options,
            proof,
        };
        session.machine_turn();
        Ok(session)
    }

    pub fn id(&self) -> SessionId {
        self.id
    }

    pub fn proof(&self) -> &CheckedProof {
        &self.proof
    }

    pub fn current_formula(&self) -> &Formula {
        &self.current_formula
    }

    pub fn current_line(&self) -> usize {
        self.current_line
    }

    pub fn bridge(&self) -> &IsoWitness {
        &self.bridge
    }

    pub fn run(&self) -> &[Move] {
        &self.run
    }

    pub fn trail(&self) -> &[usize] {
        &self.trail
    }

    pub fn status(&self) -> Status {
        self.status
    }

    pub fn finish_reason(&self) -> Option<FinishReason> {
        self.finish
    }

    pub fn interpretation(&self) -> Option<&Interpretation> {
        self.interpretation.as_ref()
    }

    pub fn set_interpretation(&mut self, interpretation: Option<Interpretation>) {
        self.interpretation = interpretation;
    }

    pub fn options(&self) -> SessionOptions {
        self.options
    }

    /// The environment's legal moves in play coordinates, in pre-order.
    pub fn legal_env_moves(&self) -> Vec<Move> {
        if self.status != Status::AwaitingEnvironment {
            return Vec::new();
        }
        let Some(Annotation::Env(table)) = self.proof.annotation(self.current_line) else {
            return Vec::new();
        };
        let back = self.bridge.inverse();
        let mut moves: Vec<Move> = table
            .entries
            .iter()
            .map(|e| {
                let (path, component) = back.remap_move(&e.path, e.component).expect("bridge covers the line formula");
                Move::new(Player::Environment, path, component)
            })
            .collect();
        moves.sort_by(|a, b| (&a.path, a.component).cmp(&(&b.path, b.component)));
        moves
    }

    /// Play an environment move, then let the machine answer.
    ///
    /// An illegal move leaves the session untouched under
    /// [`IllegalMovePolicy::Reject`] and ends it under
    /// [`IllegalMovePolicy::Forfeit`].
    pub fn apply_env_move(&mut self, m: &Move) -> Result<TurnOutcome, EngineError> {
        if self.status == Status::Finished {
            return Err(EngineError::Finished);
        }
        let legal = self.legal_env_moves();
        let played = Move::new(Player::Environment, m.path.clone(), m.component);
        if !legal.contains(&played) {
            return match self.options.illegal_move_policy {
                IllegalMovePolicy::Reject => Err(EngineError::IllegalMove {
                    attempted: played.to_string(),
                    legal: legal.iter().map(Move::to_string).collect(),
                }),
                IllegalMovePolicy::Forfeit => {
                    self.status = Status::Finished;
                    self.finish = Some(FinishReason::Forfeit);
                    Ok(TurnOutcome::Forfeited)
                }
            };
        }

        let (proof_path, proof_component) =
            self.bridge.remap_move(&played.path, played.component).expect("legal move is in the bridge domain");
        let Some(Annotation::Env(table)) = self.proof.annotation(self.current_line) else {
            unreachable!("legal moves exist only at rule a lines");
        };
        let entry = table.get(&proof_path, proof_component).expect("legal move comes from the table").clone();
        self.advance(played, entry.premise, &entry.witness);
        let before = self.run.len();
        self.machine_turn();
        Ok(TurnOutcome::Applied { replies: self.run[before..].to_vec() })
    }

    /// Resolve `m` (play coordinates) and step to `premise`, whose formula
    /// `witness` reaches from the resolved proof-side formula.
    fn advance(&mut self, m: Move, premise: usize, witness: &IsoWitness) {
        self.current_formula =
            substitute(&self.current_formula, &m.path, m.component).expect("move addresses a surface choice");
        self.bridge = self
            .bridge
            .restrict(&m.path, m.component)
            .and_then(|w| w.compose(witness))
            .expect("bridge and stored witness have matching shapes");
        self.current_line = premise;
        self.trail.push(premise);
        self.run.push(m);
    }

    /// Make every machine move owed at rule (b) lines, then settle the status.
    pub fn machine_turn(&mut self) {
        if self.status == Status::Finished {
            return;
        }
        while let Some(Annotation::Machine(choice)) = self.proof.annotation(self.current_line) {
            let choice = choice.clone();
            let (path, component) = self
                .bridge
                .inverse()
                .remap_move(&choice.path, choice.component)
                .expect("bridge covers the line formula");
            self.advance(Move::new(Player::Machine, path, component), choice.premise, &choice.witness);
        }
        self.status = match self.proof.annotation(self.current_line) {
            Some(Annotation::Env(table)) if table.is_empty() => Status::Quiescent,
            _ => Status::AwaitingEnvironment,
        };
        debug_assert_eq!(self.verify_invariants(), Ok(()));
    }

    /// End the session. Repeated calls are harmless.
    pub fn stop(&mut self) {
        if self.status != Status::Finished {
            self.status = Status::Finished;
            self.finish = Some(FinishReason::Stopped);
        }
    }

    /// Who wins if play stops now.
    pub fn outcome(&self) -> Result<Outcome, EngineError> {
        let mut outcome =
            outcome_of(&self.current_formula, self.interpretation.as_ref(), self.proof.options().max_atoms)?;
        if self.finish == Some(FinishReason::Forfeit) {
            outcome.winner = Player::Machine;
            outcome.basis = OutcomeBasis::Forfeit;
        }
        Ok(outcome)
    }

    /// The runtime invariants of a session: the position is a well-formed
    /// formula, the bridge really carries it onto the current proof line,
    /// visited line numbers strictly decrease, and the status agrees with
    /// the current line.
    pub fn verify_invariants(&self) -> Result<(), InvariantViolation> {
        let fail = |msg: String| Err(InvariantViolation(msg));
        if let Err(e) = self.current_formula.well_formed() {
            return fail(format!("position is not a formula: {e}"));
        }
        let Some(line) = self.proof.line(self.current_line) else {
            return fail(format!("line {} is not in the proof", self.current_line));
        };
        if !self.bridge.verifies(&self.current_formula, &line.formula) {
            return fail(format!("bridge does not carry `{}` onto line {}", self.current_formula, line.number));
        }
        if self.trail.windows(2).any(|w| w[1] >= w[0]) {
            return fail(format!("line numbers do not decrease: {:?}", self.trail));
        }
        let axiom = matches!(self.proof.annotation(self.current_line), Some(Annotation::Env(t)) if t.is_empty());
        match self.status {
            Status::Quiescent if !axiom => fail("quiescent away from an axiom".into()),
            Status::AwaitingEnvironment if axiom => fail("awaiting the environment at an axiom".into()),
            Status::AwaitingEnvironment if matches!(self.proof.annotation(self.current_line), Some(Annotation::Machine(_))) => {
                fail("awaiting the environment at a rule b line".into())
            }
            _ => Ok(()),
        }
    }
}
