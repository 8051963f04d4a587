use std::collections::BTreeSet;

use cl1::engine::{FinishReason, GameSession, Move, Outcome, Status};
use cl1::syntax::{render_unicode, Kind, Polarity};
use cl1::{Formula, Path};
use serde::Serialize;

/// One node of the current formula, with everything a client needs to draw
/// it and to offer moves without parsing formulas itself.
#[derive(Debug, Clone, Serialize)]
pub struct NodeView {
    pub path: String,
    pub kind: Kind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub atom: Option<String>,
    pub text: String,
    /// `None` below a choice node, where polarity is not a surface notion.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub polarity: Option<Polarity>,
    /// The environment may currently resolve this node.
    pub env_choosable: bool,
    /// Set on the components of an env-choosable node: the move that picks it.
    #[serde(rename = "move", skip_serializing_if = "Option::is_none")]
    pub pick: Option<String>,
    pub children: Vec<NodeView>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SessionView {
    pub id: String,
    pub formula: String,
    pub formula_unicode: String,
    pub line: usize,
    pub tree: NodeView,
    pub legal_moves: Vec<String>,
    pub run: Vec<Move>,
    pub trail: Vec<usize>,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub finish_reason: Option<FinishReason>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub interpretation: Option<cl1::syntax::Interpretation>,
    pub atoms: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outcome: Option<Outcome>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outcome_error: Option<String>,
}

impl SessionView {
    pub fn of(session: &GameSession) -> SessionView {
        let legal = session.legal_env_moves();
        let choosable: BTreeSet<Path> = legal.iter().map(|m| m.path.clone()).collect();
        let formula = session.current_formula();
        let (outcome, outcome_error) = match session.outcome() {
            Ok(o) => (Some(o), None),
            Err(e) => (None, Some(e.to_string())),
        };
        SessionView {
            id: session.id().to_string(),
            formula: formula.to_string(),
            formula_unicode: render_unicode(formula),
            line: session.current_line(),
            tree: node(formula, Path::root(), Some(Polarity::Positive), &choosable),
            legal_moves: legal.iter().map(Move::to_string).collect(),
            run: session.run().to_vec(),
            trail: session.trail().to_vec(),
            status: session.status(),
            finish_reason: session.finish_reason(),
            interpretation: session.interpretation().cloned(),
            atoms: formula.atoms().into_iter().map(str::to_string).collect(),
            outcome,
            outcome_error,
        }
    }
}

fn node(f: &Formula, path: Path, polarity: Option<Polarity>, choosable: &BTreeSet<Path>) -> NodeView {
    let env_choosable = choosable.contains(&path);
    let children = f
        .children()
        .enumerate()
        .map(|(i, child)| {
            let index = i + 1;
            let child_polarity = match polarity {
                Some(p) if !f.is_choice() => Some(cl1::syntax::child_polarity(f.kind(), index, p)),
                _ => None,
            };
            let mut view = node(child, path.child(index), child_polarity, choosable);
            if env_choosable {
                view.pick = Some(Move::new(cl1::syntax::Player::Environment, path.clone(), index).to_string());
            }
            view
        })
        .collect();
    NodeView {
        path: path.to_string(),
        kind: f.kind(),
        atom: f.atom_name().map(str::to_string),
        text: f.to_string(),
        polarity,
        env_choosable,
        pick: None,
        children,
    }
}
