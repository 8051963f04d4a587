//! Play every environment behaviour against the contraction proof and show
//! the machine's replies.

use std::sync::Arc;

use cl1::engine::{GameSession, Status, TurnOutcome};
use cl1::proof::{check_source, CheckOptions};

const PROOF: &str = include_str!("../fixtures/contraction.proof");

fn main() {
    let proof = Arc::new(check_source(PROOF, &CheckOptions::default()));
    let opening = GameSession::new(proof.clone(), None, Default::default()).expect("fixture checks");
    println!("start: {}", opening.current_formula());
    for m in opening.legal_env_moves() {
        let mut session = GameSession::new(proof.clone(), None, Default::default()).unwrap();
        let TurnOutcome::Applied { replies } = session.apply_env_move(&m).unwrap() else { unreachable!() };
        let replies: Vec<String> = replies.iter().map(ToString::to_string).collect();
        println!("environment {m}: machine answers [{}]", replies.join(", "));
        assert_eq!(session.status(), Status::Quiescent);
        let outcome = session.outcome().unwrap();
        println!(
            "  ends at `{}` via lines {:?}; winner {:?}, everywhere: {}",
            session.current_formula(),
            session.trail(),
            outcome.winner,
            outcome.machine_wins_everywhere
        );
    }
}
