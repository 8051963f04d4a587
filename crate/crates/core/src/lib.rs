//! Proof checking and strategy extraction for the propositional
//! computability logic CL1.
//!
//! A CL1 formula is read as a game between a machine and its environment.
//! [`proof`] verifies proofs written one step per line against the two CL1
//! rules and records, for every step, which choices the environment may make
//! and which choice the machine makes. [`engine`] plays the conclusion of a
//! verified proof against a live environment using those records, so the
//! machine always ends in a position it wins.
//!
//! ```
//! use cl1::{engine::GameSession, proof::{check_source, CheckOptions}};
//!
//! let source = "\
//! 1. (p&q)->q, rule a, no premise
//! 2. (p&q)->p, rule a, no premise
//! 3. (p&q)->(p?&q), rule a, 1 2
//! ";
//! let proof = check_source(source, &CheckOptions::default());
//! assert!(proof.is_valid());
//!
//! let mut session = GameSession::new(proof.into(), None, Default::default()).unwrap();
//! session.apply_env_move(&"2.1".parse().unwrap()).unwrap();
//! assert_eq!(session.current_formula().to_string(), "p&q->p");
//! assert!(session.outcome().unwrap().machine_wins_everywhere);
//! ```

pub mod classical;
pub mod engine;
pub mod iso;
pub mod proof;
pub mod syntax;

pub use syntax::{parse_formula, render, Formula, Path};
