//! Check a proof file (default: the contraction fixture) in both matching
//! modes and print the diagnostics.
//!
//!     cargo run -p cl1 --example check_proof -- crates/core/fixtures/split_consequent.proof

use cl1::iso::MatchMode;
use cl1::proof::{check_source, Annotation, CheckOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/contraction.proof").to_string());
    let text = std::fs::read_to_string(&path)?;
    for mode in [MatchMode::Iso, MatchMode::Strict] {
        let proof = check_source(&text, &CheckOptions::with_mode(mode));
        println!("== {mode}: {}", if proof.is_valid() { "valid" } else { "invalid" });
        for d in proof.diagnostics() {
            println!("  {d}");
        }
        for line in proof.lines() {
            match proof.annotation(line.number) {
                Some(Annotation::Env(table)) => {
                    for e in &table.entries {
                        println!("  line {}: env {}.{} -> line {} ({:?})", line.number, e.path, e.component, e.premise, e.tier);
                    }
                }
                Some(Annotation::Machine(m)) => {
                    println!("  line {}: machine {}.{} -> line {} ({:?})", line.number, m.path, m.component, m.premise, m.tier)
                }
                None => {}
            }
        }
    }
    Ok(())
}
