//! Print the strategy graph of a proof as JSON and as Graphviz DOT.

use cl1::engine::export_strategy;
use cl1::proof::{check_source, CheckOptions};

const PROOF: &str = include_str!("../fixtures/contraction.proof");

fn main() {
    let proof = check_source(PROOF, &CheckOptions::default());
    let graph = export_strategy(&proof).expect("fixture checks");
    println!("{}", serde_json::to_string_pretty(&graph).unwrap());
    print!("{}", graph.to_dot());
}
