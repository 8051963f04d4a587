//! Elementarization, stability and counterexamples for a few formulas.

use cl1::classical::{counterexample, is_stable};
use cl1::parse_formula;
use cl1::syntax::{elementarize, render_unicode};

fn main() {
    for text in ["p->(r?&q)", "p->(r?|q)", "((p?&q)&(p?&q))->(p?&q)", "p->q", "p|~p"] {
        let f = parse_formula(text).unwrap();
        let e = elementarize(&f);
        let stable = is_stable(&f, 20).unwrap();
        print!("{:<28} elementarized {:<12} {}", render_unicode(&f), e.to_string(), if stable { "stable" } else { "unstable" });
        match counterexample(&e, 20).unwrap() {
            Some(c) => println!(" (falsified by {c})"),
            None => println!(),
        }
    }
}
