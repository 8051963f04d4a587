//! Isomorphism classes, witnesses and how a move is carried across them.

use cl1::iso::{canonical_key, isomorphic, IsoWitness, MatchMode};
use cl1::parse_formula;
use cl1::syntax::substitute;

fn main() {
    let a = parse_formula("(p?&(q|r))&s").unwrap();
    let b = parse_formula("s&((r|q)?&p)").unwrap();
    println!("key a: {}", canonical_key(&a));
    println!("key b: {}", canonical_key(&b));
    println!("iso: {}, strict: {}", isomorphic(&a, &b, MatchMode::Iso), isomorphic(&a, &b, MatchMode::Strict));

    let w = IsoWitness::between(&a, &b).unwrap();
    for e in w.entries() {
        let show = |p: &cl1::Path| if p.is_root() { "root".to_string() } else { p.to_string() };
        println!("  {} -> {} perm {:?}", show(&e.source), show(&e.target), e.permutation);
    }
    let from = "1".parse().unwrap();
    let (to, component) = w.remap_move(&from, 2).unwrap();
    println!("choice 1.2 in a is choice {to}.{component} in b");
    let a2 = substitute(&a, &from, 2).unwrap();
    let b2 = substitute(&b, &to, component).unwrap();
    println!("{a2}  ~  {b2}: {}", w.restrict(&from, 2).unwrap().verifies(&a2, &b2));
}
