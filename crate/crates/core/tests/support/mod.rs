//! Oracles shared by the integration tests. Nothing here calls the library's
//! own evaluator, canonicalizer or checker, so agreement with them means
//! something.

#![allow(dead_code)]

use std::collections::HashMap;

use cl1::proof::{ProofLine, Rule};
use cl1::syntax::substitute;
use cl1::{Formula, Path};
use rand::seq::SliceRandom;
use rand::Rng;

pub const CONTRACTION: &str = include_str!("../../fixtures/contraction.proof");
pub const SPLIT: &str = include_str!("../../fixtures/split_consequent.proof");
pub const CHOICE_SPLIT: &str = include_str!("../../fixtures/choice_split.proof");
pub const AXIOM: &str = include_str!("../../fixtures/axiom.proof");

pub fn f(text: &str) -> Formula {
    cl1::parse_formula(text).unwrap()
}

fn kids(f: &Formula) -> &[Formula] {
    match f {
        Formula::And(c) | Formula::Or(c) | Formula::Cand(c) | Formula::Cor(c) => c,
        _ => &[],
    }
}

/// Truth of the elementarization of `f` under `value`, computed directly:
/// the first choice node met on the way down is ⊤ for ⊓ and ⊥ for ⊔.
pub fn eval_elementarized(f: &Formula, value: &dyn Fn(&str) -> bool) -> bool {
    match f {
        Formula::Atom(a) => value(a),
        Formula::Top | Formula::Cand(_) => true,
        Formula::Bot | Formula::Cor(_) => false,
        Formula::Neg(x) => !eval_elementarized(x, value),
        Formula::Impl(a, b) => !eval_elementarized(a, value) || eval_elementarized(b, value),
        Formula::And(c) => c.iter().all(|x| eval_elementarized(x, value)),
        Formula::Or(c) => c.iter().any(|x| eval_elementarized(x, value)),
    }
}

pub fn atom_names(f: &Formula) -> Vec<String> {
    fn walk(f: &Formula, out: &mut Vec<String>) {
        match f {
            Formula::Atom(a) => {
                if !out.contains(a) {
                    out.push(a.clone());
                }
            }
            Formula::Neg(x) => walk(x, out),
            Formula::Impl(a, b) => {
                walk(a, out);
                walk(b, out);
            }
            other => kids(other).iter().for_each(|x| walk(x, out)),
        }
    }
    let mut out = Vec::new();
    walk(f, &mut out);
    out
}

/// Brute-force stability: every one of the 2^k assignments.
pub fn brute_stable(f: &Formula) -> bool {
    let atoms = atom_names(f);
    (0u64..1 << atoms.len()).all(|bits| {
        let value = |a: &str| {
            let i = atoms.iter().position(|x| x == a).unwrap();
            bits >> i & 1 == 1
        };
        eval_elementarized(f, &value)
    })
}

fn same_kind(a: &Formula, b: &Formula) -> bool {
    std::mem::discriminant(a) == std::mem::discriminant(b)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for at in 0..=p.len() {
            let mut q = p.clone();
            q.insert(at, n - 1);
            out.push(q);
        }
    }
    out
}

/// Isomorphism by trying every ordering of every commutative node's children.
pub fn brute_iso(a: &Formula, b: &Formula) -> bool {
    if !same_kind(a, b) {
        return false;
    }
    match (a, b) {
        (Formula::Atom(x), Formula::Atom(y)) => x == y,
        (Formula::Top, _) | (Formula::Bot, _) => true,
        (Formula::Neg(x), Formula::Neg(y)) => brute_iso(x, y),
        (Formula::Impl(a1, a2), Formula::Impl(b1, b2)) => brute_iso(a1, b1) && brute_iso(a2, b2),
        _ => {
            let (xs, ys) = (kids(a), kids(b));
            xs.len() == ys.len()
                && permutations(xs.len()).iter().any(|p| p.iter().enumerate().all(|(i, &j)| brute_iso(&xs[i], &ys[j])))
        }
    }
}

/// Random formula over `atoms`, depth at most `depth`, optionally with
/// choice connectives.
pub fn random_formula(rng: &mut impl Rng, atoms: &[&str], depth: usize, choices: bool) -> Formula {
    if depth == 0 || rng.random_bool(0.25) {
        return match rng.random_range(0..12) {
            0 => Formula::Top,
            1 => Formula::Bot,
            _ => Formula::atom(atoms[rng.random_range(0..atoms.len())]),
        };
    }
    let kinds = if choices { 6 } else { 4 };
    let n = rng.random_range(2..=3);
    let kind = rng.random_range(0..kinds);
    let mut children = || (0..n).map(|_| random_formula(rng, atoms, depth - 1, choices)).collect::<Vec<_>>();
    match kind {
        0 => Formula::neg(children().remove(0)),
        1 => {
            let mut c = children();
            Formula::implies(c.remove(0), c.remove(0))
        }
        2 => Formula::And(children()),
        3 => Formula::Or(children()),
        4 => Formula::Cand(children()),
        _ => Formula::Cor(children()),
    }
}

/// Random formula with exactly `nodes` nodes.
pub fn random_sized(rng: &mut impl Rng, atoms: &[&str], nodes: usize) -> Formula {
    if nodes <= 1 {
        return Formula::atom(atoms[rng.random_range(0..atoms.len())]);
    }
    if nodes == 2 {
        return Formula::neg(random_sized(rng, atoms, 1));
    }
    let budget = nodes - 1;
    match rng.random_range(0..6) {
        0 => Formula::neg(random_sized(rng, atoms, budget)),
        1 => {
            let left = rng.random_range(1..budget);
            Formula::implies(random_sized(rng, atoms, left), random_sized(rng, atoms, budget - left))
        }
        k => {
            let parts = if budget >= 3 && rng.random_bool(0.3) { 3 } else { 2 };
            let mut sizes = vec![1; parts];
            for _ in 0..budget - parts {
                sizes[rng.random_range(0..parts)] += 1;
            }
            let children = sizes.into_iter().map(|s| random_sized(rng, atoms, s)).collect();
            match k {
                2 => Formula::And(children),
                3 => Formula::Or(children),
                4 => Formula::Cand(children),
                _ => Formula::Cor(children),
            }
        }
    }
}

/// Randomly reorder the children of commutative nodes (any node if
/// `choice_only` is false, else only ⊓ and ⊔).
pub fn shuffle(rng: &mut impl Rng, f: &Formula, choice_only: bool) -> Formula {
    match f {
        Formula::Neg(x) => Formula::neg(shuffle(rng, x, choice_only)),
        Formula::Impl(a, b) => Formula::implies(shuffle(rng, a, choice_only), shuffle(rng, b, choice_only)),
        Formula::And(c) | Formula::Or(c) | Formula::Cand(c) | Formula::Cor(c) => {
            let mut c: Vec<Formula> = c.iter().map(|x| shuffle(rng, x, choice_only)).collect();
            let choice = matches!(f, Formula::Cand(_) | Formula::Cor(_));
            if choice || !choice_only {
                c.shuffle(rng);
            }
            match f {
                Formula::And(_) => Formula::And(c),
                Formula::Or(_) => Formula::Or(c),
                Formula::Cand(_) => Formula::Cand(c),
                _ => Formula::Cor(c),
            }
        }
        other => other.clone(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Owner {
    Env,
    Machine,
}

/// Surface choice nodes with their owners, in pre-order.
pub fn surface_choices(f: &Formula) -> Vec<(Path, usize, Owner)> {
    fn walk(f: &Formula, path: Path, positive: bool, out: &mut Vec<(Path, usize, Owner)>) {
        match f {
            Formula::Cand(c) => out.push((path, c.len(), if positive { Owner::Env } else { Owner::Machine })),
            Formula::Cor(c) => out.push((path, c.len(), if positive { Owner::Machine } else { Owner::Env })),
            Formula::Neg(x) => walk(x, path.child(1), !positive, out),
            Formula::Impl(a, b) => {
                walk(a, path.child(1), !positive, out);
                walk(b, path.child(2), positive, out);
            }
            Formula::And(c) | Formula::Or(c) => {
                for (i, x) in c.iter().enumerate() {
                    walk(x, path.child(i + 1), positive, out);
                }
            }
            _ => {}
        }
    }
    let mut out = Vec::new();
    walk(f, Path::root(), true, &mut out);
    out
}

/// Number of choice nodes owned by the environment anywhere in `f`, counting
/// those nested under other choices by the polarity they would surface with.
pub fn env_choice_points(f: &Formula) -> usize {
    fn walk(f: &Formula, positive: bool) -> usize {
        match f {
            Formula::Cand(c) => usize::from(positive) + c.iter().map(|x| walk(x, positive)).sum::<usize>(),
            Formula::Cor(c) => usize::from(!positive) + c.iter().map(|x| walk(x, positive)).sum::<usize>(),
            Formula::Neg(x) => walk(x, !positive),
            Formula::Impl(a, b) => walk(a, !positive) + walk(b, positive),
            Formula::And(c) | Formula::Or(c) => c.iter().map(|x| walk(x, positive)).sum(),
            _ => 0,
        }
    }
    walk(f, true)
}

/// Exhaustive backward search for a CL1 proof: a formula is provable by
/// rule (a) if it is stable and every environment choice leads to a
/// provable formula, and by rule (b) if some machine choice does.
pub struct Prover {
    memo: HashMap<Formula, Option<usize>>,
    lines: Vec<ProofLine>,
}

impl Prover {
    pub fn new() -> Prover {
        Prover { memo: HashMap::new(), lines: Vec::new() }
    }

    /// Proof lines ending with `goal`, or `None` if it has no proof.
    pub fn prove(goal: &Formula) -> Option<Vec<ProofLine>> {
        let mut p = Prover::new();
        let n = p.search(goal)?;
        // The goal's line is the last one added for it; drop anything later
        // (nothing is added after it) and keep earlier lines it depends on.
        debug_assert_eq!(n, p.lines.len());
        Some(p.lines)
    }

    fn search(&mut self, f: &Formula) -> Option<usize> {
        if let Some(known) = self.memo.get(f) {
            return *known;
        }
        let choices = surface_choices(f);
        let moves = |who: Owner| {
            choices
                .iter()
                .filter(move |(_, _, o)| *o == who)
                .flat_map(|(p, n, _)| (1..=*n).map(move |i| (p.clone(), i)))
                .collect::<Vec<_>>()
        };
        if brute_stable(f) {
            let mut premises = Vec::new();
            let mut all = true;
            for (p, i) in moves(Owner::Env) {
                match self.search(&substitute(f, &p, i).unwrap()) {
                    Some(n) => premises.push(n),
                    None => {
                        all = false;
                        break;
                    }
                }
            }
            if all {
                premises.sort_unstable();
                premises.dedup();
                return Some(self.push(f, Rule::A, premises));
            }
        }
        for (p, i) in moves(Owner::Machine) {
            if let Some(n) = self.search(&substitute(f, &p, i).unwrap()) {
                return Some(self.push(f, Rule::B, vec![n]));
            }
        }
        self.memo.insert(f.clone(), None);
        None
    }

    fn push(&mut self, f: &Formula, rule: Rule, premises: Vec<usize>) -> usize {
        let number = self.lines.len() + 1;
        self.lines.push(ProofLine::new(number, f.clone(), rule, premises));
        self.memo.insert(f.clone(), Some(number));
        number
    }
}

pub fn proof_text(lines: &[ProofLine]) -> String {
    lines.iter().map(|l| format!("{l}\n")).collect()
}

/// Conclusions built from a classical tautology by wrapping surface
/// subformulas in choices, skewed so that a good share is provable.
pub fn random_candidate(rng: &mut impl Rng) -> Formula {
    let atoms = ["p", "q", "r"];
    let a = random_formula(rng, &atoms, 2, false);
    let b = random_formula(rng, &atoms, 1, false);
    let mut f = match rng.random_range(0..5) {
        0 => Formula::implies(a.clone(), a),
        1 => Formula::Or(vec![a.clone(), Formula::neg(a)]),
        2 => Formula::implies(Formula::And(vec![a.clone(), b]), a),
        3 => Formula::implies(a.clone(), Formula::Or(vec![a, b])),
        _ => Formula::neg(Formula::And(vec![a.clone(), Formula::neg(a)])),
    };
    for _ in 0..rng.random_range(1..=4) {
        f = wrap_random(rng, &f, &atoms);
    }
    f
}

/// Replace one random surface node `G` by `G ⊓ H` or `G ⊔ H` (in random
/// order), where `H` is either a copy of `G` or a fresh small formula.
fn wrap_random(rng: &mut impl Rng, f: &Formula, atoms: &[&str]) -> Formula {
    let mut paths = Vec::new();
    collect_paths(f, Path::root(), &mut paths);
    let target = paths[rng.random_range(0..paths.len())].clone();
    rebuild(f, target.indices(), &mut |g| {
        let h = if rng.random_bool(0.5) { g.clone() } else { random_formula(rng, atoms, 1, false) };
        let mut pair = vec![g.clone(), h];
        if rng.random_bool(0.5) {
            pair.reverse();
        }
        if rng.random_bool(0.5) {
            Formula::Cand(pair)
        } else {
            Formula::Cor(pair)
        }
    })
}

fn collect_paths(f: &Formula, path: Path, out: &mut Vec<Path>) {
    out.push(path.clone());
    if matches!(f, Formula::Cand(_) | Formula::Cor(_)) {
        return;
    }
    match f {
        Formula::Neg(x) => collect_paths(x, path.child(1), out),
        Formula::Impl(a, b) => {
            collect_paths(a, path.child(1), out);
            collect_paths(b, path.child(2), out);
        }
        other => {
            for (i, x) in kids(other).iter().enumerate() {
                collect_paths(x, path.child(i + 1), out);
            }
        }
    }
}

fn rebuild(f: &Formula, path: &[usize], edit: &mut dyn FnMut(&Formula) -> Formula) -> Formula {
    let Some((&i, rest)) = path.split_first() else {
        return edit(f);
    };
    match f {
        Formula::Neg(x) => Formula::neg(rebuild(x, rest, edit)),
        Formula::Impl(a, b) if i == 1 => Formula::implies(rebuild(a, rest, edit), (**b).clone()),
        Formula::Impl(a, b) => Formula::implies((**a).clone(), rebuild(b, rest, edit)),
        Formula::And(c) | Formula::Or(c) | Formula::Cand(c) | Formula::Cor(c) => {
            let mut c = c.clone();
            c[i - 1] = rebuild(&c[i - 1], rest, edit);
            match f {
                Formula::And(_) => Formula::And(c),
                Formula::Or(_) => Formula::Or(c),
                Formula::Cand(_) => Formula::Cand(c),
                _ => Formula::Cor(c),
            }
        }
        other => other.clone(),
    }
}

/// A valid proof whose conclusion has between 1 and 3 environment choice
/// points, found by sampling candidates until the prover succeeds.
pub fn random_proof(rng: &mut impl Rng) -> Vec<ProofLine> {
    loop {
        let goal = random_candidate(rng);
        if !(1..=3).contains(&env_choice_points(&goal)) {
            continue;
        }
        if let Some(lines) = Prover::prove(&goal) {
            return lines;
        }
    }
}
