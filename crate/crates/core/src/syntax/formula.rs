use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// A CL1 formula.
///
/// `Cand` is choice conjunction (⊓) and `Cor` is choice disjunction (⊔).
/// N-ary nodes must hold at least two children; use [`Formula::well_formed`]
/// to check a hand-built tree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(String),
    Top,
    Bot,
    Neg(Box<Formula>),
    Impl(Box<Formula>, Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Cand(Vec<Formula>),
    Cor(Vec<Formula>),
}

/// The node kind of a formula, without its children.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Atom,
    Top,
    Bot,
    Neg,
    Impl,
    And,
    Or,
    Cand,
    Cor,
}

impl Kind {
    pub fn is_choice(self) -> bool {
        matches!(self, Kind::Cand | Kind::Cor)
    }

    /// ∧, ∨, ⊓ and ⊔ are commutative; ¬ and → are not.
    pub fn is_commutative(self) -> bool {
        matches!(self, Kind::And | Kind::Or | Kind::Cand | Kind::Cor)
    }

    pub fn is_nary(self) -> bool {
        self.is_commutative()
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Kind::Atom => "",
            Kind::Top => "T",
            Kind::Bot => "F",
            Kind::Neg => "~",
            Kind::Impl => "->",
            Kind::And => "&",
            Kind::Or => "|",
            Kind::Cand => "?&",
            Kind::Cor => "?|",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("invalid atom name `{0}`")]
    BadAtom(String),
    #[error("{kind:?} node has {found} children, needs at least 2")]
    Arity { kind: Kind, found: usize },
}

pub(crate) fn is_atom_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Formula {
        Formula::Atom(name.into())
    }

    pub fn neg(child: Formula) -> Formula {
        Formula::Neg(Box::new(child))
    }

    pub fn implies(left: Formula, right: Formula) -> Formula {
        Formula::Impl(Box::new(left), Box::new(right))
    }

    pub fn kind(&self) -> Kind {
        match self {
            Formula::Atom(_) => Kind::Atom,
            Formula::Top => Kind::Top,
            Formula::Bot => Kind::Bot,
            Formula::Neg(_) => Kind::Neg,
            Formula::Impl(..) => Kind::Impl,
            Formula::And(_) => Kind::And,
            Formula::Or(_) => Kind::Or,
            Formula::Cand(_) => Kind::Cand,
            Formula::Cor(_) => Kind::Cor,
        }
    }

    pub fn is_choice(&self) -> bool {
        self.kind().is_choice()
    }

    pub fn arity(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::Top | Formula::Bot => 0,
            Formula::Neg(_) => 1,
            Formula::Impl(..) => 2,
            Formula::And(cs) | Formula::Or(cs) | Formula::Cand(cs) | Formula::Cor(cs) => cs.len(),
        }
    }

    /// The `index`-th child, 1-based.
    pub fn child(&self, index: usize) -> Option<&Formula> {
        match (self, index) {
            (Formula::Neg(c), 1) => Some(c),
            (Formula::Impl(l, _), 1) => Some(l),
            (Formula::Impl(_, r), 2) => Some(r),
            (Formula::And(cs) | Formula::Or(cs) | Formula::Cand(cs) | Formula::Cor(cs), i) if i >= 1 => {
                cs.get(i - 1)
            }
            _ => None,
        }
    }

    pub fn children(&self) -> Children<'_> {
        let inner = match self {
            Formula::Atom(_) | Formula::Top | Formula::Bot => ChildrenInner::Slice([].iter()),
            Formula::Neg(c) => ChildrenInner::Slice(std::slice::from_ref(&**c).iter()),
            Formula::Impl(l, r) => ChildrenInner::Pair(Some(l), Some(r)),
            Formula::And(cs) | Formula::Or(cs) | Formula::Cand(cs) | Formula::Cor(cs) => {
                ChildrenInner::Slice(cs.iter())
            }
        };
        Children { inner }
    }

    /// Rebuild a node of the same kind over new children. Leaves are returned
    /// unchanged and `children` is ignored for them.
    ///
    /// Panics if the child count does not fit a unary or binary kind.
    pub fn with_children(&self, children: Vec<Formula>) -> Formula {
        Formula::from_kind(self.kind(), self.atom_name(), children)
    }

    pub(crate) fn from_kind(kind: Kind, name: Option<&str>, mut children: Vec<Formula>) -> Formula {
        match kind {
            Kind::Atom => Formula::Atom(name.expect("atom name").to_string()),
            Kind::Top => Formula::Top,
            Kind::Bot => Formula::Bot,
            Kind::Neg => {
                assert_eq!(children.len(), 1, "¬ takes one child");
                Formula::Neg(Box::new(children.pop().unwrap()))
            }
            Kind::Impl => {
                assert_eq!(children.len(), 2, "→ takes two children");
                let right = children.pop().unwrap();
                let left = children.pop().unwrap();
                Formula::implies(left, right)
            }
            Kind::And => Formula::And(children),
            Kind::Or => Formula::Or(children),
            Kind::Cand => Formula::Cand(children),
            Kind::Cor => Formula::Cor(children),
        }
    }

    pub fn atom_name(&self) -> Option<&str> {
        match self {
            Formula::Atom(name) => Some(name),
            _ => None,
        }
    }

    /// Check the structural invariants: atom names and n-ary arity.
    pub fn well_formed(&self) -> Result<(), FormulaError> {
        match self {
            Formula::Atom(name) if !is_atom_name(name) => Err(FormulaError::BadAtom(name.clone())),
            Formula::And(cs) | Formula::Or(cs) | Formula::Cand(cs) | Formula::Cor(cs) if cs.len() < 2 => {
                Err(FormulaError::Arity { kind: self.kind(), found: cs.len() })
            }
            _ => self.children().try_for_each(Formula::well_formed),
        }
    }

    pub fn node_count(&self) -> usize {
        1 + self.children().map(Formula::node_count).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.children().map(Formula::depth).max().unwrap_or(0)
    }

    /// Distinct nonlogical atoms, sorted by name.
    pub fn atoms(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            Formula::Atom(name) => {
                out.insert(name);
            }
            _ => self.children().for_each(|c| c.collect_atoms(out)),
        }
    }

    /// True if any node, at any depth, is a choice connective.
    pub fn contains_choice(&self) -> bool {
        self.is_choice() || self.children().any(Formula::contains_choice)
    }
}

pub struct Children<'a> {
    inner: ChildrenInner<'a>,
}

enum ChildrenInner<'a> {
    Slice(std::slice::Iter<'a, Formula>),
    Pair(Option<&'a Formula>, Option<&'a Formula>),
}

impl<'a> Iterator for Children<'a> {
    type Item = &'a Formula;

    fn next(&mut self) -> Option<&'a Formula> {
        match &mut self.inner {
            ChildrenInner::Slice(it) => it.next(),
            ChildrenInner::Pair(first, second) => first.take().or_else(|| second.take()),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::render(self))
    }
}

impl std::str::FromStr for Formula {
    type Err = super::ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        super::parse_formula(s)
    }
}

impl Serialize for Formula {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&super::render(self))
    }
}

impl<'de> Deserialize<'de> for Formula {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        super::parse_formula(&text).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn children_of_each_kind() {
        let f = Formula::implies(Formula::atom("p"), Formula::neg(Formula::Top));
        let kids: Vec<_> = f.children().collect();
        assert_eq!(kids.len(), 2);
        assert_eq!(kids[0], &Formula::atom("p"));
        assert_eq!(f.child(2).unwrap().child(1), Some(&Formula::Top));
        assert_eq!(f.child(3), None);
        assert_eq!(Formula::atom("p").children().count(), 0);
    }

    #[test]
    fn well_formedness() {
        assert!(Formula::And(vec![Formula::atom("p"), Formula::Bot]).well_formed().is_ok());
        assert_eq!(
            Formula::Cor(vec![Formula::atom("p")]).well_formed(),
            Err(FormulaError::Arity { kind: Kind::Cor, found: 1 })
        );
        assert!(matches!(Formula::atom("P").well_formed(), Err(FormulaError::BadAtom(_))));
        assert!(Formula::atom("p_1x").well_formed().is_ok());
    }

    #[test]
    fn atoms_are_sorted_and_distinct() {
        let f = Formula::Or(vec![Formula::atom("q"), Formula::atom("p"), Formula::atom("q")]);
        assert_eq!(f.atoms().into_iter().collect::<Vec<_>>(), vec!["p", "q"]);
    }
}
