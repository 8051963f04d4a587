use std::ops::Not;

use serde::{Deserialize, Serialize};

use super::{Formula, Kind, Path};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Polarity {
    Positive,
    Negative,
}

impl Not for Polarity {
    type Output = Polarity;

    fn not(self) -> Polarity {
        match self {
            Polarity::Positive => Polarity::Negative,
            Polarity::Negative => Polarity::Positive,
        }
    }
}

/// Polarity of the `index`-th child of a node of kind `parent`, given the
/// parent's own polarity. `E → F` reads as `¬E ∨ F`.
pub fn child_polarity(parent: Kind, index: usize, polarity: Polarity) -> Polarity {
    match (parent, index) {
        (Kind::Neg, _) | (Kind::Impl, 1) => !polarity,
        _ => polarity,
    }
}

/// An occurrence that is not strictly inside a choice connective.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceOccurrence<'a> {
    pub path: Path,
    pub subformula: &'a Formula,
    pub polarity: Polarity,
}

/// Borrowed view handed to [`for_each_surface`] callbacks.
#[derive(Debug, Clone, Copy)]
pub(crate) struct SurfaceRef<'p, 'f> {
    pub path: &'p [usize],
    pub subformula: &'f Formula,
    pub polarity: Polarity,
}

/// Every surface occurrence of `f`, root included, in pre-order.
pub fn surface_occurrences(f: &Formula) -> Vec<SurfaceOccurrence<'_>> {
    let mut out = Vec::new();
    let mut path = Vec::new();
    visit(f, Polarity::Positive, &mut path, &mut |occ| {
        out.push(SurfaceOccurrence { path: Path::from(occ.path), subformula: occ.subformula, polarity: occ.polarity })
    });
    out
}

/// Calls `each` for every surface occurrence in pre-order without allocating
/// a path per occurrence.
pub(crate) fn for_each_surface<'f>(f: &'f Formula, mut each: impl FnMut(SurfaceRef<'_, 'f>)) {
    let mut path = Vec::new();
    visit(f, Polarity::Positive, &mut path, &mut each);
}

fn visit<'f>(f: &'f Formula, polarity: Polarity, path: &mut Vec<usize>, each: &mut dyn FnMut(SurfaceRef<'_, 'f>)) {
    each(SurfaceRef { path, subformula: f, polarity });
    if f.is_choice() {
        return;
    }
    for (n, child) in f.children().enumerate() {
        path.push(n + 1);
        visit(child, child_polarity(f.kind(), n + 1, polarity), path, each);
        path.pop();
    }
}

/// The two players. The machine resolves its own choices; the environment
/// resolves the rest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Player {
    Machine,
    Environment,
}

/// Positive ⊓ and negative ⊔ belong to the environment; negative ⊓ and
/// positive ⊔ to the machine. `None` for non-choice nodes.
pub fn owner(kind: Kind, polarity: Polarity) -> Option<Player> {
    match (kind, polarity) {
        (Kind::Cand, Polarity::Positive) | (Kind::Cor, Polarity::Negative) => Some(Player::Environment),
        (Kind::Cand, Polarity::Negative) | (Kind::Cor, Polarity::Positive) => Some(Player::Machine),
        _ => None,
    }
}

/// Surface choice occurrences resolved by `who`, in pre-order.
pub fn choice_occurrences(f: &Formula, who: Player) -> Vec<SurfaceOccurrence<'_>> {
    let mut out = Vec::new();
    for_each_surface(f, |occ| {
        if owner(occ.subformula.kind(), occ.polarity) == Some(who) {
            out.push(SurfaceOccurrence { path: Path::from(occ.path), subformula: occ.subformula, polarity: occ.polarity });
        }
    });
    out
}

/// Polarity of the node at `path`, ignoring whether it is a surface
/// occurrence. `None` if the path does not resolve.
pub fn polarity_at(f: &Formula, path: &Path) -> Option<Polarity> {
    let mut node = f;
    let mut polarity = Polarity::Positive;
    for &index in path.indices() {
        let child = node.child(index)?;
        polarity = child_polarity(node.kind(), index, polarity);
        node = child;
    }
    Some(polarity)
}
