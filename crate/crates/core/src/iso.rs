//! Formula isomorphism up to reordering the children of commutative
//! connectives, with permutation witnesses for replaying moves across
//! isomorphic trees.

use std::fmt::Write as _;

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::syntax::{Formula, Kind, Path};

/// How proof formulas are compared against required formulas.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatchMode {
    /// Structural equality.
    Strict,
    /// Equality up to permuting children of ∧, ∨, ⊓ and ⊔.
    #[default]
    Iso,
}

impl std::str::FromStr for MatchMode {
    type Err = String;

    fn from_str(s: &str) -> Result<MatchMode, String> {
        match s {
            "strict" => Ok(MatchMode::Strict),
            "iso" => Ok(MatchMode::Iso),
            other => Err(format!("unknown mode `{other}` (expected strict or iso)")),
        }
    }
}

impl std::fmt::Display for MatchMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            MatchMode::Strict => "strict",
            MatchMode::Iso => "iso",
        })
    }
}

/// Which connectives may have their children permuted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Commuting {
    /// ∧, ∨, ⊓, ⊔.
    All,
    /// Only ⊓ and ⊔; the classical skeleton stays positional.
    ChoiceOnly,
    /// Nothing; equal labels mean equal formulas.
    Nothing,
}

impl Commuting {
    fn permits(self, kind: Kind) -> bool {
        match self {
            Commuting::All => kind.is_commutative(),
            Commuting::ChoiceOnly => kind.is_choice(),
            Commuting::Nothing => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Shape {
    Atom(String),
    Node(Kind, Vec<u32>),
}

/// Interns subtree shapes into integer labels. Two formulas labelled by the
/// same canonicalizer are isomorphic iff their root labels are equal.
#[derive(Debug, Clone)]
pub struct Canonicalizer {
    commuting: Commuting,
    table: FxHashMap<Shape, u32>,
    /// `shapes[label]` is the shape interned as `label`.
    shapes: Vec<Shape>,
}

/// Per-node labels mirroring a formula's shape.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelTree {
    pub label: u32,
    pub children: Vec<LabelTree>,
}

impl Canonicalizer {
    pub fn new(commuting: Commuting) -> Canonicalizer {
        Canonicalizer { commuting, table: FxHashMap::default(), shapes: Vec::new() }
    }

    pub fn label(&mut self, f: &Formula) -> u32 {
        self.labels(f).label
    }

    pub fn labels(&mut self, f: &Formula) -> LabelTree {
        let children: Vec<LabelTree> = f.children().map(|c| self.labels(c)).collect();
        let label = match f {
            Formula::Atom(name) => self.intern(Shape::Atom(name.clone())),
            _ => self.node_label(f.kind(), children.iter().map(|c| c.label).collect()),
        };
        LabelTree { label, children }
    }

    /// Root label of `f` with the choice at `path` resolved to its
    /// `component`-th child, given `tree == self.labels(f)`. Only the nodes
    /// on `path` are relabelled. `None` means the resolved formula matches
    /// no formula labelled so far.
    pub fn label_resolved(&self, f: &Formula, tree: &LabelTree, path: &Path, component: usize) -> Option<u32> {
        let mut chain = Vec::with_capacity(path.len());
        let (mut node, mut labels) = (f, tree);
        for &index in path.indices() {
            chain.push((node.kind(), labels, index - 1));
            node = node.child(index).expect("path resolves");
            labels = &labels.children[index - 1];
        }
        let mut label = labels.children[component - 1].label;
        for (kind, labels, j) in chain.into_iter().rev() {
            let Shape::Node(_, keys) = &self.shapes[labels.label as usize] else {
                unreachable!("inner nodes have node shapes")
            };
            let mut keys = keys.clone();
            if self.commuting.permits(kind) {
                // keys are sorted: swap one occurrence of the old child label
                // for the new one and keep them sorted.
                let old = keys.binary_search(&labels.children[j].label).expect("child label present");
                keys.remove(old);
                let at = keys.partition_point(|&k| k < label);
                keys.insert(at, label);
            } else {
                keys[j] = label;
            }
            label = *self.table.get(&Shape::Node(kind, keys))?;
        }
        Some(label)
    }

    fn node_label(&mut self, kind: Kind, mut keys: Vec<u32>) -> u32 {
        if self.commuting.permits(kind) {
            keys.sort_unstable();
        }
        self.intern(Shape::Node(kind, keys))
    }

    fn intern(&mut self, shape: Shape) -> u32 {
        if let Some(&label) = self.table.get(&shape) {
            return label;
        }
        let label = self.shapes.len() as u32;
        self.shapes.push(shape.clone());
        self.table.insert(shape, label);
        label
    }
}

/// A string naming the isomorphism class of `f`: equal for two formulas iff
/// they are isomorphic.
///
/// Subtrees are ranked height by height, AHU style, so the child order of a
/// commutative node is intrinsic to the subtrees and the key is produced in
/// one pass after an `O(n log n)` ranking.
pub fn canonical_key(f: &Formula) -> String {
    struct Node<'a> {
        formula: &'a Formula,
        children: Vec<usize>,
        height: usize,
    }

    fn flatten<'a>(f: &'a Formula, nodes: &mut Vec<Node<'a>>) -> usize {
        let children: Vec<usize> = f.children().map(|c| flatten(c, nodes)).collect();
        let height = children.iter().map(|&c| nodes[c].height + 1).max().unwrap_or(0);
        nodes.push(Node { formula: f, children, height });
        nodes.len() - 1
    }

    let mut nodes = Vec::new();
    let root = flatten(f, &mut nodes);
    let max_height = nodes[root].height;
    let mut by_height: Vec<Vec<usize>> = vec![Vec::new(); max_height + 1];
    for (i, node) in nodes.iter().enumerate() {
        by_height[node.height].push(i);
    }

    // rank[i] orders isomorphism classes: (height, rank within height).
    let mut rank = vec![(0usize, 0usize); nodes.len()];
    let mut order: Vec<Vec<usize>> = vec![Vec::new(); nodes.len()];
    for (height, level) in by_height.iter().enumerate() {
        let mut keyed: Vec<(Kind, &str, Vec<(usize, usize)>, usize)> = level
            .iter()
            .map(|&i| {
                let node = &nodes[i];
                let mut kids = node.children.clone();
                if node.formula.kind().is_commutative() {
                    kids.sort_by_key(|&c| rank[c]);
                }
                let child_ranks = kids.iter().map(|&c| rank[c]).collect();
                order[i] = kids;
                (node.formula.kind(), node.formula.atom_name().unwrap_or(""), child_ranks, i)
            })
            .collect();
        keyed.sort();
        let mut current = 0;
        for n in 0..keyed.len() {
            let (kind, name, kids, _) = &keyed[n];
            if n > 0 && (kind, name, kids) != (&keyed[n - 1].0, &keyed[n - 1].1, &keyed[n - 1].2) {
                current += 1;
            }
            rank[keyed[n].3] = (height, current);
        }
    }

    fn emit(i: usize, nodes: &[Node<'_>], order: &[Vec<usize>], out: &mut String) {
        let f = nodes[i].formula;
        match f {
            Formula::Atom(name) => out.push_str(name),
            Formula::Top => out.push('T'),
            Formula::Bot => out.push('F'),
            _ => {
                let _ = write!(out, "{}(", f.kind().symbol());
                for (n, &c) in order[i].iter().enumerate() {
                    if n > 0 {
                        out.push(',');
                    }
                    emit(c, nodes, order, out);
                }
                out.push(')');
            }
        }
    }

    let mut out = String::new();
    emit(root, &nodes, &order, &mut out);
    out
}

/// Isomorphism decision under the given mode.
pub fn isomorphic(a: &Formula, b: &Formula, mode: MatchMode) -> bool {
    match mode {
        MatchMode::Strict => a == b,
        MatchMode::Iso => {
            let mut canon = Canonicalizer::new(Commuting::All);
            canon.label(a) == canon.label(b)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("formulas are not isomorphic")]
    NotIsomorphic,
    #[error("path `{0}` is outside the witness domain")]
    OutsideDomain(Path),
    #[error("component {component} out of range at `{path}`")]
    ComponentOutOfRange { path: Path, component: usize },
    #[error("witness shape does not fit the formula")]
    ShapeMismatch,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct WitnessNode {
    /// Source child `j` (0-based) lands at target child `perm[j]`.
    perm: Vec<usize>,
    /// Indexed by source child.
    children: Vec<WitnessNode>,
}

/// A node-by-node child permutation carrying a source formula onto an
/// isomorphic target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsoWitness {
    root: WitnessNode,
}

/// One node of a witness: where a source node lands and how its children
/// are permuted (1-based, `permutation[j-1]` is the image of child `j`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessEntry {
    pub source: Path,
    pub target: Path,
    pub permutation: Vec<usize>,
}

impl WitnessNode {
    fn identity(f: &Formula) -> WitnessNode {
        WitnessNode { perm: (0..f.arity()).collect(), children: f.children().map(WitnessNode::identity).collect() }
    }

    fn build(a: &Formula, b: &Formula, la: &LabelTree, lb: &LabelTree, commuting: Commuting) -> WitnessNode {
        let arity = a.arity();
        let perm: Vec<usize> = if commuting.permits(a.kind()) {
            let mut used = vec![false; arity];
            la.children
                .iter()
                .map(|child| {
                    let k = (0..arity)
                        .find(|&k| !used[k] && lb.children[k].label == child.label)
                        .expect("labels match as multisets");
                    used[k] = true;
                    k
                })
                .collect()
        } else {
            (0..arity).collect()
        };
        let children = perm
            .iter()
            .enumerate()
            .map(|(j, &k)| {
                WitnessNode::build(
                    a.child(j + 1).unwrap(),
                    b.child(k + 1).unwrap(),
                    &la.children[j],
                    &lb.children[k],
                    commuting,
                )
            })
            .collect();
        WitnessNode { perm, children }
    }

    fn inverse(&self) -> WitnessNode {
        let n = self.perm.len();
        let mut perm = vec![0; n];
        let mut children: Vec<Option<WitnessNode>> = vec![None; n];
        for (j, &k) in self.perm.iter().enumerate() {
            perm[k] = j;
            children[k] = Some(self.children[j].inverse());
        }
        WitnessNode { perm, children: children.into_iter().map(Option::unwrap).collect() }
    }

    fn compose(&self, next: &WitnessNode) -> Result<WitnessNode, WitnessError> {
        if self.perm.len() != next.perm.len() {
            return Err(WitnessError::ShapeMismatch);
        }
        let perm = self.perm.iter().map(|&k| next.perm[k]).collect();
        let children = self
            .children
            .iter()
            .zip(&self.perm)
            .map(|(child, &k)| child.compose(&next.children[k]))
            .collect::<Result<_, _>>()?;
        Ok(WitnessNode { perm, children })
    }

    fn apply(&self, f: &Formula) -> Result<Formula, WitnessError> {
        if f.arity() != self.perm.len() {
            return Err(WitnessError::ShapeMismatch);
        }
        if f.arity() == 0 {
            return Ok(f.clone());
        }
        let mut out: Vec<Option<Formula>> = vec![None; f.arity()];
        for (j, child) in f.children().enumerate() {
            out[self.perm[j]] = Some(self.children[j].apply(child)?);
        }
        Ok(f.with_children(out.into_iter().map(Option::unwrap).collect()))
    }

    fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(j, &k)| j == k) && self.children.iter().all(WitnessNode::is_identity)
    }

    fn fits(&self, f: &Formula) -> bool {
        f.arity() == self.perm.len() && f.children().zip(&self.children).all(|(c, w)| w.fits(c))
    }
}

impl IsoWitness {
    /// The identity witness of `f` onto itself.
    pub fn identity(f: &Formula) -> IsoWitness {
        IsoWitness { root: WitnessNode::identity(f) }
    }

    /// A witness from `a` to `b`, permuting any commutative connective.
    /// Equal-labelled siblings are paired in their original order.
    pub fn between(a: &Formula, b: &Formula) -> Result<IsoWitness, WitnessError> {
        IsoWitness::between_with(a, b, Commuting::All)
    }

    pub fn between_with(a: &Formula, b: &Formula, commuting: Commuting) -> Result<IsoWitness, WitnessError> {
        let mut canon = Canonicalizer::new(commuting);
        let la = canon.labels(a);
        let lb = canon.labels(b);
        if la.label != lb.label {
            return Err(WitnessError::NotIsomorphic);
        }
        Ok(IsoWitness { root: WitnessNode::build(a, b, &la, &lb, commuting) })
    }

    pub fn is_identity(&self) -> bool {
        self.root.is_identity()
    }

    /// True if this witness has the shape of `f` (it could have been built
    /// with `f` as its source).
    pub fn fits(&self, f: &Formula) -> bool {
        self.root.fits(f)
    }

    fn node(&self, path: &Path) -> Result<(&WitnessNode, Path), WitnessError> {
        let mut node = &self.root;
        let mut target = Vec::with_capacity(path.len());
        for &index in path.indices() {
            let j = index.checked_sub(1).filter(|&j| j < node.perm.len());
            let j = j.ok_or_else(|| WitnessError::OutsideDomain(path.clone()))?;
            target.push(node.perm[j] + 1);
            node = &node.children[j];
        }
        Ok((node, Path::new(target)))
    }

    /// Where the source node at `path` lands in the target.
    pub fn target_path(&self, path: &Path) -> Result<Path, WitnessError> {
        self.node(path).map(|(_, target)| target)
    }

    /// The 1-based child permutation at the source node `path`.
    pub fn permutation_at(&self, path: &Path) -> Result<Vec<usize>, WitnessError> {
        self.node(path).map(|(node, _)| node.perm.iter().map(|k| k + 1).collect())
    }

    /// Translate a choice of `component` at source `path` into target
    /// coordinates.
    pub fn remap_move(&self, path: &Path, component: usize) -> Result<(Path, usize), WitnessError> {
        let (node, target) = self.node(path)?;
        let k = component
            .checked_sub(1)
            .and_then(|j| node.perm.get(j))
            .ok_or_else(|| WitnessError::ComponentOutOfRange { path: path.clone(), component })?;
        Ok((target, k + 1))
    }

    pub fn inverse(&self) -> IsoWitness {
        IsoWitness { root: self.root.inverse() }
    }

    /// `self` (A → B) followed by `next` (B → C), giving A → C.
    pub fn compose(&self, next: &IsoWitness) -> Result<IsoWitness, WitnessError> {
        Ok(IsoWitness { root: self.root.compose(&next.root)? })
    }

    /// Rebuild the target by permuting the children of `source`.
    pub fn apply(&self, source: &Formula) -> Result<Formula, WitnessError> {
        self.root.apply(source)
    }

    /// True if applying the witness to `source` yields exactly `target`.
    pub fn verifies(&self, source: &Formula, target: &Formula) -> bool {
        self.apply(source).is_ok_and(|f| &f == target)
    }

    /// The witness between the two formulas obtained by resolving the choice
    /// at source `path` to `component` on the source side and to its image on
    /// the target side.
    pub fn restrict(&self, path: &Path, component: usize) -> Result<IsoWitness, WitnessError> {
        fn go(node: &WitnessNode, rest: &[usize], component: usize) -> Option<WitnessNode> {
            match rest.split_first() {
                None => node.children.get(component.checked_sub(1)?).cloned(),
                Some((&index, tail)) => {
                    let j = index.checked_sub(1)?;
                    let replaced = go(node.children.get(j)?, tail, component)?;
                    let mut out = node.clone();
                    out.children[j] = replaced;
                    Some(out)
                }
            }
        }
        go(&self.root, path.indices(), component)
            .map(|root| IsoWitness { root })
            .ok_or_else(|| WitnessError::OutsideDomain(path.clone()))
    }

    /// Every node of the witness in source pre-order.
    pub fn entries(&self) -> Vec<WitnessEntry> {
        fn go(node: &WitnessNode, source: &mut Vec<usize>, target: &mut Vec<usize>, out: &mut Vec<WitnessEntry>) {
            out.push(WitnessEntry {
                source: Path::new(source.clone()),
                target: Path::new(target.clone()),
                permutation: node.perm.iter().map(|k| k + 1).collect(),
            });
            for (j, child) in node.children.iter().enumerate() {
                source.push(j + 1);
                target.push(node.perm[j] + 1);
                go(child, source, target, out);
                source.pop();
                target.pop();
            }
        }
        let mut out = Vec::new();
        go(&self.root, &mut Vec::new(), &mut Vec::new(), &mut out);
        out
    }
}

/// How closely a formula matched a required one. Lower is closer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MatchTier {
    Exact,
    /// Equal after permuting children of choice connectives only.
    ChoicePermuted,
    /// Equal after permuting children of any commutative connective.
    Commuted,
}

/// Compares candidate formulas against targets under a [`MatchMode`],
/// reporting the closest [`MatchTier`] and producing witnesses.
#[derive(Debug, Clone)]
pub struct Matcher {
    mode: MatchMode,
    exact: Canonicalizer,
    choice_only: Canonicalizer,
    full: Canonicalizer,
}

/// Label trees of one formula for a particular [`Matcher`], one per tier
/// its mode can report.
#[derive(Debug, Clone)]
pub struct Prepared {
    exact: LabelTree,
    choice_only: Option<LabelTree>,
    full: Option<LabelTree>,
}

impl Matcher {
    pub fn new(mode: MatchMode) -> Matcher {
        Matcher {
            mode,
            exact: Canonicalizer::new(Commuting::Nothing),
            choice_only: Canonicalizer::new(Commuting::ChoiceOnly),
            full: Canonicalizer::new(Commuting::All),
        }
    }

    pub fn mode(&self) -> MatchMode {
        self.mode
    }

    pub fn tier(&mut self, candidate: &Formula, target: &Formula) -> Option<MatchTier> {
        if candidate == target {
            return Some(MatchTier::Exact);
        }
        if self.mode == MatchMode::Strict {
            return None;
        }
        if self.choice_only.label(candidate) == self.choice_only.label(target) {
            return Some(MatchTier::ChoicePermuted);
        }
        if self.full.label(candidate) == self.full.label(target) {
            return Some(MatchTier::Commuted);
        }
        None
    }

    /// Labels of `f`, for repeated [`Matcher::resolved_tier`] queries.
    pub fn prepare(&mut self, f: &Formula) -> Prepared {
        let iso = self.mode == MatchMode::Iso;
        Prepared {
            exact: self.exact.labels(f),
            choice_only: iso.then(|| self.choice_only.labels(f)),
            full: iso.then(|| self.full.labels(f)),
        }
    }

    /// Same as `tier(&substitute(f, path, component)?, target)`, where `fp`
    /// and `target` were prepared by this matcher, without building the
    /// substituted formula.
    pub fn resolved_tier(
        &self,
        f: &Formula,
        fp: &Prepared,
        path: &Path,
        component: usize,
        target: &Prepared,
    ) -> Option<MatchTier> {
        let hits = |canon: &Canonicalizer, from: &LabelTree, to: &LabelTree| {
            canon.label_resolved(f, from, path, component) == Some(to.label)
        };
        // Each tier implies the coarser ones, so the coarsest decides
        // whether there is a match at all.
        if let (Some(ff), Some(tf)) = (&fp.full, &target.full) {
            if !hits(&self.full, ff, tf) {
                return None;
            }
        }
        if hits(&self.exact, &fp.exact, &target.exact) {
            return Some(MatchTier::Exact);
        }
        let (Some(fc), Some(tc)) = (&fp.choice_only, &target.choice_only) else {
            return None;
        };
        if hits(&self.choice_only, fc, tc) {
            return Some(MatchTier::ChoicePermuted);
        }
        Some(MatchTier::Commuted)
    }

    /// Witness from `candidate` to `target` consistent with `tier`: it
    /// permutes only what the tier allows.
    pub fn witness(&mut self, candidate: &Formula, target: &Formula, tier: MatchTier) -> IsoWitness {
        let commuting = match tier {
            MatchTier::Exact => return IsoWitness::identity(candidate),
            MatchTier::ChoicePermuted => Commuting::ChoiceOnly,
            MatchTier::Commuted => Commuting::All,
        };
        let canon = match commuting {
            Commuting::ChoiceOnly => &mut self.choice_only,
            Commuting::All => &mut self.full,
            Commuting::Nothing => unreachable!("exact matches use the identity"),
        };
        let la = canon.labels(candidate);
        let lb = canon.labels(target);
        assert_eq!(la.label, lb.label, "witness requested for a non-matching tier");
        IsoWitness { root: WitnessNode::build(candidate, target, &la, &lb, commuting) }
    }
}
