use thiserror::Error;

use super::{Formula, Path};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("path `{path}` does not resolve: index {index} exceeds arity {arity}")]
    Unresolvable { path: Path, index: usize, arity: usize },
    #[error("path `{path}` does not address a choice connective")]
    NotChoice { path: Path },
    #[error("path `{path}` lies inside a choice connective")]
    NotSurface { path: Path },
    #[error("component {component} out of range at `{path}` (arity {arity})")]
    ComponentOutOfRange { path: Path, component: usize, arity: usize },
}

/// The subformula at `path`.
pub fn resolve<'a>(f: &'a Formula, path: &Path) -> Result<&'a Formula, PathError> {
    let mut node = f;
    for &index in path.indices() {
        node = node.child(index).ok_or_else(|| PathError::Unresolvable {
            path: path.clone(),
            index,
            arity: node.arity(),
        })?;
    }
    Ok(node)
}

/// Replace the choice occurrence at `path` by its `component`-th child
/// (1-based). The occurrence must be a surface ⊓ or ⊔.
pub fn substitute(f: &Formula, path: &Path, component: usize) -> Result<Formula, PathError> {
    let mut node = f;
    for &index in path.indices() {
        if node.is_choice() {
            return Err(PathError::NotSurface { path: path.clone() });
        }
        node = node.child(index).ok_or_else(|| PathError::Unresolvable {
            path: path.clone(),
            index,
            arity: node.arity(),
        })?;
    }
    if !node.is_choice() {
        return Err(PathError::NotChoice { path: path.clone() });
    }
    let chosen = node.child(component).ok_or_else(|| PathError::ComponentOutOfRange {
        path: path.clone(),
        component,
        arity: node.arity(),
    })?;
    Ok(replace_at(f, path.indices(), chosen.clone()))
}

/// `f` with the node at `path` replaced. The path must resolve.
pub(crate) fn replace_at(f: &Formula, path: &[usize], replacement: Formula) -> Formula {
    let Some((&head, rest)) = path.split_first() else {
        return replacement;
    };
    let mut replacement = Some(replacement);
    let children = f
        .children()
        .enumerate()
        .map(|(n, child)| {
            if n + 1 == head {
                replace_at(child, rest, replacement.take().unwrap())
            } else {
                child.clone()
            }
        })
        .collect();
    f.with_children(children)
}

/// True iff no choice connective occurs anywhere in `f`.
pub fn is_elementary(f: &Formula) -> bool {
    !f.contains_choice()
}

/// Replace every surface ⊔ by ⊥ and every surface ⊓ by ⊤.
pub fn elementarize(f: &Formula) -> Formula {
    match f {
        Formula::Cand(_) => Formula::Top,
        Formula::Cor(_) => Formula::Bot,
        Formula::Atom(_) | Formula::Top | Formula::Bot => f.clone(),
        _ => f.with_children(f.children().map(elementarize).collect()),
    }
}
