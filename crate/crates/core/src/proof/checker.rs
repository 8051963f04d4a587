use std::collections::{BTreeSet, HashMap};

use super::parser::{parse_lines, validate_structure};
use super::{
    Annotation, CheckOptions, CheckedProof, Diagnostic, EnvChoice, EnvChoiceTable, MachineChoice, ProofLine, Rule,
};
use crate::classical::{is_stable, ClassicalError};
use crate::iso::{Matcher, MatchTier};
use crate::syntax::{choice_occurrences, substitute, Player, Formula, Path};

/// Outcome of checking one step: the annotation when the step holds, and
/// any diagnostics (warnings may accompany a successful step).
#[derive(Debug, Clone)]
pub struct LineCheck<T> {
    pub annotation: Option<T>,
    pub diagnostics: Vec<Diagnostic>,
}

impl<T> LineCheck<T> {
    pub fn is_ok(&self) -> bool {
        self.annotation.is_some()
    }
}

/// Every surface choice owned by `who`, as `(path, component)`, in
/// pre-order and ascending component order.
fn resolutions(f: &Formula, who: Player) -> Vec<(Path, usize)> {
    let mut out = Vec::new();
    for occ in choice_occurrences(f, who) {
        for component in 1..=occ.subformula.arity() {
            out.push((occ.path.clone(), component));
        }
    }
    out
}

fn resolved(f: &Formula, path: &Path, component: usize) -> Formula {
    substitute(f, path, component).expect("surface choice occurrence")
}

/// Rule (a): `line.formula` must be stable, and for every environment choice
/// some listed premise must match the formula with that choice made.
///
/// Premise order does not matter. Among matching premises the closest
/// [`MatchTier`] wins, then the earliest listed.
pub fn check_line_a(
    line: &ProofLine,
    premises: &[(usize, &Formula)],
    matcher: &mut Matcher,
    max_atoms: usize,
) -> LineCheck<EnvChoiceTable> {
    let mut diagnostics = Vec::new();
    match is_stable(&line.formula, max_atoms) {
        Ok(true) => {}
        Ok(false) => diagnostics.push(Diagnostic::error(
            line.number,
            "unstable",
            format!("rule a needs a stable formula; `{}` is not classically valid", crate::syntax::elementarize(&line.formula)),
        )),
        Err(e @ ClassicalError::TooManyAtoms { .. }) => {
            diagnostics.push(Diagnostic::error(line.number, "atom-limit", e.to_string()))
        }
        Err(ClassicalError::NotElementary) => unreachable!("elementarization has no choices"),
    }

    let mut entries = Vec::new();
    let mut matched_any = BTreeSet::new();
    let choices = resolutions(&line.formula, Player::Environment);
    let (source, targets) = if choices.is_empty() {
        (None, Vec::new())
    } else {
        (Some(matcher.prepare(&line.formula)), premises.iter().map(|(_, p)| matcher.prepare(p)).collect())
    };
    for (path, component) in choices {
        let source = source.as_ref().expect("prepared when there are choices");
        let mut best: Option<(MatchTier, usize, &Formula)> = None;
        for (&(number, premise), target) in premises.iter().zip(&targets) {
            if let Some(tier) = matcher.resolved_tier(&line.formula, source, &path, component, target) {
                matched_any.insert(number);
                if best.is_none_or(|(t, _, _)| tier < t) {
                    best = Some((tier, number, premise));
                }
            }
        }
        match best {
            Some((tier, premise, target)) => {
                let witness = matcher.witness(&resolved(&line.formula, &path, component), target, tier);
                entries.push(EnvChoice { path, component, premise, witness, tier });
            }
            None => diagnostics.push(
                Diagnostic::error(
                    line.number,
                    "missing-premise",
                    format!(
                        "environment choice {} needs a premise matching `{}` ({} mode)",
                        move_text(&path, component),
                        resolved(&line.formula, &path, component),
                        matcher.mode()
                    ),
                )
                .at(&path),
            ),
        }
    }

    for &(number, _) in premises {
        if !matched_any.contains(&number) {
            diagnostics.push(Diagnostic::warning(
                line.number,
                "unused-premise",
                format!("premise {number} answers no environment choice"),
            ));
        }
    }

    let ok = !diagnostics.iter().any(Diagnostic::is_error);
    LineCheck { annotation: ok.then_some(EnvChoiceTable { entries }), diagnostics }
}

/// Rule (b): some machine choice in `line.formula` must turn it into the
/// premise. Candidates are tried in pre-order and ascending component order;
/// the closest [`MatchTier`] wins, then the earliest candidate.
pub fn check_line_b(line: &ProofLine, premise: (usize, &Formula), matcher: &mut Matcher) -> LineCheck<MachineChoice> {
    let (number, target) = premise;
    let mut best: Option<(MatchTier, Path, usize)> = None;
    let choices = resolutions(&line.formula, Player::Machine);
    let prepared = (!choices.is_empty()).then(|| (matcher.prepare(&line.formula), matcher.prepare(target)));
    for (path, component) in choices {
        let (source, goal) = prepared.as_ref().expect("prepared when there are choices");
        if let Some(tier) = matcher.resolved_tier(&line.formula, source, &path, component, goal) {
            if best.as_ref().is_none_or(|(t, ..)| tier < *t) {
                let exact = tier == MatchTier::Exact;
                best = Some((tier, path, component));
                if exact {
                    break;
                }
            }
        }
    }
    match best {
        Some((tier, path, component)) => {
            let witness = matcher.witness(&resolved(&line.formula, &path, component), target, tier);
            LineCheck {
                annotation: Some(MachineChoice { path, component, premise: number, witness, tier }),
                diagnostics: Vec::new(),
            }
        }
        None => LineCheck {
            annotation: None,
            diagnostics: vec![Diagnostic::error(
                line.number,
                "no-machine-choice",
                format!("no machine choice turns this formula into premise {number} ({} mode)", matcher.mode()),
            )],
        },
    }
}

pub(crate) fn move_text(path: &Path, component: usize) -> String {
    if path.is_root() {
        component.to_string()
    } else {
        format!("{path}.{component}")
    }
}

/// Check every step of an already parsed proof. Structural problems
/// (numbering, forward references, rule b premise counts) are reported as
/// diagnostics and the affected steps are not rule-checked.
pub fn check_proof(lines: Vec<ProofLine>, options: &CheckOptions) -> CheckedProof {
    let mut diagnostics: Vec<Diagnostic> = validate_structure(&lines).iter().map(Diagnostic::from).collect();
    let broken: BTreeSet<usize> = diagnostics.iter().map(|d| d.line).collect();
    let by_number: HashMap<usize, &Formula> = lines.iter().map(|l| (l.number, &l.formula)).collect();
    let mut matcher = Matcher::new(options.mode);

    let mut annotations = Vec::with_capacity(lines.len());
    for line in &lines {
        if broken.contains(&line.number) {
            annotations.push(None);
            continue;
        }
        let mut resolved = Vec::with_capacity(line.premises.len());
        let mut unresolved = false;
        for &p in &line.premises {
            match by_number.get(&p) {
                Some(f) => resolved.push((p, *f)),
                None => {
                    unresolved = true;
                    diagnostics.push(Diagnostic::error(
                        line.number,
                        "unresolved-premise",
                        format!("premise {p} is not a line of this proof"),
                    ));
                }
            }
        }
        let annotation = match line.rule {
            Rule::A => {
                let check = check_line_a(line, &resolved, &mut matcher, options.max_atoms);
                diagnostics.extend(check.diagnostics);
                check.annotation.map(Annotation::Env)
            }
            Rule::B if unresolved => None,
            Rule::B => {
                let check = check_line_b(line, resolved[0], &mut matcher);
                diagnostics.extend(check.diagnostics);
                check.annotation.map(Annotation::Machine)
            }
        };
        annotations.push(if unresolved { None } else { annotation });
    }

    diagnostics.sort_by_key(|d| d.line);
    CheckedProof { lines, annotations, diagnostics, options: *options }
}

/// Parse and check a proof script, turning every parse problem into an
/// error diagnostic instead of failing.
pub fn check_source(text: &str, options: &CheckOptions) -> CheckedProof {
    let (lines, errors) = parse_lines(text);
    let mut checked = check_proof(lines, options);
    if !errors.is_empty() {
        // An unreadable line could be anything, including a premise: the
        // proof is invalid regardless of what the remaining steps say.
        checked.diagnostics.retain(|d| d.code != "empty-proof");
        checked.diagnostics.extend(errors.iter().map(Diagnostic::from));
        checked.diagnostics.sort_by_key(|d| d.line);
    }
    checked
}
