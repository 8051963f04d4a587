//! Proof scripts and their verification.
//!
//! A proof is a sequence of numbered steps, each justified by rule (a) or
//! rule (b) from earlier steps; the last step is the theorem. Checking a
//! step also records the information the game engine replays: for a rule (a)
//! step, the premise answering each environment choice; for a rule (b) step,
//! the single machine choice that leads to its premise.

mod checker;
mod parser;

use serde::{Deserialize, Serialize};

use crate::classical::DEFAULT_MAX_ATOMS;
use crate::iso::{IsoWitness, MatchMode, MatchTier};
use crate::syntax::{Formula, Path};

pub use checker::{check_line_a, check_line_b, check_proof, check_source, LineCheck};
pub use parser::{parse_proof, validate_structure, ProofErrorKind, ProofParseError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rule {
    #[serde(rename = "a")]
    A,
    #[serde(rename = "b")]
    B,
}

impl std::fmt::Display for Rule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Rule::A => "a",
            Rule::B => "b",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofLine {
    pub number: usize,
    pub formula: Formula,
    pub rule: Rule,
    /// Empty for "no premise".
    pub premises: Vec<usize>,
    /// 1-based line in the source text; 0 for lines built in code.
    pub source_line: usize,
}

impl ProofLine {
    pub fn new(number: usize, formula: Formula, rule: Rule, premises: Vec<usize>) -> ProofLine {
        ProofLine { number, formula, rule, premises, source_line: 0 }
    }
}

impl std::fmt::Display for ProofLine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}. {}, rule {}, ", self.number, self.formula, self.rule)?;
        if self.premises.is_empty() {
            return f.write_str("no premise");
        }
        for (n, p) in self.premises.iter().enumerate() {
            if n > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

/// One environment choice at a rule (a) step and the premise that answers it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnvChoice {
    pub path: Path,
    pub component: usize,
    pub premise: usize,
    /// From the step's formula with this choice made, onto the premise formula.
    pub witness: IsoWitness,
    pub tier: MatchTier,
}

/// Every environment choice of a rule (a) step, in pre-order of the
/// occurrences and ascending component order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EnvChoiceTable {
    pub entries: Vec<EnvChoice>,
}

impl EnvChoiceTable {
    pub fn get(&self, path: &Path, component: usize) -> Option<&EnvChoice> {
        self.entries.iter().find(|e| &e.path == path && e.component == component)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }
}

/// The machine's move at a rule (b) step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MachineChoice {
    pub path: Path,
    pub component: usize,
    pub premise: usize,
    /// From the step's formula with this choice made, onto the premise formula.
    pub witness: IsoWitness,
    pub tier: MatchTier,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Annotation {
    Env(EnvChoiceTable),
    Machine(MachineChoice),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    /// Proof line number, or the source line when the number was unreadable
    /// (code `malformed-line`). 0 for whole-file problems.
    pub line: usize,
    pub severity: Severity,
    pub code: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub path: Option<Path>,
}

impl Diagnostic {
    pub(crate) fn error(line: usize, code: &str, message: impl Into<String>) -> Diagnostic {
        Diagnostic { line, severity: Severity::Error, code: code.to_string(), message: message.into(), path: None }
    }

    pub(crate) fn warning(line: usize, code: &str, message: impl Into<String>) -> Diagnostic {
        Diagnostic { line, severity: Severity::Warning, code: code.to_string(), message: message.into(), path: None }
    }

    pub(crate) fn at(mut self, path: &Path) -> Diagnostic {
        self.path = Some(path.clone());
        self
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl From<&ProofParseError> for Diagnostic {
    fn from(e: &ProofParseError) -> Diagnostic {
        Diagnostic::error(e.line.unwrap_or(e.source_line), e.kind.code(), e.kind.to_string())
    }
}

impl std::fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let severity = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "line {}: {severity}[{}]: {}", self.line, self.code, self.message)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct CheckOptions {
    pub mode: MatchMode,
    pub max_atoms: usize,
}

impl Default for CheckOptions {
    fn default() -> CheckOptions {
        CheckOptions { mode: MatchMode::Iso, max_atoms: DEFAULT_MAX_ATOMS }
    }
}

impl CheckOptions {
    pub fn with_mode(mode: MatchMode) -> CheckOptions {
        CheckOptions { mode, ..CheckOptions::default() }
    }
}

/// A proof together with the verdict on every step.
#[derive(Debug, Clone)]
pub struct CheckedProof {
    lines: Vec<ProofLine>,
    /// Parallel to `lines`; `None` where the step failed.
    annotations: Vec<Option<Annotation>>,
    diagnostics: Vec<Diagnostic>,
    options: CheckOptions,
}

impl CheckedProof {
    pub fn is_valid(&self) -> bool {
        !self.diagnostics.iter().any(Diagnostic::is_error)
    }

    pub fn lines(&self) -> &[ProofLine] {
        &self.lines
    }

    pub fn options(&self) -> CheckOptions {
        self.options
    }

    pub fn diagnostics(&self) -> &[Diagnostic] {
        &self.diagnostics
    }

    pub fn errors(&self) -> impl Iterator<Item = &Diagnostic> {
        self.diagnostics.iter().filter(|d| d.is_error())
    }

    /// The last step: what the file proves.
    pub fn conclusion(&self) -> Option<&ProofLine> {
        self.lines.last()
    }

    fn index_of(&self, number: usize) -> Option<usize> {
        self.lines.binary_search_by_key(&number, |l| l.number).ok()
    }

    pub fn line(&self, number: usize) -> Option<&ProofLine> {
        self.index_of(number).map(|i| &self.lines[i])
    }

    pub fn annotation(&self, number: usize) -> Option<&Annotation> {
        self.index_of(number).and_then(|i| self.annotations[i].as_ref())
    }

    /// Line numbers whose steps carry an error diagnostic.
    pub fn failed_lines(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.errors().map(|d| d.line).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn report(&self) -> CheckReport {
        CheckReport {
            valid: self.is_valid(),
            mode: self.options.mode,
            lines: self.lines.len(),
            diagnostics: self.diagnostics.clone(),
        }
    }
}

/// Serializable summary of a check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub valid: bool,
    pub mode: MatchMode,
    pub lines: usize,
    pub diagnostics: Vec<Diagnostic>,
}
