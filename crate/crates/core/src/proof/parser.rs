use thiserror::Error;

use super::{ProofLine, Rule};
use crate::syntax::{parse_formula, ParseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("source line {source_line}: {kind}")]
pub struct ProofParseError {
    /// Proof line number, when it could be read.
    pub line: Option<usize>,
    /// 1-based line in the source text.
    pub source_line: usize,
    pub kind: ProofErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProofErrorKind {
    #[error("proof has no lines")]
    Empty,
    #[error("malformed line: {0}")]
    Malformed(&'static str),
    #[error("unknown rule `{0}` (expected a or b)")]
    UnknownRule(String),
    #[error("formula: {0}")]
    Formula(ParseError),
    #[error("line number {found} does not follow {previous}")]
    BadNumbering { previous: usize, found: usize },
    #[error("premise {premise} is not an earlier line")]
    ForwardReference { premise: usize },
    #[error("rule b takes exactly one premise, found {found}")]
    PremiseCount { found: usize },
}

impl ProofErrorKind {
    pub fn code(&self) -> &'static str {
        match self {
            ProofErrorKind::Empty => "empty-proof",
            ProofErrorKind::Malformed(_) => "malformed-line",
            ProofErrorKind::UnknownRule(_) => "unknown-rule",
            ProofErrorKind::Formula(_) => "formula-syntax",
            ProofErrorKind::BadNumbering { .. } => "bad-numbering",
            ProofErrorKind::ForwardReference { .. } => "forward-reference",
            ProofErrorKind::PremiseCount { .. } => "premise-count",
        }
    }
}

fn strip_comment(text: &str) -> &str {
    text.split_once('#').map_or(text, |(before, _)| before)
}

/// Parse one non-blank, comment-free line. Structural checks across lines
/// are left to [`validate_structure`].
pub(crate) fn parse_line(text: &str, source_line: usize) -> Result<ProofLine, ProofParseError> {
    let fail = |line, kind| ProofParseError { line, source_line, kind };
    let text = text.trim();

    let digits = text.bytes().take_while(u8::is_ascii_digit).count();
    if digits == 0 {
        return Err(fail(None, ProofErrorKind::Malformed("expected a line number")));
    }
    let number: usize = text[..digits]
        .parse()
        .map_err(|_| fail(None, ProofErrorKind::Malformed("line number too large")))?;
    let Some(rest) = text[digits..].strip_prefix('.') else {
        return Err(fail(Some(number), ProofErrorKind::Malformed("expected `.` after the line number")));
    };
    let Some((formula_text, rest)) = rest.split_once(',') else {
        return Err(fail(Some(number), ProofErrorKind::Malformed("expected `, rule ...` after the formula")));
    };
    let formula = parse_formula(formula_text).map_err(|e| fail(Some(number), ProofErrorKind::Formula(e)))?;

    let rest = rest.trim_start();
    let Some(rest) = rest.strip_prefix("rule").filter(|r| r.starts_with(char::is_whitespace)) else {
        return Err(fail(Some(number), ProofErrorKind::Malformed("expected `rule a` or `rule b`")));
    };
    let Some((tag, justification)) = rest.split_once(',') else {
        return Err(fail(Some(number), ProofErrorKind::Malformed("expected `,` after the rule")));
    };
    let rule = match tag.trim() {
        "a" => Rule::A,
        "b" => Rule::B,
        other => return Err(fail(Some(number), ProofErrorKind::UnknownRule(other.to_string()))),
    };

    let justification = justification.trim();
    let premises = if justification == "no premise" {
        Vec::new()
    } else if justification.is_empty() {
        return Err(fail(Some(number), ProofErrorKind::Malformed("missing justification")));
    } else {
        justification
            .split_whitespace()
            .map(|n| match n.parse::<usize>() {
                Ok(n) if n > 0 => Ok(n),
                _ => Err(fail(Some(number), ProofErrorKind::Malformed("premises must be line numbers"))),
            })
            .collect::<Result<Vec<_>, _>>()?
    };

    Ok(ProofLine { number, formula, rule, premises, source_line })
}

/// Lines that parse, plus the syntax errors of the ones that do not.
pub(crate) fn parse_lines(text: &str) -> (Vec<ProofLine>, Vec<ProofParseError>) {
    let mut lines = Vec::new();
    let mut errors = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let content = strip_comment(raw);
        if content.trim().is_empty() {
            continue;
        }
        match parse_line(content, n + 1) {
            Ok(line) => lines.push(line),
            Err(e) => errors.push(e),
        }
    }
    (lines, errors)
}

/// Cross-line rules: at least one line, strictly increasing numbers,
/// backward-only premises, and exactly one premise for rule b.
pub fn validate_structure(lines: &[ProofLine]) -> Vec<ProofParseError> {
    let mut errors = Vec::new();
    if lines.is_empty() {
        errors.push(ProofParseError { line: None, source_line: 0, kind: ProofErrorKind::Empty });
    }
    let mut previous: Option<usize> = None;
    for line in lines {
        let fail = |kind| ProofParseError { line: Some(line.number), source_line: line.source_line, kind };
        if let Some(prev) = previous {
            if line.number <= prev {
                errors.push(fail(ProofErrorKind::BadNumbering { previous: prev, found: line.number }));
            }
        }
        previous = Some(previous.map_or(line.number, |p| p.max(line.number)));
        if let Some(&premise) = line.premises.iter().find(|&&p| p >= line.number) {
            errors.push(fail(ProofErrorKind::ForwardReference { premise }));
        }
        if line.rule == Rule::B && line.premises.len() != 1 {
            errors.push(fail(ProofErrorKind::PremiseCount { found: line.premises.len() }));
        }
    }
    errors
}

/// Parse a proof script, one step per line:
///
/// ```text
/// 1. (p&p)->p, rule a, no premise
/// 3. ((q?&p)&p)->p, rule b, 1
/// ```
///
/// Blank lines and `#` comments are skipped. The first error is fatal.
pub fn parse_proof(text: &str) -> Result<Vec<ProofLine>, ProofParseError> {
    let (lines, errors) = parse_lines(text);
    if let Some(e) = errors.into_iter().next() {
        return Err(e);
    }
    if let Some(e) = validate_structure(&lines).into_iter().next() {
        return Err(e);
    }
    Ok(lines)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axiom_line() {
        let lines = parse_proof("1. (p&p)->p, rule a, no premise").unwrap();
        assert_eq!(lines.len(), 1);
        assert_eq!(lines[0].number, 1);
        assert_eq!(lines[0].rule, Rule::A);
        assert!(lines[0].premises.is_empty());
        assert_eq!(lines[0].formula.to_string(), "p&p->p");
    }

    #[test]
    fn premises_and_comments() {
        let text = "# header\n\n1. p->q, rule a, no premise  # axiom\n2. p->r, rule a, no premise\n3. p->(r?&q), rule a, 1 2\n";
        let lines = parse_proof(text).unwrap();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[2].premises, vec![1, 2]);
        assert_eq!(lines[2].source_line, 5);
    }

    fn kind(text: &str) -> ProofErrorKind {
        parse_proof(text).unwrap_err().kind
    }

    #[test]
    fn structural_errors() {
        assert_eq!(
            kind("1. p->p, rule a, no premise\n2. p, rule b, 5"),
            ProofErrorKind::ForwardReference { premise: 5 }
        );
        assert_eq!(
            kind("2. p->p, rule a, no premise\n2. p->p, rule a, no premise"),
            ProofErrorKind::BadNumbering { previous: 2, found: 2 }
        );
        assert_eq!(kind("1. p->p, rule b, no premise"), ProofErrorKind::PremiseCount { found: 0 });
        assert_eq!(
            kind("1. p->p, rule a, no premise\n2. p->p, rule a, no premise\n3. p?|q, rule b, 1 2"),
            ProofErrorKind::PremiseCount { found: 2 }
        );
        assert_eq!(kind(""), ProofErrorKind::Empty);
        assert_eq!(kind("# only a comment\n"), ProofErrorKind::Empty);
    }

    #[test]
    fn syntax_errors() {
        assert_eq!(kind("1. p, rule c, no premise"), ProofErrorKind::UnknownRule("c".into()));
        assert!(matches!(kind("p, rule a, no premise"), ProofErrorKind::Malformed(_)));
        assert!(matches!(kind("1 p, rule a, no premise"), ProofErrorKind::Malformed(_)));
        assert!(matches!(kind("1. p rule a no premise"), ProofErrorKind::Malformed(_)));
        assert!(matches!(kind("1. p, rul a, no premise"), ProofErrorKind::Malformed(_)));
        assert!(matches!(kind("1. p, rule a,"), ProofErrorKind::Malformed(_)));
        assert!(matches!(kind("2. p, rule a, 1 x"), ProofErrorKind::Malformed(_)));
        assert!(matches!(kind("1. p &, rule a, no premise"), ProofErrorKind::Formula(_)));
        let err = parse_proof("\n\n7. p ?, rule a, no premise").unwrap_err();
        assert_eq!((err.line, err.source_line), (Some(7), 3));
    }
}
