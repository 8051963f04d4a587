//! Recursive-descent parser for the concrete formula syntax.
//!
//! ```text
//! formula := impl
//! impl    := orlvl ( "->" impl )?
//! orlvl   := andlvl ( OROP andlvl )*     all "|" or all "?|"
//! andlvl  := unary ( ANDOP unary )*      all "&" or all "?&"
//! unary   := "~" unary | "(" formula ")" | "T" | "F" | ATOM
//! ```
//!
//! Unicode `¬ ∧ ∨ → ⊓ ⊔ ⊤ ⊥` are accepted as aliases. Offsets are counted in
//! characters from the start of the input.

use thiserror::Error;

use super::Formula;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at offset {offset}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub offset: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unknown token `{0}`")]
    UnknownToken(String),
    #[error("missing operand")]
    MissingOperand,
    #[error("unexpected `{0}`")]
    Unexpected(String),
    #[error("`{first}` and `{second}` mixed without parentheses")]
    MixedOperators { first: &'static str, second: &'static str },
    #[error("unclosed `(`")]
    UnclosedParen,
    #[error("unmatched `)`")]
    UnmatchedParen,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Not,
    And,
    Or,
    Cand,
    Cor,
    Impl,
    Top,
    Bot,
    LParen,
    RParen,
    Atom(String),
}

impl Tok {
    fn text(&self) -> &str {
        match self {
            Tok::Not => "~",
            Tok::And => "&",
            Tok::Or => "|",
            Tok::Cand => "?&",
            Tok::Cor => "?|",
            Tok::Impl => "->",
            Tok::Top => "T",
            Tok::Bot => "F",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::Atom(name) => name,
        }
    }
}

fn lex(text: &str) -> Result<(Vec<(Tok, usize)>, usize), ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        let next = chars.get(i + 1).copied();
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '~' | '¬' => Tok::Not,
            '&' | '∧' => Tok::And,
            '|' | '∨' => Tok::Or,
            '⊓' => Tok::Cand,
            '⊔' => Tok::Cor,
            '→' => Tok::Impl,
            '⊤' | 'T' => Tok::Top,
            '⊥' | 'F' => Tok::Bot,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '-' if next == Some('>') => {
                i += 1;
                Tok::Impl
            }
            '?' if next == Some('&') => {
                i += 1;
                Tok::Cand
            }
            '?' if next == Some('|') => {
                i += 1;
                Tok::Cor
            }
            c if c.is_ascii_lowercase() => {
                while i + 1 < chars.len() && (chars[i + 1].is_ascii_alphanumeric() || chars[i + 1] == '_') {
                    i += 1;
                }
                Tok::Atom(chars[start..=i].iter().collect())
            }
            _ => {
                return Err(ParseError { kind: ParseErrorKind::UnknownToken(c.to_string()), offset: start });
            }
        };
        toks.push((tok, start));
        i += 1;
    }
    Ok((toks, chars.len()))
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
    open: Vec<usize>,
}

pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let (toks, end) = lex(text)?;
    let mut parser = Parser { toks, pos: 0, end, open: Vec::new() };
    let formula = parser.implication()?;
    match parser.peek() {
        None => Ok(formula),
        Some((Tok::RParen, offset)) => Err(ParseError { kind: ParseErrorKind::UnmatchedParen, offset }),
        Some((tok, offset)) => {
            Err(ParseError { kind: ParseErrorKind::Unexpected(tok.text().to_string()), offset })
        }
    }
}

impl Parser {
    fn peek(&self) -> Option<(Tok, usize)> {
        self.toks.get(self.pos).cloned()
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.1)
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let left = self.disjunction()?;
        if let Some((Tok::Impl, _)) = self.peek() {
            self.pos += 1;
            let right = self.implication()?;
            return Ok(Formula::implies(left, right));
        }
        Ok(left)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        self.chain(Tok::Or, Tok::Cor, Parser::conjunction)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        self.chain(Tok::And, Tok::Cand, Parser::unary)
    }

    /// One precedence level: a run of operands joined by a single operator,
    /// flattened into one n-ary node.
    fn chain(
        &mut self,
        plain: Tok,
        choice: Tok,
        operand: fn(&mut Parser) -> Result<Formula, ParseError>,
    ) -> Result<Formula, ParseError> {
        let first = operand(self)?;
        let mut op: Option<Tok> = None;
        let mut operands = vec![first];
        while let Some((tok, offset)) = self.peek() {
            if tok != plain && tok != choice {
                break;
            }
            match &op {
                None => op = Some(tok.clone()),
                Some(prev) if *prev != tok => {
                    return Err(ParseError {
                        kind: ParseErrorKind::MixedOperators { first: symbol(prev), second: symbol(&tok) },
                        offset,
                    });
                }
                Some(_) => {}
            }
            self.pos += 1;
            operands.push(operand(self)?);
        }
        Ok(match op {
            None => operands.pop().unwrap(),
            Some(Tok::And) => Formula::And(operands),
            Some(Tok::Or) => Formula::Or(operands),
            Some(Tok::Cand) => Formula::Cand(operands),
            Some(Tok::Cor) => Formula::Cor(operands),
            Some(_) => unreachable!(),
        })
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        let offset = self.offset();
        let Some((tok, _)) = self.peek() else {
            return Err(self.missing_operand(offset));
        };
        self.pos += 1;
        match tok {
            Tok::Not => Ok(Formula::neg(self.unary()?)),
            Tok::Top => Ok(Formula::Top),
            Tok::Bot => Ok(Formula::Bot),
            Tok::Atom(name) => Ok(Formula::Atom(name)),
            Tok::LParen => {
                self.open.push(offset);
                let inner = self.implication()?;
                match self.peek() {
                    Some((Tok::RParen, _)) => {
                        self.pos += 1;
                        self.open.pop();
                        Ok(inner)
                    }
                    None => Err(ParseError { kind: ParseErrorKind::UnclosedParen, offset }),
                    Some((tok, at)) => {
                        Err(ParseError { kind: ParseErrorKind::Unexpected(tok.text().to_string()), offset: at })
                    }
                }
            }
            Tok::RParen if self.open.is_empty() => {
                Err(ParseError { kind: ParseErrorKind::UnmatchedParen, offset })
            }
            _ => Err(ParseError { kind: ParseErrorKind::MissingOperand, offset }),
        }
    }

    fn missing_operand(&self, offset: usize) -> ParseError {
        match self.open.last() {
            Some(&open) => ParseError { kind: ParseErrorKind::UnclosedParen, offset: open },
            None => ParseError { kind: ParseErrorKind::MissingOperand, offset },
        }
    }
}

fn symbol(tok: &Tok) -> &'static str {
    match tok {
        Tok::And => "&",
        Tok::Or => "|",
        Tok::Cand => "?&",
        Tok::Cor => "?|",
        _ => "?",
    }
}
