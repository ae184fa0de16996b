//! Recursive-descent parser for the concrete formula syntax.
//!
//! ```text
//! formula := iff
//! iff     := imp ('<->' imp)*
//! imp     := or ('->' imp)?
//! or      := and ('|' and)*
//! and     := unary ('&' unary)*
//! unary   := '!' unary | ('exists'|'forall') var (',' var)* '.' formula | atom
//! atom    := '(' formula ')' | 'R' '(' term (',' term)* ')' | term ('='|'<') term
//! term    := factor ('+' factor)*
//! factor  := var | integer | '(' term ')'
//! ```
//!
//! `->` and `<->` are expanded into the core connectives during parsing.

use super::{Formula, Term};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("syntax error at offset {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Rel,
    Int(u64),
    LParen,
    RParen,
    Comma,
    Dot,
    Amp,
    Pipe,
    Bang,
    Arrow,
    DoubleArrow,
    Equal,
    Less,
    Plus,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Rel => write!(f, "`R`"),
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::Comma => write!(f, "`,`"),
            Tok::Dot => write!(f, "`.`"),
            Tok::Amp => write!(f, "`&`"),
            Tok::Pipe => write!(f, "`|`"),
            Tok::Bang => write!(f, "`!`"),
            Tok::Arrow => write!(f, "`->`"),
            Tok::DoubleArrow => write!(f, "`<->`"),
            Tok::Equal => write!(f, "`=`"),
            Tok::Less => write!(f, "`<`"),
            Tok::Plus => write!(f, "`+`"),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '(' => {
                out.push((i, Tok::LParen));
                i += 1;
            }
            ')' => {
                out.push((i, Tok::RParen));
                i += 1;
            }
            ',' => {
                out.push((i, Tok::Comma));
                i += 1;
            }
            '.' => {
                out.push((i, Tok::Dot));
                i += 1;
            }
            '&' => {
                out.push((i, Tok::Amp));
                i += 1;
            }
            '|' => {
                out.push((i, Tok::Pipe));
                i += 1;
            }
            '!' => {
                out.push((i, Tok::Bang));
                i += 1;
            }
            '+' => {
                out.push((i, Tok::Plus));
                i += 1;
            }
            '=' => {
                out.push((i, Tok::Equal));
                i += 1;
            }
            '-' => {
                if bytes.get(i + 1) == Some(&b'>') {
                    out.push((i, Tok::Arrow));
                    i += 2;
                } else {
                    return Err(ParseError {
                        offset: i,
                        message: "`-` is only valid in `->`".into(),
                    });
                }
            }
            '<' => {
                if bytes.get(i + 1) == Some(&b'-') && bytes.get(i + 2) == Some(&b'>') {
                    out.push((i, Tok::DoubleArrow));
                    i += 3;
                } else {
                    out.push((i, Tok::Less));
                    i += 1;
                }
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let lit = &text[start..i];
                let n: u64 = lit.parse().map_err(|_| ParseError {
                    offset: start,
                    message: format!("integer literal `{lit}` out of range"),
                })?;
                out.push((start, Tok::Int(n)));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < bytes.len()
                    && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                let word = &text[start..i];
                let tok = if word == "R" {
                    Tok::Rel
                } else {
                    Tok::Ident(word.to_string())
                };
                out.push((start, tok));
            }
            other => {
                return Err(ParseError {
                    offset: i,
                    message: format!("unexpected character `{other}`"),
                })
            }
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map(|(o, _)| *o)
            .unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.tokens.get(self.pos).map(|(_, t)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        match self.peek() {
            Some(t) if *t == tok => {
                self.pos += 1;
                Ok(())
            }
            Some(t) => Err(ParseError {
                offset: self.offset(),
                message: format!("expected {tok}, found {t}"),
            }),
            None => Err(ParseError {
                offset: self.end,
                message: format!("expected {tok}, found end of input"),
            }),
        }
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            offset: self.offset(),
            message: message.into(),
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.implication()?;
        while self.peek() == Some(&Tok::DoubleArrow) {
            self.bump();
            let rhs = self.implication()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.bump();
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.conjunction()?;
        while self.peek() == Some(&Tok::Pipe) {
            self.bump();
            let rhs = self.conjunction()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(&Tok::Amp) {
            self.bump();
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(Tok::Bang) => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Some(Tok::Ident(w)) if w == "exists" || w == "forall" => {
                let is_exists = w == "exists";
                self.bump();
                let mut vars = vec![self.variable()?];
                while self.peek() == Some(&Tok::Comma) {
                    self.bump();
                    vars.push(self.variable()?);
                }
                self.expect(Tok::Dot)?;
                let mut body = self.formula()?;
                for v in vars.into_iter().rev() {
                    body = if is_exists {
                        Formula::exists(v, body)
                    } else {
                        Formula::forall(v, body)
                    };
                }
                Ok(body)
            }
            _ => self.atom(),
        }
    }

    fn variable(&mut self) -> Result<String, ParseError> {
        match self.bump() {
            Some(Tok::Ident(name)) if name != "exists" && name != "forall" => Ok(name),
            Some(t) => Err(ParseError {
                offset: self.tokens[self.pos - 1].0,
                message: format!("expected a variable, found {t}"),
            }),
            None => Err(self.error("expected a variable, found end of input")),
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(Tok::Rel) => {
                self.bump();
                self.expect(Tok::LParen)?;
                let mut terms = vec![self.term()?];
                while self.peek() == Some(&Tok::Comma) {
                    self.bump();
                    terms.push(self.term()?);
                }
                self.expect(Tok::RParen)?;
                Ok(Formula::Rel(terms))
            }
            Some(Tok::LParen) => {
                // Could be a parenthesized formula or the left term of a
                // comparison; try the comparison first and fall back.
                let save = self.pos;
                if let Ok(cmp) = self.comparison() {
                    return Ok(cmp);
                }
                self.pos = save;
                self.bump();
                let inner = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            _ => self.comparison(),
        }
    }

    fn comparison(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.term()?;
        match self.bump() {
            Some(Tok::Equal) => Ok(Formula::Eq(lhs, self.term()?)),
            Some(Tok::Less) => Ok(Formula::Less(lhs, self.term()?)),
            Some(t) => Err(ParseError {
                offset: self.tokens[self.pos - 1].0,
                message: format!("expected `=` or `<`, found {t}"),
            }),
            None => Err(self.error("expected `=` or `<`, found end of input")),
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let mut lhs = self.factor()?;
        while self.peek() == Some(&Tok::Plus) {
            self.bump();
            let rhs = self.factor()?;
            lhs = Term::plus(lhs, rhs);
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Term, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.bump();
                Ok(Term::Const(n))
            }
            Some(Tok::Ident(name)) if name != "exists" && name != "forall" => {
                self.bump();
                Ok(Term::Var(name))
            }
            Some(Tok::LParen) => {
                self.bump();
                let inner = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            Some(t) => Err(ParseError {
                offset: self.offset(),
                message: format!("expected a term, found {t}"),
            }),
            None => Err(self.error("expected a term, found end of input")),
        }
    }
}

/// Parses the concrete syntax into a [`Formula`].
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let tokens = tokenize(text)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        end: text.len(),
    };
    let phi = parser.formula()?;
    if parser.pos != parser.tokens.len() {
        return Err(parser.error("trailing input after formula"));
    }
    Ok(phi)
}
