//! Line-oriented text format for relation specs.
//!
//! ```text
//! relation <name> dim <d>
//! builtin <oracle-name> bound <B>
//! ```
//!
//! or, for semilinear relations, one line per linear set:
//!
//! ```text
//! relation odds dim 2
//! linear base (0,1) periods (1,0);(0,2)
//! ```
//!
//! or a finite table followed by one point per line:
//!
//! ```text
//! relation diag dim 2
//! table bound 12
//! (0,0)
//! (1,1)
//! ```
//!
//! Blank lines and `#` comments are ignored.

use super::{BuiltinOracle, LinearSet, Point, Relation, RelationError};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpecFileError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Relation {
        line: usize,
        source: RelationError,
    },
    #[error("spec is empty")]
    Empty,
}

fn syntax(line: usize, message: impl Into<String>) -> SpecFileError {
    SpecFileError::Syntax {
        line,
        message: message.into(),
    }
}

/// Parses a relation spec, returning the declared name and the relation.
pub fn parse_relation_spec(text: &str) -> Result<(String, Relation), SpecFileError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (header_no, header) = lines.next().ok_or(SpecFileError::Empty)?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    let (name, dim) = match tokens.as_slice() {
        ["relation", name, "dim", d] => {
            let dim: usize = d
                .parse()
                .map_err(|_| syntax(header_no, format!("bad dimension `{d}`")))?;
            if dim == 0 {
                return Err(syntax(header_no, "dimension must be >= 1"));
            }
            (name.to_string(), dim)
        }
        _ => {
            return Err(syntax(
                header_no,
                "expected header `relation <name> dim <d>`",
            ))
        }
    };

    let (body_no, body) = lines
        .next()
        .ok_or_else(|| syntax(header_no, "missing relation body"))?;
    let tokens: Vec<&str> = body.split_whitespace().collect();
    match tokens.first() {
        Some(&"builtin") => {
            let rest = tokens.get(1..).unwrap_or(&[]);
            let (oracle_name, bound) = match rest {
                [oracle, "bound", b] => (*oracle, *b),
                _ => return Err(syntax(body_no, "expected `builtin <oracle> bound <B>`")),
            };
            let oracle = BuiltinOracle::by_name(oracle_name)
                .ok_or_else(|| syntax(body_no, format!("unknown oracle `{oracle_name}`")))?;
            let bound: u64 = bound
                .parse()
                .map_err(|_| syntax(body_no, format!("bad bound `{bound}`")))?;
            if let Some((no, extra)) = lines.next() {
                return Err(syntax(no, format!("unexpected trailing line `{extra}`")));
            }
            let rel = Relation::builtin(oracle, dim, bound)
                .map_err(|source| SpecFileError::Relation { line: body_no, source })?;
            Ok((name, rel))
        }
        Some(&"table") => {
            let bound = match tokens.as_slice() {
                ["table", "bound", b] => b
                    .parse::<u64>()
                    .map_err(|_| syntax(body_no, format!("bad bound `{b}`")))?,
                _ => return Err(syntax(body_no, "expected `table bound <B>`")),
            };
            let mut points = Vec::new();
            for (no, line) in lines {
                let p = parse_tuple(line, no)?;
                if p.len() != dim {
                    return Err(syntax(
                        no,
                        format!("point has {} coordinates, relation has dimension {dim}", p.len()),
                    ));
                }
                points.push(Point::new(p));
            }
            let rel = Relation::finite_table(dim, points, bound)
                .map_err(|source| SpecFileError::Relation { line: body_no, source })?;
            Ok((name, rel))
        }
        Some(&"linear") => {
            let mut sets = vec![parse_linear(body, body_no, dim)?];
            for (no, line) in lines {
                if !line.starts_with("linear") {
                    return Err(syntax(no, "expected another `linear ...` line"));
                }
                sets.push(parse_linear(line, no, dim)?);
            }
            let rel = Relation::semilinear(sets, dim)
                .map_err(|source| SpecFileError::Relation { line: body_no, source })?;
            Ok((name, rel))
        }
        _ => Err(syntax(
            body_no,
            "expected `builtin ...`, `table ...` or `linear ...`",
        )),
    }
}

fn parse_linear(line: &str, no: usize, dim: usize) -> Result<LinearSet, SpecFileError> {
    let rest = line
        .strip_prefix("linear")
        .ok_or_else(|| syntax(no, "expected `linear`"))?
        .trim();
    let rest = rest
        .strip_prefix("base")
        .ok_or_else(|| syntax(no, "expected `base (..)` after `linear`"))?
        .trim();
    let (base_text, rest) = split_tuple(rest, no)?;
    let base = parse_tuple(&base_text, no)?;
    if base.len() != dim {
        return Err(syntax(no, format!("base has {} coordinates, expected {dim}", base.len())));
    }
    let rest = rest.trim();
    let mut periods = Vec::new();
    if !rest.is_empty() {
        let rest = rest
            .strip_prefix("periods")
            .ok_or_else(|| syntax(no, "expected `periods (..);(..)` or end of line"))?
            .trim();
        if !rest.is_empty() {
            for part in rest.split(';') {
                let p = parse_tuple(part.trim(), no)?;
                if p.len() != dim {
                    return Err(syntax(
                        no,
                        format!("period has {} coordinates, expected {dim}", p.len()),
                    ));
                }
                periods.push(Point::new(p));
            }
        }
    }
    Ok(LinearSet::new(Point::new(base), periods))
}

/// Splits a leading `( .. )` group from the rest of the line.
fn split_tuple(text: &str, no: usize) -> Result<(String, &str), SpecFileError> {
    let text = text.trim_start();
    if !text.starts_with('(') {
        return Err(syntax(no, "expected `(`"));
    }
    match text.find(')') {
        Some(end) => Ok((text[..=end].to_string(), &text[end + 1..])),
        None => Err(syntax(no, "unterminated tuple")),
    }
}

fn parse_tuple(text: &str, no: usize) -> Result<Vec<u64>, SpecFileError> {
    let inner = text
        .trim()
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(|| syntax(no, format!("expected a tuple `(a,b,..)`, got `{text}`")))?;
    inner
        .split(',')
        .map(|part| {
            part.trim()
                .parse::<u64>()
                .map_err(|_| syntax(no, format!("bad coordinate `{}`", part.trim())))
        })
        .collect()
}
