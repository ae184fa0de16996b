//! A first-order DSL over `(ℕ, +, <, R)` with a bounded evaluator.
//!
//! The term grammar is variables, constants and `+`; formulas add the two
//! quantifiers, the boolean connectives, the order and equality atoms, and a
//! single relation symbol `R`. `->` and `<->` are surface sugar that the
//! parser expands into the core connectives.
//!
//! Quantifiers are evaluated over `{0..Q}` for a configured bound `Q`: the
//! evaluator is a desk-scale cross-check oracle for the semantic modules,
//! not a decision procedure, and every verdict is relative to `Q`.

mod eval;
mod parser;
pub mod schema;

pub use eval::{eval_bounded, BoundedStructure, EvalError};
pub use parser::{parse, ParseError};

use std::collections::BTreeSet;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Term {
    Var(String),
    Const(u64),
    Plus(Box<Term>, Box<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn constant(v: u64) -> Term {
        Term::Const(v)
    }

    pub fn plus(a: Term, b: Term) -> Term {
        Term::Plus(Box::new(a), Box::new(b))
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Const(_) => {}
            Term::Plus(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }
}

/// Multiplication by a literal constant, expanded to repeated addition so the
/// term grammar stays additive.
pub fn times_const(n: u64, t: &Term) -> Term {
    if n == 0 {
        return Term::Const(0);
    }
    let mut acc = t.clone();
    for _ in 1..n {
        acc = Term::plus(acc, t.clone());
    }
    acc
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    /// The single relation symbol applied to terms.
    Rel(Vec<Term>),
    Less(Term, Term),
    Eq(Term, Term),
}

impl Formula {
    pub fn exists(var: impl Into<String>, body: Formula) -> Formula {
        Formula::Exists(var.into(), Box::new(body))
    }

    pub fn forall(var: impl Into<String>, body: Formula) -> Formula {
        Formula::Forall(var.into(), Box::new(body))
    }

    pub fn not(inner: Formula) -> Formula {
        Formula::Not(Box::new(inner))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::or(Formula::not(a), b)
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and(
            Formula::implies(a.clone(), b.clone()),
            Formula::implies(b, a),
        )
    }

    /// `a <= b` as `a < b | a = b`.
    pub fn le(a: Term, b: Term) -> Formula {
        Formula::or(Formula::Less(a.clone(), b.clone()), Formula::Eq(a, b))
    }

    /// A formula that always holds.
    pub fn truth() -> Formula {
        Formula::Eq(Term::Const(0), Term::Const(0))
    }

    /// A formula that never holds.
    pub fn falsity() -> Formula {
        Formula::Less(Term::Const(0), Term::Const(0))
    }

    pub fn and_all(items: impl IntoIterator<Item = Formula>) -> Formula {
        let mut iter = items.into_iter();
        match iter.next() {
            None => Formula::truth(),
            Some(first) => iter.fold(first, Formula::and),
        }
    }

    pub fn or_all(items: impl IntoIterator<Item = Formula>) -> Formula {
        let mut iter = items.into_iter();
        match iter.next() {
            None => Formula::falsity(),
            Some(first) => iter.fold(first, Formula::or),
        }
    }

    /// The free variables.
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut free = BTreeSet::new();
        let mut bound = Vec::new();
        self.collect_free(&mut bound, &mut free);
        free
    }

    fn collect_free(&self, bound: &mut Vec<String>, free: &mut BTreeSet<String>) {
        match self {
            Formula::Exists(v, body) | Formula::Forall(v, body) => {
                bound.push(v.clone());
                body.collect_free(bound, free);
                bound.pop();
            }
            Formula::Not(inner) => inner.collect_free(bound, free),
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.collect_free(bound, free);
                b.collect_free(bound, free);
            }
            Formula::Rel(terms) => {
                let mut vars = BTreeSet::new();
                for t in terms {
                    t.collect_vars(&mut vars);
                }
                free.extend(vars.into_iter().filter(|v| !bound.contains(v)));
            }
            Formula::Less(a, b) | Formula::Eq(a, b) => {
                let mut vars = BTreeSet::new();
                a.collect_vars(&mut vars);
                b.collect_vars(&mut vars);
                free.extend(vars.into_iter().filter(|v| !bound.contains(v)));
            }
        }
    }

    /// Every variable name occurring anywhere, free or bound.
    pub fn all_var_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_all(&mut out);
        out
    }

    fn collect_all(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Exists(v, body) | Formula::Forall(v, body) => {
                out.insert(v.clone());
                body.collect_all(out);
            }
            Formula::Not(inner) => inner.collect_all(out),
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.collect_all(out);
                b.collect_all(out);
            }
            Formula::Rel(terms) => {
                for t in terms {
                    t.collect_vars(out);
                }
            }
            Formula::Less(a, b) | Formula::Eq(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    /// Renames free occurrences of variables according to `map`. Quantified
    /// occurrences shadow as usual; callers pick fresh target names.
    pub fn rename_free(&self, map: &std::collections::BTreeMap<String, String>) -> Formula {
        match self {
            Formula::Exists(v, body) | Formula::Forall(v, body) => {
                let inner = if map.contains_key(v) {
                    let mut reduced = map.clone();
                    reduced.remove(v);
                    body.rename_free(&reduced)
                } else {
                    body.rename_free(map)
                };
                match self {
                    Formula::Exists(..) => Formula::exists(v.clone(), inner),
                    _ => Formula::forall(v.clone(), inner),
                }
            }
            Formula::Not(inner) => Formula::not(inner.rename_free(map)),
            Formula::And(a, b) => Formula::and(a.rename_free(map), b.rename_free(map)),
            Formula::Or(a, b) => Formula::or(a.rename_free(map), b.rename_free(map)),
            Formula::Rel(terms) => {
                Formula::Rel(terms.iter().map(|t| rename_term(t, map)).collect())
            }
            Formula::Less(a, b) => Formula::Less(rename_term(a, map), rename_term(b, map)),
            Formula::Eq(a, b) => Formula::Eq(rename_term(a, map), rename_term(b, map)),
        }
    }
}

fn rename_term(t: &Term, map: &std::collections::BTreeMap<String, String>) -> Term {
    match t {
        Term::Var(v) => Term::Var(map.get(v).cloned().unwrap_or_else(|| v.clone())),
        Term::Const(c) => Term::Const(*c),
        Term::Plus(a, b) => Term::plus(rename_term(a, map), rename_term(b, map)),
    }
}

// Precedence levels for printing: quantifiers bind loosest, then |, &, !.
const PREC_QUANT: u8 = 0;
const PREC_OR: u8 = 1;
const PREC_AND: u8 = 2;
const PREC_NOT: u8 = 3;
const PREC_ATOM: u8 = 4;

impl Formula {
    fn prec(&self) -> u8 {
        match self {
            Formula::Exists(..) | Formula::Forall(..) => PREC_QUANT,
            Formula::Or(..) => PREC_OR,
            Formula::And(..) => PREC_AND,
            Formula::Not(..) => PREC_NOT,
            Formula::Rel(..) | Formula::Less(..) | Formula::Eq(..) => PREC_ATOM,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let wrap = self.prec() < min;
        if wrap {
            write!(f, "(")?;
        }
        match self {
            Formula::Exists(v, body) => {
                write!(f, "exists {v}. ")?;
                body.fmt_prec(f, PREC_QUANT)?;
            }
            Formula::Forall(v, body) => {
                write!(f, "forall {v}. ")?;
                body.fmt_prec(f, PREC_QUANT)?;
            }
            Formula::Not(inner) => {
                write!(f, "!")?;
                inner.fmt_prec(f, PREC_ATOM)?;
            }
            Formula::And(a, b) => {
                a.fmt_prec(f, PREC_AND)?;
                write!(f, " & ")?;
                b.fmt_prec(f, PREC_NOT)?;
            }
            Formula::Or(a, b) => {
                a.fmt_prec(f, PREC_OR)?;
                write!(f, " | ")?;
                b.fmt_prec(f, PREC_AND)?;
            }
            Formula::Rel(terms) => {
                write!(f, "R(")?;
                for (i, t) in terms.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{t}")?;
                }
                write!(f, ")")?;
            }
            Formula::Less(a, b) => write!(f, "{a} < {b}")?,
            Formula::Eq(a, b) => write!(f, "{a} = {b}")?,
        }
        if wrap {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::Const(c) => write!(f, "{c}"),
            Term::Plus(a, b) => {
                write!(f, "{a} + ")?;
                // Right operand of + is printed atomically to keep the
                // reparse left-associated.
                match **b {
                    Term::Plus(..) => write!(f, "({b})"),
                    _ => write!(f, "{b}"),
                }
            }
        }
    }
}
