//! Bounded Tarskian evaluation.

use super::{Formula, Term};
use crate::relation::{Relation, RelationError};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("variable `{0}` is not bound or assigned")]
    UnboundVariable(String),
    #[error("relation symbol applied to {got} terms, structure has dimension {expected}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("assignment {var} = {value} exceeds the quantifier bound {bound}")]
    AssignmentOutOfRange { var: String, value: u64, bound: u64 },
    #[error("term evaluation overflowed")]
    Overflow,
    #[error(transparent)]
    Relation(#[from] RelationError),
}

/// A relation together with the quantifier bound `Q`: the `∃`/`∀` of the DSL
/// range over `{0..Q}` when evaluated here.
#[derive(Debug, Clone)]
pub struct BoundedStructure<'a> {
    relation: &'a Relation,
    q_bound: u64,
}

impl<'a> BoundedStructure<'a> {
    pub fn new(relation: &'a Relation, q_bound: u64) -> Self {
        BoundedStructure { relation, q_bound }
    }

    pub fn relation(&self) -> &Relation {
        self.relation
    }

    pub fn q_bound(&self) -> u64 {
        self.q_bound
    }
}

/// Evaluates `phi` with quantifiers restricted to `{0..Q}`.
///
/// All free variables must be assigned, and assigned values may not exceed
/// `Q`. Relation queries beyond the relation's evaluation bound propagate as
/// errors.
pub fn eval_bounded(
    phi: &Formula,
    structure: &BoundedStructure<'_>,
    assignment: &BTreeMap<String, u64>,
) -> Result<bool, EvalError> {
    for (var, &value) in assignment {
        if value > structure.q_bound {
            return Err(EvalError::AssignmentOutOfRange {
                var: var.clone(),
                value,
                bound: structure.q_bound,
            });
        }
    }
    let mut env = Env {
        base: assignment,
        stack: Vec::new(),
    };
    eval(phi, structure, &mut env)
}

struct Env<'a> {
    base: &'a BTreeMap<String, u64>,
    stack: Vec<(String, u64)>,
}

impl Env<'_> {
    fn lookup(&self, name: &str) -> Option<u64> {
        // Innermost binding wins.
        for (var, value) in self.stack.iter().rev() {
            if var == name {
                return Some(*value);
            }
        }
        self.base.get(name).copied()
    }
}

fn eval(
    phi: &Formula,
    structure: &BoundedStructure<'_>,
    env: &mut Env<'_>,
) -> Result<bool, EvalError> {
    match phi {
        Formula::Exists(var, body) => {
            env.stack.push((var.clone(), 0));
            let mut result = false;
            for v in 0..=structure.q_bound {
                env.stack.last_mut().expect("pushed").1 = v;
                if eval(body, structure, env)? {
                    result = true;
                    break;
                }
            }
            env.stack.pop();
            Ok(result)
        }
        Formula::Forall(var, body) => {
            env.stack.push((var.clone(), 0));
            let mut result = true;
            for v in 0..=structure.q_bound {
                env.stack.last_mut().expect("pushed").1 = v;
                if !eval(body, structure, env)? {
                    result = false;
                    break;
                }
            }
            env.stack.pop();
            Ok(result)
        }
        Formula::Not(inner) => Ok(!eval(inner, structure, env)?),
        Formula::And(a, b) => Ok(eval(a, structure, env)? && eval(b, structure, env)?),
        Formula::Or(a, b) => Ok(eval(a, structure, env)? || eval(b, structure, env)?),
        Formula::Rel(terms) => {
            let dim = structure.relation.dimension();
            if terms.len() != dim {
                return Err(EvalError::ArityMismatch {
                    expected: dim,
                    got: terms.len(),
                });
            }
            let mut coords = Vec::with_capacity(dim);
            for t in terms {
                coords.push(eval_term(t, env)?);
            }
            Ok(structure.relation.contains_coords(&coords)?)
        }
        Formula::Less(a, b) => Ok(eval_term(a, env)? < eval_term(b, env)?),
        Formula::Eq(a, b) => Ok(eval_term(a, env)? == eval_term(b, env)?),
    }
}

fn eval_term(t: &Term, env: &Env<'_>) -> Result<u64, EvalError> {
    match t {
        Term::Var(name) => env
            .lookup(name)
            .ok_or_else(|| EvalError::UnboundVariable(name.clone())),
        Term::Const(c) => Ok(*c),
        Term::Plus(a, b) => eval_term(a, env)?
            .checked_add(eval_term(b, env)?)
            .ok_or(EvalError::Overflow),
    }
}
