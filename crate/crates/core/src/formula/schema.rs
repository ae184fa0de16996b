//! Builders for the formula schemas the semantic modules mirror.
//!
//! The schemas are closed forms over the DSL with documented free variables:
//!
//! - [`cube_equality`] (free `x0..x{d-1}`, `y0..y{d-1}`, `k`): the cubes of
//!   radius `k` at `x` and `y` are equal.
//! - [`shift_equality`] (free `x0..`, `rp0..`, `rn0..`, `k`): the cube at `x`
//!   is preserved by the shift `r = rp - rn`. Signed shifts are encoded with
//!   two natural vectors since the term language has no subtraction.
//! - [`shiftability`] (free `x0..`, `s`, `k`): some nonzero shift with
//!   `max|r_i| <= s` preserves the cube at `x`.
//!
//! Bound checks are placed directly under their quantifier so the bounded
//! evaluator prunes each search dimension before descending.

use super::{Formula, Term};
use std::collections::BTreeMap;

fn names(prefix: &str, d: usize) -> Vec<String> {
    (0..d).map(|i| format!("{prefix}{i}")).collect()
}

/// `R(a0 + b0, ..., a{d-1} + b{d-1})`.
fn rel_sum(a: &[String], b: &[String]) -> Formula {
    Formula::Rel(
        a.iter()
            .zip(b)
            .map(|(x, z)| Term::plus(Term::var(x), Term::var(z)))
            .collect(),
    )
}

/// The cubes of radius `k` at the points named `xs` and `ys` are equal:
/// `∀z. max(z) <= k -> (R(x + z) <-> R(y + z))`, with the guard nested per
/// component.
fn cube_equality_named(xs: &[String], ys: &[String], k: &str) -> Formula {
    let d = xs.len();
    let zs = names("z", d);
    let mut body = Formula::iff(rel_sum(xs, &zs), rel_sum(ys, &zs));
    for z in zs.iter().rev() {
        body = Formula::forall(
            z.clone(),
            Formula::implies(Formula::le(Term::var(z), Term::var(k)), body),
        );
    }
    body
}

/// Free variables `x0..x{d-1}`, `y0..y{d-1}`, `k`.
pub fn cube_equality(d: usize) -> Formula {
    cube_equality_named(&names("x", d), &names("y", d), "k")
}

/// The shifted-cube body with caller-chosen names: introduces the target
/// point `w = x + rp - rn` through `∃w. w + rn = x + rp` and compares cubes.
fn shift_equality_named(xs: &[String], rps: &[String], rns: &[String], k: &str) -> Formula {
    let d = xs.len();
    let ws = names("w", d);
    let mut body = cube_equality_named(xs, &ws, k);
    for i in (0..d).rev() {
        let anchored = Formula::Eq(
            Term::plus(Term::var(&ws[i]), Term::var(&rns[i])),
            Term::plus(Term::var(&xs[i]), Term::var(&rps[i])),
        );
        body = Formula::exists(ws[i].clone(), Formula::and(anchored, body));
    }
    body
}

/// Free variables `x0..x{d-1}`, `rp0..rp{d-1}`, `rn0..rn{d-1}`, `k`.
pub fn shift_equality(d: usize) -> Formula {
    shift_equality_named(&names("x", d), &names("rp", d), &names("rn", d), "k")
}

/// Free variables `x0..x{d-1}`, `s`, `k`.
pub fn shiftability(d: usize) -> Formula {
    let xs = names("x", d);
    let rps = names("rp", d);
    let rns = names("rn", d);
    let nonzero = Formula::or_all(
        (0..d).map(|i| Formula::not(Formula::Eq(Term::var(&rps[i]), Term::var(&rns[i])))),
    );
    let mut body = Formula::and(nonzero, shift_equality_named(&xs, &rps, &rns, "k"));
    for i in (0..d).rev() {
        body = Formula::exists(
            rns[i].clone(),
            Formula::and(Formula::le(Term::var(&rns[i]), Term::var("s")), body),
        );
        body = Formula::exists(
            rps[i].clone(),
            Formula::and(Formula::le(Term::var(&rps[i]), Term::var("s")), body),
        );
    }
    body
}

/// `family[i]` holds and no earlier member does.
pub fn min_index(family: &[Formula], i: usize) -> Formula {
    Formula::and_all(
        std::iter::once(family[i].clone())
            .chain(family[..i].iter().map(|phi| Formula::not(phi.clone()))),
    )
}

/// `phi(x)` holds and `x` is lexicographically minimal with that property
/// (`vars` ordered most significant first):
/// `phi(x) ∧ ∀y. (y <lex x) -> !phi(y)`.
pub fn min_lex(vars_in_order: &[&str], phi: &Formula) -> Formula {
    let taken = phi.all_var_names();
    let mut fresh = Vec::with_capacity(vars_in_order.len());
    let mut counter = 0usize;
    for _ in vars_in_order {
        loop {
            let candidate = format!("m{counter}");
            counter += 1;
            if !taken.contains(&candidate) && !fresh.contains(&candidate) {
                fresh.push(candidate);
                break;
            }
        }
    }
    let map: BTreeMap<String, String> = vars_in_order
        .iter()
        .map(|v| v.to_string())
        .zip(fresh.iter().cloned())
        .collect();
    let phi_at_fresh = phi.rename_free(&map);

    // y <lex x: some position j with y_j < x_j and equality before it.
    let lex_less = Formula::or_all((0..vars_in_order.len()).map(|j| {
        Formula::and_all(
            (0..j)
                .map(|a| Formula::Eq(Term::var(&fresh[a]), Term::var(vars_in_order[a])))
                .chain(std::iter::once(Formula::Less(
                    Term::var(&fresh[j]),
                    Term::var(vars_in_order[j]),
                ))),
        )
    }));

    let mut guard = Formula::implies(lex_less, Formula::not(phi_at_fresh));
    for y in fresh.iter().rev() {
        guard = Formula::forall(y.clone(), guard);
    }
    Formula::and(phi.clone(), guard)
}

/// One guarded branch of an if-then-else cascade: the existential variables,
/// the guard, and the branch body, sharing the variables.
pub type IteBranch = (Vec<String>, Formula, Formula);

/// If some branch guard is satisfiable, its body must hold at the witnesses;
/// otherwise the fallback holds:
/// `⋁ᵢ ∃x.(φᵢ ∧ χᵢ) ∨ (⋀ᵢ ∀x. !φᵢ ∧ ψ)`.
pub fn if_then_else(branches: &[IteBranch], otherwise: Formula) -> Formula {
    let positive = Formula::or_all(branches.iter().map(|(vars, guard, body)| {
        let mut inner = Formula::and(guard.clone(), body.clone());
        for v in vars.iter().rev() {
            inner = Formula::exists(v.clone(), inner);
        }
        inner
    }));
    let negative = Formula::and_all(
        branches
            .iter()
            .map(|(vars, guard, _)| {
                let mut inner = Formula::not(guard.clone());
                for v in vars.iter().rev() {
                    inner = Formula::forall(v.clone(), inner);
                }
                inner
            })
            .chain(std::iter::once(otherwise)),
    );
    Formula::or(positive, negative)
}
