//! Generators for closed λ-terms: uniformly shaped random terms and named
//! families used in benchmarks.

use rand::Rng;

use super::term::Term;
use crate::name::Name;

/// A random closed term of exactly `size` (at least 2).
///
/// Binders are named `x0`, `x1`, … by nesting depth; variables are drawn
/// uniformly from the binders in scope.
pub fn random_closed_term<R: Rng + ?Sized>(rng: &mut R, size: u64) -> Term {
    assert!(size >= 2, "a closed term has length at least 2");
    let mut scope = Vec::new();
    generate(rng, size, &mut scope)
}

fn binder(depth: usize) -> Name {
    Name::new(&format!("x{depth}"))
}

fn generate<R: Rng + ?Sized>(rng: &mut R, size: u64, scope: &mut Vec<Name>) -> Term {
    if size == 1 {
        return Term::var(scope[rng.gen_range(0..scope.len())]);
    }
    // A closed application needs two closed sides of length at least 2.
    let app_possible = if scope.is_empty() { size >= 5 } else { size >= 3 };
    if app_possible && rng.gen_bool(0.5) {
        let min = if scope.is_empty() { 2 } else { 1 };
        let left = rng.gen_range(min..=size - 1 - min);
        let f = generate(rng, left, scope);
        let a = generate(rng, size - 1 - left, scope);
        return Term::app(f, a);
    }
    let x = binder(scope.len());
    scope.push(x);
    let body = generate(rng, size - 1, scope);
    scope.pop();
    Term::abs(x, body)
}

/// The Church numeral `λf.λx.f (f x)`.
pub fn church_two() -> Term {
    Term::abs(
        "f",
        Term::abs(
            "x",
            Term::app(Term::var("f"), Term::app(Term::var("f"), Term::var("x"))),
        ),
    )
}

/// `2̄ (2̄ (… (2̄ (λx.x)) …))` with `n` copies of the numeral. Its weak CBV
/// normal form is reached in `n` steps and has length `6·2ⁿ − 4`.
pub fn two_tower(n: usize) -> Term {
    let mut t = Term::abs("x", Term::var("x"));
    for _ in 0..n {
        t = Term::app(church_two(), t);
    }
    t
}

/// `(λx.x x)(λx.x x)`.
pub fn omega() -> Term {
    let delta = Term::abs("x", Term::app(Term::var("x"), Term::var("x")));
    Term::app(delta.clone(), delta)
}
