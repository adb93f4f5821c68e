use serde::Serialize;

use super::context::ScottContext;
use super::ScottError;
use crate::crs::{reduce_crs, CrsOutcome, CrsTerm, NormalKind};
use crate::lambda::{reduce, Outcome, Strategy};

/// Which of the three simulation clauses applied to a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TheoremClause {
    /// The rewrite system reached a constructor term `v`; the λ side must
    /// reach `⎡v⎤`.
    ConstructorResult,
    /// The rewrite system got stuck; the λ side must reach `⊥`.
    Error,
    /// The rewrite system ran out of budget; the λ side must too.
    Divergence,
}

#[derive(Debug, Clone, Serialize)]
pub struct SimulationVerdict {
    pub clause: TheoremClause,
    pub crs_steps: u64,
    pub beta_steps: u64,
    pub lambda_normalized: bool,
    /// The λ result is the one the clause prescribes.
    pub agree: bool,
    /// `beta_steps / crs_steps`, when the rewrite system took a step.
    pub ratio: Option<f64>,
}

impl ScottContext {
    /// Runs `t` on the rewrite system and [`ScottContext::call_term`] of `t`
    /// under weak call-by-value, and checks that the λ side ends where the
    /// rewriting side prescribes.
    pub fn simulate_and_check(
        &self,
        t: &CrsTerm,
        crs_budget: u64,
        lambda_budget: u64,
    ) -> Result<SimulationVerdict, ScottError> {
        let m = self.call_term(t)?;
        let crs = reduce_crs(self.system(), t, crs_budget);
        let lambda = reduce(&m, Strategy::Cbv, lambda_budget);
        let (clause, agree) = match (&crs.outcome, &lambda.outcome) {
            (CrsOutcome::NormalForm(v, NormalKind::ConstructorTerm), Outcome::NormalForm(n)) => {
                (TheoremClause::ConstructorResult, n.alpha_eq(&self.encode(v)?))
            }
            (CrsOutcome::NormalForm(_, NormalKind::ConstructorTerm), _) => {
                (TheoremClause::ConstructorResult, false)
            }
            (CrsOutcome::NormalForm(_, NormalKind::Stuck), Outcome::NormalForm(n)) => {
                (TheoremClause::Error, n.alpha_eq(&self.bottom()))
            }
            (CrsOutcome::NormalForm(_, NormalKind::Stuck), _) => (TheoremClause::Error, false),
            (CrsOutcome::BudgetExhausted(_), outcome) => {
                (TheoremClause::Divergence, !outcome.is_normal())
            }
        };
        let ratio = (crs.steps > 0).then(|| lambda.steps as f64 / crs.steps as f64);
        Ok(SimulationVerdict {
            clause,
            crs_steps: crs.steps,
            beta_steps: lambda.steps,
            lambda_normalized: lambda.outcome.is_normal(),
            agree,
            ratio,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crs::{parse_system, parse_term_in, Sym};
    use crate::lambda::{reduce, Term};

    const NAT: &str = "
        constructor zero/0; constructor succ/1;
        function add/2; function half/1; function loop/1; function f/1;
        rule add(zero, y) -> y;
        rule add(succ(x), y) -> succ(add(x, y));
        rule half(zero) -> zero;
        rule half(succ(succ(x))) -> succ(half(x));
        rule loop(x) -> loop(x);
    ";

    fn ctx() -> (ScottContext, crate::crs::CrsSystem) {
        let doc = parse_system(NAT).unwrap();
        (ScottContext::new(&doc.system), doc.system)
    }

    fn nf(t: &Term) -> Term {
        let r = reduce(t, Strategy::Cbv, 1_000_000);
        assert!(r.outcome.is_normal());
        r.outcome.term().clone()
    }

    #[test]
    fn encodings_follow_the_scott_schema() {
        let (ctx, sys) = ctx();
        let zero = parse_term_in(&sys, "zero").unwrap();
        let e = ctx.encode(&zero).unwrap();
        assert!(e.alpha_eq(&crate::lambda::parse_term("\\a. \\b. \\y. a").unwrap()));
        let one = parse_term_in(&sys, "succ(zero)").unwrap();
        let expected = Term::abs_many(
            &["a", "b", "y"],
            Term::app(Term::var("b"), e.clone()),
        );
        assert!(ctx.encode(&one).unwrap().alpha_eq(&expected));
        assert!(ctx.bottom().alpha_eq(&crate::lambda::parse_term("\\a. \\b. \\y. y").unwrap()));
    }

    #[test]
    fn constructors_build_encodings() {
        let (ctx, sys) = ctx();
        let zero = ctx.encode(&parse_term_in(&sys, "zero").unwrap()).unwrap();
        let one = ctx.encode(&parse_term_in(&sys, "succ(zero)").unwrap()).unwrap();
        let r = reduce(&Term::app(ctx.plain_constructor(1), zero.clone()), Strategy::Cbv, 100);
        assert_eq!(r.steps, 1);
        assert!(r.outcome.term().alpha_eq(&one));
        assert!(nf(&Term::app(ctx.strict_constructor(1), zero.clone())).alpha_eq(&one));
        assert!(nf(&Term::app(ctx.strict_constructor(1), ctx.bottom())).alpha_eq(&ctx.bottom()));
        assert!(ctx.strict_constructor(0).alpha_eq(&zero));
    }

    #[test]
    fn verdicts_for_the_three_clauses() {
        let (ctx, sys) = ctx();
        let t = parse_term_in(&sys, "add(succ(zero), succ(zero))").unwrap();
        let v = ctx.simulate_and_check(&t, 100, 100_000).unwrap();
        assert_eq!(v.clause, TheoremClause::ConstructorResult);
        assert_eq!(v.crs_steps, 2);
        assert!(v.agree, "{v:?}");

        let t = parse_term_in(&sys, "half(succ(zero))").unwrap();
        let v = ctx.simulate_and_check(&t, 100, 100_000).unwrap();
        assert_eq!(v.clause, TheoremClause::Error);
        assert!(v.agree, "{v:?}");

        let t = parse_term_in(&sys, "f(zero)").unwrap();
        let v = ctx.simulate_and_check(&t, 100, 100_000).unwrap();
        assert_eq!(v.clause, TheoremClause::Error);
        assert!(v.agree);

        let t = parse_term_in(&sys, "loop(zero)").unwrap();
        let v = ctx.simulate_and_check(&t, 100, 100_000).unwrap();
        assert_eq!(v.clause, TheoremClause::Divergence);
        assert!(v.agree);
    }

    #[test]
    fn matcher_selects_the_matching_branch() {
        let (ctx, sys) = ctx();
        let succ_x = CrsTerm::node(Sym::constructor("succ", 1), vec![CrsTerm::var("x")]);
        let alphas = vec![vec![succ_x], vec![parse_term_in(&sys, "zero").unwrap()]];
        let m = ctx.compile_match(&alphas, 1).unwrap();
        let one = ctx.encode(&parse_term_in(&sys, "succ(zero)").unwrap()).unwrap();
        let zero = ctx.encode(&parse_term_in(&sys, "zero").unwrap()).unwrap();
        // Continuations return their bindings wrapped in a marker.
        let v1 = crate::lambda::parse_term("\\b. \\d. \\k1. k1 b").unwrap();
        let v2 = crate::lambda::parse_term("\\d. \\k2. k2").unwrap();
        let out = nf(&Term::app_many(m.clone(), [one, v1.clone(), v2.clone()]));
        let expected = Term::abs("k1", Term::app(Term::var("k1"), zero.clone()));
        assert!(out.alpha_eq(&expected), "{out}");
        let out = nf(&Term::app_many(m.clone(), [zero, v1.clone(), v2.clone()]));
        assert!(out.alpha_eq(&Term::abs("k2", Term::var("k2"))));
        let out = nf(&Term::app_many(m, [ctx.bottom(), v1, v2]));
        assert!(out.alpha_eq(&ctx.bottom()));

        let empty = ctx.compile_match(&[], 2).unwrap();
        assert!(empty.alpha_eq(&Term::abs_many(&["p", "q"], ctx.bottom())));
    }

    #[test]
    fn overlapping_sequences_are_rejected() {
        let (ctx, _) = ctx();
        let alphas = vec![vec![CrsTerm::var("x")], vec![CrsTerm::var("y")]];
        assert_eq!(ctx.compile_match(&alphas, 1).unwrap_err(), ScottError::Overlap(0, 1));
    }
}
