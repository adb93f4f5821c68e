use rand::Rng;

use super::term::{Term, TermKind};

/// Which reduction relation to iterate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Weak call-by-value: `(λx.M)V → M{V/x}`, closed under both sides of
    /// an application but never under λ.
    Cbv,
    /// Weak head call-by-name: `(λx.M)N → M{N/x}`, closed only under the
    /// function side of an application.
    Cbn,
}

/// Redex selection for call-by-value reduction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Policy {
    Leftmost,
    Random { seed: u64 },
}

#[derive(Debug, Clone)]
pub enum Outcome {
    NormalForm(Term),
    /// The budget ran out; carries the term reached so the run can resume.
    BudgetExhausted(Term),
}

impl Outcome {
    pub fn term(&self) -> &Term {
        match self {
            Outcome::NormalForm(t) | Outcome::BudgetExhausted(t) => t,
        }
    }

    pub fn is_normal(&self) -> bool {
        matches!(self, Outcome::NormalForm(_))
    }
}

#[derive(Debug, Clone)]
pub struct Reduction {
    pub outcome: Outcome,
    pub steps: u64,
    /// Fired redexes whose argument had free variables. Always zero when
    /// reducing a closed term.
    pub open_argument_steps: u64,
}

/// Picks one of `count` redexes (ordered left to right).
pub trait RedexChooser {
    fn choose(&mut self, count: usize) -> usize;
}

/// Always the leftmost redex.
pub struct Leftmost;

impl RedexChooser for Leftmost {
    fn choose(&mut self, _count: usize) -> usize {
        0
    }
}

impl<R: Rng> RedexChooser for R {
    fn choose(&mut self, count: usize) -> usize {
        self.gen_range(0..count)
    }
}

fn is_cbv_redex(t: &Term) -> bool {
    match t.kind() {
        TermKind::App(f, a) => f.is_abs() && a.is_value(),
        _ => false,
    }
}

fn contract(redex: &Term) -> (Term, bool) {
    let TermKind::App(f, v) = redex.kind() else {
        unreachable!("contract called on a non-application")
    };
    let TermKind::Abs(x, body) = f.kind() else {
        unreachable!("contract called on a non-redex")
    };
    (body.substitute(*x, v), !v.is_closed())
}

/// Number of weak call-by-value redexes in `t`. Redexes never nest: the
/// argument of a redex is a value and values contain no weak redex.
pub fn cbv_redex_count(t: &Term) -> usize {
    let mut count = 0;
    let mut stack = vec![t];
    while let Some(t) = stack.pop() {
        if is_cbv_redex(t) {
            count += 1;
        } else if let TermKind::App(f, a) = t.kind() {
            stack.push(a);
            stack.push(f);
        }
    }
    count
}

/// One weak call-by-value step at the redex selected by `chooser`, or `None`
/// if `t` is normal.
pub fn cbv_step(t: &Term, chooser: &mut dyn RedexChooser) -> Option<Term> {
    let count = cbv_redex_count(t);
    if count == 0 {
        return None;
    }
    let target = chooser.choose(count);
    assert!(target < count, "redex chooser returned an out-of-range index");
    let mut seen = 0;
    Some(replace_nth(t, target, &mut seen))
}

fn replace_nth(t: &Term, target: usize, seen: &mut usize) -> Term {
    if is_cbv_redex(t) {
        *seen += 1;
        return if *seen - 1 == target {
            contract(t).0
        } else {
            t.clone()
        };
    }
    match t.kind() {
        TermKind::App(f, a) if *seen <= target => {
            let f2 = replace_nth(f, target, seen);
            let a2 = if *seen <= target {
                replace_nth(a, target, seen)
            } else {
                a.clone()
            };
            if f2.ptr_eq(f) && a2.ptr_eq(a) {
                t.clone()
            } else {
                Term::app(f2, a2)
            }
        }
        _ => t.clone(),
    }
}

pub fn cbv_step_leftmost(t: &Term) -> Option<Term> {
    cbv_step(t, &mut Leftmost)
}

/// The unique weak head call-by-name reduct, if any.
pub fn cbn_step(t: &Term) -> Option<Term> {
    let mut args = Vec::new();
    let mut head = t.clone();
    while let TermKind::App(f, a) = head.kind() {
        args.push(a.clone());
        let next = f.clone();
        head = next;
    }
    let TermKind::Abs(x, body) = head.kind() else {
        return None;
    };
    let arg = args.pop()?;
    let reduct = body.substitute(*x, &arg);
    Some(Term::app_many(reduct, args.into_iter().rev()))
}

/// Iterates the chosen relation for at most `budget` steps with the leftmost
/// policy for call-by-value.
pub fn reduce(t: &Term, strategy: Strategy, budget: u64) -> Reduction {
    match strategy {
        Strategy::Cbv => reduce_cbv_leftmost(t, budget),
        Strategy::Cbn => reduce_cbn(t, budget),
    }
}

/// Call-by-value reduction under an explicit redex policy.
pub fn reduce_with(t: &Term, policy: Policy, budget: u64) -> Reduction {
    match policy {
        Policy::Leftmost => reduce_cbv_leftmost(t, budget),
        Policy::Random { seed } => {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut current = t.clone();
            let mut steps = 0;
            let mut open = 0;
            loop {
                let count = cbv_redex_count(&current);
                if count == 0 {
                    return Reduction {
                        outcome: Outcome::NormalForm(current),
                        steps,
                        open_argument_steps: open,
                    };
                }
                if steps == budget {
                    return Reduction {
                        outcome: Outcome::BudgetExhausted(current),
                        steps,
                        open_argument_steps: open,
                    };
                }
                let target = rng.gen_range(0..count);
                let mut seen = 0;
                if has_open_argument_at(&current, target) {
                    open += 1;
                }
                current = replace_nth(&current, target, &mut seen);
                steps += 1;
            }
        }
    }
}

fn has_open_argument_at(t: &Term, target: usize) -> bool {
    let mut index = 0;
    let mut stack = vec![t];
    while let Some(t) = stack.pop() {
        if is_cbv_redex(t) {
            if index == target {
                let TermKind::App(_, v) = t.kind() else { unreachable!() };
                return !v.is_closed();
            }
            index += 1;
        } else if let TermKind::App(f, a) = t.kind() {
            stack.push(a);
            stack.push(f);
        }
    }
    false
}

enum Frame {
    /// Evaluating the function part of `app`.
    Fun { app: Term },
    /// Evaluating the argument of `app`; the function part reduced to `fun`.
    Arg { app: Term, fun: Term },
}

/// Leftmost weak call-by-value reduction as a focused machine. Redexes of a
/// weak CBV term never nest and a normal function part stays normal, so the
/// leftmost order is: normalize the function part, then the argument, then
/// fire the root if it has become a redex.
fn reduce_cbv_leftmost(t: &Term, budget: u64) -> Reduction {
    let mut stack: Vec<Frame> = Vec::new();
    let mut steps = 0;
    let mut open = 0;
    let mut focus = t.clone();
    let mut descending = true;
    loop {
        if descending {
            if let TermKind::App(f, _) = focus.kind() {
                let f = f.clone();
                stack.push(Frame::Fun { app: focus });
                focus = f;
                continue;
            }
            descending = false;
        }
        let Some(frame) = stack.pop() else {
            return Reduction {
                outcome: Outcome::NormalForm(focus),
                steps,
                open_argument_steps: open,
            };
        };
        match frame {
            Frame::Fun { app } => {
                let TermKind::App(_, a) = app.kind() else { unreachable!() };
                let a = a.clone();
                stack.push(Frame::Arg { app, fun: focus });
                focus = a;
                descending = true;
            }
            Frame::Arg { app, fun } => {
                let arg = focus;
                if let TermKind::Abs(x, body) = fun.kind() {
                    if arg.is_value() {
                        if steps == budget {
                            let mut stuck = Term::app(fun.clone(), arg);
                            while let Some(frame) = stack.pop() {
                                stuck = match frame {
                                    Frame::Fun { app } => {
                                        let TermKind::App(_, a) = app.kind() else { unreachable!() };
                                        Term::app(stuck, a.clone())
                                    }
                                    Frame::Arg { fun, .. } => Term::app(fun, stuck),
                                };
                            }
                            return Reduction {
                                outcome: Outcome::BudgetExhausted(stuck),
                                steps,
                                open_argument_steps: open,
                            };
                        }
                        if !arg.is_closed() {
                            open += 1;
                        }
                        steps += 1;
                        focus = body.substitute(*x, &arg);
                        descending = true;
                        continue;
                    }
                }
                let TermKind::App(f0, a0) = app.kind() else { unreachable!() };
                focus = if f0.ptr_eq(&fun) && a0.ptr_eq(&arg) {
                    app
                } else {
                    Term::app(fun, arg)
                };
            }
        }
    }
}

fn reduce_cbn(t: &Term, budget: u64) -> Reduction {
    let mut args: Vec<Term> = Vec::new();
    let mut head = t.clone();
    let mut steps = 0;
    let mut open = 0;
    loop {
        while let TermKind::App(f, a) = head.kind() {
            args.push(a.clone());
            let next = f.clone();
            head = next;
        }
        let redex = matches!(head.kind(), TermKind::Abs(..)) && !args.is_empty();
        if !redex || steps == budget {
            let term = Term::app_many(head, args.into_iter().rev());
            let outcome = if redex {
                Outcome::BudgetExhausted(term)
            } else {
                Outcome::NormalForm(term)
            };
            return Reduction {
                outcome,
                steps,
                open_argument_steps: open,
            };
        }
        let TermKind::Abs(x, body) = head.kind() else { unreachable!() };
        let arg = args.pop().expect("redex has an argument");
        if !arg.is_closed() {
            open += 1;
        }
        head = body.substitute(*x, &arg);
        steps += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambda::parse_term;

    fn t(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    #[test]
    fn cbv_step_examples() {
        assert_eq!(cbv_step_leftmost(&t("(\\x. x) (\\y. y)")), Some(t("\\y. y")));
        assert_eq!(
            cbv_step_leftmost(&t("(\\x. x x) (\\y. y y)")),
            Some(t("(\\y. y y) (\\y. y y)"))
        );
        assert_eq!(cbv_step_leftmost(&t("\\x. (\\y. y) (\\z. z)")), None);
    }

    #[test]
    fn cbv_waits_for_a_value_argument() {
        let m = t("(\\x. \\y. x) ((\\z. z) (\\z. z))");
        assert_eq!(cbv_step_leftmost(&m), Some(t("(\\x. \\y. x) (\\z. z)")));
    }

    #[test]
    fn cbv_right_rule_fires_under_any_function_part() {
        // A stuck function part does not block reduction of the argument.
        let m = t("(x y) ((\\z. z) (\\z. z))");
        assert_eq!(cbv_step_leftmost(&m), Some(t("x y (\\z. z)")));
        assert_eq!(cbv_redex_count(&t("((\\a. a) (\\b. b)) ((\\c. c) (\\d. d))")), 2);
    }

    #[test]
    fn cbn_step_examples() {
        assert_eq!(
            cbn_step(&t("(\\x. \\y. x) ((\\z. z) (\\z. z))")),
            Some(t("\\y. (\\z. z) (\\z. z)"))
        );
        assert_eq!(cbn_step(&t("(\\x. x) (\\y. y)")), Some(t("\\y. y")));
        assert_eq!(cbn_step(&t("x ((\\y. y) (\\y. y))")), None);
    }

    #[test]
    fn reduce_examples() {
        let r = reduce(&t("(\\x. (\\y. x) x) (\\z. z)"), Strategy::Cbv, 10);
        assert!(matches!(&r.outcome, Outcome::NormalForm(n) if n.alpha_eq(&t("\\z. z"))));
        assert_eq!(r.steps, 2);

        let r = reduce(&t("(\\x. x x) (\\y. y y)"), Strategy::Cbv, 50);
        assert!(matches!(r.outcome, Outcome::BudgetExhausted(_)));
        assert_eq!(r.steps, 50);
    }

    #[test]
    fn intermediate_reduct_of_the_worked_example() {
        let m = t("(\\x. (\\y. x) x) (\\z. z)");
        let first = cbv_step_leftmost(&m).unwrap();
        assert_eq!(first, t("(\\y. \\z. z) (\\z. z)"));
    }

    #[test]
    fn budget_exhaustion_is_resumable() {
        let m = t("(\\f. f (f (\\q. q))) (\\a. (\\b. b) a)");
        let full = reduce(&m, Strategy::Cbv, 100);
        assert!(full.outcome.is_normal());
        for b in 0..full.steps {
            let part = reduce(&m, Strategy::Cbv, b);
            assert!(!part.outcome.is_normal());
            assert_eq!(part.steps, b);
            let rest = reduce(part.outcome.term(), Strategy::Cbv, 100);
            assert_eq!(b + rest.steps, full.steps);
            assert_eq!(rest.outcome.term(), full.outcome.term());
        }
    }

    #[test]
    fn machine_agrees_with_iterated_single_steps() {
        let m = t("(\\f x. f (f x)) ((\\f x. f (f x)) (\\y. y)) (\\u. u)");
        let mut current = m.clone();
        let mut steps = 0;
        while let Some(next) = cbv_step_leftmost(&current) {
            current = next;
            steps += 1;
        }
        let r = reduce(&m, Strategy::Cbv, 1000);
        assert_eq!(r.steps, steps);
        assert_eq!(r.outcome.term(), &current);
        let r = reduce_with(&m, Policy::Leftmost, 1000);
        assert_eq!(r.steps, steps);
    }

    #[test]
    fn cbn_machine_agrees_with_iterated_single_steps() {
        let m = t("(\\x y. y x) ((\\z. z) (\\z. z)) (\\w. w)");
        let mut current = m.clone();
        let mut steps = 0;
        while let Some(next) = cbn_step(&current) {
            current = next;
            steps += 1;
        }
        let r = reduce(&m, Strategy::Cbn, 1000);
        assert_eq!(r.steps, steps);
        assert_eq!(r.outcome.term(), &current);
    }

    #[test]
    fn random_policy_reaches_the_same_normal_form() {
        let m = t("((\\a. a) (\\b. b)) ((\\c. c) ((\\d. d) (\\e. e)))");
        let reference = reduce(&m, Strategy::Cbv, 100);
        for seed in 0..20 {
            let r = reduce_with(&m, Policy::Random { seed }, 100);
            assert_eq!(r.steps, reference.steps);
            assert!(r.outcome.term().alpha_eq(reference.outcome.term()));
        }
    }
}
