use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::system::CrsSystem;
use super::term::{CrsTerm, CrsTermKind, Sym};
use crate::lambda::{Policy, RedexChooser};
use crate::name::Name;

/// Variable bindings produced by matching.
pub type Subst = Vec<(Name, CrsTerm)>;

/// Matches a linear pattern against a constructor term. Every binding is a
/// constructor term.
pub fn match_pattern(p: &CrsTerm, t: &CrsTerm) -> Option<Subst> {
    let mut out = Vec::new();
    if match_into(p, t, &mut out) {
        Some(out)
    } else {
        None
    }
}

fn match_into(p: &CrsTerm, t: &CrsTerm, out: &mut Subst) -> bool {
    match (p.kind(), t.kind()) {
        (CrsTermKind::Var(x), _) => {
            if !t.is_constructor_term() {
                return false;
            }
            out.push((*x, t.clone()));
            true
        }
        (CrsTermKind::Node(s, ps), CrsTermKind::Node(u, ts)) => {
            s.name == u.name
                && s.is_constructor()
                && u.is_constructor()
                && ps.iter().zip(ts.iter()).all(|(p, t)| match_into(p, t, out))
        }
        _ => false,
    }
}

/// The rule firing at a position, if `t` (rooted at a function symbol with
/// constructor-term arguments) is a redex.
fn redex_rule(sys: &CrsSystem, f: Sym, args: &[CrsTerm]) -> Option<(usize, Subst)> {
    let first_root = args.first().and_then(|a| a.root()).map(|s| s.name);
    let mut found = None;
    for i in sys.candidates(f.name, first_root) {
        let rule = &sys.rules()[i];
        let mut subst = Vec::new();
        if rule
            .args
            .iter()
            .zip(args.iter())
            .all(|(p, t)| match_into(p, t, &mut subst))
        {
            debug_assert!(found.is_none(), "two rules match the same redex");
            found = Some((i, subst));
            if !cfg!(debug_assertions) {
                break;
            }
        }
    }
    found
}

fn contract(sys: &CrsSystem, rule: usize, subst: &Subst) -> CrsTerm {
    sys.rules()[rule]
        .rhs
        .instantiate(&|x| subst.iter().find(|(y, _)| *y == x).map(|(_, t)| t.clone()))
}

/// A rule application at a position (path of child indices from the root).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Firing {
    pub rule: usize,
    pub position: Vec<usize>,
}

/// All redexes of `t`, left to right. Redexes never nest: the arguments of a
/// redex are constructor terms.
pub fn find_redexes(sys: &CrsSystem, t: &CrsTerm) -> Vec<Firing> {
    fn go(sys: &CrsSystem, t: &CrsTerm, path: &mut Vec<usize>, out: &mut Vec<Firing>) {
        let CrsTermKind::Node(s, children) = t.kind() else {
            return;
        };
        if !t.contains_function() {
            return;
        }
        if !s.is_constructor() && children.iter().all(|c| c.is_constructor_term()) {
            if let Some((rule, _)) = redex_rule(sys, *s, children) {
                out.push(Firing {
                    rule,
                    position: path.clone(),
                });
            }
            return;
        }
        for (i, c) in children.iter().enumerate() {
            path.push(i);
            go(sys, c, path, out);
            path.pop();
        }
    }
    let mut out = Vec::new();
    go(sys, t, &mut Vec::new(), &mut out);
    out
}

/// One rewrite step at the redex picked by `chooser` among all redexes in
/// left-to-right order.
pub fn rewrite_step(
    sys: &CrsSystem,
    t: &CrsTerm,
    chooser: &mut dyn RedexChooser,
) -> Option<(CrsTerm, Firing)> {
    let redexes = find_redexes(sys, t);
    if redexes.is_empty() {
        return None;
    }
    let firing = redexes[chooser.choose(redexes.len())].clone();
    let redex = t.at(&firing.position).expect("redex position is valid");
    let (rule, subst) = redex_rule(sys, redex.root().unwrap(), redex.children())
        .expect("redex still matches");
    debug_assert_eq!(rule, firing.rule);
    let reduct = contract(sys, rule, &subst);
    Some((t.replace_at(&firing.position, reduct), firing))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NormalKind {
    /// Only constructors remain.
    ConstructorTerm,
    /// A function symbol remains that no rule can rewrite.
    Stuck,
}

#[derive(Debug, Clone)]
pub enum CrsOutcome {
    NormalForm(CrsTerm, NormalKind),
    BudgetExhausted(CrsTerm),
}

impl CrsOutcome {
    pub fn term(&self) -> &CrsTerm {
        match self {
            CrsOutcome::NormalForm(t, _) | CrsOutcome::BudgetExhausted(t) => t,
        }
    }

    pub fn is_normal(&self) -> bool {
        matches!(self, CrsOutcome::NormalForm(..))
    }
}

#[derive(Debug, Clone)]
pub struct CrsReduction {
    pub outcome: CrsOutcome,
    pub steps: u64,
}

fn classify(t: CrsTerm) -> CrsOutcome {
    let kind = if t.contains_function() {
        NormalKind::Stuck
    } else {
        NormalKind::ConstructorTerm
    };
    CrsOutcome::NormalForm(t, kind)
}

struct Frame {
    original: CrsTerm,
    done: Vec<CrsTerm>,
}

enum State {
    /// Normalize this term.
    Descend(CrsTerm),
    /// This term is normal; hand it to the enclosing frame.
    Return(CrsTerm),
    /// All arguments are normal; fire the node if it is a redex.
    Fire(CrsTerm),
}

/// Leftmost-innermost reduction of a closed term for at most `budget` steps.
///
/// Implemented as an evaluator that normalizes arguments left to right and
/// then fires the enclosing node. A normal subterm stays normal, so this
/// fires redexes in exactly leftmost-innermost order.
pub fn reduce_crs(sys: &CrsSystem, t: &CrsTerm, budget: u64) -> CrsReduction {
    let mut stack: Vec<Frame> = Vec::new();
    let mut steps = 0;
    let mut state = State::Descend(t.clone());
    loop {
        state = match state {
            State::Descend(t) => {
                if !t.contains_function() {
                    State::Return(t)
                } else if t.children().is_empty() {
                    State::Fire(t)
                } else {
                    let first = t.children()[0].clone();
                    stack.push(Frame {
                        original: t,
                        done: Vec::new(),
                    });
                    State::Descend(first)
                }
            }
            State::Return(t) => {
                let Some(frame) = stack.last_mut() else {
                    return CrsReduction {
                        outcome: classify(t),
                        steps,
                    };
                };
                frame.done.push(t);
                let children = frame.original.children();
                if frame.done.len() < children.len() {
                    State::Descend(children[frame.done.len()].clone())
                } else {
                    let frame = stack.pop().expect("frame present");
                    let CrsTermKind::Node(sym, original) = frame.original.kind() else {
                        unreachable!("frames hold nodes")
                    };
                    if original.iter().zip(frame.done.iter()).all(|(a, b)| a.ptr_eq(b)) {
                        State::Fire(frame.original)
                    } else {
                        State::Fire(CrsTerm::node(*sym, frame.done))
                    }
                }
            }
            State::Fire(t) => {
                let sym = t.root().expect("fired term is a node");
                let args = t.children();
                let matched = if !sym.is_constructor() && args.iter().all(|c| c.is_constructor_term()) {
                    redex_rule(sys, sym, args)
                } else {
                    None
                };
                match matched {
                    None => State::Return(t),
                    Some(_) if steps == budget => {
                        return CrsReduction {
                            outcome: CrsOutcome::BudgetExhausted(plug(t, stack)),
                            steps,
                        };
                    }
                    Some((rule, subst)) => {
                        steps += 1;
                        State::Descend(contract(sys, rule, &subst))
                    }
                }
            }
        };
    }
}

fn plug(mut t: CrsTerm, mut stack: Vec<Frame>) -> CrsTerm {
    while let Some(mut frame) = stack.pop() {
        let CrsTermKind::Node(sym, original) = frame.original.kind() else {
            unreachable!("frames hold nodes")
        };
        let k = frame.done.len();
        frame.done.push(t);
        frame.done.extend(original[k + 1..].iter().cloned());
        t = CrsTerm::node(*sym, frame.done);
    }
    t
}

/// Reduction under an explicit redex policy.
pub fn reduce_crs_with(sys: &CrsSystem, t: &CrsTerm, policy: Policy, budget: u64) -> CrsReduction {
    let Policy::Random { seed } = policy else {
        return reduce_crs(sys, t, budget);
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut current = t.clone();
    let mut steps = 0;
    loop {
        let redexes = find_redexes(sys, &current);
        if redexes.is_empty() {
            return CrsReduction {
                outcome: classify(current),
                steps,
            };
        }
        if steps == budget {
            return CrsReduction {
                outcome: CrsOutcome::BudgetExhausted(current),
                steps,
            };
        }
        let pick = RedexChooser::choose(&mut rng, redexes.len());
        let position = &redexes[pick].position;
        let redex = current.at(position).expect("redex position is valid");
        let (rule, subst) = redex_rule(sys, redex.root().unwrap(), redex.children())
            .expect("redex still matches");
        current = current.replace_at(position, contract(sys, rule, &subst));
        steps += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crs::{parse_system, parse_term_in};
    use crate::lambda::Leftmost;

    const ADD: &str = "
        constructor zero/0; constructor succ/1;
        function add/2;
        rule add(zero, y) -> y;
        rule add(succ(x), y) -> succ(add(x, y));
    ";

    #[test]
    fn match_pattern_examples() {
        let doc = parse_system(ADD).unwrap();
        let sys = &doc.system;
        let t = |s| parse_term_in(sys, s).unwrap();
        let succ_x = CrsTerm::node(Sym::constructor("succ", 1), vec![CrsTerm::var("x")]);
        let s = match_pattern(&succ_x, &t("succ(zero)")).unwrap();
        assert_eq!(s, vec![(Name::new("x"), t("zero"))]);
        assert!(match_pattern(&t("zero"), &t("succ(zero)")).is_none());
        let s = match_pattern(&CrsTerm::var("x"), &t("succ(zero)")).unwrap();
        assert_eq!(s[0].1, t("succ(zero)"));
    }

    #[test]
    fn rewrite_step_examples() {
        let doc = parse_system(ADD).unwrap();
        let sys = &doc.system;
        let t = |s| parse_term_in(sys, s).unwrap();
        let (next, firing) = rewrite_step(sys, &t("add(succ(zero), succ(zero))"), &mut Leftmost).unwrap();
        assert_eq!(next, t("succ(add(zero, succ(zero)))"));
        assert_eq!(firing, Firing { rule: 1, position: vec![] });
        assert!(rewrite_step(sys, &t("succ(zero)"), &mut Leftmost).is_none());
    }

    #[test]
    fn reduce_examples() {
        let doc = parse_system(ADD).unwrap();
        let sys = &doc.system;
        let t = |s| parse_term_in(sys, s).unwrap();
        let r = reduce_crs(sys, &t("add(succ(zero), succ(zero))"), 100);
        assert_eq!(r.steps, 2);
        assert!(matches!(&r.outcome, CrsOutcome::NormalForm(n, NormalKind::ConstructorTerm) if *n == t("succ(succ(zero))")));

        let doc = parse_system("constructor zero/0; constructor succ/1; function f/1; rule f(succ(x)) -> zero;").unwrap();
        let stuck = parse_term_in(&doc.system, "f(zero)").unwrap();
        let r = reduce_crs(&doc.system, &stuck, 100);
        assert_eq!(r.steps, 0);
        assert!(matches!(r.outcome, CrsOutcome::NormalForm(_, NormalKind::Stuck)));

        let doc = parse_system("constructor zero/0; function loop/1; rule loop(zero) -> loop(zero);").unwrap();
        let t = parse_term_in(&doc.system, "loop(zero)").unwrap();
        let r = reduce_crs(&doc.system, &t, 25);
        assert!(matches!(r.outcome, CrsOutcome::BudgetExhausted(_)));
        assert_eq!(r.steps, 25);
    }

    #[test]
    fn machine_matches_iterated_leftmost_steps() {
        let doc = parse_system(
            "constructor zero/0; constructor succ/1; function add/2; function dbl/1;
             rule add(zero, y) -> y; rule add(succ(x), y) -> succ(add(x, y));
             rule dbl(x) -> add(x, x);",
        )
        .unwrap();
        let sys = &doc.system;
        let t = parse_term_in(sys, "add(dbl(succ(succ(zero))), add(dbl(succ(zero)), dbl(zero)))").unwrap();
        let mut current = t.clone();
        let mut steps = 0;
        while let Some((next, _)) = rewrite_step(sys, &current, &mut Leftmost) {
            current = next;
            steps += 1;
        }
        for budget in 0..=steps {
            let r = reduce_crs(sys, &t, budget);
            assert_eq!(r.steps, budget);
            let mut replay = t.clone();
            for _ in 0..budget {
                replay = rewrite_step(sys, &replay, &mut Leftmost).unwrap().0;
            }
            assert_eq!(r.outcome.term(), &replay, "budget {budget}");
        }
        let r = reduce_crs(sys, &t, 1000);
        assert_eq!(r.steps, steps);
        assert_eq!(r.outcome.term(), &current);
        for seed in 0..10 {
            let r = reduce_crs_with(sys, &t, Policy::Random { seed }, 1000);
            assert_eq!(r.steps, steps);
            assert_eq!(r.outcome.term(), &current);
        }
    }

    #[test]
    fn nullary_function_symbols_fire() {
        let doc = parse_system("constructor zero/0; function z/0; rule z -> zero;").unwrap();
        let t = parse_term_in(&doc.system, "z").unwrap();
        let r = reduce_crs(&doc.system, &t, 10);
        assert_eq!(r.steps, 1);
        assert!(r.outcome.is_normal());
    }
}
