use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::name::Name;

/// An immutable, cheaply clonable λ-term.
///
/// Nodes cache their length and their free-variable sequence (sorted by the
/// global identifier order, without repetitions). Subterms are shared through
/// `Arc`, so a term may be a DAG whose unfolded length is exponential in the
/// number of allocated nodes; [`Term::size`] saturates instead of overflowing.
#[derive(Clone)]
pub struct Term(Arc<Node>);

struct Node {
    kind: TermKind,
    size: u64,
    free: Box<[Name]>,
}

pub enum TermKind {
    Var(Name),
    Abs(Name, Term),
    App(Term, Term),
}

fn merge_sorted(a: &[Name], b: &[Name]) -> Box<[Name]> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out.into_boxed_slice()
}

impl Term {
    pub fn var(x: impl Into<Name>) -> Term {
        let x = x.into();
        Term(Arc::new(Node {
            kind: TermKind::Var(x),
            size: 1,
            free: Box::new([x]),
        }))
    }

    pub fn abs(x: impl Into<Name>, body: Term) -> Term {
        let x = x.into();
        let free: Box<[Name]> = if body.has_free(x) {
            body.free_vars().iter().copied().filter(|&y| y != x).collect()
        } else {
            body.free_vars().into()
        };
        Term(Arc::new(Node {
            size: body.size().saturating_add(1),
            free,
            kind: TermKind::Abs(x, body),
        }))
    }

    pub fn app(fun: Term, arg: Term) -> Term {
        let free = if arg.is_closed() {
            fun.free_vars().into()
        } else if fun.is_closed() {
            arg.free_vars().into()
        } else {
            merge_sorted(fun.free_vars(), arg.free_vars())
        };
        Term(Arc::new(Node {
            size: fun.size().saturating_add(arg.size()).saturating_add(1),
            free,
            kind: TermKind::App(fun, arg),
        }))
    }

    /// `λx1. … λxn. body`
    pub fn abs_many<N: Into<Name> + Copy>(binders: &[N], body: Term) -> Term {
        binders.iter().rev().fold(body, |acc, &x| Term::abs(x, acc))
    }

    /// `head a1 … an`, left-associated.
    pub fn app_many(head: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(head, Term::app)
    }

    pub fn kind(&self) -> &TermKind {
        &self.0.kind
    }

    /// Length: `|x| = 1`, `|λx.M| = |M| + 1`, `|MN| = |M| + |N| + 1`.
    pub fn size(&self) -> u64 {
        self.0.size
    }

    /// Free variables, duplicate-free and sorted by the identifier order.
    pub fn free_vars(&self) -> &[Name] {
        &self.0.free
    }

    pub fn has_free(&self, x: Name) -> bool {
        self.0.free.binary_search(&x).is_ok()
    }

    pub fn is_closed(&self) -> bool {
        self.0.free.is_empty()
    }

    /// Values are variables and abstractions.
    pub fn is_value(&self) -> bool {
        !matches!(self.kind(), TermKind::App(..))
    }

    pub fn is_abs(&self) -> bool {
        matches!(self.kind(), TermKind::Abs(..))
    }

    pub fn ptr_eq(&self, other: &Term) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    /// `self{v/x}` for a closed `v`.
    ///
    /// No renaming is ever needed because `v` has no free variable that a
    /// binder could capture. Subterms in which `x` is not free are shared,
    /// not copied.
    pub fn subst_closed(&self, x: Name, v: &Term) -> Term {
        debug_assert!(v.is_closed(), "subst_closed called with an open value");
        if !self.has_free(x) {
            return self.clone();
        }
        match self.kind() {
            TermKind::Var(_) => v.clone(),
            TermKind::Abs(y, body) => Term::abs(*y, body.subst_closed(x, v)),
            TermKind::App(f, a) => Term::app(f.subst_closed(x, v), a.subst_closed(x, v)),
        }
    }

    /// Capture-avoiding `self{v/x}` for an arbitrary `v`.
    pub fn substitute(&self, x: Name, v: &Term) -> Term {
        if v.is_closed() {
            self.subst_closed(x, v)
        } else {
            self.substitute_many(&[(x, v.clone())])
        }
    }

    /// Capture-avoiding simultaneous substitution `self{v1/x1, …, vn/xn}`.
    ///
    /// Binders that would capture a free variable of an inserted term are
    /// renamed to fresh names.
    pub fn substitute_many(&self, pairs: &[(Name, Term)]) -> Term {
        let live: Vec<(Name, Term)> = pairs
            .iter()
            .filter(|(x, _)| self.has_free(*x))
            .cloned()
            .collect();
        if live.is_empty() {
            return self.clone();
        }
        match self.kind() {
            TermKind::Var(y) => live
                .iter()
                .find(|(x, _)| x == y)
                .map(|(_, v)| v.clone())
                .unwrap_or_else(|| self.clone()),
            TermKind::App(f, a) => Term::app(f.substitute_many(&live), a.substitute_many(&live)),
            TermKind::Abs(y, body) => {
                let live: Vec<(Name, Term)> = live.into_iter().filter(|(x, _)| x != y).collect();
                if live.is_empty() {
                    return self.clone();
                }
                let captures = live.iter().any(|(_, v)| v.has_free(*y));
                if captures {
                    let fresh = Name::fresh_avoiding(*y, |n| {
                        body.has_free(n) || live.iter().any(|(x, v)| *x == n || v.has_free(n))
                    });
                    let renamed = body.substitute_many(&[(*y, Term::var(fresh))]);
                    Term::abs(fresh, renamed.substitute_many(&live))
                } else {
                    Term::abs(*y, body.substitute_many(&live))
                }
            }
        }
    }

    /// Equality up to renaming of bound variables.
    pub fn alpha_eq(&self, other: &Term) -> bool {
        fn go(a: &Term, b: &Term, env: &mut Vec<(Name, Name)>) -> bool {
            if a.size() != b.size() {
                return false;
            }
            if a.ptr_eq(b) && a.is_closed() {
                return true;
            }
            match (a.kind(), b.kind()) {
                (TermKind::Var(x), TermKind::Var(y)) => {
                    match env.iter().rev().find(|(l, r)| l == x || r == y) {
                        Some((l, r)) => l == x && r == y,
                        None => x == y,
                    }
                }
                (TermKind::Abs(x, m), TermKind::Abs(y, n)) => {
                    env.push((*x, *y));
                    let ok = go(m, n, env);
                    env.pop();
                    ok
                }
                (TermKind::App(f, a), TermKind::App(g, b)) => go(f, g, env) && go(a, b, env),
                _ => false,
            }
        }
        go(self, other, &mut Vec::new())
    }

    /// Canonical nameless rendering: bound occurrences become `#k` (de Bruijn
    /// index), free ones keep their name. Two terms are α-equivalent iff their
    /// nameless renderings coincide.
    pub fn nameless_key(&self) -> String {
        fn go(t: &Term, env: &mut Vec<Name>, out: &mut String) {
            match t.kind() {
                TermKind::Var(x) => match env.iter().rev().position(|y| y == x) {
                    Some(i) => {
                        out.push('#');
                        out.push_str(&i.to_string());
                    }
                    None => out.push_str(x.as_str()),
                },
                TermKind::Abs(x, body) => {
                    out.push_str("\\.");
                    env.push(*x);
                    go(body, env, out);
                    env.pop();
                }
                TermKind::App(f, a) => {
                    out.push('(');
                    go(f, env, out);
                    out.push(' ');
                    go(a, env, out);
                    out.push(')');
                }
            }
        }
        let mut out = String::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    /// All abstraction subterms, outermost first, left to right, including
    /// those under binders.
    pub fn abstraction_subterms(&self) -> Vec<Term> {
        let mut out = Vec::new();
        let mut stack = vec![self.clone()];
        while let Some(t) = stack.pop() {
            match t.kind() {
                TermKind::Var(_) => {}
                TermKind::Abs(_, body) => {
                    stack.push(body.clone());
                    out.push(t.clone());
                }
                TermKind::App(f, a) => {
                    stack.push(a.clone());
                    stack.push(f.clone());
                }
            }
        }
        out
    }
}

fn placeholder() -> Term {
    static LEAF: OnceLock<Term> = OnceLock::new();
    LEAF.get_or_init(|| Term::var("_")).clone()
}

// Dropping a deep term recursively could overflow the stack, so uniquely
// owned children are detached and released from an explicit worklist.
impl Drop for Node {
    fn drop(&mut self) {
        fn detach(kind: &mut TermKind, out: &mut Vec<Term>) {
            let mut take = |t: &mut Term| {
                if Arc::strong_count(&t.0) == 1 {
                    out.push(std::mem::replace(t, placeholder()));
                }
            };
            match kind {
                TermKind::Var(_) => {}
                TermKind::Abs(_, body) => take(body),
                TermKind::App(f, a) => {
                    take(f);
                    take(a);
                }
            }
        }
        if matches!(self.kind, TermKind::Var(_)) {
            return;
        }
        let mut worklist = Vec::new();
        detach(&mut self.kind, &mut worklist);
        while let Some(mut t) = worklist.pop() {
            if let Some(node) = Arc::get_mut(&mut t.0) {
                detach(&mut node.kind, &mut worklist);
            }
        }
    }
}

/// Syntactic equality (bound names must match too). Use
/// [`Term::alpha_eq`] for equality up to renaming.
impl PartialEq for Term {
    fn eq(&self, other: &Self) -> bool {
        if self.ptr_eq(other) {
            return true;
        }
        if self.size() != other.size() {
            return false;
        }
        match (self.kind(), other.kind()) {
            (TermKind::Var(x), TermKind::Var(y)) => x == y,
            (TermKind::Abs(x, m), TermKind::Abs(y, n)) => x == y && m == n,
            (TermKind::App(f, a), TermKind::App(g, b)) => f == g && a == b,
            _ => false,
        }
    }
}

impl Eq for Term {}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // `head`: the term is the function part of an application.
        // `trailing`: something follows it at the same nesting level.
        fn write(t: &Term, head: bool, trailing: bool, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match t.kind() {
                TermKind::Var(x) => write!(f, "{x}"),
                TermKind::Abs(x, body) => {
                    let parens = head || trailing;
                    if parens {
                        f.write_str("(")?;
                    }
                    write!(f, "\\{x}. ")?;
                    write(body, false, false, f)?;
                    if parens {
                        f.write_str(")")?;
                    }
                    Ok(())
                }
                TermKind::App(fun, arg) => {
                    write(fun, true, true, f)?;
                    f.write_str(" ")?;
                    if let TermKind::App(..) = arg.kind() {
                        f.write_str("(")?;
                        write(arg, false, false, f)?;
                        f.write_str(")")
                    } else {
                        write(arg, false, trailing, f)
                    }
                }
            }
        }
        write(self, false, false, f)
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{self}`")
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
    fn size_follows_the_length_definition() {
        assert_eq!(t("x").size(), 1);
        assert_eq!(t("\\x. x").size(), 2);
        assert_eq!(t("x y").size(), 3);
        assert_eq!(t("(\\x. x x) (\\y. y y)").size(), 9);
    }

    #[test]
    fn free_vars_examples() {
        assert!(t("\\x. x").free_vars().is_empty());
        let fv: Vec<&str> = t("(\\x. x y) z").free_vars().iter().map(|n| n.as_str()).collect();
        assert_eq!(fv, vec!["y", "z"]);
        let fv: Vec<&str> = t("(\\y. x) x").free_vars().iter().map(|n| n.as_str()).collect();
        assert_eq!(fv, vec!["x"]);
        let fv: Vec<&str> = t("z (a b) a").free_vars().iter().map(|n| n.as_str()).collect();
        assert_eq!(fv, vec!["a", "b", "z"]);
    }

    #[test]
    fn substitution_examples() {
        let x = Name::new("x");
        assert_eq!(t("x x").substitute(x, &t("\\y. y")), t("(\\y. y) (\\y. y)"));
        assert_eq!(
            t("(\\y. x) x").substitute(x, &t("\\z. z")),
            t("(\\y. \\z. z) (\\z. z)")
        );
        assert_eq!(t("y").substitute(x, &t("\\z. z")), t("y"));
        // Bound occurrences are untouched.
        assert_eq!(t("\\x. x").substitute(x, &t("\\z. z")), t("\\x. x"));
    }

    #[test]
    fn open_substitution_avoids_capture() {
        let x = Name::new("x");
        let out = t("\\y. x y").substitute(x, &t("y"));
        // The binder must have been renamed: result is λy'. y y'.
        assert!(out.alpha_eq(&t("\\w. y w")));
        assert!(!out.alpha_eq(&t("\\y. y y")));
    }

    #[test]
    fn closed_substitution_equals_naive_substitution() {
        let x = Name::new("x");
        let body = t("\\y. x (\\z. x y z)");
        let v = t("\\q. q");
        assert_eq!(body.subst_closed(x, &v), body.substitute_many(&[(x, v.clone())]));
    }

    #[test]
    fn alpha_equivalence() {
        assert!(t("\\x. x").alpha_eq(&t("\\y. y")));
        assert!(t("\\x. \\y. x").alpha_eq(&t("\\a. \\b. a")));
        assert!(!t("\\x. \\y. x").alpha_eq(&t("\\a. \\b. b")));
        assert!(!t("\\x. y").alpha_eq(&t("\\x. z")));
        assert!(t("\\x. y").alpha_eq(&t("\\z. y")));
        assert!(!t("\\x. \\x. x").alpha_eq(&t("\\x. \\y. x")));
        assert_eq!(t("\\x. x y").nameless_key(), t("\\z. z y").nameless_key());
    }

    #[test]
    fn deep_terms_drop_without_recursion() {
        let mut t = Term::var("z");
        for _ in 0..1_000_000 {
            t = Term::abs("z", t);
        }
        assert_eq!(t.size(), 1_000_001);
        drop(t);
    }

    #[test]
    fn printer_uses_minimal_parentheses() {
        assert_eq!(t("(\\x. x) (\\y. y)").to_string(), "(\\x. x) \\y. y");
        assert_eq!(t("f (\\x. x) y").to_string(), "f (\\x. x) y");
        assert_eq!(t("f (g x)").to_string(), "f (g x)");
        assert_eq!(t("(f g) x").to_string(), "f g x");
        assert_eq!(t("\\x. \\y. x y").to_string(), "\\x. \\y. x y");
        assert_eq!(t("a (b \\x. x) c").to_string(), "a (b \\x. x) c");
    }
}
